"""Command line: ``entwit check|demo|sweep``."""

from __future__ import annotations

import argparse
import csv
import io as _stringio
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import statezoo
from .criteria import DEFAULT_MARGIN, canonical_mes, mes_criterion, overlap
from .io import StateFileError, digest, parse_state_file, serialize_report
from .maximizer import OptimizerConfig, OptimizerError
from .report import analyze, build_report, exit_code
from .tensor import HERMITIAN_TOL, PureState, StateError, SystemShape

log = logging.getLogger("entwit")

EXIT_NPT, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 1, 2


def _config(args) -> OptimizerConfig:
    return OptimizerConfig(restarts=args.restarts, max_iterations=args.max_iters, seed=args.seed,
                           workers=getattr(args, "workers", 1))


def _print_report(rep: dict, out=None) -> None:
    out = out or sys.stdout
    print(f"dims              {rep['dims']} ({rep['kind']})", file=out)
    print(f"max MES overlap   {rep['mes_overlap_best']:.10f}", file=out)
    print(f"threshold 1/N     {rep['threshold']:.10f}", file=out)
    print(f"MES verdict       {rep['mes_verdict']}", file=out)
    print(f"NPT on all splits {rep['fully_npt']}", file=out)
    print("partial transpose:", file=out)
    for row in rep["ppt_table"]:
        flag = "NPT" if row["npt"] else "PPT"
        print(f"  {row['bipartition']:<16} min eig {row['min_eigenvalue']: .3e}  {flag}", file=out)
    if "purity_table" in rep:
        print("linear entropy 1 - tr(rho_B^2):", file=out)
        for row in rep["purity_table"]:
            print(f"  {row['bipartition']:<16} {row['linear_entropy']:.6f}", file=out)
    if "schmidt" in rep:
        k = ", ".join(f"{c:.6f}" for c in rep["schmidt"]["coefficients"])
        print(f"Schmidt coefficients ({rep['schmidt']['schmidt_number']}): {k}", file=out)
    opt = rep["optimizer"]
    print(f"optimizer         {opt['converged']}/{opt['restarts']} restarts converged, seed {opt['seed']}", file=out)


def cmd_check(args) -> int:
    try:
        state = parse_state_file(args.state, tol=args.tol)
    except (OSError, StateFileError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    config = _config(args)
    try:
        crit, result = analyze(state, config, tol=args.tol, margin=args.margin)
    except (OptimizerError, StateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    rep = build_report(state, crit, result, config, digest(args.state))
    if args.output:
        serialize_report(rep, args.output)
    _print_report(rep)
    return exit_code(rep)


# ---------------------------------------------------------------- sweep


@dataclass
class SweepRow:
    parameter: float
    fidelity: float
    threshold: float
    verdict: str


def sweep(kind: str, lo: float, hi: float, steps: int, n_dim: int = 2, m: int = 2,
          margin: float = DEFAULT_MARGIN) -> list[SweepRow]:
    """Overlap of each state in a one-parameter family with its defining MES."""
    if steps < 2:
        raise ValueError("steps must be >= 2")
    if not 0 <= lo < hi <= 1:
        raise ValueError(f"need 0 <= param-min < param-max <= 1, got [{lo}, {hi}]")
    rows = []
    if kind == "nmr":
        shape = SystemShape([n_dim] * m)
        mes = canonical_mes(shape)
    elif kind == "p-mixture":
        shape = SystemShape([2, 2])
        mes = PureState(shape, np.array([1, 0, 0, -1]) / np.sqrt(2))
    else:
        raise ValueError(f"unknown sweep kind {kind!r}")
    for x in np.linspace(lo, hi, steps):
        x = float(x)
        rho = statezoo.nmr_state(x, n_dim, m) if kind == "nmr" else statezoo.horodecki_p_mixture(x)
        f = overlap(rho, mes)
        mv = mes_criterion(shape, f, margin)
        rows.append(SweepRow(x, f, mv.threshold, mv.verdict.value))
    return rows


def crossing(rows: list[SweepRow]) -> float | None:
    """Parameter where fidelity first rises above threshold, linearly interpolated."""
    for r0, r1 in zip(rows, rows[1:]):
        g0, g1 = r0.fidelity - r0.threshold, r1.fidelity - r1.threshold
        if g0 <= 0 < g1:
            return r0.parameter + (r1.parameter - r0.parameter) * (-g0) / (g1 - g0)
    return None


def rows_to_csv(rows: list[SweepRow]) -> str:
    buf = _stringio.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["parameter", "fidelity", "threshold", "verdict"])
    for r in rows:
        w.writerow([format(r.parameter, ".17g"), format(r.fidelity, ".17g"), format(r.threshold, ".17g"), r.verdict])
    return buf.getvalue()


def cmd_sweep(args) -> int:
    try:
        rows = sweep(args.kind, args.param_min, args.param_max, args.steps, args.N, args.m, args.margin)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = rows_to_csv(rows)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    x = crossing(rows)
    msg = "crossing: none in range" if x is None else f"crossing: {x:.6f}"
    print(msg, file=sys.stderr if not args.output else sys.stdout)
    return 0


# ---------------------------------------------------------------- demo


@dataclass
class DemoRow:
    case: str
    reference: float
    computed: float
    tol: float
    discrepancy_above: float | None = None

    @property
    def delta(self) -> float:
        return abs(self.computed - self.reference)

    @property
    def ok(self) -> bool:
        return self.delta <= self.tol

    @property
    def status(self) -> str:
        if self.ok:
            return "ok"
        if self.discrepancy_above is not None and self.computed > self.discrepancy_above:
            return "DISCREPANCY"
        return "FAIL"


def run_demo(config: OptimizerConfig, outdir: Path | None = None) -> list[DemoRow]:
    cases = [
        ("4-qubit product |00>(|00>+|11>)/sqrt2", statezoo.product_counterexample(), 0.25, 2e-3, None),
        ("4-qubit W state", statezoo.w_state(4), 0.347, 5e-3, 0.352),
        ("2-qubit a=0.6 b=0.8 p=0.495 mixture", statezoo.ab_mixture(0.6, 0.8, 0.495), 0.4949, 5e-4, None),
    ]
    rows = []
    for i, (name, state, reference, tol, above) in enumerate(cases):
        crit, result = analyze(state, config)
        rows.append(DemoRow(name, reference, result.best_value, tol, above))
        if outdir is not None:
            serialize_report(build_report(state, crit, result, config), outdir / f"demo_{i}.json")
    nmr = sweep("nmr", 0.0, 1.0, 101, 2, 2)
    x = crossing(nmr)
    rows.append(DemoRow("NMR crossing eps, N=2", 1 / 3, float("nan") if x is None else x, 1e-3))
    if outdir is not None:
        (outdir / "demo_nmr_sweep.csv").write_text(rows_to_csv(nmr))
    return rows


def cmd_demo(args) -> int:
    outdir = Path(args.output) if args.output else None
    if outdir is not None:
        outdir.mkdir(parents=True, exist_ok=True)
    rows = run_demo(_config(args), outdir)
    print(f"{'case':<40} {'reference':>9} {'computed':>12} {'|delta|':>10} {'tol':>8}  status")
    for r in rows:
        print(f"{r.case:<40} {r.reference:>9.4f} {r.computed:>12.6f} {r.delta:>10.2e} {r.tol:>8.1e}  {r.status}")
    return 0 if all(r.ok for r in rows) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="entwit", description="MES-overlap and partial-transpose entanglement tests.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def opt_flags(sp):
        sp.add_argument("--restarts", type=int, default=32)
        sp.add_argument("--seed", type=int, default=42)
        sp.add_argument("--max-iters", type=int, default=5000)
        sp.add_argument("--workers", type=int, default=1, help="threads for parallel restarts")

    c = sub.add_parser("check", help="test one state file")
    c.add_argument("state")
    c.add_argument("--tol", type=float, default=HERMITIAN_TOL)
    c.add_argument("--margin", type=float, default=DEFAULT_MARGIN)
    c.add_argument("--output")
    opt_flags(c)
    c.set_defaults(func=cmd_check)

    d = sub.add_parser("demo", help="reproduce the headline numbers")
    d.add_argument("--output", help="directory for reports")
    opt_flags(d)
    d.set_defaults(func=cmd_demo)

    s = sub.add_parser("sweep", help="fidelity sweep over a state family, CSV out")
    s.add_argument("kind", choices=["nmr", "p-mixture"])
    s.add_argument("--param-min", type=float, default=0.0)
    s.add_argument("--param-max", type=float, default=1.0)
    s.add_argument("--steps", type=int, default=101)
    s.add_argument("--N", type=int, default=2)
    s.add_argument("--m", type=int, default=2)
    s.add_argument("--margin", type=float, default=DEFAULT_MARGIN)
    s.add_argument("--output")
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
