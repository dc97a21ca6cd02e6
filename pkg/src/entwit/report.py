"""End-to-end check of one state and its machine-readable report."""

from __future__ import annotations

from .criteria import DEFAULT_MARGIN, CriterionReport, Verdict, assess
from .io import complex_pairs
from .maximizer import MaximizationResult, OptimizerConfig, maximize
from .tensor import HERMITIAN_TOL, DensityMatrix, PureState

REPORT_VERSION = 1


def analyze(state: PureState | DensityMatrix, config: OptimizerConfig | None = None, *,
            tol: float = HERMITIAN_TOL, margin: float = DEFAULT_MARGIN) -> tuple[CriterionReport, MaximizationResult]:
    config = config or OptimizerConfig()
    result = maximize(state, config)
    return assess(state, min(result.best_value, 1.0), tol=tol, margin=margin), result


def build_report(state, crit: CriterionReport, result: MaximizationResult, config: OptimizerConfig,
                 input_digest: str | None = None) -> dict:
    out = {
        "version": REPORT_VERSION,
        "input_digest": input_digest,
        "kind": "pure" if isinstance(state, PureState) else "density",
        "dims": list(state.shape.dims),
        "mes_overlap_best": crit.mes_overlap_best,
        "threshold": crit.threshold,
        "margin": crit.margin,
        "mes_verdict": crit.mes_verdict.value,
        "fully_npt": crit.fully_npt,
        "ppt_table": [
            {"bipartition": str(r.part), "b_side": list(r.part.b_side),
             "min_eigenvalue": r.min_eigenvalue, "npt": r.is_npt}
            for r in crit.ppt_results
        ],
        "optimizer": {
            "restarts": config.restarts,
            "converged": result.n_converged,
            "max_iterations": config.max_iterations,
            "iterations_used": result.iterations_used,
            "best_restart": result.best_restart,
            "seed": config.seed,
            "best_unitaries": [complex_pairs(u) for u in result.best_unitaries],
        },
    }
    if crit.purity_results is not None:
        out["purity_table"] = [
            {"bipartition": str(p), "b_side": list(p.b_side), "linear_entropy": v}
            for p, v in crit.purity_results
        ]
    if crit.schmidt is not None:
        out["schmidt"] = {
            "coefficients": [float(k) for k in crit.schmidt.coefficients],
            "schmidt_number": crit.schmidt.schmidt_number,
        }
    return out


def rederive_verdict(report: dict) -> str:
    """Verdict recomputed from the numbers stored in the report."""
    above = report["mes_overlap_best"] > report["threshold"] + report["margin"]
    return (Verdict.NPT_ENTANGLED if above else Verdict.INCONCLUSIVE).value


def exit_code(report: dict) -> int:
    return 0 if report["mes_verdict"] == Verdict.NPT_ENTANGLED.value else 1
