"""MES-overlap criterion, partial-transpose test and the pure-state tools around them.

The overlap test is one-sided: an overlap above ``1/N`` (``N`` the smallest
local dimension) proves the state NPT across every split, anything else is
inconclusive.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import null_space

from .tensor import (
    HERMITIAN_TOL,
    Bipartition,
    DensityMatrix,
    PureState,
    StateError,
    SystemShape,
    as_density,
    bipartitions,
    hermitian_eigenvalues,
    kron,
    matricize,
    partial_trace,
    partial_transpose,
)

SCHMIDT_TOL = 1e-9
DEFAULT_MARGIN = 1e-9


class Verdict(str, enum.Enum):
    NPT_ENTANGLED = "NPT_ENTANGLED"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class MesState:
    shape: SystemShape
    local_unitaries: tuple | None
    realized: PureState

    @property
    def vector(self) -> np.ndarray:
        return self.realized.amplitudes


def ghz_vector(shape: SystemShape) -> np.ndarray:
    n = shape.n_min
    v = np.zeros(shape.total_dim, dtype=np.complex128)
    idx = np.ravel_multi_index([np.arange(n)] * shape.m, shape.dims)
    v[idx] = 1 / math.sqrt(n)
    return v


def canonical_mes(shape: SystemShape) -> MesState:
    eye = tuple(np.eye(d, dtype=np.complex128) for d in shape.dims)
    return MesState(shape, eye, PureState(shape, ghz_vector(shape)))


def mes_from_unitaries(shape: SystemShape, unitaries, tol: float = 1e-9) -> MesState:
    unitaries = tuple(np.asarray(u, dtype=np.complex128) for u in unitaries)
    if len(unitaries) != shape.m:
        raise StateError(f"need {shape.m} local unitaries")
    for u, d in zip(unitaries, shape.dims):
        if u.shape != (d, d) or np.max(np.abs(u.conj().T @ u - np.eye(d))) > tol:
            raise StateError("local operator is not a unitary of the right size")
    return MesState(shape, unitaries, PureState(shape, kron(unitaries) @ ghz_vector(shape)))


def flip_operator(n: int) -> np.ndarray:
    """Swap of two n-level factors: |a>|b> -> |b>|a>."""
    if n < 2:
        raise ValueError("flip operator needs n >= 2")
    v = np.zeros((n * n, n * n))
    a, b = np.divmod(np.arange(n * n), n)
    v[b * n + a, a * n + b] = 1.0
    return v


def embedded_flip(shape: SystemShape, part: Bipartition) -> np.ndarray:
    """Flip between the blocks |i..i>_A and |i..i>_B, embedded in the full space.

    For two particles of equal dimension this is :func:`flip_operator`.
    """
    part.check(shape)
    n = shape.n_min
    v = np.zeros((shape.total_dim, shape.total_dim))
    a, b = part.a_side, part.b_side
    for i in range(n):
        for j in range(n):
            row = [0] * shape.m
            col = [0] * shape.m
            for p in a:
                row[p], col[p] = i, j
            for p in b:
                row[p], col[p] = j, i
            v[np.ravel_multi_index(row, shape.dims), np.ravel_multi_index(col, shape.dims)] = 1.0
    return v


def overlap(rho: DensityMatrix | PureState, psi: PureState | MesState, tol: float = HERMITIAN_TOL) -> float:
    rho = as_density(rho)
    if isinstance(psi, MesState):
        psi = psi.realized
    if rho.shape != psi.shape:
        raise StateError(f"shape mismatch: {rho.shape.dims} vs {psi.shape.dims}")
    v = psi.amplitudes
    z = np.vdot(v, rho.matrix @ v)
    if abs(z.imag) > tol:
        raise StateError(f"overlap has imaginary part {z.imag:.3e}")
    return float(min(max(z.real, 0.0), 1.0))


def is_ppt(rho: DensityMatrix, part: Bipartition, tol: float = HERMITIAN_TOL) -> tuple[bool, float]:
    if not tol > 0:
        raise ValueError("tol must be positive")
    lam = hermitian_eigenvalues(partial_transpose(rho, part)).min
    return lam >= -tol, lam


@dataclass(frozen=True)
class PptRecord:
    part: Bipartition
    min_eigenvalue: float
    is_npt: bool


def npt_survey(rho: DensityMatrix, tol: float = HERMITIAN_TOL) -> list[PptRecord]:
    out = []
    for part in bipartitions(rho.shape.m):
        ppt, lam = is_ppt(rho, part, tol)
        out.append(PptRecord(part, lam, not ppt))
    return out


def fully_npt(survey: list[PptRecord]) -> bool:
    """NPT across every split, the m-particle notion used in reports."""
    return bool(survey) and all(r.is_npt for r in survey)


@dataclass(frozen=True)
class MesVerdict:
    best_overlap: float
    threshold: float
    margin: float
    verdict: Verdict


def mes_criterion(shape: SystemShape, best_overlap: float, margin: float = DEFAULT_MARGIN) -> MesVerdict:
    if not -1e-12 <= best_overlap <= 1 + 1e-12:
        raise ValueError(f"overlap {best_overlap!r} outside [0, 1]")
    threshold = 1.0 / shape.n_min
    verdict = Verdict.NPT_ENTANGLED if best_overlap > threshold + margin else Verdict.INCONCLUSIVE
    return MesVerdict(float(best_overlap), threshold, margin, verdict)


def pure_diagonal_sum_check(psi: PureState) -> tuple[float, bool]:
    """|sum_i a_{i..i}| over the min-dimension diagonal; > 1 proves entanglement."""
    shape = psi.shape
    idx = np.ravel_multi_index([np.arange(shape.n_min)] * shape.m, shape.dims)
    s = float(abs(psi.amplitudes[idx].sum()))
    return s, s > 1.0


@dataclass(frozen=True)
class SchmidtDecomposition:
    coefficients: np.ndarray
    schmidt_number: int
    left_basis: np.ndarray
    right_basis: np.ndarray


def schmidt_decompose(psi: PureState, part: Bipartition, tol: float = SCHMIDT_TOL) -> SchmidtDecomposition:
    """psi = sum_i k_i |left_i>|right_i>; ``right_basis`` columns are the B vectors."""
    u, s, vh = np.linalg.svd(matricize(psi, part), full_matrices=False)
    n = max(1, int(np.sum(s > tol)))
    return SchmidtDecomposition(s, n, u, vh.T)


def bipartite_pure_max_overlap(psi: PureState, part: Bipartition) -> float:
    mat = matricize(psi, part)
    k = np.linalg.svd(mat, compute_uv=False)
    return float(k.sum() ** 2 / min(mat.shape))


def schmidt_bound_from_fidelity(f: float, n_dim: int) -> int:
    """Smallest Schmidt number compatible with an MES overlap ``f``."""
    if not 0 <= f <= 1 or n_dim < 2:
        raise ValueError("need f in [0, 1] and n_dim >= 2")
    p = 0
    while p + 1 <= n_dim and f > (p + 1) / n_dim:
        p += 1
    return p + 1


def purity_entanglement_check(psi: PureState, tol: float = SCHMIDT_TOL) -> tuple[bool, list[tuple[Bipartition, float]]]:
    """Linear entropies 1 - tr(rho_B^2) on every split; all nonzero iff m-particle entangled."""
    rho = psi.projector()
    values = []
    for part in bipartitions(psi.shape.m):
        red = partial_trace(rho, part.a_side).matrix
        values.append((part, float(1.0 - np.vdot(red, red).real)))
    return all(v > tol for _, v in values), values


def nmr_fidelity(eps: float, n_dim: int, m: int = 2) -> float:
    if not 0 <= eps <= 1:
        raise ValueError("eps must lie in [0, 1]")
    return (1 - eps) / n_dim**m + eps


def nmr_threshold(n_dim: int) -> float:
    if n_dim < 2:
        raise ValueError("n_dim must be >= 2")
    return 1.0 / (n_dim + 1)


def _unitary_with_first_columns(cols: np.ndarray) -> np.ndarray:
    """Complete orthonormal columns to a square unitary."""
    rest = null_space(cols.conj().T)
    return np.hstack([cols, rest]) if rest.size else cols


def _unitary_mapping(src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """Unitary W with W @ src = dst for unit vectors."""
    a = _unitary_with_first_columns(src[:, None])
    b = _unitary_with_first_columns(dst[:, None])
    return b @ a.conj().T


def product_split_mes(psi: PureState, single: int = 0, tol: float = 1e-9) -> MesState:
    """MES attaining overlap 1/N with a 3-particle state |psi_single> (x) |psi_pair>.

    Schmidt-decompose the pair, then choose the single particle's basis so its
    coefficients equal the Schmidt coefficients; the canonical MES in that
    basis has overlap (sum k_i^2)^2 / N = 1/N.
    """
    shape = psi.shape
    if shape.m != 3 or len(set(shape.dims)) != 1:
        raise StateError("construction needs three particles of equal dimension")
    n = shape.dims[0]
    part = Bipartition.of([single], 3)
    mat = matricize(psi, part) if single == 0 else matricize(psi, part).T
    # rows: single particle, columns: the pair in natural order
    u, s, vh = np.linalg.svd(mat)
    if s.size > 1 and s[1] > tol:
        raise StateError("state is entangled across the single|pair split")
    single_vec = u[:, 0] * s[0]
    pair_vec = vh[0]
    pair = [p for p in range(3) if p != single]
    pair_shape = SystemShape((n, n))
    sd = schmidt_decompose(PureState(pair_shape, pair_vec), Bipartition.of([1], 2))
    k = sd.coefficients
    left = _unitary_with_first_columns(sd.left_basis[:, k > tol])
    right = _unitary_with_first_columns(sd.right_basis[:, k > tol])
    single_basis = _unitary_mapping(k.astype(np.complex128), single_vec)
    bases = [None] * 3
    bases[single] = single_basis
    bases[pair[0]] = left
    bases[pair[1]] = right
    return mes_from_unitaries(shape, bases)


@dataclass
class CriterionReport:
    mes_overlap_best: float
    threshold: float
    margin: float
    mes_verdict: Verdict
    ppt_results: list[PptRecord]
    purity_results: list[tuple[Bipartition, float]] | None = None
    schmidt: SchmidtDecomposition | None = None
    extras: dict = field(default_factory=dict)

    @property
    def fully_npt(self) -> bool:
        return fully_npt(self.ppt_results)

    def consistent(self) -> bool:
        """An NPT_ENTANGLED verdict must be backed by NPT on every split."""
        return self.mes_verdict is not Verdict.NPT_ENTANGLED or self.fully_npt


def assess(state: PureState | DensityMatrix, best_overlap: float, *, tol: float = HERMITIAN_TOL,
           margin: float = DEFAULT_MARGIN) -> CriterionReport:
    rho = as_density(state)
    mv = mes_criterion(rho.shape, best_overlap, margin)
    report = CriterionReport(
        mes_overlap_best=mv.best_overlap,
        threshold=mv.threshold,
        margin=margin,
        mes_verdict=mv.verdict,
        ppt_results=npt_survey(rho, tol),
    )
    if isinstance(state, PureState):
        report.purity_results = purity_entanglement_check(state)[1]
        if state.shape.m == 2:
            report.schmidt = schmidt_decompose(state, Bipartition.of([1], 2))
    return report
