"""Named example states and seeded random ensembles.

Every random factory takes a mandatory ``seed`` (an int or a
``numpy.random.Generator``); nothing draws from global state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .criteria import ghz_vector
from .maximizer import random_unitary
from .tensor import (
    Bipartition,
    DensityMatrix,
    PureState,
    StateError,
    SystemShape,
    join,
    partial_transpose,
)


def _shape(shape) -> SystemShape:
    return shape if isinstance(shape, SystemShape) else SystemShape(shape)


def ghz_state(m: int, n_dim: int = 2) -> PureState:
    shape = SystemShape([n_dim] * m)
    return PureState(shape, ghz_vector(shape))


def w_state(m: int) -> PureState:
    if m < 2:
        raise ValueError("W state needs m >= 2")
    amps = np.zeros(2**m)
    amps[[1 << k for k in range(m)]] = 1 / math.sqrt(m)
    return PureState([2] * m, amps)


def basis_state(dims, digits) -> PureState:
    shape = _shape(dims)
    amps = np.zeros(shape.total_dim)
    amps[np.ravel_multi_index(tuple(digits), shape.dims)] = 1.0
    return PureState(shape, amps)


def product_counterexample() -> PureState:
    """|00> (x) (|00> + |11>)/sqrt(2) on four qubits (labels 1,2 relabelled to 0,1)."""
    amps = np.zeros(16)
    amps[0b0000] = amps[0b0011] = 1 / math.sqrt(2)
    return PureState([2, 2, 2, 2], amps)


def horodecki_p_mixture(p: float) -> DensityMatrix:
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    psi1 = np.array([1, 0, 0, -1]) / math.sqrt(2)
    psi2 = np.array([1, 0, 0, 0])
    return DensityMatrix([2, 2], p * np.outer(psi1, psi1) + (1 - p) * np.outer(psi2, psi2))


def ab_mixture(a: float, b: float, p: float) -> DensityMatrix:
    if not (a > 0 and b > 0) or abs(a * a + b * b - 1) > 1e-9:
        raise ValueError(f"need a, b > 0 with a^2 + b^2 = 1, got a={a}, b={b}")
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    psi1 = np.array([a, 0, 0, b])
    psi2 = np.array([0, a, b, 0])
    return DensityMatrix([2, 2], p * np.outer(psi1, psi1) + (1 - p) * np.outer(psi2, psi2))


def nmr_state(eps: float, n_dim: int, m: int = 2) -> DensityMatrix:
    if not 0 <= eps <= 1:
        raise ValueError(f"eps must lie in [0, 1], got {eps}")
    if m < 2:
        raise ValueError("m must be >= 2")
    shape = SystemShape([n_dim] * m)
    g = ghz_vector(shape)
    d = shape.total_dim
    return DensityMatrix(shape, (1 - eps) * np.eye(d) / d + eps * np.outer(g, g.conj()))


def maximally_mixed(dims) -> DensityMatrix:
    shape = _shape(dims)
    return DensityMatrix(shape, np.eye(shape.total_dim) / shape.total_dim)


# ---------------------------------------------------------------- random ensembles


def _gaussian_vector(d: int, rng) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_pure(shape, seed) -> PureState:
    shape = _shape(shape)
    rng = np.random.default_rng(seed)
    return PureState(shape, _gaussian_vector(shape.total_dim, rng))


def _mixture_matrix(d: int, rank: int, rng) -> np.ndarray:
    weights = rng.dirichlet(np.ones(rank))
    vecs = np.stack([_gaussian_vector(d, rng) for _ in range(rank)])
    return (vecs.T * weights) @ vecs.conj()


def random_density(shape, rank: int, seed) -> DensityMatrix:
    if rank < 1:
        raise ValueError("rank must be >= 1")
    shape = _shape(shape)
    rng = np.random.default_rng(seed)
    return DensityMatrix(shape, _mixture_matrix(shape.total_dim, rank, rng))


@dataclass(frozen=True)
class SeparableEnsemble:
    terms: tuple[tuple[float, DensityMatrix, DensityMatrix], ...]
    part: Bipartition
    shape: SystemShape

    def density(self) -> DensityMatrix:
        d = self.shape.total_dim
        mat = np.zeros((d, d), dtype=np.complex128)
        for w, left, right in self.terms:
            mat += w * join(left.matrix, right.matrix, self.part, self.shape.dims)
        return DensityMatrix(self.shape, mat)


def random_separable_ensemble(shape, part: Bipartition, terms: int, seed) -> SeparableEnsemble:
    if terms < 1:
        raise ValueError("terms must be >= 1")
    shape = _shape(shape)
    part.check(shape)
    rng = np.random.default_rng(seed)
    sa, sb = shape.sub(part.a_side), shape.sub(part.b_side)
    weights = rng.dirichlet(np.ones(terms))
    out = []
    for w in weights:
        ra = int(rng.integers(1, sa.total_dim + 1))
        rb = int(rng.integers(1, sb.total_dim + 1))
        out.append((
            float(w),
            DensityMatrix(sa, _mixture_matrix(sa.total_dim, ra, rng)),
            DensityMatrix(sb, _mixture_matrix(sb.total_dim, rb, rng)),
        ))
    return SeparableEnsemble(tuple(out), part, shape)


def random_separable(shape, part: Bipartition, terms: int, seed) -> DensityMatrix:
    return random_separable_ensemble(shape, part, terms, seed).density()


def random_product_pure(shape, part: Bipartition, seed) -> PureState:
    shape = _shape(shape)
    rng = np.random.default_rng(seed)
    sa, sb = shape.sub(part.a_side), shape.sub(part.b_side)
    v = join(_gaussian_vector(sa.total_dim, rng), _gaussian_vector(sb.total_dim, rng), part, shape.dims)
    return PureState(shape, v)


def random_mes(shape, seed) -> PureState:
    """Haar-random local unitaries applied to the canonical GHZ state."""
    shape = _shape(shape)
    rng = np.random.default_rng(seed)
    full = np.ones((1, 1))
    for d in shape.dims:
        full = np.kron(full, random_unitary(d, rng))
    return PureState(shape, full @ ghz_vector(shape))


def ppt_symmetrized(rho: DensityMatrix, part: Bipartition) -> DensityMatrix:
    """A state that is PPT across ``part``, derived from ``rho``.

    ``(rho + rho^T_B)/2`` is its own partial transpose, so lifting its negative
    eigenvalues by the least admixture of white noise keeps that symmetry and
    makes both the state and its partial transpose positive.
    """
    d = rho.shape.total_dim
    sym = 0.5 * (rho.matrix + partial_transpose(rho, part))
    sym = 0.5 * (sym + sym.conj().T)
    sym /= np.trace(sym).real
    lam = float(np.linalg.eigvalsh(sym)[0])
    if lam < 0:
        lift = -lam / (1.0 / d - lam)
        sym = (1 - lift) * sym + lift * np.eye(d) / d
    return DensityMatrix(rho.shape, sym)


def random_ppt(shape, part: Bipartition, rank: int, seed) -> DensityMatrix:
    return ppt_symmetrized(random_density(shape, rank, seed), part)


def random_factorized_triple(n_dim: int, seed, single: int = 0) -> PureState:
    """|psi_single> (x) |psi_pair> on three n_dim-level particles."""
    if single not in (0, 1, 2):
        raise StateError("single must be 0, 1 or 2")
    shape = SystemShape([n_dim] * 3)
    rng = np.random.default_rng(seed)
    part = Bipartition.of([single], 3)
    one = _gaussian_vector(n_dim, rng)
    pair = _gaussian_vector(n_dim * n_dim, rng)
    # canonical part keeps particle 0 on the A side
    left, right = (one, pair) if single == 0 else (pair, one)
    return PureState(shape, join(left, right, part, shape.dims))
