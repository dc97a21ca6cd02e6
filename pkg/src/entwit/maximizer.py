"""Maximize <MES|rho|MES> over the local-unitary orbit of the GHZ state.

Each restart climbs with central finite-difference gradients taken in a
Hermitian-generator chart re-centred at the current unitaries, i.e. a step
is ``U_j <- exp(i H_j) U_j``. Restart 0 starts from the identities, so the
result never falls below the canonical-MES overlap.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .tensor import DensityMatrix, PureState, SystemShape, as_density, kron

log = logging.getLogger(__name__)

MAX_PARTICLES = 8
MAX_LOCAL_DIM = 4


class OptimizerError(RuntimeError):
    pass


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 32
    max_iterations: int = 5000
    convergence_tol: float = 1e-10
    window: int = 50
    fd_step: float = 1e-5
    seed: int = 42
    init_step: float = 0.1
    max_step: float = 1.0
    min_step: float = 1e-12
    workers: int = 1
    backend: str | None = None

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        for name in ("max_iterations", "convergence_tol", "window", "fd_step", "init_step", "max_step", "min_step", "workers"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.backend not in (None, *kernels.BACKENDS):
            raise ValueError(f"unknown backend {self.backend!r}")


@dataclass
class MaximizationResult:
    best_value: float
    best_unitaries: list[np.ndarray]
    per_restart_values: list[float] = field(default_factory=list)
    iterations_used: list[int] = field(default_factory=list)
    converged: list[bool] = field(default_factory=list)
    best_restart: int = 0

    @property
    def n_converged(self) -> int:
        return int(sum(self.converged))


def random_unitary(dim: int, rng) -> np.ndarray:
    """Haar unitary from the QR decomposition of a complex Ginibre matrix."""
    rng = np.random.default_rng(rng)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_unitaries(dim: int, count: int, rng) -> np.ndarray:
    """Stack of ``count`` independent Haar unitaries, shape (count, dim, dim)."""
    rng = np.random.default_rng(rng)
    z = (rng.standard_normal((count, dim, dim)) + 1j * rng.standard_normal((count, dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=1, axis2=2)
    return q * (d / np.abs(d))[:, None, :]


def unitary_from_parameters(theta, dim: int) -> np.ndarray:
    theta = np.asarray(theta, dtype=float).reshape(-1)
    if theta.size != dim * dim:
        raise ValueError(f"expected {dim * dim} parameters for dim {dim}, got {theta.size}")
    return kernels.expi_hermitian_np(kernels.hermitian_from_params_np(theta, dim))


def _check_unitaries(shape: SystemShape, unitaries) -> None:
    if len(unitaries) != shape.m:
        raise ValueError(f"need {shape.m} local unitaries, got {len(unitaries)}")
    for j, (u, d) in enumerate(zip(unitaries, shape.dims)):
        if np.shape(u) != (d, d):
            raise ValueError(f"unitary {j} has shape {np.shape(u)}, expected {(d, d)}")


def objective(rho: DensityMatrix | PureState, unitaries, backend: str | None = None) -> float:
    """<GHZ| (x)U_j^dag rho (x)U_j |GHZ> evaluated factor-wise."""
    rho = as_density(rho)
    shape = rho.shape
    _check_unitaries(shape, unitaries)
    dims = np.array(shape.dims, dtype=np.int64)
    us = kernels.pack_unitaries(unitaries, shape.dims)
    value = kernels.BACKENDS[backend or kernels.DEFAULT_BACKEND][1]
    return float(value(np.ascontiguousarray(rho.matrix), us, dims, shape.n_min))


def _restart_seed(seed: int, restart: int) -> np.random.Generator:
    return np.random.default_rng([seed, restart])


def _guard(shape: SystemShape) -> None:
    if shape.m > MAX_PARTICLES or max(shape.dims) > MAX_LOCAL_DIM:
        raise OptimizerError(
            f"shape {shape.dims} exceeds the optimizer guard (m <= {MAX_PARTICLES}, dims <= {MAX_LOCAL_DIM})"
        )


def maximize(rho: DensityMatrix | PureState, config: OptimizerConfig | None = None) -> MaximizationResult:
    config = config or OptimizerConfig()
    rho = as_density(rho)
    shape = rho.shape
    _guard(shape)
    mat = np.ascontiguousarray(rho.matrix)
    if not np.all(np.isfinite(mat)):
        raise OptimizerError("density matrix contains non-finite entries")
    dims = np.array(shape.dims, dtype=np.int64)
    n = shape.n_min
    ascend = kernels.BACKENDS[config.backend or kernels.DEFAULT_BACKEND][4]

    def run(r):
        if r == 0:
            start = [np.eye(d, dtype=np.complex128) for d in shape.dims]
        else:
            rng = _restart_seed(config.seed, r)
            start = [random_unitary(d, rng) for d in shape.dims]
        us, f, it, conv = ascend(
            mat,
            kernels.pack_unitaries(start, shape.dims),
            dims,
            n,
            config.fd_step,
            config.max_iterations,
            config.convergence_tol,
            config.window,
            config.init_step,
            config.max_step,
            config.min_step,
        )
        if not np.isfinite(f):
            raise OptimizerError("objective became non-finite")
        return us, float(f), int(it), bool(conv)

    if config.workers > 1:
        with ThreadPoolExecutor(config.workers) as pool:
            runs = list(pool.map(run, range(config.restarts)))
    else:
        runs = [run(r) for r in range(config.restarts)]

    values = [r[1] for r in runs]
    # ties resolved towards the lowest restart index
    best = max(range(len(runs)), key=lambda r: (values[r], -r))
    log.debug("maximize %s: best %.12f at restart %d", shape.dims, values[best], best)
    return MaximizationResult(
        best_value=values[best],
        best_unitaries=kernels.unpack_unitaries(runs[best][0], shape.dims),
        per_restart_values=values,
        iterations_used=[r[2] for r in runs],
        converged=[r[3] for r in runs],
        best_restart=best,
    )


def exhaustive_search_oracle(rho: DensityMatrix | PureState, samples: int, seed, batch: int = 2048) -> float:
    """Best overlap over ``samples`` Haar-random MES, built with full Kronecker
    products so it shares no code with the ascent kernels."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rho = as_density(rho)
    shape = rho.shape
    n = shape.n_min
    ghz = np.zeros(shape.total_dim, dtype=np.complex128)
    strides = np.cumprod((shape.dims[1:] + (1,))[::-1])[::-1]
    for i in range(n):
        ghz[int(i * strides.sum())] = 1 / np.sqrt(n)
    rng = np.random.default_rng(seed)
    best = -np.inf
    done = 0
    while done < samples:
        b = min(batch, samples - done)
        factors = [random_unitaries(d, b, rng) for d in shape.dims]
        full = factors[0]
        for f in factors[1:]:
            full = np.einsum("sab,scd->sacbd", full, f).reshape(b, full.shape[1] * f.shape[1], -1)
        phis = full @ ghz
        vals = np.einsum("si,ij,sj->s", phis.conj(), rho.matrix, phis).real
        best = max(best, float(vals.max()))
        done += b
    return best


def mes_vector(shape: SystemShape, unitaries) -> np.ndarray:
    """(x)U_j |GHZ> via an explicit Kronecker product."""
    n = shape.n_min
    ghz = np.zeros(shape.total_dim, dtype=np.complex128)
    for i in range(n):
        e = [np.eye(d)[i] for d in shape.dims]
        ghz += kron(e)
    return kron(list(unitaries)) @ ghz / np.sqrt(n)
