"""State containers and the index bookkeeping every criterion is built on.

Basis labels run 0..N-1 and composite indices are row-major over the
particles, so particle 0 is the most significant digit. A label ``k`` in the
1-based convention used in most write-ups maps to ``k - 1`` here.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

HERMITIAN_TOL = 1e-9
NORM_TOL = 1e-9
MAX_SURVEY_PARTICLES = 12


class StateError(ValueError):
    """A state, shape or subsystem violates its invariants."""


@dataclass(frozen=True)
class SystemShape:
    dims: tuple[int, ...]

    def __init__(self, dims: Iterable[int]):
        dims = tuple(int(d) for d in dims)
        if not dims:
            raise StateError("dims must be non-empty")
        if any(d < 2 for d in dims):
            raise StateError(f"every local dimension must be >= 2, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def m(self) -> int:
        return len(self.dims)

    @property
    def total_dim(self) -> int:
        return math.prod(self.dims)

    @property
    def n_min(self) -> int:
        """Schmidt rank of the MES family, min over the local dimensions."""
        return min(self.dims)

    def sub(self, particles: Iterable[int]) -> "SystemShape":
        return SystemShape(self.dims[j] for j in particles)

    def check_size(self, n: int, what: str = "state") -> None:
        if n != self.total_dim:
            raise StateError(f"{what} has size {n}, shape {self.dims} needs {self.total_dim}")


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=np.complex128, copy=True)
    arr.setflags(write=False)
    return arr


class PureState:
    """Unit vector over the product basis."""

    __slots__ = ("shape", "amplitudes")

    def __init__(self, shape: SystemShape | Sequence[int], amplitudes, *, tol: float = NORM_TOL):
        shape = shape if isinstance(shape, SystemShape) else SystemShape(shape)
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        shape.check_size(amps.size)
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > tol:
            raise StateError(f"norm^2 = {norm2!r} differs from 1 by more than {tol:g}")
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "amplitudes", _frozen(amps))

    def __setattr__(self, name, value):
        raise AttributeError("PureState is immutable")

    @classmethod
    def normalized(cls, shape, amplitudes) -> "PureState":
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        nrm = np.linalg.norm(amps)
        if nrm == 0:
            raise StateError("cannot normalize the zero vector")
        return cls(shape, amps / nrm)

    def projector(self) -> "DensityMatrix":
        v = self.amplitudes
        return DensityMatrix(self.shape, np.outer(v, v.conj()))

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.shape.dims)

    def __repr__(self):
        return f"PureState(dims={self.shape.dims})"


class DensityMatrix:
    """Hermitian, trace-one, positive semidefinite operator.

    Inputs within ``tol`` of Hermitian are symmetrized rather than rejected.
    """

    __slots__ = ("shape", "matrix")

    def __init__(self, shape: SystemShape | Sequence[int], matrix, *, tol: float = HERMITIAN_TOL):
        shape = shape if isinstance(shape, SystemShape) else SystemShape(shape)
        mat = np.asarray(matrix, dtype=np.complex128)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise StateError(f"density matrix must be square, got {mat.shape}")
        shape.check_size(mat.shape[0], "density matrix")
        herm_err = float(np.max(np.abs(mat - mat.conj().T))) if mat.size else 0.0
        if herm_err > tol:
            raise StateError(f"matrix is not Hermitian: max |rho - rho^dag| = {herm_err:.3e}")
        mat = 0.5 * (mat + mat.conj().T)
        tr = float(np.trace(mat).real)
        if abs(tr - 1.0) > tol:
            raise StateError(f"trace = {tr!r} differs from 1 by more than {tol:g}")
        lam_min = float(np.linalg.eigvalsh(mat)[0])
        if lam_min < -tol:
            raise StateError(f"matrix is not positive semidefinite: min eigenvalue {lam_min:.3e}")
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "matrix", _frozen(mat))

    def __setattr__(self, name, value):
        raise AttributeError("DensityMatrix is immutable")

    def __repr__(self):
        return f"DensityMatrix(dims={self.shape.dims})"


def as_density(state: PureState | DensityMatrix) -> DensityMatrix:
    return state.projector() if isinstance(state, PureState) else state


@dataclass(frozen=True)
class Bipartition:
    """Split of the particles into a kept side and a side ``b_side``.

    Stored canonically: ``b_side`` never contains particle 0, so each
    unordered split has exactly one representation.
    """

    b_side: tuple[int, ...]
    m: int

    @classmethod
    def of(cls, side: Iterable[int], m: int) -> "Bipartition":
        side = {int(j) for j in side}
        if any(j < 0 or j >= m for j in side):
            raise StateError(f"particle index out of range for m={m}: {sorted(side)}")
        if not side or len(side) == m:
            raise StateError("a bipartition needs a proper, nonempty subset")
        if 0 in side:
            side = set(range(m)) - side
        return cls(tuple(sorted(side)), m)

    @property
    def a_side(self) -> tuple[int, ...]:
        return tuple(j for j in range(self.m) if j not in self.b_side)

    def check(self, shape: SystemShape) -> None:
        if self.m != shape.m:
            raise StateError(f"bipartition is for {self.m} particles, state has {shape.m}")

    def __str__(self):
        fmt = lambda s: "{" + ",".join(map(str, s)) + "}"
        return f"{fmt(self.a_side)}|{fmt(self.b_side)}"


def bipartitions(m: int, limit: int = MAX_SURVEY_PARTICLES) -> list[Bipartition]:
    """All 2^(m-1) - 1 canonical splits, ordered by size of the B side."""
    if m < 2:
        return []
    if m > limit:
        raise StateError(f"{m} particles exceeds the enumeration guard of {limit}")
    out = []
    for k in range(1, m):
        for side in itertools.combinations(range(1, m), k):
            out.append(Bipartition(side, m))
    # splits with |B| = m-1 exclude particle 0 too; combinations(range(1,m)) covers them
    return out


@dataclass(frozen=True)
class HermitianSpectrum:
    eigenvalues: np.ndarray

    @property
    def min(self) -> float:
        return float(self.eigenvalues[0])

    def __len__(self):
        return len(self.eigenvalues)


def kron(factors: Sequence) -> np.ndarray:
    if len(factors) == 0:
        raise ValueError("kron needs at least one factor")
    out = np.asarray(factors[0])
    for f in factors[1:]:
        out = np.kron(out, np.asarray(f))
    return out


def _axes_swap(m: int, b_side: Iterable[int]) -> list[int]:
    axes = list(range(2 * m))
    for j in b_side:
        axes[j], axes[m + j] = axes[m + j], axes[j]
    return axes


def partial_transpose(rho: DensityMatrix | np.ndarray, part: Bipartition, dims=None) -> np.ndarray:
    """Transpose the row/column indices of every particle in ``part.b_side``.

    Pure index permutation, so applying it twice returns the input exactly.
    """
    if isinstance(rho, DensityMatrix):
        dims, mat = rho.shape.dims, rho.matrix
    else:
        mat = np.asarray(rho)
        if dims is None:
            raise StateError("dims are required for a bare matrix")
        dims = tuple(dims)
    part.check(SystemShape(dims))
    d = math.prod(dims)
    if mat.shape != (d, d):
        raise StateError(f"matrix shape {mat.shape} does not match dims {dims}")
    m = len(dims)
    t = mat.reshape(dims + dims).transpose(_axes_swap(m, part.b_side))
    return np.ascontiguousarray(t).reshape(d, d)


def partial_trace(rho: DensityMatrix, traced: Iterable[int]) -> DensityMatrix:
    traced = sorted({int(j) for j in traced})
    m = rho.shape.m
    if any(j < 0 or j >= m for j in traced):
        raise StateError(f"traced particles {traced} out of range for m={m}")
    if len(traced) == m:
        raise StateError("cannot trace out every particle")
    if not traced:
        return rho
    dims = rho.shape.dims
    keep = [j for j in range(m) if j not in traced]
    letters = [chr(ord("a") + i) for i in range(2 * m)]
    rows, cols = letters[:m], letters[m:]
    for j in traced:
        cols[j] = rows[j]
    out = "".join(rows[j] for j in keep) + "".join(cols[j] for j in keep)
    t = np.einsum("".join(rows) + "".join(cols) + "->" + out, rho.matrix.reshape(dims + dims))
    sub = rho.shape.sub(keep)
    return DensityMatrix(sub, t.reshape(sub.total_dim, sub.total_dim))


def hermitian_eigenvalues(mat, tol: float = HERMITIAN_TOL) -> HermitianSpectrum:
    mat = np.asarray(mat, dtype=np.complex128)
    err = float(np.max(np.abs(mat - mat.conj().T))) if mat.size else 0.0
    if err > tol:
        raise StateError(f"matrix is not Hermitian: max |M - M^dag| = {err:.3e}")
    return HermitianSpectrum(np.linalg.eigvalsh(0.5 * (mat + mat.conj().T)))


def matricize(psi: PureState, part: Bipartition) -> np.ndarray:
    """Coefficient matrix with rows on the A side and columns on ``b_side``."""
    part.check(psi.shape)
    a, b = part.a_side, part.b_side
    dims = psi.shape.dims
    t = psi.tensor().transpose(a + b)
    return t.reshape(math.prod(dims[j] for j in a), math.prod(dims[j] for j in b))


def join(left: np.ndarray, right: np.ndarray, part: Bipartition, dims: Sequence[int]) -> np.ndarray:
    """``left (x) right`` with factors living on ``part.a_side`` and ``part.b_side``,
    re-ordered into the natural particle order."""
    dims = tuple(dims)
    order = part.a_side + part.b_side
    inv = np.argsort(order)
    d = math.prod(dims)
    big = np.kron(left, right)
    if big.ndim == 1:
        return big.reshape([dims[j] for j in order]).transpose(inv).reshape(d)
    m = len(dims)
    t = big.reshape([dims[j] for j in order] * 2)
    return t.transpose(list(inv) + [m + i for i in inv]).reshape(d, d)
