"""Hot loops of the MES-overlap ascent.

Local unitaries are packed into one ``(m, dmax, dmax)`` complex array, zero
padded, with the true sizes in ``dims``. The MES being scored is always
``(U_1 (x) ... (x) U_m) |GHZ>`` with ``|GHZ> = sum_i |i...i> / sqrt(N)``.

Every kernel has a numba build (``*_nb``) and a vectorized numpy build
(``*_np``). :data:`BACKENDS` maps a backend name to the tuple used by the
ascent driver.

Generator layout per particle (``d*d`` reals): ``d`` diagonal entries, then the
real parts of the strict upper triangle, then its imaginary parts, both in
row-major pair order.
"""

import math

import numpy as np

from ._accel import USE_NUMBA, njit

# ---------------------------------------------------------------- numba path


@njit
def ghz_image_nb(us, dims, n):
    m = dims.shape[0]
    total = 1
    for j in range(m):
        total *= dims[j]
    phi = np.zeros(total, dtype=np.complex128)
    digits = np.zeros(m, dtype=np.int64)
    scale = 1.0 / math.sqrt(n)
    for flat in range(total):
        rem = flat
        for j in range(m - 1, -1, -1):
            digits[j] = rem % dims[j]
            rem //= dims[j]
        acc = 0j
        for i in range(n):
            prod = 1.0 + 0j
            for j in range(m):
                prod *= us[j, digits[j], i]
            acc += prod
        phi[flat] = acc * scale
    return phi


@njit
def expectation_nb(rho, phi):
    d = phi.shape[0]
    acc = 0.0
    for r in range(d):
        row = 0j
        for c in range(d):
            row += rho[r, c] * phi[c]
        acc += (phi[r].conjugate() * row).real
    return acc


@njit
def value_nb(rho, us, dims, n):
    return expectation_nb(rho, ghz_image_nb(us, dims, n))


@njit
def _rotate_rows_nb(u, d, k, h):
    """Left-multiply ``u`` by exp(i h G_k), G_k the k-th generator basis element."""
    if k < d:
        ph = complex(math.cos(h), math.sin(h))
        for c in range(d):
            u[k, c] *= ph
        return
    npair = d * (d - 1) // 2
    idx = k - d
    imag = idx >= npair
    if imag:
        idx -= npair
    a = 0
    while idx >= d - 1 - a:
        idx -= d - 1 - a
        a += 1
    b = a + 1 + idx
    cs = math.cos(h)
    sn = math.sin(h)
    for c in range(d):
        ra = u[a, c]
        rb = u[b, c]
        if imag:
            u[a, c] = cs * ra - sn * rb
            u[b, c] = cs * rb + sn * ra
        else:
            u[a, c] = cs * ra + 1j * sn * rb
            u[b, c] = cs * rb + 1j * sn * ra


@njit
def fd_gradient_nb(rho, us, dims, n, h):
    m = dims.shape[0]
    nparam = 0
    for j in range(m):
        nparam += dims[j] * dims[j]
    grad = np.zeros(nparam)
    work = us.copy()
    k0 = 0
    for j in range(m):
        d = dims[j]
        for k in range(d * d):
            _rotate_rows_nb(work[j], d, k, h)
            fp = value_nb(rho, work, dims, n)
            work[j, :, :] = us[j]
            _rotate_rows_nb(work[j], d, k, -h)
            fm = value_nb(rho, work, dims, n)
            work[j, :, :] = us[j]
            grad[k0 + k] = (fp - fm) / (2.0 * h)
        k0 += d * d
    return grad


@njit
def hermitian_from_params_nb(theta, d):
    hm = np.zeros((d, d), dtype=np.complex128)
    for a in range(d):
        hm[a, a] = theta[a]
    npair = d * (d - 1) // 2
    p = 0
    for a in range(d):
        for b in range(a + 1, d):
            z = complex(theta[d + p], theta[d + npair + p])
            hm[a, b] = z
            hm[b, a] = z.conjugate()
            p += 1
    return hm


@njit
def expi_hermitian_nb(hm):
    w, v = np.linalg.eigh(hm)
    d = w.shape[0]
    out = np.zeros((d, d), dtype=np.complex128)
    for a in range(d):
        for b in range(d):
            acc = 0j
            for k in range(d):
                acc += v[a, k] * complex(math.cos(w[k]), math.sin(w[k])) * v[b, k].conjugate()
            out[a, b] = acc
    return out


@njit
def step_nb(us, dims, direction, t):
    """``U_j <- exp(i H(t * direction_j)) U_j`` for every particle."""
    out = us.copy()
    k0 = 0
    for j in range(dims.shape[0]):
        d = dims[j]
        theta = t * direction[k0:k0 + d * d]
        e = expi_hermitian_nb(hermitian_from_params_nb(theta, d))
        out[j, :d, :d] = e @ np.ascontiguousarray(us[j, :d, :d])
        k0 += d * d
    return out


# ---------------------------------------------------------------- numpy path


def ghz_image_np(us, dims, n):
    cols = us[0, : dims[0], :n]
    for j in range(1, len(dims)):
        cols = (cols[:, None, :] * us[j, None, : dims[j], :n]).reshape(-1, n)
    return cols.sum(axis=1) / math.sqrt(n)


def expectation_np(rho, phi):
    return float(np.vdot(phi, rho @ phi).real)


def value_np(rho, us, dims, n):
    return expectation_np(rho, ghz_image_np(us, dims, n))


def generator_np(d, k):
    """The k-th Hermitian generator basis element as a dense matrix."""
    g = np.zeros((d, d), dtype=np.complex128)
    if k < d:
        g[k, k] = 1.0
        return g
    npair = d * (d - 1) // 2
    idx = k - d
    imag = idx >= npair
    a, b = list(zip(*np.triu_indices(d, 1)))[idx - npair if imag else idx]
    if imag:
        g[a, b], g[b, a] = 1j, -1j
    else:
        g[a, b] = g[b, a] = 1.0
    return g


def hermitian_from_params_np(theta, d):
    theta = np.asarray(theta, dtype=float)
    hm = np.diag(theta[:d]).astype(np.complex128)
    npair = d * (d - 1) // 2
    iu = np.triu_indices(d, 1)
    z = theta[d : d + npair] + 1j * theta[d + npair : d + 2 * npair]
    hm[iu] = z
    hm[(iu[1], iu[0])] = z.conj()
    return hm


def expi_hermitian_np(hm):
    w, v = np.linalg.eigh(hm)
    return (v * np.exp(1j * w)) @ v.conj().T


def fd_gradient_np(rho, us, dims, n, h):
    grads = []
    for j, d in enumerate(dims):
        for k in range(d * d):
            g = generator_np(d, k)
            vals = []
            for s in (h, -h):
                work = us.copy()
                work[j, :d, :d] = expi_hermitian_np(s * g) @ us[j, :d, :d]
                vals.append(value_np(rho, work, dims, n))
            grads.append((vals[0] - vals[1]) / (2.0 * h))
    return np.array(grads)


def step_np(us, dims, direction, t):
    out = us.copy()
    k0 = 0
    for j, d in enumerate(dims):
        e = expi_hermitian_np(hermitian_from_params_np(t * direction[k0 : k0 + d * d], d))
        out[j, :d, :d] = e @ us[j, :d, :d]
        k0 += d * d
    return out


# ---------------------------------------------------------------- driver


def _make_ascend(value, gradient, step, jit):
    def ascend(rho, us, dims, n, fd_step, max_iter, conv_tol, window, init_step, max_step, min_step):
        f = value(rho, us, dims, n)
        hist = np.empty(max_iter + 1)
        hist[0] = f
        t = init_step
        converged = False
        it = 0
        while it < max_iter:
            g = gradient(rho, us, dims, n, fd_step)
            if np.sqrt(np.sum(g * g)) < 1e-14:
                converged = True
                break
            accepted = False
            while t >= min_step:
                cand = step(us, dims, g, t)
                fc = value(rho, cand, dims, n)
                if fc > f:
                    us = cand
                    f = fc
                    accepted = True
                    break
                t *= 0.5
            it += 1
            hist[it] = f
            if not accepted:
                converged = True
                break
            t = min(2.0 * t, max_step)
            if it >= window and f - hist[it - window] < conv_tol:
                converged = True
                break
        return us, f, it, converged

    return njit(ascend) if jit else ascend


ascend_nb = _make_ascend(value_nb, fd_gradient_nb, step_nb, jit=True)
ascend_np = _make_ascend(value_np, fd_gradient_np, step_np, jit=False)

BACKENDS = {
    "numba": (ghz_image_nb, value_nb, fd_gradient_nb, step_nb, ascend_nb),
    "numpy": (ghz_image_np, value_np, fd_gradient_np, step_np, ascend_np),
}

DEFAULT_BACKEND = "numba" if USE_NUMBA else "numpy"


def pack_unitaries(unitaries, dims):
    dmax = max(dims)
    us = np.zeros((len(dims), dmax, dmax), dtype=np.complex128)
    for j, (u, d) in enumerate(zip(unitaries, dims)):
        us[j, :d, :d] = u
    return us


def unpack_unitaries(us, dims):
    return [np.array(us[j, :d, :d]) for j, d in enumerate(dims)]
