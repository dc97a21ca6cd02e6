import itertools

import numpy as np
import pytest

_CRITERIA = []


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    status = "PASS" if call.excinfo is None else "FAIL"
    _CRITERIA.append((marker.args[0], status, marker.args[1], call.duration))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num, status, title, dt in sorted(_CRITERIA):
        terminalreporter.write_line(f"[{status}] AC{num:>2} {title} ({dt:.1f} s)")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pt_oracle(mat, dims, b_side):
    """Partial transpose by explicit index loops."""
    d = mat.shape[0]
    out = np.zeros_like(mat)
    multi = list(itertools.product(*[range(n) for n in dims]))
    flat = {idx: k for k, idx in enumerate(multi)}
    for r, ri in enumerate(multi):
        for c, ci in enumerate(multi):
            r2, c2 = list(ri), list(ci)
            for j in b_side:
                r2[j], c2[j] = ci[j], ri[j]
            out[flat[tuple(r2)], flat[tuple(c2)]] = mat[r, c]
    assert out.shape == (d, d)
    return out


def ptrace_oracle(mat, dims, traced):
    """Partial trace by explicit summation over the traced digits."""
    keep = [j for j in range(len(dims)) if j not in traced]
    kd = [dims[j] for j in keep]
    dk = int(np.prod(kd))
    out = np.zeros((dk, dk), dtype=complex)
    multi = list(itertools.product(*[range(n) for n in dims]))
    for r, ri in enumerate(multi):
        for c, ci in enumerate(multi):
            if all(ri[j] == ci[j] for j in traced):
                a = np.ravel_multi_index([ri[j] for j in keep], kd)
                b = np.ravel_multi_index([ci[j] for j in keep], kd)
                out[a, b] += mat[r, c]
    return out
