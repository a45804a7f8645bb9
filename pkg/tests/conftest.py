import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20011201)


def random_density(d, rng, rank=None):
    rank = d if rank is None else rank
    z = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = z @ z.conj().T
    return rho / np.trace(rho).real


def random_hermitian(d, rng):
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return 0.5 * (z + z.conj().T)


def random_complex(d, rng):
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


def brute_partial_trace_b(m, d_a, d_b):
    out = np.zeros((d_a, d_a), dtype=complex)
    for i in range(d_a):
        for j in range(d_a):
            for k in range(d_b):
                out[i, j] += m[i * d_b + k, j * d_b + k]
    return out


def brute_partial_trace_a(m, d_a, d_b):
    out = np.zeros((d_b, d_b), dtype=complex)
    for k in range(d_b):
        for l in range(d_b):
            for i in range(d_a):
                out[k, l] += m[i * d_b + k, i * d_b + l]
    return out


def series_expm(a, terms=60):
    """exp(a) by direct Taylor summation, with squaring to keep terms small."""
    squarings = max(0, int(np.ceil(np.log2(max(np.abs(a).sum(axis=1).max(), 1.0)))) + 1)
    a = a / 2 ** squarings
    out = np.eye(a.shape[0], dtype=complex)
    term = np.eye(a.shape[0], dtype=complex)
    for n in range(1, terms):
        term = term @ a / n
        out = out + term
    for _ in range(squarings):
        out = out @ out
    return out


ACCEPTANCE_LINES = []


def report_criterion(number, passed, detail):
    ACCEPTANCE_LINES.append(f"[criterion {number}] {'PASS' if passed else 'FAIL'}  {detail}")
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
