import os
import subprocess
import sys

import numpy as np
import pytest

from reddyn import kernels

from conftest import brute_partial_trace_a, brute_partial_trace_b, random_complex

BACKENDS = kernels.available_backends()
DIMS = [(1, 1), (2, 2), (2, 3), (3, 2), (4, 4), (8, 8)]


@pytest.fixture(params=BACKENDS)
def backend(request):
    return kernels.load_backend(request.param)


def test_cython_backend_is_built():
    # the package is meant to ship the compiled core; the fallback is for broken toolchains
    assert "cython" in BACKENDS
    assert kernels.BACKEND in BACKENDS


@pytest.mark.parametrize("d_a,d_b", DIMS)
def test_kron(backend, d_a, d_b, rng):
    a, b = random_complex(d_a, rng), random_complex(d_b, rng)
    np.testing.assert_allclose(backend.kron(a, b), np.kron(a, b), atol=1e-13)


def test_kron_rectangular(backend, rng):
    a = np.ascontiguousarray(random_complex(3, rng)[:, :2])
    b = np.ascontiguousarray(random_complex(2, rng)[:1, :])
    np.testing.assert_allclose(backend.kron(a, b), np.kron(a, b), atol=1e-13)


@pytest.mark.parametrize("d_a,d_b", DIMS)
def test_partial_traces(backend, d_a, d_b, rng):
    m = random_complex(d_a * d_b, rng)
    np.testing.assert_allclose(backend.ptrace_b(m, d_a, d_b), brute_partial_trace_b(m, d_a, d_b), atol=1e-12)
    np.testing.assert_allclose(backend.ptrace_a(m, d_a, d_b), brute_partial_trace_a(m, d_a, d_b), atol=1e-12)


@pytest.mark.parametrize("d_a,d_b", DIMS)
def test_conj_ptrace(backend, d_a, d_b, rng):
    u, x = random_complex(d_a * d_b, rng), random_complex(d_a * d_b, rng)
    expected = brute_partial_trace_b(u @ x @ u.conj().T, d_a, d_b)
    np.testing.assert_allclose(backend.conj_ptrace_b(u, x, d_a, d_b), expected, atol=1e-11)


@pytest.mark.parametrize("d_in,d_out", [(1, 1), (2, 2), (2, 3), (3, 2)])
def test_choi_assembly(backend, d_in, d_out, rng):
    images = rng.standard_normal((d_in, d_in, d_out, d_out)) + 1j * rng.standard_normal((d_in, d_in, d_out, d_out))
    expected = sum(np.kron(np.eye(d_in)[:, [i]] @ np.eye(d_in)[[j], :], images[i, j])
                   for i in range(d_in) for j in range(d_in))
    np.testing.assert_allclose(backend.choi_from_images(images), expected, atol=1e-14)


def test_backends_agree(rng):
    if len(BACKENDS) < 2:
        pytest.skip("compiled backend not built")
    c, p = kernels.load_backend("cython"), kernels.load_backend("python")
    u, x = random_complex(12, rng), random_complex(12, rng)
    np.testing.assert_allclose(c.conj_ptrace_b(u, x, 3, 4), p.conj_ptrace_b(u, x, 3, 4), atol=1e-11)
    np.testing.assert_allclose(c.ptrace_a(x, 3, 4), p.ptrace_a(x, 3, 4), atol=1e-13)


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.load_backend("fortran")


def test_env_var_forces_python_fallback():
    env = dict(os.environ, REDDYN_BACKEND="python")
    out = subprocess.run([sys.executable, "-c", "import reddyn; print(reddyn.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_library_results_identical_under_fallback():
    code = ("import numpy as np, reddyn as r;"
            "a=r.AmplitudePair(0.6, 0.8);"
            "t=r.reduced_trajectory(r.cnot_hamiltonian(), r.initial_state('entangled', a), [0.3, 1.1]);"
            "print(repr(np.round(t.reduced_states[1], 12).tolist()))")
    outs = []
    for name in BACKENDS:
        env = dict(os.environ, REDDYN_BACKEND=name)
        outs.append(subprocess.run([sys.executable, "-c", code], env=env,
                                   capture_output=True, text=True, check=True).stdout)
    assert len(set(outs)) == 1


def test_use_backend_restores(rng):
    before = kernels.BACKEND
    m = random_complex(6, rng)
    results = []
    for name in BACKENDS:
        with kernels.use_backend(name):
            assert kernels.BACKEND == name
            results.append(kernels.ptrace_b(m, 2, 3))
    assert kernels.BACKEND == before
    for r in results[1:]:
        np.testing.assert_allclose(r, results[0], atol=1e-13)


def test_conj_ptrace_above_crossover(rng):
    u, x = random_complex(25, rng), random_complex(25, rng)
    assert 25 > kernels.CONJ_PTRACE_CROSSOVER
    np.testing.assert_allclose(kernels.conj_ptrace_b(u, x, 5, 5),
                               brute_partial_trace_b(u @ x @ u.conj().T, 5, 5), atol=1e-10)
