"""Backend selection for the dense bipartite kernels.

The compiled Cython module is used when it imports; otherwise (or when the
``REDDYN_BACKEND`` environment variable is ``python``) the numpy fallback is
used. Both expose the same five functions and agree to roundoff.
"""
import contextlib
import importlib
import os

import numpy as np

_NAMES = ("kron", "ptrace_b", "ptrace_a", "conj_ptrace_b", "choi_from_images")


def load_backend(name):
    """Return the kernel module for ``"cython"`` or ``"python"``.

    Raises ImportError if the compiled extension was not built.
    """
    if name == "cython":
        return importlib.import_module("reddyn._ckernels")
    if name == "python":
        return importlib.import_module("reddyn._pykernels")
    raise ValueError(f"unknown kernel backend {name!r}")


def available_backends():
    found = ["python"]
    try:
        load_backend("cython")
    except ImportError:
        pass
    else:
        found.insert(0, "cython")
    return found


def _select():
    wanted = os.environ.get("REDDYN_BACKEND", "").strip().lower()
    if wanted == "python":
        return "python", load_backend("python")
    try:
        return "cython", load_backend("cython")
    except ImportError:
        if wanted == "cython":
            raise
        return "python", load_backend("python")


BACKEND, _impl = _select()
_pykernels = load_backend("python")


@contextlib.contextmanager
def use_backend(name):
    """Temporarily route every kernel call through backend ``name``."""
    global BACKEND, _impl
    saved = BACKEND, _impl
    BACKEND, _impl = name, load_backend(name)
    try:
        yield
    finally:
        BACKEND, _impl = saved


def _c(m):
    return np.ascontiguousarray(m, dtype=np.complex128)


def kron(a, b):
    return _impl.kron(_c(a), _c(b))


def ptrace_b(m, d_a, d_b):
    return _impl.ptrace_b(_c(m), d_a, d_b)


def ptrace_a(m, d_a, d_b):
    return _impl.ptrace_a(_c(m), d_a, d_b)


# above this joint dimension the BLAS-backed numpy contraction is faster
CONJ_PTRACE_CROSSOVER = 16


def conj_ptrace_b(u, x, d_a, d_b):
    if d_a * d_b > CONJ_PTRACE_CROSSOVER:
        return _pykernels.conj_ptrace_b(_c(u), _c(x), d_a, d_b)
    return _impl.conj_ptrace_b(_c(u), _c(x), d_a, d_b)


def choi_from_images(images):
    return _impl.choi_from_images(_c(images))
