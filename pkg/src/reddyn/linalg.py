"""Dense complex linear algebra for bipartite systems.

Matrices are plain ``numpy.ndarray`` values of dtype ``complex128``. Tensor
products put subsystem A first, so the basis ket ``|a b>`` sits at row
``a * d_B + b``.
"""
from dataclasses import dataclass
from typing import List

import numpy as np

from . import kernels

DEFAULT_TOL = 1e-10

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class DimensionError(ValueError):
    """Matrix shape incompatible with the requested operation."""


def as_cmatrix(m) -> np.ndarray:
    """Coerce ``m`` to a square complex128 array, raising on any other shape."""
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimensionError(f"expected a non-empty square matrix, got shape {m.shape}")
    return m


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def is_hermitian(m, tol: float = DEFAULT_TOL) -> bool:
    m = as_cmatrix(m)
    return bool(np.max(np.abs(m - dagger(m)), initial=0.0) <= tol)


def is_unitary(m, tol: float = DEFAULT_TOL) -> bool:
    m = as_cmatrix(m)
    return bool(np.max(np.abs(m @ dagger(m) - np.eye(m.shape[0])), initial=0.0) <= tol)


def is_psd(m, tol: float = DEFAULT_TOL) -> bool:
    m = as_cmatrix(m)
    if not is_hermitian(m, tol):
        return False
    return bool(np.linalg.eigvalsh(m).min() >= -tol)


def is_density_matrix(m, tol: float = DEFAULT_TOL) -> bool:
    m = as_cmatrix(m)
    return is_psd(m, tol) and abs(np.trace(m) - 1.0) <= tol


def tensor(a, b) -> np.ndarray:
    """Kronecker product; ``a`` acts on the first (A) factor."""
    a = as_cmatrix(a)
    b = as_cmatrix(b)
    return kernels.kron(a, b)


def partial_trace(m, d_A: int, d_B: int, side: str = "B") -> np.ndarray:
    """Trace out subsystem ``side`` ("A" or "B") of an operator on A (x) B.

    >>> partial_trace(np.eye(4), 2, 2, "B").real
    array([[2., 0.],
           [0., 2.]])
    """
    m = as_cmatrix(m)
    if d_A < 1 or d_B < 1 or m.shape[0] != d_A * d_B:
        raise DimensionError(f"matrix of dim {m.shape[0]} is not {d_A}x{d_B}")
    if side == "B":
        return kernels.ptrace_b(m, d_A, d_B)
    if side == "A":
        return kernels.ptrace_a(m, d_A, d_B)
    raise ValueError(f"side must be 'A' or 'B', got {side!r}")


def eigh_hermitian(h, tol: float = DEFAULT_TOL):
    h = as_cmatrix(h)
    if not is_hermitian(h, tol * max(1.0, np.abs(h).max())):
        raise ValueError("matrix is not Hermitian within tolerance")
    # symmetrize so eigh sees exactly Hermitian input
    return np.linalg.eigh(0.5 * (h + dagger(h)))


def expm_hermitian(h, t: float, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Return ``exp(-i h t)`` from the spectral decomposition of Hermitian ``h``."""
    w, v = eigh_hermitian(h, tol)
    return (v * np.exp(-1j * w * t)) @ dagger(v)


def matrix_unit(dim: int, a: int, b: int) -> np.ndarray:
    """``|a><b|`` in dimension ``dim``."""
    if not (0 <= a < dim and 0 <= b < dim):
        raise IndexError(f"matrix unit ({a}, {b}) out of range for dim {dim}")
    e = np.zeros((dim, dim), dtype=complex)
    e[a, b] = 1.0
    return e


def trace_distance(rho, sigma) -> float:
    """Half the trace norm of ``rho - sigma`` (both Hermitian)."""
    diff = as_cmatrix(rho) - as_cmatrix(sigma)
    diff = 0.5 * (diff + dagger(diff))
    return float(0.5 * np.abs(np.linalg.eigvalsh(diff)).sum())


@dataclass(frozen=True)
class OperatorBasis:
    """Traceless Hermitian generators with ``tr(g_i g_j) = normalization * delta_ij``."""

    dim: int
    generators: List[np.ndarray]
    normalization: float = 2.0

    def coefficients(self, m) -> np.ndarray:
        """Hilbert-Schmidt coefficients ``tr(g_i m) / normalization``."""
        m = as_cmatrix(m)
        return np.array([np.trace(g @ m) for g in self.generators]) / self.normalization

    def expand(self, coeffs) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for c, g in zip(coeffs, self.generators):
            out += c * g
        return out

    def gram(self) -> np.ndarray:
        return np.array([[np.trace(gi @ gj) for gj in self.generators]
                         for gi in self.generators])


def generator_basis(dim: int) -> OperatorBasis:
    """Generalized Gell-Mann matrices for dimension ``dim``.

    Ordering is symmetric off-diagonal, antisymmetric off-diagonal (both by
    index pair), then diagonal. For ``dim == 2`` the Pauli matrices are
    returned as ``[sigma_x, sigma_y, sigma_z]``.
    """
    if dim < 2:
        raise ValueError(f"generator basis needs dim >= 2, got {dim}")
    if dim == 2:
        return OperatorBasis(2, [SIGMA_X.copy(), SIGMA_Y.copy(), SIGMA_Z.copy()])
    sym, anti, diag = [], [], []
    for j in range(dim):
        for k in range(j + 1, dim):
            s = np.zeros((dim, dim), dtype=complex)
            s[j, k] = s[k, j] = 1.0
            sym.append(s)
            a = np.zeros((dim, dim), dtype=complex)
            a[j, k] = -1j
            a[k, j] = 1j
            anti.append(a)
    for l in range(1, dim):
        entries = np.zeros(dim)
        entries[:l] = 1.0
        entries[l] = -l
        diag.append(np.sqrt(2.0 / (l * (l + 1))) * np.diag(entries).astype(complex))
    return OperatorBasis(dim, sym + anti + diag)
