"""Reduced dynamical maps, Choi matrices and Kraus decompositions.

A map is stored as its images on the matrix units: ``images[i, j]`` is the
output for input ``|i><j|``. The Choi matrix is ``sum_ij |i><j| (x) Λ(|i><j|)``
(input factor first), and a Kraus operator ``K`` is read off an eigenvector
``v`` of the Choi matrix column by column: ``K[:, i] = sqrt(λ) v[i*d_out:(i+1)*d_out]``.
"""
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from . import kernels
from .linalg import (
    DEFAULT_TOL,
    DimensionError,
    as_cmatrix,
    dagger,
    is_density_matrix,
    is_hermitian,
    partial_trace,
)


class NotCompletelyPositive(ValueError):
    """Choi matrix has an eigenvalue below ``-tol``; no Kraus form exists."""

    def __init__(self, eigenvalue: float):
        super().__init__(f"map is not completely positive (Choi eigenvalue {eigenvalue:.6g})")
        self.eigenvalue = eigenvalue


def _unit_table(d_in: int, fn) -> np.ndarray:
    first = as_cmatrix(fn(0, 0))
    d_out = first.shape[0]
    table = np.empty((d_in, d_in, d_out, d_out), dtype=complex)
    for i in range(d_in):
        for j in range(d_in):
            table[i, j] = first if (i, j) == (0, 0) else fn(i, j)
    return table


def _unit(d, i, j):
    e = np.zeros((d, d), dtype=complex)
    e[i, j] = 1.0
    return e


@dataclass(frozen=True)
class Embedding:
    """Linear assignment of joint A (x) B states to system states."""

    d_A: int
    d_B: int
    images: np.ndarray

    def __post_init__(self):
        expected = (self.d_A, self.d_A, self.d_A * self.d_B, self.d_A * self.d_B)
        if self.images.shape != expected:
            raise DimensionError(f"embedding table has shape {self.images.shape}, expected {expected}")
        traces = np.einsum("ijkk->ij", self.images)
        if np.max(np.abs(traces - np.eye(self.d_A))) > 1e-10:
            raise ValueError("embedding does not preserve the trace")

    def action(self, x) -> np.ndarray:
        x = as_cmatrix(x)
        if x.shape[0] != self.d_A:
            raise DimensionError("input does not act on subsystem A")
        return np.tensordot(x, self.images, axes=([0, 1], [0, 1]))

    def min_eigenvalue(self, x) -> float:
        """Smallest eigenvalue of ``action(x)``; negative means an unphysical joint state."""
        out = self.action(x)
        return float(np.linalg.eigvalsh(0.5 * (out + dagger(out))).min())


@dataclass(frozen=True)
class LinearMap:
    d_in: int
    d_out: int
    images: np.ndarray

    def __post_init__(self):
        expected = (self.d_in, self.d_in, self.d_out, self.d_out)
        if self.images.shape != expected:
            raise DimensionError(f"map table has shape {self.images.shape}, expected {expected}")

    def is_trace_preserving(self, tol: float = DEFAULT_TOL) -> bool:
        traces = np.einsum("ijkk->ij", self.images)
        return bool(np.max(np.abs(traces - np.eye(self.d_in))) <= tol)


@dataclass(frozen=True)
class ChoiMatrix:
    matrix: np.ndarray
    d_in: int
    d_out: int


@dataclass(frozen=True)
class KrausSet:
    operators: List[np.ndarray]

    def __len__(self):
        return len(self.operators)

    def completeness(self) -> np.ndarray:
        """``sum_k K^dagger K``; the identity exactly when the map preserves trace."""
        return sum(dagger(k) @ k for k in self.operators)

    def apply(self, x) -> np.ndarray:
        x = as_cmatrix(x)
        return sum(k @ x @ dagger(k) for k in self.operators)

    def to_map(self) -> LinearMap:
        d_out, d_in = self.operators[0].shape
        return LinearMap(d_in, d_out, _unit_table(d_in, lambda i, j: self.apply(_unit(d_in, i, j))))


def _check_rho_B(rho_B_fixed):
    rho_B = as_cmatrix(rho_B_fixed)
    if not is_density_matrix(rho_B, 1e-9):
        raise ValueError("rho_B_fixed is not a density matrix")
    return rho_B


def _embedding(d_A, rho_B, corr_op=None):
    def unit_image(i, j):
        out = kernels.kron(_unit(d_A, i, j), rho_B)
        if corr_op is not None and i == j:
            out = out + corr_op
        return out

    return Embedding(d_A, rho_B.shape[0], _unit_table(d_A, unit_image))


def product_embedding(rho_B_fixed, d_A: int = 2) -> Embedding:
    """``X -> X (x) rho_B``, the uncorrelated preparation."""
    return _embedding(d_A, _check_rho_B(rho_B_fixed))


def correlated_embedding(corr_op, rho_B_fixed) -> Embedding:
    """``X -> X (x) rho_B + tr(X) corr_op``.

    Outputs are not guaranteed PSD for density inputs; see
    :meth:`Embedding.min_eigenvalue`.
    """
    rho_B = _check_rho_B(rho_B_fixed)
    corr_op = as_cmatrix(corr_op)
    d_B = rho_B.shape[0]
    d_A, rem = divmod(corr_op.shape[0], d_B)
    if rem or d_A < 1:
        raise DimensionError("corr_op does not act on A (x) B")
    if np.max(np.abs(partial_trace(corr_op, d_A, d_B, "B"))) > 1e-10:
        raise ValueError("corr_op must have vanishing partial trace over B")
    return _embedding(d_A, rho_B, corr_op)


def induced_map(e: Embedding, u) -> LinearMap:
    """``X -> Tr_B[u action(X) u^dagger]`` tabulated on matrix units."""
    u = as_cmatrix(u)
    if u.shape[0] != e.d_A * e.d_B:
        raise DimensionError("unitary does not act on the embedding's joint space")
    images = np.empty((e.d_A, e.d_A, e.d_A, e.d_A), dtype=complex)
    for i in range(e.d_A):
        for j in range(e.d_A):
            images[i, j] = kernels.conj_ptrace_b(u, e.images[i, j], e.d_A, e.d_B)
    return LinearMap(e.d_A, e.d_A, images)


def apply_map(m: LinearMap, x) -> np.ndarray:
    x = as_cmatrix(x)
    if x.shape[0] != m.d_in:
        raise DimensionError(f"input of dim {x.shape[0]} for a map on dim {m.d_in}")
    return np.tensordot(x, m.images, axes=([0, 1], [0, 1]))


def choi(m: LinearMap) -> ChoiMatrix:
    return ChoiMatrix(kernels.choi_from_images(m.images), m.d_in, m.d_out)


def is_cp(c: ChoiMatrix, tol: float = DEFAULT_TOL) -> Tuple[bool, float]:
    """Whether the Choi matrix is PSD up to ``tol``, with its smallest eigenvalue."""
    if not is_hermitian(c.matrix, tol):
        raise ValueError("Choi matrix is not Hermitian; the map does not preserve Hermiticity")
    lowest = float(np.linalg.eigvalsh(0.5 * (c.matrix + dagger(c.matrix))).min())
    return lowest >= -tol, lowest


def kraus_from_choi(c: ChoiMatrix, tol: float = DEFAULT_TOL) -> KrausSet:
    ok, lowest = is_cp(c, tol)
    if not ok:
        raise NotCompletelyPositive(lowest)
    w, v = np.linalg.eigh(0.5 * (c.matrix + dagger(c.matrix)))
    ops = []
    for lam, vec in zip(w[::-1], v[:, ::-1].T):
        if lam <= tol:
            break
        ops.append(np.sqrt(lam) * vec.reshape(c.d_in, c.d_out).T)
    return KrausSet(ops)


def identity_map(d: int) -> LinearMap:
    return LinearMap(d, d, _unit_table(d, lambda i, j: _unit(d, i, j)))


def transpose_map(d: int) -> LinearMap:
    return LinearMap(d, d, _unit_table(d, lambda i, j: _unit(d, j, i)))


def unitary_map(u) -> LinearMap:
    return KrausSet([as_cmatrix(u)]).to_map()
