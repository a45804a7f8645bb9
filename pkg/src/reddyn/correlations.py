"""Product-plus-correlation decomposition and the correlation-induced term.

A joint state splits as ``rho_AB = rho_A (x) rho_B + C`` where both partial
traces of ``C`` vanish, so ``C`` expands over products of traceless
generators, ``C = sum_ij gamma[i, j] s_i (x) t_j``. Evolving ``C`` with a
joint unitary and tracing out B gives the extra term in the reduced state.
That term is identically zero whenever the unitary is a product ``U_A (x) U_B``,
because each summand then carries a factor ``tr(U_B t_j U_B^dagger) = tr(t_j) = 0``.
"""
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from . import kernels
from .dynamics import JointState
from .linalg import (
    DimensionError,
    OperatorBasis,
    as_cmatrix,
    dagger,
    expm_hermitian,
    generator_basis,
    is_unitary,
    matrix_unit,
    partial_trace,
    tensor,
)

FACTORIZATION_TOL = 1e-8


@dataclass(frozen=True)
class ProductDecomposition:
    rho_A: np.ndarray
    rho_B: np.ndarray
    gamma: np.ndarray
    corr_op: np.ndarray
    basis_A: OperatorBasis
    basis_B: OperatorBasis

    @property
    def d_A(self) -> int:
        return self.rho_A.shape[0]

    @property
    def d_B(self) -> int:
        return self.rho_B.shape[0]

    def corr_from_gamma(self) -> np.ndarray:
        """Rebuild the correlation operator from the coefficient table."""
        out = np.zeros_like(self.corr_op)
        for i, s in enumerate(self.basis_A.generators):
            for j, t in enumerate(self.basis_B.generators):
                if self.gamma[i, j] != 0.0:
                    out += self.gamma[i, j] * np.kron(s, t)
        return out


@dataclass(frozen=True)
class FactorizationReport:
    is_factorizable: bool
    schmidt_singular_values: List[float]
    u_A: Optional[np.ndarray] = None
    u_B: Optional[np.ndarray] = None


def decompose(state: JointState) -> ProductDecomposition:
    if not isinstance(state, JointState):
        raise TypeError("decompose expects a JointState")
    rho = state.matrix
    d_A, d_B = state.d_A, state.d_B
    rho_A = partial_trace(rho, d_A, d_B, "B")
    rho_B = partial_trace(rho, d_A, d_B, "A")
    basis_A, basis_B = generator_basis(d_A), generator_basis(d_B)
    norm = basis_A.normalization * basis_B.normalization
    mean_A = [np.trace(s @ rho_A) for s in basis_A.generators]
    mean_B = [np.trace(t @ rho_B) for t in basis_B.generators]
    gamma = np.empty((d_A * d_A - 1, d_B * d_B - 1))
    for i, s in enumerate(basis_A.generators):
        for j, t in enumerate(basis_B.generators):
            joint = np.trace(np.kron(s, t) @ rho)
            gamma[i, j] = ((joint - mean_A[i] * mean_B[j]) / norm).real
    corr_op = rho - tensor(rho_A, rho_B)
    return ProductDecomposition(rho_A, rho_B, gamma, corr_op, basis_A, basis_B)


def _check_unitary_dims(u, d_A, d_B):
    u = as_cmatrix(u)
    if u.shape[0] != d_A * d_B:
        raise DimensionError(f"unitary of dim {u.shape[0]} does not act on {d_A}x{d_B}")
    return u


def delta_rho(u, dec: ProductDecomposition) -> np.ndarray:
    """``Tr_B[u C u^dagger]`` for the correlation operator ``C`` of ``dec``."""
    u = _check_unitary_dims(u, dec.d_A, dec.d_B)
    out = kernels.conj_ptrace_b(u, dec.corr_op, dec.d_A, dec.d_B)
    return 0.5 * (out + dagger(out))


def matrix_element_form(u, dec: ProductDecomposition, a: int, b: int) -> complex:
    """``<a|delta_rho|b>`` evaluated as ``Tr[(u^dagger (|b><a| (x) I) u) C]``.

    ``C`` is rebuilt here from the gamma coefficients, so this path shares
    nothing with :func:`delta_rho` beyond the inputs.
    """
    u = _check_unitary_dims(u, dec.d_A, dec.d_B)
    if not (0 <= a < dec.d_A and 0 <= b < dec.d_A):
        raise IndexError(f"matrix element ({a}, {b}) out of range for d_A = {dec.d_A}")
    lifted = np.kron(matrix_unit(dec.d_A, b, a), np.eye(dec.d_B))
    observable = dagger(u) @ lifted @ u
    return complex(np.trace(observable @ dec.corr_from_gamma()))


def reshuffle(u, d_A: int, d_B: int) -> np.ndarray:
    """Realign ``u[(i,k),(j,l)]`` into ``R[(i,j),(k,l)]``; rank of R is the operator-Schmidt rank."""
    return (as_cmatrix(u).reshape(d_A, d_B, d_A, d_B)
            .transpose(0, 2, 1, 3).reshape(d_A * d_A, d_B * d_B))


def factorize_unitary(u, d_A: int, d_B: int, tol: float = FACTORIZATION_TOL,
                      unitary_tol: float = 1e-9) -> FactorizationReport:
    u = _check_unitary_dims(u, d_A, d_B)
    if not is_unitary(u, unitary_tol):
        raise ValueError("factorize_unitary needs a unitary input")
    left, svals, right = np.linalg.svd(reshuffle(u, d_A, d_B))
    svals_list = [float(s) for s in svals]
    if len(svals) > 1 and svals[1] > tol * svals[0]:
        return FactorizationReport(False, svals_list)
    # leading singular vectors have unit Frobenius norm; rescale to unitaries
    u_A = np.sqrt(d_A) * left[:, 0].reshape(d_A, d_A)
    u_B = np.sqrt(d_B) * right[0, :].reshape(d_B, d_B)
    scale = svals[0] / np.sqrt(d_A * d_B)
    u_B = u_B * scale
    k = np.argmax(np.abs(u_A))
    phase = u_A.flat[k] / abs(u_A.flat[k])
    return FactorizationReport(True, svals_list, u_A / phase, u_B * phase)


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a Ginibre matrix."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return 0.5 * (z + dagger(z))


def random_coupling_unitary(d_A: int, d_B: int, rng: np.random.Generator) -> np.ndarray:
    """``exp(-i H)`` for a random joint Hamiltonian; entangling with probability one."""
    return expm_hermitian(random_hermitian(d_A * d_B, rng), 1.0)


def random_correlated_state(d_A: int, d_B: int, rng: np.random.Generator,
                            mixing: float = 0.05) -> JointState:
    """Marginal of a random pure state on A (x) B (x) E, mixed with white noise to full rank."""
    d = d_A * d_B
    psi = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = psi @ dagger(psi)
    rho /= np.trace(rho).real
    rho = (1.0 - mixing) * rho + mixing * np.eye(d) / d
    return JointState(0.5 * (rho + dagger(rho)), d_A, d_B)


def theorem_trial(seed: int, d_A: int, d_B: int, *, state: Optional[JointState] = None,
                  reference_unitary=None) -> Tuple[float, float]:
    """Norm of the correlation term under product dynamics, and under a coupling reference.

    Returns ``(norm_factorized, norm_reference)``. The first must vanish to
    roundoff. ``state`` and ``reference_unitary`` replace the seeded random
    draws when given.
    """
    if d_A < 2 or d_B < 2:
        raise ValueError("theorem_trial needs d_A, d_B >= 2")
    rng = np.random.default_rng(seed)
    if state is None:
        state = random_correlated_state(d_A, d_B, rng)
    dec = decompose(state)
    local = tensor(random_unitary(d_A, rng), random_unitary(d_B, rng))
    if reference_unitary is None:
        reference_unitary = random_coupling_unitary(d_A, d_B, rng)
    factorized = float(np.linalg.norm(delta_rho(local, dec)))
    reference = float(np.linalg.norm(delta_rho(reference_unitary, dec)))
    return factorized, reference
