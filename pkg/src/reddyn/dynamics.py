"""Hamiltonians, the two initial-state families and exact unitary evolution."""
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    I2,
    SIGMA_X,
    DimensionError,
    as_cmatrix,
    dagger,
    expm_hermitian,
    is_density_matrix,
    is_hermitian,
    is_unitary,
    matrix_unit,
    partial_trace,
    tensor,
    trace_distance,
)


@dataclass(frozen=True)
class Hamiltonian:
    joint: np.ndarray
    d_A: int
    d_B: int
    h_A: Optional[np.ndarray] = None
    h_B: Optional[np.ndarray] = None

    def __post_init__(self):
        joint = as_cmatrix(self.joint)
        if joint.shape[0] != self.d_A * self.d_B:
            raise DimensionError("Hamiltonian dimension does not match d_A * d_B")
        if not is_hermitian(joint):
            raise ValueError("Hamiltonian is not Hermitian")
        object.__setattr__(self, "joint", joint)

    @property
    def is_factorized(self) -> bool:
        return self.h_A is not None

    @classmethod
    def factorized(cls, h_A, h_B) -> "Hamiltonian":
        """``h_A (x) I + I (x) h_B``; its propagator is a product of local ones."""
        h_A = as_cmatrix(h_A)
        h_B = as_cmatrix(h_B)
        d_A, d_B = h_A.shape[0], h_B.shape[0]
        joint = tensor(h_A, np.eye(d_B)) + tensor(np.eye(d_A), h_B)
        return cls(joint, d_A, d_B, h_A, h_B)


@dataclass(frozen=True)
class JointState:
    matrix: np.ndarray
    d_A: int
    d_B: int

    def __post_init__(self):
        m = as_cmatrix(self.matrix)
        if m.shape[0] != self.d_A * self.d_B:
            raise DimensionError("state dimension does not match d_A * d_B")
        if not is_density_matrix(m, 1e-9):
            raise ValueError("joint state is not a unit-trace PSD Hermitian matrix")
        object.__setattr__(self, "matrix", m)

    def reduced(self, side: str = "A") -> np.ndarray:
        """Marginal on ``side`` (the other subsystem is traced out)."""
        return partial_trace(self.matrix, self.d_A, self.d_B, "B" if side == "A" else "A")


@dataclass(frozen=True)
class AmplitudePair:
    alpha: complex
    beta: complex

    def __post_init__(self):
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"|alpha|^2 + |beta|^2 = {norm!r}, expected 1")

    @classmethod
    def real(cls, alpha: float) -> "AmplitudePair":
        """Real ``alpha`` in [0, 1] with ``beta = sqrt(1 - alpha^2)``."""
        return cls(alpha, np.sqrt(max(0.0, 1.0 - alpha * alpha)))


@dataclass(frozen=True)
class Trajectory:
    times: List[float]
    joint_states: List[JointState] = field(repr=False)
    reduced_states: List[np.ndarray] = field(repr=False)


def cnot_hamiltonian() -> Hamiltonian:
    """``sigma_x (x) |1><1| + I (x) |0><0|`` on two qubits (B controls A)."""
    joint = tensor(SIGMA_X, matrix_unit(2, 1, 1)) + tensor(I2, matrix_unit(2, 0, 0))
    return Hamiltonian(joint, 2, 2)


def initial_state(kind: str, amps: AmplitudePair) -> JointState:
    """``classical``: |a|^2 |00><00| + |b|^2 |11><11|; ``entangled``: the pure a|00> + b|11>."""
    a, b = complex(amps.alpha), complex(amps.beta)
    if kind == "classical":
        m = np.diag([abs(a) ** 2, 0, 0, abs(b) ** 2]).astype(complex)
    elif kind == "entangled":
        psi = np.array([a, 0, 0, b], dtype=complex)
        m = np.outer(psi, psi.conj())
    else:
        raise ValueError(f"unknown initial-state kind {kind!r}")
    return JointState(m, 2, 2)


def propagator(h: Hamiltonian, t: float) -> np.ndarray:
    if h.is_factorized:
        return tensor(expm_hermitian(h.h_A, t), expm_hermitian(h.h_B, t))
    return expm_hermitian(h.joint, t)


def evolve(state: JointState, u, tol: float = DEFAULT_TOL) -> JointState:
    u = as_cmatrix(u)
    if u.shape != state.matrix.shape:
        raise DimensionError("propagator and state dimensions differ")
    if not is_unitary(u, tol):
        raise ValueError("propagator is not unitary")
    rho = u @ state.matrix @ dagger(u)
    return JointState(0.5 * (rho + dagger(rho)), state.d_A, state.d_B)


def reduced_trajectory(h: Hamiltonian, state0: JointState, times: Sequence[float]) -> Trajectory:
    times = [float(t) for t in times]
    if not times:
        raise ValueError("time grid is empty")
    if not np.all(np.isfinite(times)):
        raise ValueError("time grid contains non-finite values")
    if (h.d_A, h.d_B) != (state0.d_A, state0.d_B):
        raise DimensionError("Hamiltonian and state have different subsystem dims")
    joints = [evolve(state0, propagator(h, t)) for t in times]
    reduced = [j.reduced("A") for j in joints]
    return Trajectory(times, joints, reduced)


def _off_diagonal(m: np.ndarray) -> np.ndarray:
    return m[~np.eye(m.shape[0], dtype=bool)]


def compare_cases(
    h: Hamiltonian, amps: AmplitudePair, times: Sequence[float]
) -> List[Tuple[float, float, float, float]]:
    """Classical vs entangled preparation along a shared time grid.

    Each row is ``(t, trace_distance_reduced, max_joint_diagonal_gap,
    max_joint_coherence_gap)``.
    """
    first = reduced_trajectory(h, initial_state("classical", amps), times)
    second = reduced_trajectory(h, initial_state("entangled", amps), times)
    rows = []
    for t, j1, j2, r1, r2 in zip(first.times, first.joint_states, second.joint_states,
                                 first.reduced_states, second.reduced_states):
        gap = j1.matrix - j2.matrix
        rows.append((
            t,
            trace_distance(r1, r2),
            float(np.abs(np.diag(gap)).max()),
            float(np.abs(_off_diagonal(gap)).max()),
        ))
    return rows
