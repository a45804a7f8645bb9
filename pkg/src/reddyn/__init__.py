"""Reduced dynamics of bipartite quantum states with initial correlations."""
from .kernels import BACKEND
from .linalg import (
    OperatorBasis,
    expm_hermitian,
    generator_basis,
    matrix_unit,
    partial_trace,
    tensor,
    trace_distance,
)
from .dynamics import (
    AmplitudePair,
    Hamiltonian,
    JointState,
    Trajectory,
    cnot_hamiltonian,
    compare_cases,
    evolve,
    initial_state,
    propagator,
    reduced_trajectory,
)
from .correlations import (
    FactorizationReport,
    ProductDecomposition,
    decompose,
    delta_rho,
    factorize_unitary,
    matrix_element_form,
    theorem_trial,
)
from .cp import (
    ChoiMatrix,
    Embedding,
    KrausSet,
    LinearMap,
    NotCompletelyPositive,
    apply_map,
    choi,
    correlated_embedding,
    induced_map,
    is_cp,
    kraus_from_choi,
    product_embedding,
)

__version__ = "0.1.0"
