"""Cross-Kerr coupling in a four-level N-configuration atom.

Builds the Raman-resonant N-scheme Hamiltonian from quantized-field
parameters, diagonalizes its lambda part analytically, applies second-order
nondegenerate perturbation theory and a pseudo-two-level reduction, and
extracts the cross-Kerr coupling K. Every approximation can be checked
against the exact Jacobi eigensolver in :mod:`kerr4ls.oracle`.
"""
from kerr4ls.errors import (
    AmbiguousMatchError,
    ConfigError,
    DegenerateLambdaError,
    DegenerateSubspaceError,
    InvalidInputError,
    Kerr4lsError,
    KerrDomainError,
    NearDegeneracyError,
    NonHermitianError,
    PhysicsGuardError,
    RamanResonanceError,
    SolverError,
)
from kerr4ls.extensions import BACKEND
from kerr4ls.kerr import (
    Flag,
    KerrReport,
    XpmEvolution,
    dark_energy_exact,
    kerr_coupling,
    kerr_energy,
    validity_report,
    xpm_evolution,
)
from kerr4ls.lambda_spectrum import DressedState, LambdaConstants, dressed_basis, lambda_constants
from kerr4ls.model import (
    Detunings,
    Hamiltonian4,
    RabiSet,
    SystemParams,
    build_hamiltonian,
    detunings_from_params,
    rabi_from_params,
)
from kerr4ls.oracle import EigenDecomposition, convergence_scan, eigh, match_by_overlap
from kerr4ls.perturbation import (
    Consistency,
    PerturbationResult,
    PerturbationSplit,
    closed_form_corrections,
    perturbation_split,
    perturbed_energy,
    perturbed_state,
    second_order_energies,
)
from kerr4ls.tls import TlsModel, tls_ground_energy, tls_hamiltonian, tls_model

__version__ = "0.1.0"
