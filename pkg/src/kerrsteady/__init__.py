"""Exact steady states of driven-dissipative Kerr resonators.

Closed-form steady-state wavefunctions and moments for the coherently
driven and two-photon-driven Kerr models, semiclassical branch
structure, doubled-space operator certificates, and an independent
density-matrix oracle for cross-validation.
"""

from .errors import (
    BasisMismatch,
    CrossCheckFailure,
    CutoffTooSmall,
    DenominatorPole,
    InvalidParams,
    InvariantViolation,
    KerrSteadyError,
    NonConvergence,
    PoleError,
    SingularSystem,
    UnsupportedModel,
)
from .exact_linear import (
    CorrelationResult,
    ExactSweepRow,
    SteadyWavefunction,
    amplitude_moment,
    correlation_linear,
    exact_drive_point,
    photon_number_linear,
    sweep_drive_exact,
    wavefunction_linear,
)
from .exact_twophoton import (
    ResonancePrediction,
    ResonanceScan,
    correlation_twophoton,
    photon_number_twophoton,
    resonance_predictions,
    resonance_scan,
    scan_point,
    strict_local_maxima,
    wavefunction_twophoton,
    wavefunction_via_three_term,
)
from .keldysh_ops import (
    CL_Q,
    PLUS_MINUS,
    OperatorMatrix,
    ResidualReport,
    build_generalized_hamiltonian_clq,
    build_generalized_hamiltonian_pm,
    build_mode_operators,
    candidate_density_matrix,
    convert_basis,
    embed_wavefunction,
    hamiltonian_parts_clq,
    interior_projector,
    mixing_unitary,
    mode_annihilation,
    q_grade_blocks,
    steady_residual,
)
from .lindblad_oracle import (
    DensityMatrix,
    Liouvillian,
    adaptive_cutoff,
    build_liouvillian,
    correlation_from_rho,
    fock_annihilation,
    hamiltonian_fock,
    steady_state,
    steady_state_at,
)
from .meanfield import (
    MeanFieldBranch,
    bistable_window,
    classify_stability,
    photon_number_branches,
    sweep_drive,
)
from .model import (
    LinearDerived,
    ModelParams,
    TwoPhotonDerived,
    derive_linear,
    derive_twophoton,
    params_from_dict,
)
from .specfun import (
    SeriesResult,
    hyp0f2,
    hyp0f2_ratio,
    hyp2f1_terminating,
    log_gamma,
    pochhammer,
)

__version__ = "0.1.0"

__all__ = [
    "BasisMismatch",
    "CL_Q",
    "CorrelationResult",
    "CrossCheckFailure",
    "CutoffTooSmall",
    "DensityMatrix",
    "DenominatorPole",
    "ExactSweepRow",
    "InvalidParams",
    "InvariantViolation",
    "KerrSteadyError",
    "LinearDerived",
    "Liouvillian",
    "MeanFieldBranch",
    "ModelParams",
    "NonConvergence",
    "OperatorMatrix",
    "PLUS_MINUS",
    "PoleError",
    "ResidualReport",
    "ResonancePrediction",
    "ResonanceScan",
    "SeriesResult",
    "SingularSystem",
    "SteadyWavefunction",
    "TwoPhotonDerived",
    "UnsupportedModel",
    "adaptive_cutoff",
    "amplitude_moment",
    "bistable_window",
    "build_generalized_hamiltonian_clq",
    "build_generalized_hamiltonian_pm",
    "build_liouvillian",
    "build_mode_operators",
    "candidate_density_matrix",
    "classify_stability",
    "convert_basis",
    "correlation_from_rho",
    "correlation_linear",
    "correlation_twophoton",
    "derive_linear",
    "derive_twophoton",
    "embed_wavefunction",
    "exact_drive_point",
    "fock_annihilation",
    "hamiltonian_fock",
    "hamiltonian_parts_clq",
    "hyp0f2",
    "hyp0f2_ratio",
    "hyp2f1_terminating",
    "interior_projector",
    "log_gamma",
    "mixing_unitary",
    "mode_annihilation",
    "params_from_dict",
    "photon_number_branches",
    "photon_number_linear",
    "photon_number_twophoton",
    "pochhammer",
    "q_grade_blocks",
    "resonance_predictions",
    "resonance_scan",
    "scan_point",
    "steady_residual",
    "steady_state",
    "steady_state_at",
    "strict_local_maxima",
    "sweep_drive",
    "sweep_drive_exact",
    "wavefunction_linear",
    "wavefunction_twophoton",
    "wavefunction_via_three_term",
]
