"""Quantum discord, classical-quantum extensions, and discord-maximizing states."""

from .linalg import (
    EigResult,
    NotHermitianError,
    hermitian_eig,
    kron,
    numerical_rank,
    partial_trace,
    partial_transpose,
    permute_subsystems,
    random_unitary,
    svd_values,
    unitary_step,
)
from .states import (
    DensityMatrix,
    HermiticityError,
    PositivityError,
    ProductEnsemble,
    StateValidationError,
    TraceError,
    bloch_ket,
    ensemble_to_state,
    family_state,
    haar_state,
    haar_two_qubit,
    length_two_qubits,
    make_density,
    w_set,
    z_set,
)
from .correlations import (
    CorrelationProfile,
    MeasurementOptConfig,
    classical_correlation,
    concurrence,
    discord,
    discord_alpha_analytic,
    entropy,
    eof,
    measured_conditional_entropy,
    mutual_information,
    profile,
)
from .extension import (
    AncillaInfo,
    BoundReport,
    CcBoundReport,
    CqExtension,
    Table1Row,
    ancilla_diagnostics,
    ancilla_mutual_informations,
    bound_cc,
    bound_f,
    bound_min,
    bound_range,
    bound_report,
    liluo_extend,
    table1,
    verify_cq,
)
from .search import (
    AnnealConfig,
    AnnealResult,
    anneal,
    assemble,
    load_optimal_unitary,
    objective,
)
from .mdss import (
    MubFamily,
    NotASicError,
    SicFamily,
    UnsupportedDimensionError,
    mub_family,
    qubit_sic_fiducial,
    rho_max_d,
    rho_tilde_max_d,
    sic_from_fiducial,
    sic_tetrahedron,
)
from .genuine import (
    CorrelationMatrix,
    GenuinenessReport,
    HermitianBasis,
    correlation_matrix,
    hermitian_basis,
    is_genuinely_quantum,
)

__version__ = "0.1.0"
