"""Observable-algebra scrambling toolkit.

Builds finite-dimensional operator algebras (commutants, centers, block
structure) and computes the geometric algebra anti-correlator (GAAC) of
unitary channels: closed-form special cases, upper bounds with saturation
certificates, Haar-typical values, and infinite-time averages under
Hamiltonian dynamics.
"""

__version__ = "0.1.0"

from .errors import (
    ClosureError,
    DecompositionError,
    DegeneracyError,
    DomainError,
    ResourceError,
    ScrambleError,
    ShapeError,
    UndefinedMetricError,
    ValidationError,
)
from .operator_space import (
    ASSERT_TOL,
    RANK_TOL,
    RandomSeed,
    channel_matrix,
    gaussian_variates,
    ginibre,
    haar_unitary,
    hs_inner,
    hs_norm,
    is_hermitian,
    is_projection,
    is_unitary,
    matrix_from_json,
    matrix_to_json,
    nullspace,
    orthonormalize,
    partial_trace,
    permute_factors,
    swap_operator,
    unvec,
    vec,
)
from .algebra import (
    ALGEBRA_KINDS,
    SUPERPROJECTOR_CAP,
    AlgebraDescriptor,
    BlockStructure,
    OmegaPair,
    OperatorAlgebra,
    algebra_closure,
    block_basis_rotation,
    block_decomposition,
    build_algebra,
    commutant,
    commutant_algebra,
    omega_operators,
    project_onto,
    structure_basis,
    superprojector_matrix,
    verification_residuals,
)
from .gaac import (
    CLOSED_FORM_CASES,
    ClosedFormCase,
    GaacReport,
    bipartite_swap,
    closed_form,
    gaac,
    gaac_distance_oracle,
    gaac_omega_oracle,
    gaac_structure_oracle,
    saturation_residual,
    upper_bound,
)
from .haar import (
    HaarSummary,
    ScanRow,
    concentration_scan,
    haar_average_analytic,
    haar_average_mc,
    haar_twirl_oracle,
)
from .dynamics import (
    FluctuationRow,
    HamiltonianModel,
    RMatrices,
    analyze_hamiltonian,
    chaoticity,
    default_horizon,
    dephased_state_purity,
    evolution,
    fluctuation_scan,
    grid_time_average,
    gue_hamiltonian,
    hamiltonian_from_json,
    nrc_upper_bound,
    r_matrices,
    scrambling_witness,
    time_average_collinear,
    time_average_exact,
    time_average_nrc,
)
