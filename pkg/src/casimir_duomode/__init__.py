"""Two-mode dynamical Casimir effect: analytic theory, exact oracle, CLI."""

from .cavity import (
    ModeIndex3D,
    ModelParams,
    NU_CUBICAL,
    coth,
    mode_coupling_coefficient,
    mu_from_resonant_pair,
    nu_from_mu,
    theta_pair_from_beta,
)
from .gaussian import (
    ModeObservables,
    PhotonDistribution,
    energy_asymmetric,
    energy_exact_resonance,
    iup_asymmetric,
    iup_exact_resonance,
    legendre,
    legendre_scaled,
    observables_asymmetric,
    observables_exact_resonance,
    observables_from_covariance,
    pdf_asymptotic,
    pdf_exact,
    pdf_vacuum_longtime,
    photon_variance,
    purity,
    squeezing,
)
from .oracle import (
    CovarianceState,
    OracleOptions,
    oracle_fundamental_matrix,
    oracle_fundamental_matrices,
    propagate_covariance,
    rhs,
    stroboscopic_times,
    thermal_covariance,
)
from .resmap import (
    DetuningPoint,
    RegionKind,
    RegionVerdict,
    classify,
    eta_critical,
    hyperbola_bounds,
    resonance_widths,
    sweep_grid,
)
from .slowamp import (
    EigenSet,
    FundamentalMatrix,
    SlowMatrix,
    build_matrix,
    eigenvalues,
    fundamental_matrix_asymmetric,
    fundamental_matrix_exact_resonance,
    fundamental_matrix_generic,
    increment_asymmetric_inner,
    increment_asymmetric_outer,
    increment_symmetric_line,
)

__version__ = "0.1.0"
