"""Monomial moments and Hilbert-Schmidt Hankel diagnostics on Reinhardt domains in C^2."""

from .certificate import (
    Certificate,
    CertificateEntry,
    SubharmonicityCheck,
    Window,
    certificate_ladder,
    certified_lower_bound,
    check_subharmonic,
    critical_point,
    density_mass,
    find_window,
    index_window,
    lambda_alpha,
    log_ratio_R,
)
from .domains import (
    BasisLattice,
    BoxPiece,
    DomainSpec,
    FiberPiece,
    MultiIndex,
    RadialRegion,
    StripPiece,
    TailPiece,
    radial_shadow,
)
from .errors import InvalidInputError, NumericalFailureError
from .hankel import (
    Classification,
    Convergent,
    DbarReport,
    DivergentLinear,
    Inconclusive,
    SAlphaReport,
    SymbolSpec,
    build_s_alpha_report,
    classify_growth,
    dbar_canonical_report,
    hs_norm_sq,
    hs_term,
    s_alpha_partial,
    s_alpha_partials,
    sample_ladder,
    shell_bound,
)
from .logdomain import LOG_ZERO, LogValue, log_add_exp, log_sub_exp, log_sum_exp
from .moments import (
    DIVERGENT,
    Divergent,
    log_c_gamma_sq,
    log_profile_interval_moment,
    log_radial_moment,
    log_region_moment,
    monomial_in_basis,
)
from .profiles import RadialProfile, profile_family
from .quadrature import DEFAULT_SETTINGS, QuadratureSettings, log_integrate
from .wiegerinck import (
    Omega0Series,
    OmegaKReport,
    OmegaZeroMoment,
    omega0_log_ck_sq,
    omega0_s11,
    omega0_term,
    omegak_report,
)

__version__ = "0.1.0"
