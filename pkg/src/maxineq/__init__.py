"""Verification workbench for maximal-inequality and strong-law machinery
on dependent sequences: exact enumeration oracles, Gaussian-copula Monte
Carlo, quadrant-dependence functionals, and condition checkers.
"""

from ._kernels import USING_NUMBA
from .distributions import (
    FiniteMarginal,
    GaussianMarginal,
    SymmetrizedPareto,
    centered_bernoulli,
    marginal_from_config,
    two_point,
)
from .errors import (
    BudgetError,
    ConfigError,
    DomainError,
    MaxineqError,
    ModelError,
    SchemeError,
)
from .functionals import (
    CovFunctionalResult,
    g_functional,
    h_functional,
    positive_part,
    quadrant_deviation,
)
from .max_inequality import (
    CalibratedConstant,
    MCExceedance,
    PathwiseCheckReport,
    PreconditionReport,
    TheoremRHSBreakdown,
    TransformMoments,
    calibrate_constant,
    kolmogorov_baseline,
    lhs_exceedance_exact,
    lhs_exceedance_mc,
    pathwise_decomposition_check,
    precondition_b,
    rhs_bound,
    rhs_bound_dominated,
)
from .models import (
    AbsWindow,
    CopulaSequenceModel,
    DominationCertificate,
    FiniteJointModel,
    check_domination,
    model_from_config,
)
from .norming import PowerScheme, TableScheme, condition_a_constant, scheme_from_config
from .oracle import (
    enumerate_paths,
    exact_marginal_moment,
    exact_max_partial_sum_tail,
    exact_pair_covariance,
)
from .slln import (
    ConditionReport,
    TrajectoryStats,
    check_corollary31_condition,
    check_covariance_conditions,
    check_growth_conditions,
    check_moment_inequality_family,
    check_pqd_series_condition,
    check_series_conditions,
    slln_trajectory,
)
from .transforms import (
    TruncationBand,
    neg_part,
    pos_part,
    shell_magnitude,
    shell_magnitude_clip_form,
    shell_signed,
    truncate,
)

__version__ = "0.1.0"
