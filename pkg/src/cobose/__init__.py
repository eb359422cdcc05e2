"""cobose: how bosonic is a composite of two elementary bosons?

Quantifies the quality of a two-boson composite through the normalization
factor chi_N of the N-composite state, tight and single-parameter bounds on
the normalization ratio chi_{N+1}/chi_N in terms of the constituents'
entanglement (largest Schmidt coefficient lambda1, purity P), and the
Schmidt-mode counting statistics that exhibit the condensation transition.
"""

from ._backend import backend_name
from .bounds import (
    BoundBundle,
    HierarchyReport,
    check_hierarchy,
    chi_closed_forms,
    chi_max_gamma_sum,
    chi_min_geometric_sum,
    extremal_chi_series,
    lambda1_bounds,
    purity_bounds,
    tight_bounds,
)
from .chi import (
    ChiSeries,
    chi_bruteforce_exact,
    chi_grouped,
    chi_recursive,
    chi_series,
    commutator_expectation,
    normalization_ratio_series,
)
from .errors import (
    CoboseError,
    DistributionError,
    FeasibilityError,
    PoleError,
    ResourceCapError,
    VerificationError,
)
from .extremal import (
    ExtremalConstruction,
    build_lambda_max,
    build_lambda_min,
    build_peaked,
    build_pmax,
    build_pmin_limit,
    build_uniform,
)
from .occupation import (
    OccupationPmf,
    mean_occupation,
    mode_occupation_pmf,
    occupation_fraction_curve,
    occupation_sum_rule,
    tail_occupation_mean,
)
from .schmidt import (
    FeasibilityRange,
    SchmidtDistribution,
    entanglement_measures,
    feasible_lambda1_range,
    feasible_purity_range,
    make_distribution,
    power_sum,
)
from .special import (
    LogValue,
    SignedLogValue,
    log_2f1_terminating,
    log_gamma,
    log_sum_exp,
    log_upper_incomplete_gamma_int,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "backend_name",
    # schmidt
    "SchmidtDistribution",
    "FeasibilityRange",
    "make_distribution",
    "power_sum",
    "entanglement_measures",
    "feasible_lambda1_range",
    "feasible_purity_range",
    # special
    "LogValue",
    "SignedLogValue",
    "log_sum_exp",
    "log_gamma",
    "log_upper_incomplete_gamma_int",
    "log_2f1_terminating",
    # chi
    "ChiSeries",
    "chi_bruteforce_exact",
    "chi_recursive",
    "chi_grouped",
    "chi_series",
    "normalization_ratio_series",
    "commutator_expectation",
    # extremal
    "ExtremalConstruction",
    "build_lambda_max",
    "build_lambda_min",
    "build_uniform",
    "build_peaked",
    "build_pmin_limit",
    "build_pmax",
    # bounds
    "BoundBundle",
    "HierarchyReport",
    "tight_bounds",
    "extremal_chi_series",
    "purity_bounds",
    "lambda1_bounds",
    "chi_closed_forms",
    "chi_max_gamma_sum",
    "chi_min_geometric_sum",
    "check_hierarchy",
    # occupation
    "OccupationPmf",
    "mode_occupation_pmf",
    "mean_occupation",
    "occupation_sum_rule",
    "tail_occupation_mean",
    "occupation_fraction_curve",
    # errors
    "CoboseError",
    "DistributionError",
    "FeasibilityError",
    "ResourceCapError",
    "PoleError",
    "VerificationError",
]
