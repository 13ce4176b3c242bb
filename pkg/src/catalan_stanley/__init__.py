"""Catalan-Stanley tree growth process: exact enumeration, generating
functions, and asymptotic statistics, with brute-force oracles throughout."""

from .asymptotics import (
    AsymptoticEstimate,
    ConstantSpec,
    age_variance_asym,
    ancestor_variance_asym,
    constant_c,
    constant_digits,
    expected_age_asym,
    expected_ancestor_asym,
    prob_age_asym,
)
from .enumeration import (
    SamplerConfig,
    TreeIterator,
    catalan,
    count_trees,
    enumerate_trees,
    plane_trees,
    sample_reduced_sizes,
    sample_tree,
    sample_trees,
)
from .errors import (
    CapacityError,
    MalformedPathError,
    NotCatalanStanleyError,
    SamplingError,
    TreeParseError,
)
from .series import (
    BivariateSeries,
    TruncatedSeries,
    phi_apply,
    phi_power,
    series_F_geq,
    series_F_leq,
    series_G,
    series_S,
    series_T,
)
from .stats import (
    DistributionTable,
    MomentReport,
    age_count_geq,
    age_distribution,
    age_moment_report,
    age_variance,
    ancestor_distribution,
    ancestor_moment_report,
    expected_age,
    expected_age_via_survivals,
    expected_ancestor_size,
    max_ancestor_size,
    odd_divisor_count,
)
from .tree import (
    DyckPath,
    MarkedView,
    PlaneTree,
    age,
    ancestor,
    chain,
    dyck_to_tree,
    has_odd_returns,
    is_catalan_stanley,
    marked_view,
    parse_tree,
    reduce,
    star,
    tree_to_dyck,
)
from .verify import Check, VerifyReport, run_verification

__version__ = "0.1.0"
