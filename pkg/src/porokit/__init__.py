"""porokit: local one-sided porosity analysis.

Gap profiles of thin subsets of the positive reals at 0, porosity of integer
sets at infinity under scaling functions, rescaled limit-set probes, and
structural classification of super strong porosity -- all with exact
rational or log-domain arithmetic and explicit windowed limit estimates.
"""

from .brackets import EstimateBracket, WindowRecord
from .porosity_inf import (
    InfClassification,
    InfGapReport,
    TransportDisagreement,
    check_integer_model,
    check_upper_transport,
    classify_inf,
    concave_closed_forms,
    integer_model,
    largest_scaled_gap,
    lower_porosity_inf,
    porosity_range_inf,
    scaled_gap_ratio,
    scaling_equivalent,
    upper_porosity_inf,
)
from .porosity_zero import (
    GapReport,
    PorosityRange,
    gap_ratio,
    largest_gap,
    lower_porosity,
    porosity_range,
    profile_csv,
    upper_porosity,
    window_extrema,
)
from .pretangent import (
    CardProbe,
    LimitSetEstimate,
    NormalizingSequence,
    Snapshot,
    cluster_count_probe,
    interval_avoided,
    limit_radius_extremes,
    limit_set,
    max_avoided_interval,
    porosity_witness,
    shadowing_profile,
    snapshot,
)
from .scalars import EXACT, LOG, LogScalar, pow2, scalar_to_str
from .sets import (
    BudgetExceeded,
    IntegerSet,
    ScalingFunction,
    SetHandle,
    SpecError,
    explicit_set,
    factorial_set,
    geometric_set,
    image_set,
    integers_all,
    integers_arithmetic,
    integers_complement_window,
    integers_explicit,
    integers_primes,
    integers_recurrence,
    parse_integer_spec,
    parse_scaling_spec,
    parse_set_spec,
    power_set,
    prime_reciprocal_set,
    scaling_geometric,
    scaling_power,
    scaling_reciprocal_factorial,
    scaling_supergeometric,
    scaling_tabulated,
    supergeometric_set,
    trivial_set,
    union_set,
)
from .structure import (
    ComponentChain,
    SSPReport,
    chain_overlap_ratio,
    classify_csp,
    classify_ssp,
    components,
    half_law_checks,
    two_point_criterion,
    two_point_form,
    two_point_verdict,
)

__version__ = "0.1.0"
