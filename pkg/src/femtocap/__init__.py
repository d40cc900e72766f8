"""Uplink capacity of a two-tier macrocell/femtocell network under open
vs. closed femtocell access: closed-form results with an independent
Monte Carlo verification path."""

from .model import (
    DegeneratePlacementError,
    InterferenceRealization,
    NetworkConfig,
    Position,
    home_interference_factor,
    interference_factor,
    sample_factors,
    sample_realization,
)
from .analytic import (
    cdf_interference,
    cdf_interference_model,
    cdf_sum_mc,
    cdf_sum_upper,
    incomplete_beta,
    order_tail,
)
from .policy import (
    AllocationPolicy,
    RateReport,
    SirTargets,
    closed_policy,
    fair_policy,
    fixed_lambda_policy,
)
from .tdma import (
    asymptotic_home_rate_tdma,
    closed_access_tdma,
    cutoff_closed_tdma,
    open_access_tdma_k1,
    sir_targets_tdma,
)
from .cdma import (
    LowerBound,
    closed_access_cdma,
    cutoff_closed_cdma,
    home_rate_lower_bound_cdma,
    sir_targets_cdma,
    sum_throughput_lower_bound_cdma_k1,
)
from .montecarlo import (
    AccessOutcome,
    EventDistribution,
    RealizationRates,
    estimate,
    find_open_cutoff,
    handoff,
    rates_cdma,
    rates_tdma,
)
from .experiments import (
    SweepSpec,
    decision_table,
    lambda_star,
    lambda_star_vs_backhaul,
    sweep_density,
)

__version__ = "0.1.0"
