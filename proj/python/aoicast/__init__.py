"""Age of information for multicast with a prioritized group of k receivers."""

from ._core import (
    EULER_GAMMA,
    AgeReport,
    AgeRow,
    DistributionKind,
    Estimate,
    InsufficientDataError,
    NonPriorityAge,
    PriorityAge,
    ServiceDistribution,
    SimConfig,
    SimResult,
    UsageError,
    ValidationCheck,
    ValidationReport,
    age_exponential,
    age_nonpriority,
    age_priority,
    age_priority_lower_bound,
    failure_prob,
    harmonic,
    harmonic2,
    priority_age,
    sawtooth_cross_check,
    simulate,
    sweep_k,
    sweep_shift,
    validate,
    w_moments,
    xtilde_mean,
)

__all__ = [name for name in dir() if not name.startswith("_")]
