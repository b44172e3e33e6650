"""Comparative judgement toolkit.

Penalized Bradley-Terry estimation for paired comparisons, with simulation
of assessment schedules, accuracy studies and a parametric bootstrap for
bias correction.
"""

from .bootstrap import (
    BiasCorrectedResult,
    BootstrapConfig,
    BootstrapError,
    bias_correct,
    combine_replicates,
    percentile_ci,
)
from .fitter import (
    FitConfig,
    FitResult,
    NonFiniteEstimateError,
    NotConvergedError,
    fit,
    fit_firth,
)
from .io import ComparisonFormatError, RunConfig, load_run_config, read_comparisons, write_comparisons
from .metrics import (
    StudyReport,
    bias,
    empirical_comparison_probability,
    mean_absolute_error,
    penalty_profile,
    profile_correlation,
    sd_of_estimates,
)
from .model import (
    Assessment,
    CountData,
    DisconnectedError,
    Tournament,
    assessment_from_counts,
    bt_probability,
    counts_from_assessment,
    log_likelihood,
    observed_information,
    probability_matrix,
    score_vector,
)
from .penalties import (
    DEFAULT_CONSTANTS,
    PENALTY_KINDS,
    PenaltySpec,
    alpha_penalties,
    dummy_penalties,
    epsilon_penalties,
    firth_adjusted_counts,
    firth_penalties,
    pairwise_leverages,
)
from .scheduling import (
    SCHEDULER_KINDS,
    SchedulerSpec,
    derive_rng,
    random_round,
    resimulate_assessment,
    round_robin_rounds,
    simulate_assessment,
    swiss_round,
)
from .strengths import (
    DISTRIBUTION_KINDS,
    DistributionSpec,
    bimodal_strengths,
    normal_strengths,
    owens_t,
    skew_normal_cdf,
    skew_normal_strengths,
    true_strengths,
)
from .study import BootstrapStudy, bootstrap_study, penalty_reports, simulate_ensemble, study_estimates

__version__ = "0.1.0"

__all__ = [
    "Assessment",
    "BiasCorrectedResult",
    "BootstrapConfig",
    "BootstrapError",
    "BootstrapStudy",
    "ComparisonFormatError",
    "CountData",
    "DEFAULT_CONSTANTS",
    "DISTRIBUTION_KINDS",
    "DisconnectedError",
    "DistributionSpec",
    "FitConfig",
    "FitResult",
    "NonFiniteEstimateError",
    "NotConvergedError",
    "PENALTY_KINDS",
    "PenaltySpec",
    "RunConfig",
    "SCHEDULER_KINDS",
    "SchedulerSpec",
    "StudyReport",
    "Tournament",
    "alpha_penalties",
    "assessment_from_counts",
    "bias",
    "bias_correct",
    "bimodal_strengths",
    "bootstrap_study",
    "bt_probability",
    "combine_replicates",
    "counts_from_assessment",
    "derive_rng",
    "dummy_penalties",
    "empirical_comparison_probability",
    "epsilon_penalties",
    "firth_adjusted_counts",
    "firth_penalties",
    "fit",
    "fit_firth",
    "load_run_config",
    "log_likelihood",
    "mean_absolute_error",
    "normal_strengths",
    "observed_information",
    "owens_t",
    "pairwise_leverages",
    "penalty_profile",
    "penalty_reports",
    "percentile_ci",
    "probability_matrix",
    "profile_correlation",
    "random_round",
    "read_comparisons",
    "resimulate_assessment",
    "round_robin_rounds",
    "score_vector",
    "sd_of_estimates",
    "simulate_assessment",
    "simulate_ensemble",
    "skew_normal_cdf",
    "skew_normal_strengths",
    "study_estimates",
    "swiss_round",
    "true_strengths",
    "write_comparisons",
]
