"""Heavy-tail index estimation under random right censoring."""

__version__ = "0.1.0"

from .distributions import (
    CensoredSample,
    CensorModel,
    TailKind,
    TailModel,
    a2_diagnostic,
    expected_censor_rate,
    lambda_prob,
    sample,
    simulate_censored,
    survival,
)
from .estimators import (
    EstimateReport,
    TuningError,
    TuningParams,
    derive_tuning,
    empirical_survival,
    empirical_uncensored_survival,
    estimate_gamma_x,
    rho_hat,
    zeta_hat,
    zeta_hat_integral,
)
from .montecarlo import ConfigError, ExperimentConfig, SweepSummary, builtin_cases, run_case, run_sweep, summary_stats

__all__ = [
    "CensoredSample",
    "CensorModel",
    "TailKind",
    "TailModel",
    "a2_diagnostic",
    "expected_censor_rate",
    "lambda_prob",
    "sample",
    "simulate_censored",
    "survival",
    "EstimateReport",
    "TuningError",
    "TuningParams",
    "derive_tuning",
    "empirical_survival",
    "empirical_uncensored_survival",
    "estimate_gamma_x",
    "rho_hat",
    "zeta_hat",
    "zeta_hat_integral",
    "ConfigError",
    "ExperimentConfig",
    "SweepSummary",
    "builtin_cases",
    "run_case",
    "run_sweep",
    "summary_stats",
]
