"""Experiment harness: configs, studies, and the command line front end."""

from .config import ConfigError, ExperimentConfig
from .studies import (
    brute_force_variance,
    confint_study,
    lag_scaling_study,
    mse_study,
    run_comparison,
)

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "brute_force_variance",
    "confint_study",
    "lag_scaling_study",
    "mse_study",
    "run_comparison",
]
