"""Auxiliary particle filters with online asymptotic-variance estimation.

The package provides the filter core (:mod:`alvar.smc`), sliding-window
genealogy tracking (:mod:`alvar.genealogy`), fixed-lag, full-depth and
adaptive-lag variance estimators (:mod:`alvar.variance`), benchmark
state-space models with exact references (:mod:`alvar.models`), an
extended-state oracle for the filter core (:mod:`alvar.auxfk`), and an
experiment harness with a CLI (:mod:`alvar.harness`).
"""

from .genealogy import EnochWindow, WindowError
from .model import DegeneracyError, ModelSpec, WeightDomainError, model_from_linear
from .models import (
    KalmanTrace,
    LgParams,
    SvParams,
    bootstrap_model,
    kalman_filter,
    load_observations,
    save_observations,
    simulate_ssm,
)
from .smc import (
    ParticleCloud,
    ResamplingPolicy,
    adaptive_apf_step,
    apf_step,
    categorical_resample,
    ess,
    filter_estimate,
    init_filter,
)
from .variance import (
    AlvarEstimator,
    FixedLagEstimator,
    VarianceEstimate,
    cle,
    depletion_flags,
    grouped_variance,
    lag_estimate,
    lag_values,
)

__version__ = "0.1.0"

__all__ = [
    "AlvarEstimator",
    "DegeneracyError",
    "EnochWindow",
    "FixedLagEstimator",
    "KalmanTrace",
    "LgParams",
    "ModelSpec",
    "ParticleCloud",
    "ResamplingPolicy",
    "SvParams",
    "VarianceEstimate",
    "WeightDomainError",
    "WindowError",
    "adaptive_apf_step",
    "apf_step",
    "bootstrap_model",
    "categorical_resample",
    "cle",
    "depletion_flags",
    "ess",
    "filter_estimate",
    "grouped_variance",
    "init_filter",
    "kalman_filter",
    "lag_estimate",
    "lag_values",
    "load_observations",
    "model_from_linear",
    "save_observations",
    "simulate_ssm",
]
