"""Experiment configuration.

A single JSON file declares one experiment; the command line can
override the seed, particle count, step count and output directory.
Keys and defaults::

    model              "sv" or "lg"                      (default "sv")
    params             model parameter overrides, e.g. {"a": 0.9}
    particles          cloud size n                      (default 1000)
    steps              final time index                  (default 100)
    replicates         replicate count for studies       (default 100)
    reference_replicates
                       replicate count for the brute-force reference of
                       the mse study; null reuses "replicates"
    estimators         {"alvar": bool, "cle": bool, "fixed_lags": [int]}
    resampling         "always", {"ess": alpha} or {"schedule": [bits]}
    test_function      "id" or "square"                  (default "id")
    seed               master seed                       (default 0)
    out_dir            output directory                  (default "out")
    checkpoint_stride  rows are emitted every this many steps (default 50)
    observations       path to an observation CSV; null simulates them
                       from the master seed
    lag_cap            hard bound on the adaptive lag; null = unbounded
    mse_lag_max        largest lag tabulated by the mse study (default 50)
    particle_grid      cloud sizes for the lag scaling study
    jobs               worker processes for replicate studies (default 1)

Observation simulation and replicate runs use separate deterministic
substreams of the master seed, so results do not depend on the number
of workers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Optional

__all__ = ["ConfigError", "ExperimentConfig"]


class ConfigError(ValueError):
    """A configuration file or override is invalid."""


# names accepted by the "test_function" key; the registry lives in studies
VALID_TEST_FUNCTIONS = ("id", "square", "one")


_ALLOWED_KEYS = {
    "model",
    "params",
    "particles",
    "steps",
    "replicates",
    "reference_replicates",
    "estimators",
    "resampling",
    "test_function",
    "seed",
    "out_dir",
    "checkpoint_stride",
    "observations",
    "lag_cap",
    "mse_lag_max",
    "particle_grid",
    "jobs",
}

_ALLOWED_ESTIMATOR_KEYS = {"alvar", "cle", "fixed_lags"}


@dataclass(frozen=True)
class ExperimentConfig:
    model: str = "sv"
    params: dict = field(default_factory=dict)
    particles: int = 1000
    steps: int = 100
    replicates: int = 100
    reference_replicates: Optional[int] = None
    alvar: bool = True
    cle: bool = True
    fixed_lags: tuple[int, ...] = ()
    resampling: object = "always"
    test_function: str = "id"
    seed: int = 0
    out_dir: str = "out"
    checkpoint_stride: int = 50
    observations: Optional[str] = None
    lag_cap: Optional[int] = None
    mse_lag_max: int = 50
    particle_grid: tuple[int, ...] = (100, 1000, 10000)
    jobs: int = 1

    def __post_init__(self):
        if self.model not in ("sv", "lg"):
            raise ConfigError(f"unknown model {self.model!r}, expected 'sv' or 'lg'")
        for name in ("particles", "checkpoint_stride", "jobs"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ConfigError(f"{name} must be a positive integer, got {value!r}")
        if not isinstance(self.steps, int) or self.steps < 0:
            raise ConfigError(f"steps must be a nonnegative integer, got {self.steps!r}")
        if self.replicates < 0:
            raise ConfigError("replicates must be nonnegative")
        if self.test_function not in VALID_TEST_FUNCTIONS:
            raise ConfigError(f"unknown test function {self.test_function!r}")
        if any(l < 0 for l in self.fixed_lags):
            raise ConfigError("fixed lags must be nonnegative")
        if self.lag_cap is not None and self.lag_cap < 0:
            raise ConfigError("lag_cap must be nonnegative")
        if self.mse_lag_max < 0:
            raise ConfigError("mse_lag_max must be nonnegative")
        if not self.particle_grid or any(n < 1 for n in self.particle_grid):
            raise ConfigError("particle_grid needs positive cloud sizes")

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        unknown = set(raw) - _ALLOWED_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        kwargs = dict(raw)
        estimators = kwargs.pop("estimators", None)
        if estimators is not None:
            bad = set(estimators) - _ALLOWED_ESTIMATOR_KEYS
            if bad:
                raise ConfigError(f"unknown estimator keys: {sorted(bad)}")
            kwargs["alvar"] = bool(estimators.get("alvar", True))
            kwargs["cle"] = bool(estimators.get("cle", True))
            kwargs["fixed_lags"] = tuple(estimators.get("fixed_lags", ()))
        if "particle_grid" in kwargs:
            kwargs["particle_grid"] = tuple(kwargs["particle_grid"])
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_file(cls, path, overrides: Optional[dict] = None) -> "ExperimentConfig":
        try:
            with open(path, "r", encoding="utf-8") as f:
                raw = json.load(f)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed config file {path}: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError(f"config file {path} must hold a JSON object")
        config = cls.from_dict(raw)
        if overrides:
            config = replace(config, **overrides)
        return config

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "params": dict(self.params),
            "particles": self.particles,
            "steps": self.steps,
            "replicates": self.replicates,
            "reference_replicates": self.reference_replicates,
            "estimators": {
                "alvar": self.alvar,
                "cle": self.cle,
                "fixed_lags": list(self.fixed_lags),
            },
            "resampling": self.resampling,
            "test_function": self.test_function,
            "seed": self.seed,
            "out_dir": self.out_dir,
            "checkpoint_stride": self.checkpoint_stride,
            "observations": self.observations,
            "lag_cap": self.lag_cap,
            "mse_lag_max": self.mse_lag_max,
            "particle_grid": list(self.particle_grid),
            "jobs": self.jobs,
        }
