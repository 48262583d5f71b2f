"""Online asymptotic-variance estimators for particle filters.

All estimators share one computation: group the particles by their
ancestor index at some reference generation, sum the centred weighted
test-function values within each group, and return n times the sum of
squared group sums.  They differ only in which generation provides the
grouping labels:

* fixed lag: the generation a fixed number of selection steps back,
* full depth: generation zero (founding ancestors),
* adaptive lag: the lag is re-chosen each step by maximising the
  estimate over all candidate lags up to the previous lag plus one.

Under a resampling policy the reference count advances only on steps
that actually resample; steps without selection keep the grouping and
the lag frozen and just recompute the value on the current weights.

When every particle shares a single ancestor at the grouping generation
the centred group sum collapses and the estimate is exactly zero; the
code returns literal 0.0 in that case rather than accumulated noise.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .genealogy import EnochWindow, WindowError
from .smc import ParticleCloud, _normalised_weights

__all__ = [
    "VarianceEstimate",
    "grouped_variance",
    "lag_estimate",
    "lag_values",
    "cle",
    "AlvarEstimator",
    "FixedLagEstimator",
    "depletion_flags",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VarianceEstimate:
    """One variance estimate and the genealogy context it came from.

    Attributes
    ----------
    time : int
        Time index of the cloud the estimate was computed on.
    lag : int
        Lag the estimator used (for the full-depth estimator this is
        the full reference count).
    value : float
        The estimate itself; nonnegative.
    reference_generation : int
        Generation whose ancestor row provided the grouping.
    distinct_ancestors : int
        Number of distinct groups at that generation.
    """

    time: int
    lag: int
    value: float
    reference_generation: int
    distinct_ancestors: int


def _centred_contributions(
    cloud: ParticleCloud, h: Callable[[np.ndarray], np.ndarray]
) -> np.ndarray:
    """Per-particle normalised-weight times centred h values."""
    w = _normalised_weights(cloud.log_weights)
    values = np.asarray(h(cloud.particles), dtype=float)
    mean = np.dot(w, values)
    return w * (values - mean)


def _value_from_labels(
    labels: np.ndarray, contributions: np.ndarray, n: int
) -> tuple[float, int]:
    """Grouped square-sum value and the distinct group count."""
    counts = np.bincount(labels, minlength=n)
    distinct = int(np.count_nonzero(counts))
    if distinct == 1:
        return 0.0, 1
    sums = np.bincount(labels, weights=contributions, minlength=n)
    return float(n * np.dot(sums, sums)), distinct


def grouped_variance(
    cloud: ParticleCloud,
    labels: np.ndarray,
    h: Callable[[np.ndarray], np.ndarray],
) -> tuple[float, int]:
    """Variance estimate from explicit grouping labels.

    Returns the estimate and the number of distinct groups.  ``labels``
    assigns each particle an ancestor index in ``[0, n)``.
    """
    n = cloud.n_particles
    labels = np.asarray(labels)
    if labels.shape != (n,):
        raise ValueError("labels must have one entry per particle")
    c = _centred_contributions(cloud, h)
    return _value_from_labels(labels, c, n)


def lag_estimate(
    cloud: ParticleCloud,
    window: EnochWindow,
    lag: int,
    h: Callable[[np.ndarray], np.ndarray],
) -> VarianceEstimate:
    """Fixed-lag variance estimate from a genealogy window.

    Groups by the ancestor row ``lag`` generations behind the window's
    newest generation, clamped at generation zero.  Raises WindowError
    if that generation has already been dropped from the window.
    """
    if lag < 0:
        raise ValueError("lag must be nonnegative")
    generation = max(window.newest_generation - lag, 0)
    labels = window.row(generation)
    value, distinct = grouped_variance(cloud, labels, h)
    return VarianceEstimate(
        time=cloud.time,
        lag=lag,
        value=value,
        reference_generation=generation,
        distinct_ancestors=distinct,
    )


def lag_values(
    cloud: ParticleCloud,
    window: EnochWindow,
    max_lag: int,
    h: Callable[[np.ndarray], np.ndarray],
) -> np.ndarray:
    """Estimate values for every lag 0..max_lag in one centring pass.

    All lags share the normalisation and centring of the current cloud,
    so entry ``lag`` equals ``lag_estimate(cloud, window, lag, h).value``
    exactly.  Grouping generations clamp at zero.
    """
    if max_lag < 0:
        raise ValueError("max_lag must be nonnegative")
    n = cloud.n_particles
    c = _centred_contributions(cloud, h)
    ref = window.newest_generation
    values = np.empty(max_lag + 1)
    for lag in range(max_lag + 1):
        gen = max(ref - lag, 0)
        values[lag], _ = _value_from_labels(window.row(gen), c, n)
    return values


def cle(
    cloud: ParticleCloud,
    window: EnochWindow,
    h: Callable[[np.ndarray], np.ndarray],
) -> VarianceEstimate:
    """Full-depth variance estimate, grouping by founding ancestors.

    Requires a window that still retains generation zero.
    """
    if window.oldest_generation != 0:
        raise WindowError(
            "full-depth estimate needs generation 0, window starts at "
            f"{window.oldest_generation}"
        )
    return lag_estimate(cloud, window, window.newest_generation, h)


class _WindowedEstimator:
    """Shared machinery: a genealogy window advanced on resampling steps."""

    def __init__(self, n_particles: int):
        self.n_particles = n_particles
        self.window = EnochWindow(n_particles)
        self.reference_count = 0

    def initial_estimate(
        self, cloud: ParticleCloud, h: Callable[[np.ndarray], np.ndarray]
    ) -> VarianceEstimate:
        """Estimate on the initial cloud, before any selection step."""
        return lag_estimate(cloud, self.window, 0, h)


class FixedLagEstimator(_WindowedEstimator):
    """Variance estimation at one fixed lag.

    Retains ``lag + 1`` genealogy rows.  ``step`` is the plain
    always-resampling update; ``adaptive_step`` also accepts steps that
    skipped selection, on which the grouping is frozen and only the
    value is recomputed.
    """

    def __init__(self, n_particles: int, lag: int):
        if lag < 0:
            raise ValueError("lag must be nonnegative")
        super().__init__(n_particles)
        self.lag = lag

    def step(
        self,
        cloud: ParticleCloud,
        ancestors: np.ndarray,
        h: Callable[[np.ndarray], np.ndarray],
    ) -> VarianceEstimate:
        return self.adaptive_step(cloud, ancestors, True, h)

    def adaptive_step(
        self,
        cloud: ParticleCloud,
        ancestors: np.ndarray,
        resampled: bool,
        h: Callable[[np.ndarray], np.ndarray],
    ) -> VarianceEstimate:
        if resampled:
            self.window.advance(ancestors, max_rows=self.lag + 1)
            self.reference_count += 1
        return lag_estimate(cloud, self.window, self.lag, h)


class AlvarEstimator(_WindowedEstimator):
    """Adaptive-lag variance estimation.

    After each selection step the window is advanced, every candidate
    lag from zero up to the previous lag plus one is evaluated, and the
    new lag is the one with the largest estimate, ties resolved towards
    the larger lag.  The window is then trimmed to ``lag + 1`` rows, so
    the retained depth tracks the chosen lag.

    Parameters
    ----------
    n_particles : int
    lag_cap : int, optional
        Hard upper bound on the candidate lag.  None (default) leaves
        the lag unbounded; hitting the cap is logged.
    """

    def __init__(self, n_particles: int, lag_cap: Optional[int] = None):
        super().__init__(n_particles)
        if lag_cap is not None and lag_cap < 0:
            raise ValueError("lag_cap must be nonnegative")
        self.lag = 0
        self.lag_cap = lag_cap

    def step(
        self,
        cloud: ParticleCloud,
        ancestors: np.ndarray,
        h: Callable[[np.ndarray], np.ndarray],
    ) -> VarianceEstimate:
        """Always-resampling update: advance, rescan, re-choose the lag."""
        return self._advance_and_choose(cloud, ancestors, h)

    def adaptive_step(
        self,
        cloud: ParticleCloud,
        ancestors: np.ndarray,
        resampled: bool,
        h: Callable[[np.ndarray], np.ndarray],
    ) -> VarianceEstimate:
        """Update under a resampling policy.

        On steps that resampled this matches :meth:`step`.  On steps
        that did not, the lag and the window stay frozen and the
        estimate is recomputed on the current weights.
        """
        if resampled:
            return self._advance_and_choose(cloud, ancestors, h)
        return lag_estimate(cloud, self.window, self.lag, h)

    def _advance_and_choose(
        self,
        cloud: ParticleCloud,
        ancestors: np.ndarray,
        h: Callable[[np.ndarray], np.ndarray],
    ) -> VarianceEstimate:
        hi = self.lag + 1
        if self.lag_cap is not None and hi > self.lag_cap:
            hi = self.lag_cap
            logger.info(
                "lag cap %d active at time %d", self.lag_cap, cloud.time
            )
        self.window.advance(ancestors, max_rows=hi + 1)
        self.reference_count += 1
        values = lag_values(cloud, self.window, hi, h)
        # exact float comparison; ties go to the largest lag
        best = int(np.flatnonzero(values == values.max())[-1])
        self.lag = best
        self.window.trim(best + 1)
        generation = max(self.window.newest_generation - best, 0)
        return VarianceEstimate(
            time=cloud.time,
            lag=best,
            value=float(values[best]),
            reference_generation=generation,
            distinct_ancestors=self.window.distinct_count(generation),
        )


def depletion_flags(
    estimates: np.ndarray, previous_flags: np.ndarray
) -> np.ndarray:
    """One step of the ancestor-depletion recursion.

    ``estimates[lag]`` holds the lag-``lag`` variance estimate at the
    current reference count r, for every lag in ``[0, r]``.
    ``previous_flags[m]`` holds the depletion flag of generation m at
    reference count r - 1 (length r).  Returns the flags at reference
    count r (length r + 1, indexed by generation).

    Generation m is depleted when it was depleted one step earlier, or
    when the next older generation is depleted and some strictly
    smaller lag beats lag r - m.  The newest generation is never
    depleted; the virtual generation -1 always is.  Flags are monotone:
    a depleted generation never has a non-depleted older one.
    """
    estimates = np.asarray(estimates, dtype=float)
    previous_flags = np.asarray(previous_flags, dtype=bool)
    r = len(estimates) - 1
    if len(previous_flags) != r:
        raise ValueError(
            f"expected {r} previous flags, got {len(previous_flags)}"
        )
    # prefix_max[lag] = max over strictly smaller lags, -inf for lag 0
    prefix_max = np.concatenate(
        ([-np.inf], np.maximum.accumulate(estimates[:-1]))
    )
    flags = np.empty(r + 1, dtype=bool)
    older_depleted = True
    for m in range(r + 1):
        if m == r:
            flags[m] = False
        else:
            lag = r - m
            flags[m] = previous_flags[m] or (
                older_depleted and estimates[lag] < prefix_max[lag]
            )
        older_depleted = flags[m]
    return flags
