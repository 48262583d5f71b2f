"""Auxiliary particle filter core.

Particle clouds carry log-domain weights.  Selection uses inverse-CDF
multinomial sampling so that each ancestor draw consumes exactly one
uniform variate.

Draw-order contract
-------------------
Every algorithm in this package consumes the generator stream in a fixed
documented order, which is what makes coupled runs reproducible:

* ``init_filter``: one call ``initial_sampler(n, rng)``.
* ``apf_step``: first a block of n uniforms (``rng.random(n)``) for the
  ancestor draws, then one call ``proposal_sampler(t, parents, rng)``.
* ``adaptive_apf_step`` with resampling triggered: identical to
  ``apf_step``.  Without resampling: no uniform block, only the
  proposal call ``proposal_sampler(t, particles, rng)``.

Model callables must consume the stream deterministically as a function
of their inputs for this contract to hold end to end.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .model import DegeneracyError, ModelSpec, check_log_weights

__all__ = [
    "ParticleCloud",
    "ResamplingPolicy",
    "init_filter",
    "ess",
    "categorical_resample",
    "apf_step",
    "adaptive_apf_step",
    "filter_estimate",
]


@dataclass(frozen=True)
class ParticleCloud:
    """One generation of a particle filter.

    Attributes
    ----------
    time : int
        Time index of the cloud (0 for the initial generation).
    particles : ndarray
        Particle states, first axis indexes particles.
    log_weights : ndarray
        Unnormalised log importance weights, shape (n,).
    ancestors : ndarray
        Index of each particle's parent in the previous cloud, in
        ``[0, n)``.  The initial cloud points at itself.
    """

    time: int
    particles: np.ndarray
    log_weights: np.ndarray
    ancestors: np.ndarray

    def __post_init__(self):
        n = len(self.particles)
        if n < 1:
            raise ValueError("a cloud needs at least one particle")
        if self.time < 0:
            raise ValueError("cloud time must be nonnegative")
        lw = check_log_weights(self.log_weights, n, "cloud log-weights")
        if not np.any(lw > -np.inf):
            raise DegeneracyError(
                f"weight degeneracy at time {self.time}: all weights zero"
            )
        anc = np.asarray(self.ancestors)
        if anc.shape != (n,) or not np.issubdtype(anc.dtype, np.integer):
            raise ValueError("ancestors must be an integer array of length n")
        if anc.min() < 0 or anc.max() >= n:
            raise ValueError("ancestor indices out of range")

    @property
    def n_particles(self) -> int:
        return len(self.particles)


def _normalised_weights(log_weights: np.ndarray) -> np.ndarray:
    """Exp-normalise log weights with a max shift; returns weights summing to 1."""
    m = np.max(log_weights)
    if not np.isfinite(m):
        raise DegeneracyError("weight degeneracy: all weights zero")
    w = np.exp(log_weights - m)
    return w / w.sum()


def ess(cloud: ParticleCloud) -> float:
    """Effective sample size of the current weights.

    Reciprocal of the sum of squared normalised weights; always in
    ``[1, n]``, equal to n exactly when the weights are uniform.
    """
    w = _normalised_weights(cloud.log_weights)
    return float(1.0 / np.sum(w * w))


@dataclass(frozen=True)
class ResamplingPolicy:
    """When to trigger selection ahead of a propagation step.

    Use the constructors :meth:`always`, :meth:`ess_threshold` or
    :meth:`fixed_schedule`.  The decision for the step from time t is a
    function of the time-t cloud only.
    """

    kind: str
    alpha: float = 1.0
    schedule: Optional[np.ndarray] = field(default=None)

    @classmethod
    def always(cls) -> "ResamplingPolicy":
        return cls(kind="always")

    @classmethod
    def ess_threshold(cls, alpha: float) -> "ResamplingPolicy":
        """Resample when ESS drops below ``alpha * n``."""
        if not 0.0 < alpha < 1.0:
            raise ValueError(f"ess threshold must be in (0, 1), got {alpha}")
        return cls(kind="ess", alpha=alpha)

    @classmethod
    def fixed_schedule(cls, bits: Sequence[int]) -> "ResamplingPolicy":
        """Resample at step t exactly when ``bits[t]`` is truthy."""
        return cls(kind="schedule", schedule=np.asarray(bits, dtype=bool))

    def should_resample(self, cloud: ParticleCloud) -> bool:
        if self.kind == "always":
            return True
        if self.kind == "ess":
            return ess(cloud) < self.alpha * cloud.n_particles
        if self.kind == "schedule":
            if cloud.time >= len(self.schedule):
                raise ValueError(
                    f"resampling schedule of length {len(self.schedule)} "
                    f"exhausted at time {cloud.time}"
                )
            return bool(self.schedule[cloud.time])
        raise ValueError(f"unknown resampling policy kind {self.kind!r}")


def categorical_resample(
    weights: np.ndarray, draws: int, rng: np.random.Generator
) -> np.ndarray:
    """Draw ancestor indices from a categorical distribution.

    Inverse-CDF multinomial sampling: consumes exactly ``draws`` uniforms
    and locates each in the cumulative weight array by binary search.

    Parameters
    ----------
    weights : ndarray
        Nonnegative, not all zero; need not be normalised.
    draws : int
        Number of indices to draw.
    rng : numpy.random.Generator
    """
    weights = np.asarray(weights, dtype=float)
    if np.any(weights < 0) or not np.all(np.isfinite(weights)):
        raise ValueError("weights must be finite and nonnegative")
    cum = np.cumsum(weights)
    total = cum[-1]
    if total <= 0:
        raise DegeneracyError("weight degeneracy: all selection weights zero")
    u = rng.random(draws)
    # side='right' skips zero-weight categories sitting at flat segments
    return np.searchsorted(cum, u * total, side="right")


def _select_ancestors(
    log_selection_weights: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    m = np.max(log_selection_weights)
    if not np.isfinite(m):
        raise DegeneracyError("weight degeneracy: all selection weights zero")
    w = np.exp(log_selection_weights - m)
    return categorical_resample(w, len(w), rng)


def init_filter(
    model: ModelSpec, n_particles: int, rng: np.random.Generator
) -> ParticleCloud:
    """Draw the initial cloud and attach initial weights."""
    if n_particles < 1:
        raise ValueError("n_particles must be positive")
    particles = model.initial_sampler(n_particles, rng)
    if len(particles) != n_particles:
        raise ValueError("initial sampler returned the wrong number of states")
    log_weights = model.eval_log_initial_weight(particles)
    if not np.any(log_weights > -np.inf):
        raise DegeneracyError("degenerate initialisation: all weights zero")
    return ParticleCloud(
        time=0,
        particles=particles,
        log_weights=log_weights,
        ancestors=np.arange(n_particles),
    )


def apf_step(
    model: ModelSpec, cloud: ParticleCloud, rng: np.random.Generator
) -> ParticleCloud:
    """One auxiliary particle filter step with multinomial selection.

    Ancestors are drawn proportionally to weight times adjustment, each
    child is proposed from its parent, and the new weight is the
    transition weight deflated by the parent's adjustment.
    """
    t = cloud.time
    log_adj = model.eval_log_adjustment(t, cloud.particles)
    ancestors = _select_ancestors(cloud.log_weights + log_adj, rng)
    parents = cloud.particles[ancestors]
    children = model.proposal_sampler(t, parents, rng)
    log_weights = model.eval_log_transition_weight(t, parents, children)
    if model.has_adjustment:
        log_weights = log_weights - log_adj[ancestors]
    return ParticleCloud(
        time=t + 1,
        particles=children,
        log_weights=log_weights,
        ancestors=ancestors,
    )


def adaptive_apf_step(
    model: ModelSpec,
    cloud: ParticleCloud,
    policy: ResamplingPolicy,
    rng: np.random.Generator,
) -> tuple[ParticleCloud, bool]:
    """One filter step under a resampling policy.

    Evaluates the policy on the current cloud.  If it triggers, the step
    is exactly :func:`apf_step`.  Otherwise ancestors stay the identity,
    every particle is propagated through the proposal, and the new
    transition weight multiplies onto the old one.

    Returns the new cloud and the resampling indicator.
    """
    resampled = policy.should_resample(cloud)
    if resampled:
        return apf_step(model, cloud, rng), True
    t = cloud.time
    children = model.proposal_sampler(t, cloud.particles, rng)
    log_weights = cloud.log_weights + model.eval_log_transition_weight(
        t, cloud.particles, children
    )
    new_cloud = ParticleCloud(
        time=t + 1,
        particles=children,
        log_weights=log_weights,
        ancestors=np.arange(cloud.n_particles),
    )
    return new_cloud, False


def filter_estimate(cloud: ParticleCloud, h: Callable[[np.ndarray], np.ndarray]) -> float:
    """Self-normalised estimate of the filter expectation of h.

    h maps a state array to an array of reals (vectorised over the
    particle axis).  Invariant under rescaling of the weights.
    """
    w = _normalised_weights(cloud.log_weights)
    values = np.asarray(h(cloud.particles), dtype=float)
    return float(np.dot(w, values))
