"""Extended-state reformulation of the auxiliary particle filter.

The auxiliary filter on states x is a plain bootstrap filter on pairs
(x_prev, x_cur): selection proportional to the pair weights, mutation
copies the current coordinate into the previous slot and proposes a new
current state, and the new weight is a potential evaluated on the pair.
The potential folds the adjustment multiplier into the weight, tilting
by the multiplier at the new state and untilting by the parent's.

This reformulation is the correctness oracle for the filter core: with
a shared generator stream, both algorithms consume one block of n
selection uniforms followed by one proposal call per step (see the
draw-order contract in :mod:`alvar.smc`), so ancestor indices coincide
exactly and weights coincide up to floating-point rounding, with the
pair weight matching the auxiliary weight times the adjustment.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import DegeneracyError, ModelSpec, check_log_weights
from .smc import _select_ancestors

__all__ = ["PairCloud", "ExtendedModel", "extend", "bootstrap_init", "bootstrap_step"]


@dataclass(frozen=True)
class PairCloud:
    """Bootstrap filter generation on the pair state space.

    At time zero the state is a single coordinate; both slots then hold
    the same array.
    """

    time: int
    prev: np.ndarray
    cur: np.ndarray
    log_weights: np.ndarray
    ancestors: np.ndarray

    def __post_init__(self):
        n = len(self.cur)
        if len(self.prev) != n or len(self.log_weights) != n:
            raise ValueError("pair cloud arrays must share their length")
        lw = check_log_weights(self.log_weights, n, "pair cloud log-weights")
        if not np.any(lw > -np.inf):
            raise DegeneracyError(
                f"weight degeneracy at time {self.time}: all pair weights zero"
            )

    @property
    def n_particles(self) -> int:
        return len(self.cur)


@dataclass(frozen=True)
class ExtendedModel:
    """Pair-state potentials derived from a ModelSpec."""

    base: ModelSpec

    def log_initial_potential(self, x0: np.ndarray) -> np.ndarray:
        return self.base.eval_log_adjustment(0, x0) + self.base.eval_log_initial_weight(x0)

    def log_potential(self, t: int, prev: np.ndarray, cur: np.ndarray) -> np.ndarray:
        """Pair potential at time t >= 1 for the move made at time t - 1."""
        if t < 1:
            raise ValueError("pair potentials start at time 1")
        value = self.base.eval_log_transition_weight(t - 1, prev, cur)
        if self.base.has_adjustment:
            value = (
                value
                + self.base.eval_log_adjustment(t, cur)
                - self.base.eval_log_adjustment(t - 1, prev)
            )
        return value


def extend(model: ModelSpec) -> ExtendedModel:
    """Wrap a model with its pair-state potentials."""
    return ExtendedModel(base=model)


def bootstrap_init(
    ext: ExtendedModel, n_particles: int, rng: np.random.Generator
) -> PairCloud:
    """Initial pair cloud; consumes the stream exactly like init_filter."""
    x0 = ext.base.initial_sampler(n_particles, rng)
    log_weights = ext.log_initial_potential(x0)
    if not np.any(log_weights > -np.inf):
        raise DegeneracyError("degenerate initialisation: all pair weights zero")
    return PairCloud(
        time=0,
        prev=x0,
        cur=x0,
        log_weights=log_weights,
        ancestors=np.arange(n_particles),
    )


def bootstrap_step(
    ext: ExtendedModel, cloud: PairCloud, rng: np.random.Generator
) -> PairCloud:
    """One bootstrap step on the pair space.

    Selection proportional to the pair weights (one uniform per draw),
    then the mutation: previous slot becomes the parent's current state,
    current slot is proposed from it.
    """
    t = cloud.time
    ancestors = _select_ancestors(cloud.log_weights, rng)
    prev = cloud.cur[ancestors]
    cur = ext.base.proposal_sampler(t, prev, rng)
    log_weights = ext.log_potential(t + 1, prev, cur)
    return PairCloud(
        time=t + 1,
        prev=prev,
        cur=cur,
        log_weights=log_weights,
        ancestors=ancestors,
    )
