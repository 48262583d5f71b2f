"""Model interface for auxiliary particle filters.

A model bundles the five user-supplied callables that drive a filter:
an initial sampler, an initial weight, a proposal sampler, a transition
weight and an adjustment multiplier.  Weight functions are supplied and
evaluated in the log domain; a zero weight is represented by ``-inf``.
The adjustment multiplier must be strictly positive, so its log value
has to be finite.

All callables are vectorised over the particle axis: they receive an
array of states (first axis = particles) and return an array of the
same leading length.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np


class DegeneracyError(RuntimeError):
    """All weights in a cloud (or all selection weights) are zero."""


class WeightDomainError(ValueError):
    """A weight evaluation produced NaN, +inf, or a nonpositive adjustment."""


def check_log_weights(values: np.ndarray, n: int, what: str) -> np.ndarray:
    """Validate an array of log-domain weights.

    NaN and +inf are always rejected; -inf (a zero weight) is allowed.
    Raises WeightDomainError with the offending indices in the message.
    """
    values = np.asarray(values, dtype=float)
    if values.shape != (n,):
        raise WeightDomainError(
            f"{what}: expected shape ({n},), got {values.shape}"
        )
    bad = np.isnan(values) | (values == np.inf)
    if np.any(bad):
        idx = np.flatnonzero(bad)[:5]
        raise WeightDomainError(
            f"{what}: non-finite weight at indices {idx.tolist()}"
        )
    return values


def check_log_adjustment(values: np.ndarray, n: int, what: str) -> np.ndarray:
    """Validate log adjustment multipliers: must be finite (positive weights)."""
    values = np.asarray(values, dtype=float)
    if values.shape != (n,):
        raise WeightDomainError(
            f"{what}: expected shape ({n},), got {values.shape}"
        )
    if not np.all(np.isfinite(values)):
        idx = np.flatnonzero(~np.isfinite(values))[:5]
        raise WeightDomainError(
            f"{what}: adjustment must be positive and finite, bad indices "
            f"{idx.tolist()}"
        )
    return values


@dataclass(frozen=True)
class ModelSpec:
    """Callables defining one filtering problem.

    Parameters
    ----------
    initial_sampler : callable
        ``initial_sampler(n, rng) -> states`` draws n states from the
        initial proposal.
    log_initial_weight : callable
        ``log_initial_weight(states) -> array`` of log weights attached
        at time zero.
    proposal_sampler : callable
        ``proposal_sampler(t, states, rng) -> states`` draws one state
        per input state from the time-t proposal kernel.
    log_transition_weight : callable
        ``log_transition_weight(t, states, new_states) -> array`` of log
        weights for the move t -> t+1.
    log_adjustment : callable, optional
        ``log_adjustment(t, states) -> array`` of log adjustment
        multipliers used to tilt the selection step.  None means the
        multiplier is identically one (no tilting).
    """

    initial_sampler: Callable[[int, np.random.Generator], np.ndarray]
    log_initial_weight: Callable[[np.ndarray], np.ndarray]
    proposal_sampler: Callable[[int, np.ndarray, np.random.Generator], np.ndarray]
    log_transition_weight: Callable[[int, np.ndarray, np.ndarray], np.ndarray]
    log_adjustment: Optional[Callable[[int, np.ndarray], np.ndarray]] = None

    def eval_log_initial_weight(self, states: np.ndarray) -> np.ndarray:
        n = len(states)
        return check_log_weights(
            self.log_initial_weight(states), n, "initial weight"
        )

    def eval_log_transition_weight(
        self, t: int, states: np.ndarray, new_states: np.ndarray
    ) -> np.ndarray:
        n = len(states)
        return check_log_weights(
            self.log_transition_weight(t, states, new_states),
            n,
            f"transition weight at step {t}",
        )

    def eval_log_adjustment(self, t: int, states: np.ndarray) -> np.ndarray:
        n = len(states)
        if self.log_adjustment is None:
            return np.zeros(n)
        return check_log_adjustment(
            self.log_adjustment(t, states), n, f"adjustment at step {t}"
        )

    @property
    def has_adjustment(self) -> bool:
        return self.log_adjustment is not None


def model_from_linear(
    initial_sampler,
    initial_weight,
    proposal_sampler,
    transition_weight,
    adjustment=None,
) -> ModelSpec:
    """Build a ModelSpec from linear-domain weight functions.

    Convenience wrapper for models naturally written with ordinary
    (nonnegative) weights.  Zeros map to -inf log weights.
    """

    def log_w0(states):
        with np.errstate(divide="ignore"):
            return np.log(np.asarray(initial_weight(states), dtype=float))

    def log_wt(t, states, new_states):
        with np.errstate(divide="ignore"):
            return np.log(
                np.asarray(transition_weight(t, states, new_states), dtype=float)
            )

    log_adj = None
    if adjustment is not None:
        def log_adj(t, states):
            return np.log(np.asarray(adjustment(t, states), dtype=float))

    return ModelSpec(
        initial_sampler=initial_sampler,
        log_initial_weight=log_w0,
        proposal_sampler=proposal_sampler,
        log_transition_weight=log_wt,
        log_adjustment=log_adj,
    )
