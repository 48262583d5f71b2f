"""Naive reference implementations and toy models shared across tests.

Everything here is written for clarity over speed: explicit Python
loops and list bookkeeping, no shared code with the package internals.
These are the oracles the fast implementations are checked against.
"""

from __future__ import annotations

import numpy as np

from alvar.model import ModelSpec


def naive_normalised_weights(log_weights):
    m = max(log_weights)
    w = [np.exp(lw - m) for lw in log_weights]
    total = sum(w)
    return [x / total for x in w]


def naive_ess(log_weights):
    w = naive_normalised_weights(log_weights)
    return 1.0 / sum(x * x for x in w)


def naive_grouped_variance(log_weights, h_values, labels):
    """Grouped centred square sum via explicit per-group lists."""
    n = len(log_weights)
    w = naive_normalised_weights(log_weights)
    mean = sum(wi * hi for wi, hi in zip(w, h_values))
    value = 0.0
    for label in sorted(set(labels)):
        group = [j for j in range(n) if labels[j] == label]
        s = sum(w[j] * (h_values[j] - mean) for j in group)
        value += s * s
    return n * value


def naive_genealogy(n_particles, ancestor_lists):
    """Full ancestor matrix: rows[m][i] = time-m ancestor of current particle i."""
    rows = [list(range(n_particles))]
    for ancestors in ancestor_lists:
        rows = [[row[a] for a in ancestors] for row in rows]
        rows.append(list(range(n_particles)))
    return rows


def naive_depletion_flags(estimates, previous_flags):
    """Depletion recursion with an explicit smaller-lag scan."""
    r = len(estimates) - 1
    flags = []
    for m in range(r + 1):
        if m == r:
            flags.append(False)
            continue
        lag = r - m
        older = flags[m - 1] if m > 0 else True
        beaten = any(estimates[lag] < estimates[smaller] for smaller in range(lag))
        flags.append(bool(previous_flags[m]) or (older and beaten))
    return flags


def toy_model(adjusted: bool = False, drift: float = 0.9, spread: float = 0.5) -> ModelSpec:
    """Small synthetic model with bounded weights for randomized runs.

    Scalar AR(1) proposal; transition and initial weights are bounded in
    (0, 1]; the optional adjustment multiplier is bounded in (0.5, 1.5).
    """

    def initial_sampler(n, rng):
        return rng.standard_normal(n)

    def log_initial_weight(x):
        return -0.1 * x**2

    def proposal_sampler(t, x, rng):
        return drift * x + spread * rng.standard_normal(len(x))

    def log_transition_weight(t, x, x_new):
        return -0.1 * x_new**2 - 0.05 * np.sin(t) * x_new

    log_adjustment = None
    if adjusted:
        def log_adjustment(t, x):
            return np.log(1.0 + 0.5 * np.tanh(x))

    return ModelSpec(
        initial_sampler=initial_sampler,
        log_initial_weight=log_initial_weight,
        proposal_sampler=proposal_sampler,
        log_transition_weight=log_transition_weight,
        log_adjustment=log_adjustment,
    )
