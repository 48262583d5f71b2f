"""Benchmark state-space models and their exact references.

Two scalar models are provided:

* a stochastic volatility model: AR(1) latent log-volatility, emission
  y = b * exp(x / 2) * noise,
* a linear Gaussian model: AR(1) latent state, emission y = b x + noise,
  whose filter distributions are available exactly through the Kalman
  recursion.

Both start from the stationary law of the latent chain, which requires
|a| < 1.  Simulators draw, in order, the initial state, the block of
transition noises, and the block of emission noises.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ModelSpec

__all__ = [
    "SvParams",
    "LgParams",
    "KalmanTrace",
    "simulate_ssm",
    "bootstrap_model",
    "kalman_filter",
    "save_observations",
    "load_observations",
]

_LOG_2PI = float(np.log(2.0 * np.pi))


@dataclass(frozen=True)
class SvParams:
    """Stochastic volatility model parameters.

    x' = a x + sigma u,  y = b exp(x / 2) v,  u, v iid standard normal.
    """

    a: float = 0.975
    b: float = 0.641
    sigma: float = 0.165

    def __post_init__(self):
        if not abs(self.a) < 1:
            raise ValueError(f"|a| must be < 1 for a stationary chain, got {self.a}")
        if self.b <= 0:
            raise ValueError("b must be positive")
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")

    @property
    def stationary_var(self) -> float:
        return self.sigma**2 / (1.0 - self.a**2)


@dataclass(frozen=True)
class LgParams:
    """Linear Gaussian model parameters.

    x' = a x + sigma_u u,  y = b x + sigma_v v,  u, v iid standard normal.
    """

    a: float = 0.98
    b: float = 1.0
    sigma_u: float = 0.2
    sigma_v: float = 1.0

    def __post_init__(self):
        if self.sigma_v <= 0:
            raise ValueError("sigma_v must be positive")
        if self.sigma_u < 0:
            raise ValueError("sigma_u must be nonnegative")

    @property
    def stationary_var(self) -> float:
        if not abs(self.a) < 1:
            raise ValueError(
                f"|a| must be < 1 for the stationary initial law, got {self.a}"
            )
        return self.sigma_u**2 / (1.0 - self.a**2)


def simulate_ssm(params, n_steps: int, rng: np.random.Generator):
    """Simulate states and observations for times 0..n_steps inclusive.

    Returns (states, observations), both of length n_steps + 1.  The
    initial state is drawn from the stationary law of the AR(1) chain.
    """
    if n_steps < 0:
        raise ValueError("n_steps must be nonnegative")
    if isinstance(params, SvParams):
        a, trans_sd = params.a, params.sigma
        emit = lambda x, v: params.b * np.exp(x / 2.0) * v
    elif isinstance(params, LgParams):
        a, trans_sd = params.a, params.sigma_u
        emit = lambda x, v: params.b * x + params.sigma_v * v
    else:
        raise TypeError(f"unknown model parameters {type(params).__name__}")
    sd0 = float(np.sqrt(params.stationary_var))
    x0 = sd0 * rng.standard_normal()
    u = rng.standard_normal(n_steps)
    v = rng.standard_normal(n_steps + 1)
    states = np.empty(n_steps + 1)
    states[0] = x0
    for t in range(n_steps):
        states[t + 1] = a * states[t] + trans_sd * u[t]
    return states, emit(states, v)


def _sv_log_emission(params: SvParams, y: float):
    # log N(y; 0, b^2 e^x) as a function of the state array x
    b2 = params.b**2
    ysq = float(y) ** 2

    def log_g(x):
        return -0.5 * (_LOG_2PI + np.log(b2) + x) - ysq * np.exp(-x) / (2.0 * b2)

    return log_g


def _lg_log_emission(params: LgParams, y: float):
    # log N(y; b x, sigma_v^2) as a function of the state array x
    var = params.sigma_v**2
    log_norm = -0.5 * (_LOG_2PI + np.log(var))

    def log_g(x):
        return log_norm - (float(y) - params.b * x) ** 2 / (2.0 * var)

    return log_g


def bootstrap_model(params, observations: np.ndarray) -> ModelSpec:
    """Bootstrap filter model for a given observation record.

    The proposal is the prior transition and the adjustment multiplier
    is identically one, so the step weight is the emission density at
    the next observation.  The observation record must cover every time
    the filter visits; running past its end raises IndexError with the
    missing time in the message.
    """
    obs = np.asarray(observations, dtype=float)
    if obs.ndim != 1 or len(obs) == 0:
        raise ValueError("observations must be a nonempty 1-d array")
    if isinstance(params, SvParams):
        make_log_g = _sv_log_emission
        a, trans_sd = params.a, params.sigma
    elif isinstance(params, LgParams):
        make_log_g = _lg_log_emission
        a, trans_sd = params.a, params.sigma_u
    else:
        raise TypeError(f"unknown model parameters {type(params).__name__}")
    sd0 = float(np.sqrt(params.stationary_var))

    def obs_at(t):
        if t >= len(obs):
            raise IndexError(
                f"observation record of length {len(obs)} has no entry "
                f"for time {t}"
            )
        return obs[t]

    def initial_sampler(n, rng):
        return sd0 * rng.standard_normal(n)

    def log_initial_weight(x):
        return make_log_g(params, obs_at(0))(x)

    def proposal_sampler(t, x, rng):
        return a * x + trans_sd * rng.standard_normal(len(x))

    def log_transition_weight(t, x, x_new):
        return make_log_g(params, obs_at(t + 1))(x_new)

    return ModelSpec(
        initial_sampler=initial_sampler,
        log_initial_weight=log_initial_weight,
        proposal_sampler=proposal_sampler,
        log_transition_weight=log_transition_weight,
        log_adjustment=None,
    )


@dataclass(frozen=True)
class KalmanTrace:
    """Exact filter moments per time: posterior means and variances."""

    means: np.ndarray
    variances: np.ndarray


def kalman_filter(
    params: LgParams,
    observations: np.ndarray,
    prior_mean: float = 0.0,
    prior_var: float | None = None,
) -> KalmanTrace:
    """Exact filtering for the linear Gaussian model.

    Runs the scalar Kalman recursion over the whole observation record
    and returns the posterior mean and variance at each time.  The
    default prior is the stationary law of the latent chain.
    """
    obs = np.asarray(observations, dtype=float)
    if obs.ndim != 1 or len(obs) == 0:
        raise ValueError("observations must be a nonempty 1-d array")
    if prior_var is None:
        prior_var = params.stationary_var
    if prior_var <= 0:
        raise ValueError("prior variance must be positive")
    a, b = params.a, params.b
    q, r = params.sigma_u**2, params.sigma_v**2
    means = np.empty(len(obs))
    variances = np.empty(len(obs))
    m_pred, v_pred = float(prior_mean), float(prior_var)
    for t, y in enumerate(obs):
        gain = v_pred * b / (b**2 * v_pred + r)
        m = m_pred + gain * (y - b * m_pred)
        v = (1.0 - gain * b) * v_pred
        means[t] = m
        variances[t] = v
        m_pred = a * m
        v_pred = a**2 * v + q
    return KalmanTrace(means=means, variances=variances)


def save_observations(path, observations: np.ndarray) -> None:
    """Write a one-column observation CSV with header ``y``.

    Values are written with shortest round-trip formatting, so loading
    recovers the exact doubles.
    """
    obs = np.asarray(observations, dtype=float)
    with open(path, "w", encoding="utf-8") as f:
        f.write("y\n")
        for y in obs:
            f.write(repr(float(y)) + "\n")


def load_observations(path) -> np.ndarray:
    """Read an observation CSV written by :func:`save_observations`."""
    with open(path, "r", encoding="utf-8") as f:
        header = f.readline().strip()
        if header != "y":
            raise ValueError(
                f"malformed observation file {path}: expected header 'y', "
                f"got {header!r}"
            )
        values = [float(line) for line in f if line.strip()]
    if not values:
        raise ValueError(f"observation file {path} contains no data")
    return np.asarray(values)
