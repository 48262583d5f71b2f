"""Experiment drivers: estimator comparisons and replicate studies.

Seed discipline
---------------
Every random quantity comes from a named substream of the master seed,
built as ``SeedSequence(seed, spawn_key=key)``:

* ``(0,)``        observation simulation,
* ``(1, j)``      replicate j of a replicate study (brute force,
                  confidence intervals, the mse reference),
* ``(2, r)``      standalone filter runs: comparison traces, the runs
                  of the lag scaling study, mse study replicates.

Replicates therefore agree between serial and process-pool execution,
and rerunning any study with the same config and seed reproduces its
output byte for byte.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..genealogy import EnochWindow
from ..model import ModelSpec
from ..models import (
    LgParams,
    SvParams,
    bootstrap_model,
    kalman_filter,
    load_observations,
    simulate_ssm,
)
from ..smc import (
    ParticleCloud,
    ResamplingPolicy,
    adaptive_apf_step,
    ess,
    filter_estimate,
    init_filter,
)
from ..variance import (
    AlvarEstimator,
    FixedLagEstimator,
    grouped_variance,
    lag_values,
)
from .config import VALID_TEST_FUNCTIONS, ConfigError, ExperimentConfig

__all__ = [
    "TEST_FUNCTIONS",
    "NORMAL_QUANTILE_975",
    "build_params",
    "build_policy",
    "get_observations",
    "checkpoint_times",
    "run_trace",
    "brute_force_variance",
    "run_comparison",
    "mse_study",
    "lag_scaling_study",
    "confint_study",
]

# two-sided 95% standard normal quantile
NORMAL_QUANTILE_975 = 1.959964

TEST_FUNCTIONS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "id": lambda x: x,
    "square": np.square,
    "one": lambda x: np.ones(len(x)),
}

assert set(TEST_FUNCTIONS) == set(VALID_TEST_FUNCTIONS)


def child_rng(seed: int, *key: int) -> np.random.Generator:
    """Generator for one named substream of the master seed."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


def build_params(config: ExperimentConfig):
    cls = SvParams if config.model == "sv" else LgParams
    try:
        return cls(**config.params)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad {config.model} parameters: {exc}") from exc


def build_policy(spec) -> ResamplingPolicy:
    """Resampling policy from its config value."""
    if spec == "always":
        return ResamplingPolicy.always()
    if isinstance(spec, dict) and set(spec) == {"ess"}:
        return ResamplingPolicy.ess_threshold(float(spec["ess"]))
    if isinstance(spec, dict) and set(spec) == {"schedule"}:
        return ResamplingPolicy.fixed_schedule(spec["schedule"])
    raise ConfigError(f"unknown resampling policy {spec!r}")


def get_observations(config: ExperimentConfig) -> np.ndarray:
    """Load or simulate the observation record for a config.

    The record must cover times 0..steps.  Simulated observations come
    from substream (0,) of the master seed.
    """
    if config.observations is not None:
        obs = load_observations(config.observations)
        if len(obs) < config.steps + 1:
            raise ConfigError(
                f"observation file {config.observations} has {len(obs)} rows, "
                f"need {config.steps + 1}"
            )
        return obs[: config.steps + 1]
    params = build_params(config)
    _, obs = simulate_ssm(params, config.steps, child_rng(config.seed, 0))
    return obs


def checkpoint_times(n_steps: int, stride: int) -> list[int]:
    """Times at which rows are emitted: multiples of the stride plus the end."""
    times = [t for t in range(0, n_steps + 1) if t % stride == 0]
    if times[-1] != n_steps:
        times.append(n_steps)
    return times


@dataclass
class TraceResult:
    """Everything one instrumented filter run recorded at its checkpoints."""

    times: list[int]
    estimates: list[float]
    ess: list[float]
    resampled: list[int]
    alvar_values: list[float] = field(default_factory=list)
    alvar_lags: list[int] = field(default_factory=list)
    cle_values: list[float] = field(default_factory=list)
    cle_distinct: list[int] = field(default_factory=list)
    fixed_values: dict[int, list[float]] = field(default_factory=dict)
    lag_trace: Optional[list[int]] = None
    lag_table: Optional[list[np.ndarray]] = None
    reference_counts: list[int] = field(default_factory=list)


def run_trace(
    model: ModelSpec,
    n_particles: int,
    n_steps: int,
    policy: ResamplingPolicy,
    h: Callable[[np.ndarray], np.ndarray],
    rng: np.random.Generator,
    checkpoints: list[int],
    want_alvar: bool = True,
    want_cle: bool = False,
    fixed_lags: tuple[int, ...] = (),
    lag_cap: Optional[int] = None,
    keep_lag_trace: bool = False,
    lag_table_max: Optional[int] = None,
) -> TraceResult:
    """One filter run with the requested estimators attached.

    ``lag_table_max`` additionally maintains a deep genealogy window and
    records, at each checkpoint, the whole profile of lag estimates for
    lags 0..min(reference count, lag_table_max).
    """
    ck = set(checkpoints)
    cloud = init_filter(model, n_particles, rng)
    alvar = AlvarEstimator(n_particles, lag_cap=lag_cap) if want_alvar else None
    fixed = {lag: FixedLagEstimator(n_particles, lag) for lag in fixed_lags}
    eve = np.arange(n_particles) if want_cle else None
    deep = EnochWindow(n_particles) if lag_table_max is not None else None
    result = TraceResult(times=[], estimates=[], ess=[], resampled=[])
    for lag in fixed_lags:
        result.fixed_values[lag] = []
    if keep_lag_trace:
        result.lag_trace = []
    if lag_table_max is not None:
        result.lag_table = []
    reference_count = 0

    def record(time, was_resampled, alvar_estimate):
        result.times.append(time)
        result.estimates.append(filter_estimate(cloud, h))
        result.ess.append(ess(cloud))
        result.resampled.append(int(was_resampled))
        result.reference_counts.append(reference_count)
        if alvar is not None:
            result.alvar_values.append(alvar_estimate.value)
            result.alvar_lags.append(alvar_estimate.lag)
        if eve is not None:
            value, distinct = grouped_variance(cloud, eve, h)
            result.cle_values.append(value)
            result.cle_distinct.append(distinct)
        for lag, est in fixed_estimates.items():
            result.fixed_values[lag].append(est.value)
        if deep is not None:
            values = lag_values(cloud, deep, min(reference_count, lag_table_max), h)
            result.lag_table.append(values)

    fixed_estimates = {}
    alvar_estimate = alvar.initial_estimate(cloud, h) if alvar is not None else None
    for lag, est in fixed.items():
        fixed_estimates[lag] = est.initial_estimate(cloud, h)
    if keep_lag_trace:
        result.lag_trace.append(0)
    if 0 in ck:
        record(0, False, alvar_estimate)
    for t in range(n_steps):
        cloud, resampled = adaptive_apf_step(model, cloud, policy, rng)
        ancestors = cloud.ancestors
        if resampled:
            reference_count += 1
        if alvar is not None:
            alvar_estimate = alvar.adaptive_step(cloud, ancestors, resampled, h)
        for lag, est in fixed.items():
            fixed_estimates[lag] = est.adaptive_step(cloud, ancestors, resampled, h)
        if eve is not None:
            eve = eve[ancestors]
        if deep is not None and resampled:
            deep.advance(ancestors, max_rows=lag_table_max + 1)
        if keep_lag_trace:
            result.lag_trace.append(alvar.lag)
        if t + 1 in ck:
            record(t + 1, resampled, alvar_estimate)
    return result


def _pure_filter_estimates(model, n_particles, n_steps, policy, h, rng, checkpoints):
    """Filter estimates at checkpoints, no estimators attached (fast path)."""
    ck = set(checkpoints)
    cloud = init_filter(model, n_particles, rng)
    out = []
    if 0 in ck:
        out.append(filter_estimate(cloud, h))
    for t in range(n_steps):
        cloud, _ = adaptive_apf_step(model, cloud, policy, rng)
        if t + 1 in ck:
            out.append(filter_estimate(cloud, h))
    return np.asarray(out)


def _replicate_worker(args):
    """Rebuild the model from plain data and run one replicate (picklable)."""
    (model_name, params, obs, n_particles, n_steps, policy_spec, h_name,
     seed, rep_index, checkpoints) = args
    params_cls = SvParams if model_name == "sv" else LgParams
    model = bootstrap_model(params_cls(**params), obs)
    policy = build_policy(policy_spec)
    h = TEST_FUNCTIONS[h_name]
    rng = child_rng(seed, 1, rep_index)
    return _pure_filter_estimates(
        model, n_particles, n_steps, policy, h, rng, checkpoints
    )


@dataclass(frozen=True)
class BruteForceResult:
    times: list[int]
    values: np.ndarray
    replicates: int


def brute_force_variance(
    config: ExperimentConfig, observations: Optional[np.ndarray] = None
) -> BruteForceResult:
    """Reference variance from independent replicate filters.

    Runs ``config.replicates`` filters on the same observation record
    with split seeds and returns, per checkpoint, the cloud size times
    the sample variance of the filter estimates across replicates.
    """
    if config.replicates < 2:
        raise ConfigError("brute force needs at least 2 replicates")
    obs = get_observations(config) if observations is None else observations
    params = build_params(config)
    checkpoints = checkpoint_times(config.steps, config.checkpoint_stride)
    args = [
        (config.model, _params_dict(params), obs, config.particles, config.steps,
         config.resampling, config.test_function, config.seed, j, checkpoints)
        for j in range(config.replicates)
    ]
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            estimates = np.vstack(list(pool.map(_replicate_worker, args)))
    else:
        estimates = np.vstack([_replicate_worker(a) for a in args])
    values = config.particles * np.var(estimates, axis=0, ddof=1)
    return BruteForceResult(
        times=checkpoints, values=values, replicates=config.replicates
    )


def _params_dict(params) -> dict:
    if isinstance(params, SvParams):
        return {"a": params.a, "b": params.b, "sigma": params.sigma}
    return {
        "a": params.a,
        "b": params.b,
        "sigma_u": params.sigma_u,
        "sigma_v": params.sigma_v,
    }


@dataclass(frozen=True)
class ComparisonResult:
    """Per-checkpoint rows for the frozen comparison CSV schema."""

    times: list[int]
    trace: TraceResult
    fixed_lags: tuple[int, ...]
    brute_force: Optional[np.ndarray]


def run_comparison(config: ExperimentConfig) -> ComparisonResult:
    """One instrumented filter run, optionally with a brute-force overlay.

    The trace uses substream (2, 0); when ``config.replicates`` is at
    least 2 a brute-force reference over that many replicates (substream
    (1, j)) is attached.
    """
    obs = get_observations(config)
    params = build_params(config)
    model = bootstrap_model(params, obs)
    policy = build_policy(config.resampling)
    h = TEST_FUNCTIONS[config.test_function]
    checkpoints = checkpoint_times(config.steps, config.checkpoint_stride)
    trace = run_trace(
        model,
        config.particles,
        config.steps,
        policy,
        h,
        child_rng(config.seed, 2, 0),
        checkpoints,
        want_alvar=config.alvar,
        want_cle=config.cle,
        fixed_lags=config.fixed_lags,
        lag_cap=config.lag_cap,
    )
    brute = None
    if config.replicates >= 2:
        brute = brute_force_variance(config, observations=obs).values
    return ComparisonResult(
        times=checkpoints,
        trace=trace,
        fixed_lags=config.fixed_lags,
        brute_force=brute,
    )


@dataclass(frozen=True)
class MseStudyResult:
    times: list[int]
    lags: list[np.ndarray]          # valid lags per checkpoint
    mse: list[np.ndarray]           # mse per valid lag per checkpoint
    optimal_lags: np.ndarray        # argmin lag per checkpoint
    reference: np.ndarray           # brute-force reference per checkpoint
    estimates: np.ndarray           # (replicates, checkpoints, lags) lag profile
    alvar_values: np.ndarray        # (replicates, checkpoints)
    alvar_lags: np.ndarray          # (replicates, checkpoints)


def mse_study(config: ExperimentConfig) -> MseStudyResult:
    """Empirical mean squared error of the lag estimators.

    Runs a brute-force reference, then ``config.replicates`` instrumented
    filters recording the whole lag profile at each checkpoint, and
    tabulates the mean squared deviation from the reference per (time,
    lag).  The optimal lag per time is the argmin, ties resolved to the
    smallest lag.
    """
    if config.replicates < 2:
        raise ConfigError("the mse study needs at least 2 replicates")
    obs = get_observations(config)
    params = build_params(config)
    model = bootstrap_model(params, obs)
    policy = build_policy(config.resampling)
    h = TEST_FUNCTIONS[config.test_function]
    checkpoints = checkpoint_times(config.steps, config.checkpoint_stride)
    ref_config = config
    if config.reference_replicates is not None:
        from dataclasses import replace

        ref_config = replace(config, replicates=config.reference_replicates)
    reference = brute_force_variance(ref_config, observations=obs).values
    n_ck = len(checkpoints)
    lag_max = config.mse_lag_max
    profiles = np.full((config.replicates, n_ck, lag_max + 1), np.nan)
    alvar_values = np.empty((config.replicates, n_ck))
    alvar_lags = np.empty((config.replicates, n_ck), dtype=int)
    for m in range(config.replicates):
        trace = run_trace(
            model,
            config.particles,
            config.steps,
            policy,
            h,
            child_rng(config.seed, 2, m),
            checkpoints,
            want_alvar=True,
            lag_cap=config.lag_cap,
            lag_table_max=lag_max,
        )
        for k, profile in enumerate(trace.lag_table):
            profiles[m, k, : len(profile)] = profile
        alvar_values[m] = trace.alvar_values
        alvar_lags[m] = trace.alvar_lags
    times, lags_out, mse_out, optimal = [], [], [], []
    for k, t in enumerate(checkpoints):
        valid = ~np.isnan(profiles[0, k])
        lags = np.flatnonzero(valid)
        errors = (profiles[:, k, lags] - reference[k]) ** 2
        mse = errors.mean(axis=0)
        times.append(t)
        lags_out.append(lags)
        mse_out.append(mse)
        optimal.append(lags[int(np.argmin(mse))])
    return MseStudyResult(
        times=times,
        lags=lags_out,
        mse=mse_out,
        optimal_lags=np.asarray(optimal),
        reference=reference,
        estimates=profiles,
        alvar_values=alvar_values,
        alvar_lags=alvar_lags,
    )


@dataclass(frozen=True)
class LagScalingResult:
    particle_grid: tuple[int, ...]
    lag_traces: list[np.ndarray]    # full lag trace per cloud size
    mean_lags: np.ndarray           # burn-in discarded
    median_lags: np.ndarray
    max_lags: np.ndarray
    burn_in: int
    slope: Optional[float]
    intercept: Optional[float]
    r_squared: Optional[float]


def lag_scaling_study(
    config: ExperimentConfig, burn_in: int = 100
) -> LagScalingResult:
    """Chosen-lag statistics across cloud sizes, on one observation record.

    Runs one adaptive-lag filter per entry of ``config.particle_grid``
    (substreams (2, i)), summarises the lag trace with the first
    ``burn_in`` entries discarded, and fits a least-squares line to the
    mean lag against log10 of the cloud size.
    """
    obs = get_observations(config)
    params = build_params(config)
    model = bootstrap_model(params, obs)
    policy = build_policy(config.resampling)
    h = TEST_FUNCTIONS[config.test_function]
    if config.steps + 1 <= burn_in:
        burn_in = 0
    traces, means, medians, maxes = [], [], [], []
    for i, n_particles in enumerate(config.particle_grid):
        trace = run_trace(
            model,
            n_particles,
            config.steps,
            policy,
            h,
            child_rng(config.seed, 2, i),
            checkpoints=[config.steps],
            want_alvar=True,
            lag_cap=config.lag_cap,
            keep_lag_trace=True,
        )
        lags = np.asarray(trace.lag_trace)
        traces.append(lags)
        tail = lags[burn_in:]
        means.append(tail.mean())
        medians.append(float(np.median(tail)))
        maxes.append(tail.max())
    means = np.asarray(means, dtype=float)
    slope = intercept = r_squared = None
    if len(config.particle_grid) >= 2:
        x = np.log10(np.asarray(config.particle_grid, dtype=float))
        slope, intercept = np.polyfit(x, means, 1)
        residuals = means - (slope * x + intercept)
        total = np.sum((means - means.mean()) ** 2)
        r_squared = 1.0 - float(np.sum(residuals**2)) / float(total) if total > 0 else 1.0
        slope, intercept = float(slope), float(intercept)
    return LagScalingResult(
        particle_grid=config.particle_grid,
        lag_traces=traces,
        mean_lags=means,
        median_lags=np.asarray(medians),
        max_lags=np.asarray(maxes, dtype=int),
        burn_in=burn_in,
        slope=slope,
        intercept=intercept,
        r_squared=r_squared,
    )


@dataclass(frozen=True)
class ConfintResult:
    times: np.ndarray
    failures: np.ndarray
    rates: np.ndarray
    overall_rate: float
    replicates: int
    quantile: float


def confint_study(config: ExperimentConfig) -> ConfintResult:
    """Coverage of normal confidence intervals built from the estimator.

    Linear Gaussian model only.  Each of ``config.replicates`` filters
    (substreams (1, j)) produces, at every time, the interval
    ``estimate +- q sqrt(variance / n)``; a failure is an interval that
    misses the exact Kalman filter mean.  Rates are per time, and the
    overall rate averages across times.
    """
    if config.model != "lg":
        raise ConfigError("the confidence interval study needs the lg model")
    if config.replicates < 1:
        raise ConfigError("the confidence interval study needs replicates")
    obs = get_observations(config)
    params = build_params(config)
    model = bootstrap_model(params, obs)
    policy = build_policy(config.resampling)
    h = TEST_FUNCTIONS[config.test_function]
    if config.test_function != "id":
        raise ConfigError("the confidence interval study compares the state mean")
    truth = kalman_filter(params, obs).means
    q = NORMAL_QUANTILE_975
    all_times = list(range(config.steps + 1))
    failures = np.zeros(config.steps + 1, dtype=int)
    for j in range(config.replicates):
        trace = run_trace(
            model,
            config.particles,
            config.steps,
            policy,
            h,
            child_rng(config.seed, 1, j),
            checkpoints=all_times,
            want_alvar=True,
            lag_cap=config.lag_cap,
        )
        estimates = np.asarray(trace.estimates)
        variances = np.asarray(trace.alvar_values)
        half = q * np.sqrt(np.maximum(variances, 0.0) / config.particles)
        failures += (np.abs(estimates - truth) > half).astype(int)
    rates = failures / config.replicates
    return ConfintResult(
        times=np.asarray(all_times),
        failures=failures,
        rates=rates,
        overall_rate=float(rates.mean()),
        replicates=config.replicates,
        quantile=q,
    )
