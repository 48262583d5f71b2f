"""Command line front end.

Subcommands: simulate, filter, brute-force, compare, mse-study,
lag-study, confint-study.  Each reads one JSON config file (see
:mod:`alvar.harness.config` for the key set), applies the --seed,
--particles, --steps and --out overrides, writes headered CSV files
plus a JSON manifest into the output directory, and exits 0.  Any
failure prints a single machine-readable JSON line to stderr and exits
nonzero.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from ..models import save_observations, simulate_ssm
from .config import ExperimentConfig
from .io import comparison_rows, write_csv, write_manifest
from .studies import (
    TEST_FUNCTIONS,
    brute_force_variance,
    build_params,
    build_policy,
    child_rng,
    checkpoint_times,
    confint_study,
    get_observations,
    lag_scaling_study,
    mse_study,
    run_comparison,
    run_trace,
)
from ..models import bootstrap_model

__all__ = ["main", "entry"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="alvar",
        description="Particle filter variance estimation experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "simulate": "simulate an observation record",
        "filter": "run one filter and record its estimates",
        "brute-force": "replicate filters into a reference variance",
        "compare": "run every configured estimator along one filter",
        "mse-study": "mean squared error of the lag estimators",
        "lag-study": "chosen-lag statistics across cloud sizes",
        "confint-study": "confidence interval coverage on the lg model",
    }
    for name, help_text in commands.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON config file", default=None)
        p.add_argument("--seed", type=int, help="override the master seed")
        p.add_argument("--particles", type=int, help="override the cloud size")
        p.add_argument("--steps", type=int, help="override the final time")
        p.add_argument("--out", help="override the output directory")
    return parser


def _load_config(args) -> ExperimentConfig:
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.particles is not None:
        overrides["particles"] = args.particles
    if args.steps is not None:
        overrides["steps"] = args.steps
    if args.out is not None:
        overrides["out_dir"] = args.out
    if args.config is None:
        import dataclasses

        return dataclasses.replace(ExperimentConfig.from_dict({}), **overrides)
    return ExperimentConfig.from_file(args.config, overrides)


def _cmd_simulate(config: ExperimentConfig, out: Path) -> list[Path]:
    params = build_params(config)
    states, obs = simulate_ssm(params, config.steps, child_rng(config.seed, 0))
    obs_path = out / "observations.csv"
    save_observations(obs_path, obs)
    states_path = write_csv(
        out / "states.csv", ["x"], [[float(x)] for x in states]
    )
    return [obs_path, states_path]


def _cmd_filter(config: ExperimentConfig, out: Path) -> list[Path]:
    obs = get_observations(config)
    model = bootstrap_model(build_params(config), obs)
    trace = run_trace(
        model,
        config.particles,
        config.steps,
        build_policy(config.resampling),
        TEST_FUNCTIONS[config.test_function],
        child_rng(config.seed, 2, 0),
        checkpoint_times(config.steps, config.checkpoint_stride),
        want_alvar=False,
    )
    rows = [
        [trace.times[k], trace.estimates[k], trace.ess[k], trace.resampled[k]]
        for k in range(len(trace.times))
    ]
    return [write_csv(out / "filter.csv", ["n", "estimate", "ess", "resampled"], rows)]


def _cmd_brute_force(config: ExperimentConfig, out: Path) -> list[Path]:
    result = brute_force_variance(config)
    rows = [[t, v] for t, v in zip(result.times, result.values)]
    return [write_csv(out / "brute_force.csv", ["n", "brute_force"], rows)]


def _cmd_compare(config: ExperimentConfig, out: Path) -> list[Path]:
    result = run_comparison(config)
    header, rows = comparison_rows(result)
    return [write_csv(out / "compare.csv", header, rows)]


def _cmd_mse_study(config: ExperimentConfig, out: Path) -> list[Path]:
    result = mse_study(config)
    mse_rows = []
    for k, t in enumerate(result.times):
        for lag, mse in zip(result.lags[k], result.mse[k]):
            mse_rows.append([t, lag, mse])
    optimal_rows = [
        [t, result.optimal_lags[k], result.reference[k]]
        for k, t in enumerate(result.times)
    ]
    lag_rows, est_rows, alvar_rows = [], [], []
    n_reps = result.alvar_values.shape[0]
    for m in range(n_reps):
        for k, t in enumerate(result.times):
            lag_rows.append([t, m, result.alvar_lags[m, k]])
            alvar_rows.append([t, m, result.alvar_values[m, k], result.alvar_lags[m, k]])
            for lag in result.lags[k]:
                est_rows.append([t, m, lag, result.estimates[m, k, lag]])
    return [
        write_csv(out / "mse.csv", ["n", "lag", "mse"], mse_rows),
        write_csv(
            out / "mse_optimal.csv", ["n", "optimal_lag", "reference"], optimal_rows
        ),
        write_csv(out / "alvar_lags.csv", ["n", "replicate", "lag"], lag_rows),
        write_csv(out / "estimates.csv", ["n", "replicate", "lag", "value"], est_rows),
        write_csv(
            out / "alvar_estimates.csv",
            ["n", "replicate", "value", "lag"],
            alvar_rows,
        ),
    ]


def _cmd_lag_study(config: ExperimentConfig, out: Path) -> list[Path]:
    result = lag_scaling_study(config)
    summary_rows = [
        [n, result.mean_lags[i], result.median_lags[i], result.max_lags[i]]
        for i, n in enumerate(result.particle_grid)
    ]
    sample_rows = []
    for i, n in enumerate(result.particle_grid):
        for step, lag in enumerate(result.lag_traces[i]):
            sample_rows.append([n, step, lag])
    fit_path = out / "lag_fit.json"
    fit_path.parent.mkdir(parents=True, exist_ok=True)
    with open(fit_path, "w", encoding="utf-8") as f:
        json.dump(
            {
                "slope": result.slope,
                "intercept": result.intercept,
                "r_squared": result.r_squared,
                "burn_in": result.burn_in,
            },
            f,
            indent=2,
            sort_keys=True,
        )
        f.write("\n")
    return [
        write_csv(
            out / "lag_summary.csv",
            ["particles", "mean_lag", "median_lag", "max_lag"],
            summary_rows,
        ),
        write_csv(out / "lag_samples.csv", ["particles", "step", "lag"], sample_rows),
        fit_path,
    ]


def _cmd_confint_study(config: ExperimentConfig, out: Path) -> list[Path]:
    result = confint_study(config)
    rows = [
        [int(t), int(result.failures[k]), float(result.rates[k])]
        for k, t in enumerate(result.times)
    ]
    summary_path = out / "confint_summary.json"
    summary_path.parent.mkdir(parents=True, exist_ok=True)
    with open(summary_path, "w", encoding="utf-8") as f:
        json.dump(
            {
                "overall_rate": result.overall_rate,
                "replicates": result.replicates,
                "quantile": result.quantile,
            },
            f,
            indent=2,
            sort_keys=True,
        )
        f.write("\n")
    return [
        write_csv(out / "failure_rates.csv", ["n", "failures", "rate"], rows),
        summary_path,
    ]


_HANDLERS = {
    "simulate": _cmd_simulate,
    "filter": _cmd_filter,
    "brute-force": _cmd_brute_force,
    "compare": _cmd_compare,
    "mse-study": _cmd_mse_study,
    "lag-study": _cmd_lag_study,
    "confint-study": _cmd_confint_study,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code not in (0, None):
            print(
                json.dumps({"error": "argument parsing failed", "exit": exc.code}),
                file=sys.stderr,
            )
            return int(exc.code)
        return 0
    try:
        config = _load_config(args)
        out = Path(config.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        start = time.perf_counter()
        outputs = _HANDLERS[args.command](config, out)
        elapsed = time.perf_counter() - start
        write_manifest(
            out / "manifest.json",
            config,
            args.command,
            {"total": elapsed},
            [p.name for p in outputs],
        )
        for p in outputs:
            print(f"wrote {p}")
        print(f"wrote {out / 'manifest.json'}")
        return 0
    except (ValueError, RuntimeError, LookupError, OSError, TypeError) as exc:
        print(
            json.dumps({"error": str(exc), "type": type(exc).__name__}),
            file=sys.stderr,
        )
        return 1


def entry() -> None:
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    entry()
