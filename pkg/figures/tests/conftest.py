"""Golden harness outputs for the figure tests.

Every study the figures consume runs once per session through the
harness command line at desk scale.  The figure code only ever sees
the resulting CSV and JSON files, so these tests exercise exactly the
interface a user would.
"""

import json
import subprocess
import sys

import pytest

_CONFIGS = {
    "compare": (
        "compare",
        {
            "model": "sv",
            "particles": 64,
            "steps": 60,
            "checkpoint_stride": 20,
            "replicates": 60,
            "seed": 81,
            "estimators": {"alvar": True, "cle": True, "fixed_lags": [0, 2]},
        },
    ),
    "adaptive": (
        "compare",
        {
            "model": "sv",
            "particles": 64,
            "steps": 60,
            "checkpoint_stride": 20,
            "replicates": 60,
            "seed": 82,
            "resampling": {"ess": 0.5},
            "estimators": {"alvar": True, "cle": False, "fixed_lags": []},
        },
    ),
    "lag": (
        "lag-study",
        {
            "model": "sv",
            "steps": 120,
            "seed": 83,
            "particle_grid": [16, 64, 256],
        },
    ),
    "confint": (
        "confint-study",
        {
            "model": "lg",
            "particles": 64,
            "steps": 60,
            "checkpoint_stride": 20,
            "replicates": 40,
            "seed": 84,
        },
    ),
    "mse": (
        "mse-study",
        {
            "model": "sv",
            "particles": 32,
            "steps": 40,
            "checkpoint_stride": 20,
            "replicates": 20,
            "seed": 85,
            "mse_lag_max": 10,
        },
    ),
}


@pytest.fixture(scope="session")
def golden(tmp_path_factory):
    """Directory per study with the files its harness command wrote."""
    root = tmp_path_factory.mktemp("golden")
    out = {}
    for name, (subcommand, config) in _CONFIGS.items():
        config_path = root / f"{name}.json"
        config_path.write_text(json.dumps(config), encoding="utf-8")
        out_dir = root / name
        proc = subprocess.run(
            [
                sys.executable,
                "-m",
                "alvar.harness.cli",
                subcommand,
                "--config",
                str(config_path),
                "--out",
                str(out_dir),
            ],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, f"{subcommand} failed: {proc.stderr}"
        out[name] = out_dir
    return out
