"""Deterministic study output: headered CSV files plus a JSON manifest.

Floats are written with shortest round-trip formatting and missing
values as empty fields, so a rerun with the same config and seed
produces byte-identical CSV files.  The manifest carries provenance
(config echo, seed, package version, git revision, wall-clock timings)
and is the one output file allowed to differ between reruns.
"""

from __future__ import annotations

import csv
import json
import subprocess
from importlib import metadata
from pathlib import Path

__all__ = ["format_value", "write_csv", "write_manifest", "comparison_rows"]


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, int)) or hasattr(value, "__index__"):
        return str(int(value))
    if isinstance(value, float) or hasattr(value, "__float__"):
        return repr(float(value))
    return str(value)


def write_csv(path, header: list[str], rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) for v in row])
    return path


def _git_revision() -> str | None:
    try:
        out = subprocess.run(
            ["git", "rev-parse", "HEAD"],
            cwd=Path(__file__).parent,
            capture_output=True,
            text=True,
            timeout=10,
        )
    except (OSError, subprocess.SubprocessError):
        return None
    return out.stdout.strip() if out.returncode == 0 else None


def write_manifest(path, config, command: str, timings: dict, outputs: list[str]) -> Path:
    try:
        version = metadata.version("alvar")
    except metadata.PackageNotFoundError:
        version = None
    manifest = {
        "command": command,
        "config": config.to_dict(),
        "seed": config.seed,
        "package_version": version,
        "git_revision": _git_revision(),
        "timings_seconds": timings,
        "outputs": outputs,
    }
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")
    return path


def comparison_rows(result) -> tuple[list[str], list[list]]:
    """Frozen comparison schema: one row per checkpoint.

    Columns: n, estimate, var_alvar, lag, var_cle, one var_fixed_<lag>
    column per configured fixed lag, ess, resampled, brute_force.
    Columns for estimators that were not run are left empty.
    """
    trace = result.trace
    header = ["n", "estimate", "var_alvar", "lag", "var_cle"]
    header += [f"var_fixed_{lag}" for lag in result.fixed_lags]
    header += ["ess", "resampled", "brute_force"]
    rows = []
    for k, t in enumerate(result.times):
        row = [t, trace.estimates[k]]
        if trace.alvar_values:
            row += [trace.alvar_values[k], trace.alvar_lags[k]]
        else:
            row += [None, None]
        row.append(trace.cle_values[k] if trace.cle_values else None)
        row += [trace.fixed_values[lag][k] for lag in result.fixed_lags]
        row += [trace.ess[k], trace.resampled[k]]
        row.append(
            result.brute_force[k] if result.brute_force is not None else None
        )
        rows.append(row)
    return header, rows
