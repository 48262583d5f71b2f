"""Shared command line wrapper, one console script per figure kind.

Every script takes repeatable ``--in`` flags plus one ``--out`` image
path, prints the written path on success, and exits nonzero with a
message on stderr when an input is missing or malformed.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .io import InputError
from .spec import FigureSpec, render
from .style import Style

__all__ = ["script_main"]

_HELP = {
    "trace": "variance traces with a brute-force overlay, from compare.csv",
    "estimator-box": (
        "estimator boxplots across replicates, from the MSE study tables"
    ),
    "lag-trace": "the selected lag against time, from lag_samples.csv",
    "lag-scaling": (
        "lag against cloud size with the log fit, from lag_samples.csv "
        "and lag_fit.json"
    ),
    "mse-optimal": (
        "chosen lags against the MSE-optimal lag, from alvar_lags.csv "
        "and mse_optimal.csv"
    ),
    "adaptive": (
        "variance and effective sample size under adaptive resampling, "
        "from compare.csv"
    ),
    "failure-rate": (
        "confidence interval failure rates, from failure_rates.csv"
    ),
}


def script_main(kind: str, argv=None) -> int:
    """Parse ``--in``/``--out`` flags and render one figure of ``kind``."""
    parser = argparse.ArgumentParser(
        prog=f"alvar-fig-{kind}",
        description=f"Render {_HELP[kind]}.",
    )
    parser.add_argument(
        "--in",
        dest="inputs",
        action="append",
        required=True,
        metavar="PATH",
        help=(
            "input file written by the harness; repeat the flag for "
            "figures that combine several files"
        ),
    )
    parser.add_argument(
        "--out",
        required=True,
        metavar="PATH",
        help="output image path; the extension picks the format",
    )
    parser.add_argument(
        "--dpi",
        type=int,
        default=Style.dpi,
        help="raster resolution (default %(default)s)",
    )
    args = parser.parse_args(argv)
    spec = FigureSpec(
        kind=kind,
        inputs=tuple(Path(p) for p in args.inputs),
        out=Path(args.out),
        style=Style(dpi=args.dpi),
    )
    try:
        out = render(spec)
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(out)
    return 0
