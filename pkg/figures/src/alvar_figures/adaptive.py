"""Adaptive resampling run: variance trace on top, sample size below.

Input: one or more comparison tables written by the ``compare`` command
under an effective-sample-size resampling policy.  The lower panel
shows the effective sample size with a marker at every step where the
cloud was actually resampled.
"""

from __future__ import annotations

import numpy as np

from . import io
from .io import InputError
from .style import SERIES_COLOURS, new_figure

__all__ = ["draw", "main", "entry"]


def draw(spec):
    """Adaptive-lag variance and effective sample size, shared time axis."""
    found = io.assign_inputs(spec.inputs, {"comparison": (1, None)})
    tables = found["comparison"]
    multi = len(tables) > 1
    fig, (top, bottom) = new_figure(spec.style, nrows=2, height_ratios=[2, 1])
    for k, table in enumerate(tables):
        prefix = f"run {k + 1}: " if multi else ""
        x = io.numbers(table, "n")
        variance = io.numbers(table, "var_alvar", blanks=True)
        if not np.isfinite(variance).any():
            raise InputError(
                f"{table.path}: the var_alvar column is empty; this figure "
                f"needs a run with the adaptive estimator enabled"
            )
        top.plot(
            x,
            variance,
            "-",
            color=None if multi else SERIES_COLOURS["alvar"],
            linewidth=1.4,
            label=prefix + "adaptive lag",
        )
        reference = io.numbers(table, "brute_force", blanks=True)
        mask = np.isfinite(reference)
        if mask.any():
            top.plot(
                x[mask],
                reference[mask],
                "o",
                color=None if multi else SERIES_COLOURS["reference"],
                markersize=4,
                linestyle="none",
                label=prefix + "brute force",
            )
        ess = io.numbers(table, "ess")
        resampled = io.numbers(table, "resampled") != 0
        bottom.plot(
            x,
            ess,
            "-",
            color=None if multi else SERIES_COLOURS["ess"],
            linewidth=1.2,
            label=prefix + "effective sample size",
        )
        if resampled.any():
            bottom.plot(
                x[resampled],
                ess[resampled],
                "v",
                color=None if multi else "#000000",
                markersize=4,
                linestyle="none",
                label=prefix + "resampling step",
            )
    top.set_ylabel("variance estimate")
    top.legend(fontsize=8)
    bottom.set_ylabel("sample size")
    bottom.set_xlabel("time $n$")
    bottom.legend(fontsize=8)
    return fig


def main(argv=None) -> int:
    from ._cli import script_main

    return script_main("adaptive", argv)


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
