"""Variance traces along a run, with the brute-force reference overlaid.

Input: one or more comparison tables written by the ``compare``
command.  Each estimator column that was actually filled becomes one
line; the brute-force column, when present, is drawn as points on top.
"""

from __future__ import annotations

import numpy as np

from . import io
from .io import InputError
from .style import SERIES_COLOURS, new_figure

__all__ = ["draw", "main", "entry"]


def draw(spec):
    """Variance estimates per checkpoint, one line per estimator."""
    found = io.assign_inputs(spec.inputs, {"comparison": (1, None)})
    tables = found["comparison"]
    multi = len(tables) > 1
    fig, (ax,) = new_figure(spec.style)
    drew = False
    for k, table in enumerate(tables):
        prefix = f"run {k + 1}: " if multi else ""
        x = io.numbers(table, "n")
        series = [
            ("var_alvar", "adaptive lag", "-", SERIES_COLOURS["alvar"]),
            ("var_cle", "full depth", "--", SERIES_COLOURS["cle"]),
        ]
        for col in io.fixed_lag_columns(table):
            lam = col.removeprefix("var_fixed_")
            series.append((col, f"fixed lag {lam}", ":", None))
        for col, label, linestyle, colour in series:
            y = io.numbers(table, col, blanks=True)
            if not np.isfinite(y).any():
                continue
            ax.plot(
                x,
                y,
                linestyle,
                color=None if multi else colour,
                linewidth=1.4,
                label=prefix + label,
            )
            drew = True
        ref = io.numbers(table, "brute_force", blanks=True)
        mask = np.isfinite(ref)
        if mask.any():
            ax.plot(
                x[mask],
                ref[mask],
                "o",
                color=None if multi else SERIES_COLOURS["reference"],
                markersize=4,
                linestyle="none",
                label=prefix + "brute force",
            )
    if not drew:
        raise InputError(
            "no variance series to draw: every estimator column is empty"
        )
    ax.set_xlabel("time $n$")
    ax.set_ylabel("asymptotic variance estimate")
    ax.legend(fontsize=8)
    return fig


def main(argv=None) -> int:
    from ._cli import script_main

    return script_main("trace", argv)


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
