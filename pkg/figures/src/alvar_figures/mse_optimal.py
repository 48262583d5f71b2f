"""Chosen lags against the empirically best lag, per checkpoint.

Input: the per-replicate ``alvar_lags`` table and the ``mse_optimal``
table from the MSE study.  Boxes show the spread of the adaptively
chosen lag across replicates at each checkpoint; diamonds mark the lag
that minimises the empirical MSE against the brute-force reference.
"""

from __future__ import annotations

import numpy as np

from . import io
from .io import InputError
from .style import SERIES_COLOURS, new_figure

__all__ = ["draw", "main", "entry"]


def draw(spec):
    """One box of chosen lags per checkpoint, best lag overlaid."""
    found = io.assign_inputs(
        spec.inputs, {"alvar_lags": (1, 1), "mse_optimal": (1, 1)}
    )
    chosen = found["alvar_lags"][0]
    optimal = found["mse_optimal"][0]

    n = io.numbers(chosen, "n")
    lag = io.numbers(chosen, "lag")
    times = np.unique(n)
    data = [lag[n == t] for t in times]
    positions = np.arange(1, len(times) + 1)

    fig, (ax,) = new_figure(spec.style)
    ax.boxplot(
        data,
        positions=positions,
        tick_labels=[str(int(t)) for t in times],
        medianprops={"color": "#333333"},
        flierprops={"markersize": 3},
    )

    position_of = {t: p for t, p in zip(times, positions)}
    opt_n = io.numbers(optimal, "n")
    opt_lag = io.numbers(optimal, "optimal_lag")
    xs = [position_of[t] for t in opt_n if t in position_of]
    ys = [q for t, q in zip(opt_n, opt_lag) if t in position_of]
    if not xs:
        raise InputError(
            f"{optimal.path}: shares no checkpoint time with {chosen.path}"
        )
    ax.plot(
        xs,
        ys,
        "D",
        color=SERIES_COLOURS["reference"],
        markersize=5,
        linestyle="none",
        label="MSE-optimal lag",
    )
    ax.legend(fontsize=8)
    ax.set_xlabel("time $n$")
    ax.set_ylabel("lag")
    return fig


def main(argv=None) -> int:
    from ._cli import script_main

    return script_main("mse-optimal", argv)


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
