"""Sampling distribution of the variance estimators at one checkpoint.

Input: the per-replicate ``estimates`` table from the MSE study, plus
optionally the per-replicate adaptive estimates and the optimal-lag
table, whose ``reference`` column supplies a brute-force line.  Boxes
show the replicate spread per fixed lag at the latest checkpoint; with
many tabulated lags an evenly spaced subset is kept readable.
"""

from __future__ import annotations

import numpy as np

from . import io
from .io import InputError
from .style import SERIES_COLOURS, new_figure

__all__ = ["draw", "main", "entry"]

# more boxes than this and the lag axis becomes unreadable
MAX_BOXES = 12


def draw(spec):
    """One box per lag at the latest checkpoint, replicates as samples."""
    found = io.assign_inputs(
        spec.inputs,
        {
            "estimates": (1, 1),
            "alvar_estimates": (0, 1),
            "mse_optimal": (0, 1),
        },
    )
    table = found["estimates"][0]
    n = io.numbers(table, "n")
    lag = io.numbers(table, "lag")
    value = io.numbers(table, "value")

    checkpoint = n.max()
    at = n == checkpoint
    lags = np.unique(lag[at])
    if len(lags) > MAX_BOXES:
        keep = np.unique(np.round(np.linspace(0, len(lags) - 1, MAX_BOXES)))
        lags = lags[keep.astype(int)]
    data = [value[at & (lag == q)] for q in lags]
    labels = [str(int(q)) for q in lags]

    if found["alvar_estimates"]:
        extra = found["alvar_estimates"][0]
        sel = io.numbers(extra, "n") == checkpoint
        if not sel.any():
            raise InputError(
                f"{extra.path}: no rows at checkpoint n={int(checkpoint)}"
            )
        data.append(io.numbers(extra, "value")[sel])
        labels.append("adaptive")

    fig, (ax,) = new_figure(spec.style)
    boxes = ax.boxplot(
        data,
        tick_labels=labels,
        patch_artist=True,
        medianprops={"color": "#333333"},
        flierprops={"markersize": 3},
    )
    for patch in boxes["boxes"]:
        patch.set_facecolor("#d9d9d9")
    if labels[-1] == "adaptive":
        boxes["boxes"][-1].set_facecolor("#aec7e8")

    if found["mse_optimal"]:
        optimal = found["mse_optimal"][0]
        sel = io.numbers(optimal, "n") == checkpoint
        if not sel.any():
            raise InputError(
                f"{optimal.path}: no row at checkpoint n={int(checkpoint)}"
            )
        reference = io.numbers(optimal, "reference")[sel][0]
        ax.axhline(
            reference,
            linestyle="--",
            linewidth=1.2,
            color=SERIES_COLOURS["reference"],
            label="brute force",
        )
        ax.legend(fontsize=8)

    ax.set_xlabel("lag")
    ax.set_ylabel(f"variance estimate at n = {int(checkpoint)}")
    return fig


def main(argv=None) -> int:
    from ._cli import script_main

    return script_main("estimator-box", argv)


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
