"""Distribution of the selected lag against cloud size, with the log fit.

Input: the ``lag_samples`` table from the lag scaling study and,
optionally, its ``lag_fit.json`` summary.  The boxes show the lag
distribution per cloud size after the burn-in recorded in the summary;
the fitted line is evaluated at the box positions, which matches the
log scale exactly when the cloud sizes are equally spaced in log10.
"""

from __future__ import annotations

import numpy as np

from . import io
from .style import SERIES_COLOURS, new_figure

__all__ = ["draw", "main", "entry"]


def draw(spec):
    """One box per cloud size, with the least squares line overlaid."""
    found = io.assign_inputs(
        spec.inputs, {"lag_samples": (1, 1), "lag_fit": (0, 1)}
    )
    table = found["lag_samples"][0]
    fit = found["lag_fit"][0] if found["lag_fit"] else None
    burn_in = int(fit["burn_in"]) if fit else 0

    particles = io.numbers(table, "particles")
    step = io.numbers(table, "step")
    lag = io.numbers(table, "lag")

    sizes = np.unique(particles)
    data = []
    for size in sizes:
        sel = (particles == size) & (step >= burn_in)
        if not sel.any():
            sel = particles == size  # burn-in longer than this trace
        data.append(lag[sel])

    positions = np.arange(1, len(sizes) + 1)
    fig, (ax,) = new_figure(spec.style)
    ax.boxplot(
        data,
        positions=positions,
        tick_labels=[str(int(size)) for size in sizes],
        medianprops={"color": "#333333"},
        flierprops={"markersize": 3},
    )

    if fit is not None and fit.get("slope") is not None:
        slope, intercept = fit["slope"], fit["intercept"]
        label = f"{slope:.2f} log10(N) + {intercept:.2f}"
        r_squared = fit.get("r_squared")
        if r_squared is not None:
            label += f"  (R$^2$ = {r_squared:.3f})"
        ax.plot(
            positions,
            slope * np.log10(sizes) + intercept,
            "--o",
            color=SERIES_COLOURS["reference"],
            linewidth=1.2,
            markersize=4,
            label=label,
        )
        ax.legend(fontsize=8)

    ax.set_xlabel("number of particles")
    ax.set_ylabel("selected lag")
    return fig


def main(argv=None) -> int:
    from ._cli import script_main

    return script_main("lag-scaling", argv)


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
