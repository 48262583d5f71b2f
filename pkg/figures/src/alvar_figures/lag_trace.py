"""Evolution of the selected lag along a run.

Input: the ``lag_samples`` table from the lag scaling study, one row
per (cloud size, step).  Each cloud size becomes one line.
"""

from __future__ import annotations

import numpy as np

from . import io
from .style import new_figure

__all__ = ["draw", "main", "entry"]


def draw(spec):
    """Selected lag against time, one line per cloud size."""
    found = io.assign_inputs(spec.inputs, {"lag_samples": (1, 1)})
    table = found["lag_samples"][0]
    particles = io.numbers(table, "particles")
    step = io.numbers(table, "step")
    lag = io.numbers(table, "lag")

    fig, (ax,) = new_figure(spec.style)
    for size in np.unique(particles):
        sel = particles == size
        order = np.argsort(step[sel], kind="stable")
        ax.plot(
            step[sel][order],
            lag[sel][order],
            linewidth=1.2,
            label=f"N = {int(size)}",
        )
    ax.set_xlabel("time $n$")
    ax.set_ylabel("selected lag")
    ax.legend(fontsize=8)
    return fig


def main(argv=None) -> int:
    from ._cli import script_main

    return script_main("lag-trace", argv)


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
