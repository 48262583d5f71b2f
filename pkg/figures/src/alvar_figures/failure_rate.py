"""Per-time confidence interval failure rates as bars.

Input: the ``failure_rates`` table from the interval coverage study
and, optionally, its JSON summary, whose overall rate is drawn as a
second guide line next to the nominal five percent.
"""

from __future__ import annotations

import numpy as np

from . import io
from .style import SERIES_COLOURS, new_figure

__all__ = ["draw", "main", "entry"]

# intervals use the 97.5% normal quantile, so 5% misses are nominal
NOMINAL_RATE = 0.05


def draw(spec):
    """One bar per checkpoint with nominal and overall rate lines."""
    found = io.assign_inputs(
        spec.inputs, {"failure_rates": (1, 1), "confint_summary": (0, 1)}
    )
    table = found["failure_rates"][0]
    summary = found["confint_summary"][0] if found["confint_summary"] else None

    n = io.numbers(table, "n")
    rate = io.numbers(table, "rate")

    fig, (ax,) = new_figure(spec.style)
    positions = np.arange(len(n))
    ax.bar(positions, rate, width=0.8, color=SERIES_COLOURS["alvar"])

    # thin the tick labels when there are many checkpoints
    stride = max(1, int(np.ceil(len(n) / 15)))
    shown = positions[::stride]
    ax.set_xticks(shown, [str(int(t)) for t in n[::stride]])

    ax.axhline(
        NOMINAL_RATE,
        linestyle="--",
        linewidth=1.2,
        color=SERIES_COLOURS["reference"],
        label="nominal 5%",
    )
    if summary is not None:
        overall = float(summary["overall_rate"])
        ax.axhline(
            overall,
            linestyle=":",
            linewidth=1.2,
            color=SERIES_COLOURS["cle"],
            label=f"overall {100 * overall:.1f}%",
        )
    ax.legend(fontsize=8)
    ax.set_xlabel("time $n$")
    ax.set_ylabel("failure rate")
    return fig


def main(argv=None) -> int:
    from ._cli import script_main

    return script_main("failure-rate", argv)


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
