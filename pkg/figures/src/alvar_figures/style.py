"""Shared styling and deterministic image output.

The Agg backend is forced before pyplot loads; these are batch scripts
and must never touch a display.  Saving strips the metadata fields that
would otherwise embed a tool version or timestamp, so rendering the
same inputs twice produces identical bytes.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  backend must be set first

__all__ = ["SERIES_COLOURS", "Style", "new_figure", "save"]

# stable ids inside SVG output
matplotlib.rcParams["svg.hashsalt"] = "alvar-figures"

SERIES_COLOURS = {
    "alvar": "#1f77b4",
    "cle": "#2ca02c",
    "fixed": "#9467bd",
    "reference": "#d62728",
    "ess": "#7f7f7f",
}


@dataclass(frozen=True)
class Style:
    """Styling defaults shared by every figure kind."""

    width: float = 6.4
    height: float = 4.2
    dpi: int = 150
    grid: bool = True


def new_figure(style: Style, nrows: int = 1, height_ratios=None):
    """One column of axes with the shared look.

    Returns the figure and the list of axes, top to bottom.
    """
    kw = {"height_ratios": height_ratios} if height_ratios else {}
    fig, axes = plt.subplots(
        nrows,
        1,
        figsize=(style.width, style.height),
        sharex=nrows > 1,
        gridspec_kw=kw,
    )
    axis_list = list(axes) if nrows > 1 else [axes]
    if style.grid:
        for ax in axis_list:
            ax.grid(True, alpha=0.3, linewidth=0.5)
    return fig, axis_list


# metadata keys that would embed a timestamp or tool version
_SCRUB = {
    ".png": {"Software": None},
    ".svg": {"Date": None},
    ".pdf": {"CreationDate": None, "Producer": None, "Creator": None},
}


def save(fig, out, style: Style) -> Path:
    """Write ``fig`` to ``out`` with reproducible bytes.

    The output format follows the file extension.  The figure is closed
    afterwards even if saving fails.
    """
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    try:
        fig.savefig(out, dpi=style.dpi, metadata=_SCRUB.get(out.suffix.lower()))
    finally:
        plt.close(fig)
    return out
