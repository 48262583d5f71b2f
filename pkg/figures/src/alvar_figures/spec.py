"""Figure specification and rendering dispatch.

A :class:`FigureSpec` names the input files, the figure kind, the
output image path and the styling defaults.  :func:`render` draws the
figure and writes the image; every column a kind needs is checked
against the CSV headers while drawing, and a violation surfaces as
:class:`~alvar_figures.io.InputError`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from . import (
    adaptive,
    estimator_box,
    failure_rate,
    lag_scaling,
    lag_trace,
    mse_optimal,
    trace,
)
from .style import Style, save

__all__ = ["KINDS", "FigureSpec", "render"]

KINDS = {
    "trace": trace.draw,
    "estimator-box": estimator_box.draw,
    "lag-trace": lag_trace.draw,
    "lag-scaling": lag_scaling.draw,
    "mse-optimal": mse_optimal.draw,
    "adaptive": adaptive.draw,
    "failure-rate": failure_rate.draw,
}


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: input files, figure kind, output path, styling."""

    kind: str
    inputs: tuple[Path, ...]
    out: Path
    style: Style = field(default_factory=Style)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(
                f"unknown figure kind {self.kind!r}, expected one of "
                f"{sorted(KINDS)}"
            )
        if not self.inputs:
            raise ValueError("a figure needs at least one input file")


def render(spec: FigureSpec) -> Path:
    """Draw the figure described by ``spec`` and write the image."""
    fig = KINDS[spec.kind](spec)
    return save(fig, spec.out, spec.style)
