"""Batch figure rendering for the harness CSV and JSON outputs.

Each figure kind has a console script (``alvar-fig-<kind>``) that takes
repeatable ``--in`` flags and one ``--out`` image path.  The same entry
points are importable: build a :class:`FigureSpec` and call
:func:`render`.  Inputs are recognised by their header or key set, not
by file name, and anything malformed raises :class:`InputError`.
"""

from .io import InputError
from .spec import KINDS, FigureSpec, render
from .style import Style

__all__ = ["FigureSpec", "InputError", "KINDS", "Style", "render"]

__version__ = "0.1.0"
