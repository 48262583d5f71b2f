"""Sliding-window ancestor bookkeeping.

For each retained generation m the window stores one row of indices:
entry i is the index of the time-m ancestor of the current particle i.
Rows are updated in place on every selection step by composing with the
new ancestor vector, so a window with L rows costs O(L n) per step and
never grows beyond its configured depth.  Dropped rows are pooled and
reused to avoid allocation churn in long runs.

The newest row is always the identity (each particle is its own
ancestor at the current reference generation).  The row for generation
zero, when retained, maps each particle to its founding ancestor.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

__all__ = ["EnochWindow", "WindowError"]


class WindowError(LookupError):
    """A generation outside the retained window was requested."""


class EnochWindow:
    """Ancestor-index rows for a contiguous span of generations.

    Parameters
    ----------
    n_particles : int
        Cloud size; every row has this length.

    Attributes
    ----------
    oldest_generation : int
        Generation index of the first retained row.
    newest_generation : int
        Generation index of the last retained row, equal to the number
        of ``advance`` calls so far.
    """

    def __init__(self, n_particles: int):
        if n_particles < 1:
            raise ValueError("n_particles must be positive")
        self.n_particles = n_particles
        self.oldest_generation = 0
        self._identity = np.arange(n_particles, dtype=np.int64)
        self._rows: list[np.ndarray] = [self._identity.copy()]
        self._scratch = np.empty(n_particles, dtype=np.int64)
        self._pool: list[np.ndarray] = []

    @property
    def newest_generation(self) -> int:
        return self.oldest_generation + len(self._rows) - 1

    @property
    def depth(self) -> int:
        """Number of retained rows."""
        return len(self._rows)

    def row(self, generation: int) -> np.ndarray:
        """Ancestor indices at the given generation (do not mutate)."""
        k = generation - self.oldest_generation
        if k < 0 or k >= len(self._rows):
            raise WindowError(
                f"generation {generation} outside window "
                f"[{self.oldest_generation}, {self.newest_generation}]"
            )
        return self._rows[k]

    def advance(self, ancestors: np.ndarray, max_rows: Optional[int] = None) -> None:
        """Fold one selection step into the window.

        Every retained row r becomes ``r[ancestors]`` and a fresh
        identity row is appended for the new generation.  If max_rows is
        given, oldest rows are dropped to keep at most that many.
        """
        anc = np.asarray(ancestors)
        n = self.n_particles
        if anc.shape != (n,) or not np.issubdtype(anc.dtype, np.integer):
            raise ValueError("ancestors must be an integer array of length n")
        if len(anc) and (anc.min() < 0 or anc.max() >= n):
            raise ValueError("ancestor indices out of range")
        for r in self._rows:
            np.take(r, anc, out=self._scratch)
            r[:] = self._scratch
        new_row = self._pool.pop() if self._pool else np.empty(n, dtype=np.int64)
        new_row[:] = self._identity
        self._rows.append(new_row)
        if max_rows is not None:
            self.trim(max_rows)

    def trim(self, max_rows: int) -> None:
        """Drop oldest rows until at most max_rows remain."""
        if max_rows < 1:
            raise ValueError("a window must retain at least one row")
        while len(self._rows) > max_rows:
            self._pool.append(self._rows.pop(0))
            self.oldest_generation += 1

    def distinct_count(self, generation: int) -> int:
        """Number of distinct ancestors at a generation."""
        counts = np.bincount(self.row(generation), minlength=self.n_particles)
        return int(np.count_nonzero(counts))
