"""Readers for the harness output files.

The harness writes plain CSV with a fixed header per file kind plus two
small JSON summaries.  Everything here is read-only and strict: a file
that does not parse cleanly raises :class:`InputError`, which the
command line wrappers turn into a nonzero exit and a message.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "InputError",
    "Table",
    "read_table",
    "read_json_summary",
    "numbers",
    "require_columns",
    "fixed_lag_columns",
    "classify",
    "classify_json",
    "assign_inputs",
]


class InputError(Exception):
    """An input file is missing, malformed or of the wrong kind."""


@dataclass(frozen=True)
class Table:
    """One parsed CSV file: header order plus raw string columns."""

    path: Path
    header: tuple[str, ...]
    columns: dict[str, list[str]]

    @property
    def n_rows(self) -> int:
        return len(self.columns[self.header[0]])


def read_table(path) -> Table:
    """Parse one harness CSV file.

    Parameters
    ----------
    path : path-like

    Returns
    -------
    Table

    Raises
    ------
    InputError
        If the file is absent or unreadable, empty, has a blank or
        duplicated column name, contains no data rows, has a row whose
        field count differs from the header, or does not end with a
        newline.  The harness terminates every row, including the last,
        so a missing final newline is the signature of a truncated
        file even when the cut lands between two commas.
    """
    path = Path(path)
    try:
        with open(path, newline="", encoding="utf-8") as f:
            text = f.read()
    except OSError as exc:
        raise InputError(f"{path}: cannot read input ({exc})") from exc
    if not text:
        raise InputError(f"{path}: empty input")
    if not text.endswith("\n"):
        raise InputError(
            f"{path}: last line is incomplete; the file looks truncated"
        )
    rows = list(csv.reader(text.splitlines(True)))
    if not rows:
        raise InputError(f"{path}: empty input")
    header = rows[0]
    if len(set(header)) != len(header) or any(not name for name in header):
        raise InputError(f"{path}: malformed header {header!r}")
    data = rows[1:]
    if not data:
        raise InputError(f"{path}: no data rows")
    for i, row in enumerate(data, start=2):
        if len(row) != len(header):
            raise InputError(
                f"{path}: line {i} has {len(row)} fields, expected "
                f"{len(header)}; the file looks truncated"
            )
    columns = {name: [row[j] for row in data] for j, name in enumerate(header)}
    return Table(path=path, header=tuple(header), columns=columns)


def require_columns(table: Table, names) -> None:
    """Raise :class:`InputError` unless every name is in the header."""
    missing = [n for n in names if n not in table.columns]
    if missing:
        raise InputError(
            f"{table.path}: missing column(s) {', '.join(missing)}; "
            f"header is {', '.join(table.header)}"
        )


def numbers(table: Table, name: str, blanks: bool = False) -> np.ndarray:
    """One column as float64.

    Empty cells are NaN when ``blanks`` is set; the harness leaves a
    cell empty when the estimator that fills it was not run.  With
    ``blanks`` unset an empty cell is an error.
    """
    require_columns(table, [name])
    out = np.empty(table.n_rows)
    for i, cell in enumerate(table.columns[name]):
        if cell == "":
            if not blanks:
                raise InputError(
                    f"{table.path}: column {name!r} has an empty cell on "
                    f"line {i + 2}"
                )
            out[i] = np.nan
            continue
        try:
            out[i] = float(cell)
        except ValueError as exc:
            raise InputError(
                f"{table.path}: column {name!r}, line {i + 2}: "
                f"not a number: {cell!r}"
            ) from exc
    return out


# exact headers written by the harness, used to tell inputs apart; two
# of them share a column set and differ only in order, so order matters
_EXACT_HEADERS = {
    ("n", "replicate", "lag", "value"): "estimates",
    ("n", "replicate", "value", "lag"): "alvar_estimates",
    ("n", "replicate", "lag"): "alvar_lags",
    ("n", "optimal_lag", "reference"): "mse_optimal",
    ("n", "lag", "mse"): "mse",
    ("particles", "step", "lag"): "lag_samples",
    ("particles", "mean_lag", "median_lag", "max_lag"): "lag_summary",
    ("n", "failures", "rate"): "failure_rates",
    ("n", "estimate", "ess", "resampled"): "filter",
    ("n", "brute_force"): "brute_force",
}

_COMPARISON_HEAD = ("n", "estimate", "var_alvar", "lag", "var_cle")
_COMPARISON_TAIL = ("ess", "resampled", "brute_force")

_JSON_KINDS = {
    "lag_fit": ("slope", "intercept", "r_squared", "burn_in"),
    "confint_summary": ("overall_rate", "replicates", "quantile"),
}


def classify(table: Table) -> str | None:
    """Name the harness file kind a table was written by, if any."""
    if table.header in _EXACT_HEADERS:
        return _EXACT_HEADERS[table.header]
    head, tail = table.header[:5], table.header[-3:]
    middle = table.header[5:-3]
    if (
        head == _COMPARISON_HEAD
        and tail == _COMPARISON_TAIL
        and all(c.startswith("var_fixed_") for c in middle)
    ):
        return "comparison"
    return None


def classify_json(payload: dict) -> str | None:
    """Name the harness summary a JSON object came from, if any."""
    for kind, keys in _JSON_KINDS.items():
        if set(keys) <= set(payload):
            return kind
    return None


def fixed_lag_columns(table: Table) -> list[str]:
    """The per-lag columns of a comparison table, in header order."""
    return [c for c in table.header if c.startswith("var_fixed_")]


def read_json_summary(path, required=()) -> dict:
    """Load one of the harness JSON summaries as a dict."""
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as f:
            payload = json.load(f)
    except OSError as exc:
        raise InputError(f"{path}: cannot read input ({exc})") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(payload, dict):
        raise InputError(f"{path}: expected a JSON object")
    missing = [k for k in required if k not in payload]
    if missing:
        raise InputError(f"{path}: missing key(s) {', '.join(missing)}")
    return payload


def assign_inputs(paths, slots: dict) -> dict[str, list]:
    """Sort the ``--in`` files into the roles a figure kind expects.

    Parameters
    ----------
    paths : iterable of path-like
        Input files in command line order.
    slots : dict
        Role name to ``(lo, hi)`` bounds on how many files of that kind
        the figure accepts; ``hi`` of None means any number.

    Returns
    -------
    dict
        Role name to the parsed inputs of that kind, in command line
        order: :class:`Table` for CSV roles, plain dicts for JSON.

    Raises
    ------
    InputError
        If a file is not recognised as one of the wanted kinds or a
        count bound is violated.
    """
    found: dict[str, list] = {name: [] for name in slots}
    for path in paths:
        path = Path(path)
        if path.suffix.lower() == ".json":
            payload = read_json_summary(path)
            kind = classify_json(payload)
            value: object = payload
        else:
            table = read_table(path)
            kind = classify(table)
            value = table
        if kind not in slots:
            wanted = ", ".join(sorted(slots))
            raise InputError(
                f"{path}: not a file this figure can use; wanted {wanted}, "
                f"recognised {kind or 'nothing'}"
            )
        found[kind].append(value)
    for name, (lo, hi) in slots.items():
        have = len(found[name])
        if have < lo:
            raise InputError(
                f"missing input: need at least {lo} {name} file(s), got {have}"
            )
        if hi is not None and have > hi:
            raise InputError(f"too many {name} inputs: got {have}, at most {hi}")
    return found
