"""Loaders for the simulator's CSV outputs.

Only the columns a figure actually uses are required; extra columns
(per-mode event extensions, probe columns) pass through untouched.
"""

from __future__ import annotations

import csv
import os

import numpy as np

from .errors import MissingFile, SchemaMismatch

TRAJECTORY_COLUMNS = ("t", "norm_plant", "norm_observer", "norm_error", "U_held", "U_continuous")
EVENT_COLUMNS = ("k", "t_k", "dwell", "U_held")


def load_table(path: str, required: tuple[str, ...]) -> dict[str, np.ndarray]:
    """Read `required` columns of a CSV as float arrays.

    "inf" cells parse as float infinity. Zero data rows is legal (events
    of a never-triggering run); a missing or malformed header is not.
    """
    if not os.path.isfile(path):
        raise MissingFile(f"no such file: {path}")
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        names = reader.fieldnames
        if names is None:
            raise SchemaMismatch(f"{path}: empty file, expected header with {list(required)}")
        missing = [c for c in required if c not in names]
        if missing:
            raise SchemaMismatch(f"{path}: missing columns {missing} (header has {names})")
        columns: dict[str, list[float]] = {c: [] for c in required}
        for row in reader:
            for c in required:
                cell = row[c]
                try:
                    columns[c].append(float(cell))
                except (TypeError, ValueError):
                    raise SchemaMismatch(f"{path}: non-numeric value {cell!r} in column {c}") from None
    return {c: np.asarray(v, dtype=float) for c, v in columns.items()}


def load_trajectory(path: str) -> dict[str, np.ndarray]:
    return load_table(path, TRAJECTORY_COLUMNS)


def load_events(path: str) -> dict[str, np.ndarray]:
    return load_table(path, EVENT_COLUMNS)
