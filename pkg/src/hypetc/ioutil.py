"""Small IO helpers shared by the CSV and JSON writers."""

from __future__ import annotations

import os
import tempfile


def fmt(value: float) -> str:
    """Format a scalar with 15 significant digits."""
    return format(float(value), ".15g")


def atomic_write_text(path: str, text: str) -> None:
    """Write text to path via a temporary file and rename.

    Readers never observe a partially written file, and rerunning a
    scenario replaces outputs in one step.
    """
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
