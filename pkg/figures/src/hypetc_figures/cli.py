"""render_figures <results-dir> <out-dir>"""

from __future__ import annotations

import json
import sys

from .errors import FigureError
from .render import render_all

USAGE = "usage: render_figures <results-dir> <out-dir>"


def main(argv: list[str] | None = None) -> int:
    args = sys.argv[1:] if argv is None else argv
    if len(args) != 2:
        print(USAGE, file=sys.stderr)
        return 2
    try:
        written = render_all(args[0], args[1])
    except (FigureError, OSError, ValueError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
