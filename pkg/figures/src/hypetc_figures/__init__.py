"""Read-render figures for hypetc simulation results."""

from .errors import FigureError, MissingFile, SchemaMismatch
from .render import FigureSpec, render, render_all

__all__ = [
    "FigureError",
    "FigureSpec",
    "MissingFile",
    "SchemaMismatch",
    "render",
    "render_all",
]
