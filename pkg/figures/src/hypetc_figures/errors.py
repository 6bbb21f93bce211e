"""Errors raised while reading result CSVs."""


class FigureError(Exception):
    """Base for figure rendering failures."""


class MissingFile(FigureError):
    """An input CSV (or results directory) does not exist."""


class SchemaMismatch(FigureError):
    """A CSV is missing required columns or holds non-numeric data."""
