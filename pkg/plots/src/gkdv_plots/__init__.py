"""Batch figure generation over the gkdv diagnostics file contract."""

from .figures import FigureSpec, MissingColumnError, PlotsError, render

__version__ = "0.1.0"
