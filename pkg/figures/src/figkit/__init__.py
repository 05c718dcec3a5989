"""Figure renderers for fourspin scan CSVs; no physics is computed here."""

__version__ = "0.1.0"

from .csvio import FigureInputError, ScanData, read_scan, require_params
from .render import FIGURES, render

__all__ = ["__version__", "FigureInputError", "ScanData", "read_scan",
           "require_params", "FIGURES", "render"]
