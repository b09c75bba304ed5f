"""Figure rendering for fptsim CSV outputs."""

from fptplots.figures import KINDS, FigureSpec, render
from fptplots.io import SchemaError

__version__ = "0.1.0"

__all__ = ["KINDS", "FigureSpec", "render", "SchemaError"]
