"""Graphical designs on structured graphs: exact tests, conversions and search."""

from graphdesigns.errors import BudgetExceeded, DesignError
from graphdesigns.graph import Certificate, Graph, SpectrumSketch

__version__ = "0.1.0"

__all__ = ["BudgetExceeded", "Certificate", "DesignError", "Graph", "SpectrumSketch"]
