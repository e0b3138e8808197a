"""Fractional repetition codes, access-balance labelings and a DRESS storage simulator."""

from __future__ import annotations

from .frcode import FrCode, file_size, optimality_report
from .labeling import popularity, variance
from .minps import SolveResult, exact_minps
from .setsystem import Graph, SetSystem, complete, cycle, line_graph, turan

__all__ = [
    "FrCode", "Graph", "SetSystem", "SolveResult", "complete", "cycle", "exact_minps",
    "file_size", "line_graph", "optimality_report", "popularity", "turan", "variance",
]
__version__ = "0.1.0"
