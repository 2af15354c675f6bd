"""Desk-scale structural toolkit for havens, linkages, butterfly minors and
cylindrical grids in (planar) digraphs."""

from .digraph import Digraph, DirectedPath, strong_components, menger_paths, eulerianize, boundary_edges
from .errors import Exhausted, InvalidInput, Report

__all__ = [
    "Digraph",
    "DirectedPath",
    "Exhausted",
    "InvalidInput",
    "Report",
    "boundary_edges",
    "eulerianize",
    "menger_paths",
    "strong_components",
]
__version__ = "0.1.0"
