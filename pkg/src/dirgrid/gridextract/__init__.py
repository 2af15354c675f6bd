"""Grid extraction: acyclic, bubble and cylindrical grids from path systems."""

from .acyclic import GridExtraction, debubble, get_acyclic_grid, get_bubble_grid, passes
from .assemble import NotAssembled, assemble_cylindrical_grid, grid_parts, required_size
from .config import PipelineConfig
from .cuts import (
    CircuitsAndPaths,
    CountingInconclusive,
    LinkCutsResult,
    UndirectedWitness,
    cylinder_witness,
    find_circuits_and_paths,
    link_cuts,
)
from .decomposition import INTEGRATED, SEGREGATED, MixingResult, SubpathDecomposition, mixing_analysis

__all__ = [
    "CircuitsAndPaths",
    "CountingInconclusive",
    "GridExtraction",
    "INTEGRATED",
    "LinkCutsResult",
    "MixingResult",
    "NotAssembled",
    "PipelineConfig",
    "SEGREGATED",
    "SubpathDecomposition",
    "UndirectedWitness",
    "assemble_cylindrical_grid",
    "cylinder_witness",
    "debubble",
    "find_circuits_and_paths",
    "get_acyclic_grid",
    "get_bubble_grid",
    "grid_parts",
    "link_cuts",
    "mixing_analysis",
    "passes",
    "required_size",
]
