"""Tools for 4-critical graphs of small Ore-degree: colouring, Ore-compositions,
potentials, discharging and an exhaustive small-graph census."""

from __future__ import annotations

from .census import run_census
from .coloring import Coloring, chromatic_number, enumerate_colorings, find_coloring, is_k_critical
from .discharge import run_discharging
from .graph import Graph, GraphError, VertexSet, canonical_form, emit_graph6, ore_degree, parse_graph6
from .ore import K4, OreCertificate, h7, is_4_ore, ore_compose
from .potential import min_potential, potential

__all__ = [
    "Coloring", "Graph", "GraphError", "K4", "OreCertificate", "VertexSet", "canonical_form",
    "chromatic_number", "emit_graph6", "enumerate_colorings", "find_coloring", "h7", "is_4_ore",
    "is_k_critical", "min_potential", "ore_compose", "ore_degree", "parse_graph6", "potential",
    "run_census", "run_discharging",
]
__version__ = "0.1.0"
