"""Balanced unitary dual functors on the matrix category of a bipartite graph,
and the corresponding graph planar algebras."""

from .errors import GpaLabError, InputError
from .graph import BipartiteGraph, Path, enumerate_loops, enumerate_paths, load_graph, parse_graph
from .grading import GroupoidWeight, lopsided_pi, standard_pi, trivial_pi
from .spectral import PerronFrobeniusData, perron_frobenius

__version__ = "0.1.0"

__all__ = [
    "BipartiteGraph",
    "GpaLabError",
    "GroupoidWeight",
    "InputError",
    "Path",
    "PerronFrobeniusData",
    "enumerate_loops",
    "enumerate_paths",
    "load_graph",
    "lopsided_pi",
    "parse_graph",
    "perron_frobenius",
    "standard_pi",
    "trivial_pi",
]
