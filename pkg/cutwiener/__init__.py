"""Wiener-type indices of weighted graphs by the generalized cut method.

The public surface re-exported here covers the common path: build or read a
graph, compute its distances, and evaluate the indices directly, by the cut
method over a c-partition, or through the networkx oracle.
"""

from .coordinator import (
    CutMethodCoordinator,
    edge_wiener_cut,
    edge_wiener_hat_cut,
    evaluate,
    wiener_cut,
)
from .edgelist import parse_edge_list, read_edge_list, write_edge_list
from .exceptions import CutWienerError
from .generators import GridHexSpec, closed_formula_we, gen_gmn
from .graph import Graph, WeightedGraph, all_pairs_distances, validate
from .indices import (
    IndexReport,
    edge_wiener,
    edge_wiener_hat,
    edge_wiener_oracle,
    vertex_edge_wiener,
    wiener,
)
from .reduction import reduce_fully, reduce_once, twin_classes
from .theta import EdgePartition, theta_star_partition

__all__ = [
    "CutMethodCoordinator",
    "CutWienerError",
    "EdgePartition",
    "Graph",
    "GridHexSpec",
    "IndexReport",
    "WeightedGraph",
    "all_pairs_distances",
    "closed_formula_we",
    "edge_wiener",
    "edge_wiener_cut",
    "edge_wiener_hat",
    "edge_wiener_hat_cut",
    "edge_wiener_oracle",
    "evaluate",
    "gen_gmn",
    "parse_edge_list",
    "read_edge_list",
    "reduce_fully",
    "reduce_once",
    "theta_star_partition",
    "twin_classes",
    "validate",
    "vertex_edge_wiener",
    "wiener",
    "wiener_cut",
    "write_edge_list",
]
