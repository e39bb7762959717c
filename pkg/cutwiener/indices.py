"""Distance-based indices computed straight from their defining double sums.

Each index is a quadratic form ``Σ_i Σ_j a_i T_ij b_j`` over a distance table
``T`` that ``DistanceMatrix`` already holds (vertex-vertex, vertex-edge,
``d¹`` or ``d⁰``). Integer weights are summed exactly: in int64 while a bound
on the result fits, otherwise in arbitrary precision. Float weights go through
numpy row partials and a final ``math.fsum``.

The ``*_oracle`` functions recompute the same values through networkx BFS and
its line graph, sharing no code with the numpy path. Tests and ``verify`` use
them as the reference.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .const import (
    EXACTNESS_FLOAT,
    EXACTNESS_INTEGER,
    FLOAT_REL_TOL,
    INDEX_KEYS,
    INT64_SAFE_BOUND,
    METHOD_DIRECT,
    REPORT_METHOD_ORACLE,
)
from .exceptions import Disconnected
from .graph import DistanceMatrix, Graph, Weight, as_weights, is_exact
from .models import IndexReportDocument

_LOGGER = logging.getLogger(__name__)


def _largest(values: np.ndarray) -> int:
    return int(max(values.tolist(), default=0))


def bilinear_sum(
    left: np.ndarray, table: np.ndarray, right: np.ndarray, *, halve: bool
) -> Weight:
    """``Σ_i Σ_j left[i] table[i, j] right[j]``, halved for symmetric sums."""
    if left.size == 0 or right.size == 0:
        return 0
    if is_exact(left, right):
        bound = (
            _largest(left)
            * _largest(right)
            * int(table.max())
            * left.size
            * right.size
        )
        if bound < INT64_SAFE_BOUND:
            rows = table.astype(np.int64) @ right.astype(np.int64)
            total = int(left.astype(np.int64) @ rows)
        else:
            rows = table.astype(object) @ right.astype(object)
            total = int(left.astype(object) @ rows)
        # A symmetric table with a zero diagonal counts every pair twice.
        return total // 2 if halve else total
    rows = table.astype(np.float64) @ right.astype(np.float64)
    total = math.fsum((left.astype(np.float64) * rows).tolist())
    return total / 2 if halve else total


def wiener(
    graph: Graph, dm: DistanceMatrix, w: Sequence[Weight] | np.ndarray | None = None
) -> Weight:
    """``W(G, w) = ½ Σ_u Σ_v w(u) w(v) d(u, v)``; unit weights when ``w`` is None."""
    dm.require_connected()
    weights = as_weights(w, graph.vertex_count, "vertex")
    return bilinear_sum(weights, dm.matrix, weights, halve=True)


def edge_wiener_hat(
    graph: Graph, dm: DistanceMatrix, w_e: Sequence[Weight] | np.ndarray | None = None
) -> Weight:
    """``Ŵ_e(G, w_e)``: the edge double sum over ``d¹``, halved."""
    dm.require_connected()
    weights = as_weights(w_e, graph.edge_count, "edge")
    return bilinear_sum(weights, dm.edge_d1, weights, halve=True)


def edge_wiener(
    graph: Graph, dm: DistanceMatrix, w_e: Sequence[Weight] | np.ndarray | None = None
) -> Weight:
    """``W_e(G, w_e)``: the edge double sum over the line-graph distance ``d⁰``."""
    dm.require_connected()
    weights = as_weights(w_e, graph.edge_count, "edge")
    return bilinear_sum(weights, dm.edge_d0, weights, halve=True)


def vertex_edge_wiener(
    graph: Graph,
    dm: DistanceMatrix,
    w: Sequence[Weight] | np.ndarray | None = None,
    w_e: Sequence[Weight] | np.ndarray | None = None,
) -> Weight:
    """``W_ve(G, w, w_e) = Σ_v Σ_e w(v) w_e(e) d(v, e)``, every pair once."""
    dm.require_connected()
    weights = as_weights(w, graph.vertex_count, "vertex")
    edge_weights = as_weights(w_e, graph.edge_count, "edge")
    return bilinear_sum(weights, dm.vertex_edge, edge_weights, halve=False)


def edge_pair_term(edge_weights: np.ndarray) -> Weight:
    """``Σ_{e<f} w_e(e) w_e(f)``; ``C(m, 2)`` for unit weights.

    The gap between ``W_e`` and ``Ŵ_e``, since ``d⁰ = d¹ + 1`` off the diagonal.
    """
    if is_exact(edge_weights):
        values = [int(value) for value in edge_weights.tolist()]
        total = sum(values)
        return (total * total - sum(value * value for value in values)) // 2
    values = edge_weights.astype(np.float64).tolist()
    total = math.fsum(values)
    return (total * total - math.fsum(value * value for value in values)) / 2


def same_value(first: Weight, second: Weight) -> bool:
    """Exact equality for integers, ``FLOAT_REL_TOL`` relative for floats."""
    if isinstance(first, int) and isinstance(second, int):
        return first == second
    return math.isclose(first, second, rel_tol=FLOAT_REL_TOL, abs_tol=FLOAT_REL_TOL)


# Oracle ---------------------------------------------------------------------


def _nx_connected(nx_graph: nx.Graph) -> nx.Graph:
    if nx_graph.number_of_nodes() == 0 or not nx.is_connected(nx_graph):
        raise Disconnected(
            f"graph with {nx_graph.number_of_nodes()} vertices is not connected"
        )
    return nx_graph


def _total(terms: list[Weight], exact: bool) -> Weight:
    return sum(int(term) for term in terms) if exact else math.fsum(terms)


def _weighted_wiener_nx(
    nx_graph: nx.Graph, weights: dict[object, Weight], exact: bool
) -> Weight:
    """½ Σ w(u) w(v) d(u, v) over a networkx graph, by BFS from every node."""
    terms: list[Weight] = []
    for source, lengths in nx.all_pairs_shortest_path_length(nx_graph):
        for target, distance in lengths.items():
            terms.append(weights[source] * weights[target] * distance)
    total = _total(terms, exact)
    return total // 2 if exact else total / 2


def wiener_oracle(
    graph: Graph, vertex_weights: Sequence[Weight] | np.ndarray | None = None
) -> Weight:
    """``W(G, w)`` by networkx BFS."""
    weights = as_weights(vertex_weights, graph.vertex_count, "vertex")
    nx_graph = _nx_connected(graph.to_networkx())
    return _weighted_wiener_nx(
        nx_graph, dict(enumerate(weights.tolist())), is_exact(weights)
    )


def edge_wiener_oracle(
    graph: Graph, edge_weights: Sequence[Weight] | np.ndarray | None = None
) -> Weight:
    """``W_e(G, w_e)`` as the vertex-weighted Wiener index of ``L(G)``.

    The line graph is networkx's own, so this shares nothing with ``line_graph``
    or the distance tables.
    """
    weights = as_weights(edge_weights, graph.edge_count, "edge")
    nx_graph = _nx_connected(graph.to_networkx())
    line = nx.line_graph(nx_graph)
    if line.number_of_nodes() == 0:
        return 0
    values = weights.tolist()
    by_pair = {
        frozenset((u, v)): values[index]
        for u, v, index in nx_graph.edges(data="index")
    }
    return _weighted_wiener_nx(
        line, {node: by_pair[frozenset(node)] for node in line.nodes}, is_exact(weights)
    )


def vertex_edge_wiener_oracle(
    graph: Graph,
    vertex_weights: Sequence[Weight] | np.ndarray | None = None,
    edge_weights: Sequence[Weight] | np.ndarray | None = None,
) -> Weight:
    """``W_ve(G, w, w_e)`` by networkx BFS from every vertex."""
    weights = as_weights(vertex_weights, graph.vertex_count, "vertex")
    edge_w = as_weights(edge_weights, graph.edge_count, "edge")
    nx_graph = _nx_connected(graph.to_networkx())
    vertex_values = weights.tolist()
    edge_values = edge_w.tolist()
    terms: list[Weight] = []
    for source, lengths in nx.all_pairs_shortest_path_length(nx_graph):
        for index, (x, y) in enumerate(graph.edges):
            distance = min(lengths[x], lengths[y])
            terms.append(vertex_values[source] * edge_values[index] * distance)
    return _total(terms, is_exact(weights, edge_w))


# Reports --------------------------------------------------------------------


@dataclass(frozen=True)
class IndexReport:
    """The four indices of one weighted graph as computed by one method.

    For unit edge weights ``we == we_hat + C(m, 2)``; for general edge weights
    the gap is ``edge_pair_term``.
    """

    w: Weight
    we_hat: Weight
    we: Weight
    wve: Weight
    method: str
    exactness: str
    classes: int | None = None
    elapsed_ms: float | None = field(default=None, compare=False)

    def value(self, key: str) -> Weight:
        """The index reported under JSON key ``key`` (``W``, ``We``, ...)."""
        return {
            INDEX_KEYS["w"]: self.w,
            INDEX_KEYS["we"]: self.we,
            INDEX_KEYS["wehat"]: self.we_hat,
            INDEX_KEYS["wve"]: self.wve,
        }[key]

    def as_dict(
        self, keys: Sequence[str] = tuple(INDEX_KEYS.values())
    ) -> IndexReportDocument:
        """JSON document with the selected index keys, in a fixed key order."""
        document: IndexReportDocument = {}
        for key in INDEX_KEYS.values():
            if key in keys:
                document[key] = self.value(key)  # type: ignore[literal-required]
        document["method"] = self.method
        document["exactness"] = self.exactness
        if self.classes is not None:
            document["classes"] = self.classes
        if self.elapsed_ms is not None:
            document["elapsed_ms"] = round(self.elapsed_ms, 3)
        return document


def exactness_of(*weights: np.ndarray) -> str:
    """``integer`` when every weight vector holds integers, else ``float``."""
    return EXACTNESS_INTEGER if is_exact(*weights) else EXACTNESS_FLOAT


def direct_report(
    graph: Graph, dm: DistanceMatrix, vertex_weights: np.ndarray, edge_weights: np.ndarray
) -> IndexReport:
    """All four indices from the defining sums."""
    report = IndexReport(
        w=wiener(graph, dm, vertex_weights),
        we_hat=edge_wiener_hat(graph, dm, edge_weights),
        we=edge_wiener(graph, dm, edge_weights),
        wve=vertex_edge_wiener(graph, dm, vertex_weights, edge_weights),
        method=METHOD_DIRECT,
        exactness=exactness_of(vertex_weights, edge_weights),
    )
    _LOGGER.debug("Direct indices: %s", report)
    return report


def oracle_report(
    graph: Graph, vertex_weights: np.ndarray, edge_weights: np.ndarray
) -> IndexReport:
    """All four indices through networkx; ``Ŵ_e`` follows from ``W_e``."""
    we = edge_wiener_oracle(graph, edge_weights)
    return IndexReport(
        w=wiener_oracle(graph, vertex_weights),
        we_hat=we - edge_pair_term(edge_weights),
        we=we,
        wve=vertex_edge_wiener_oracle(graph, vertex_weights, edge_weights),
        method=REPORT_METHOD_ORACLE,
        exactness=exactness_of(vertex_weights, edge_weights),
    )

