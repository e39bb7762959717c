"""Graph representation, validation and the distance functions.

Edges are identified by their position in ``Graph.edges``, never by their
endpoint pair, so weight vectors and partitions line up with them positionally.
Everything in here is immutable once built: ``Graph`` is a frozen dataclass and
the arrays ``DistanceMatrix`` exposes are flagged read-only.
"""

import logging
import math
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import networkx as nx
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from .const import DISTANCE_DTYPE, UNREACHABLE, worker_count
from .exceptions import (
    BadIndex,
    Disconnected,
    DuplicateEdge,
    InvalidWeights,
    SelfLoop,
)

_LOGGER = logging.getLogger(__name__)

# Sources per BFS work item. Below this many vertices the whole matrix is one
# item and no pool is started.
BFS_CHUNK_ROWS = 256

type Weight = int | float
type Edge = tuple[int, int]


@dataclass(frozen=True)
class Graph:
    """A simple finite undirected graph with indexed vertices and edges.

    Construction does not validate; call ``validate`` before trusting a graph
    that came from outside (a file, a user). The generators build valid graphs.
    """

    vertex_count: int
    edges: tuple[Edge, ...]

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[Sequence[int]]) -> "Graph":
        """Build a graph from any iterable of endpoint pairs."""
        return cls(int(vertex_count), tuple((int(u), int(v)) for u, v in edges))

    @property
    def edge_count(self) -> int:
        """Number of edges."""
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per vertex, the ``(neighbour, edge index)`` pairs in edge order."""
        rows: list[list[tuple[int, int]]] = [[] for _ in range(self.vertex_count)]
        for index, (u, v) in enumerate(self.edges):
            rows[u].append((v, index))
            rows[v].append((u, index))
        return tuple(tuple(row) for row in rows)

    @cached_property
    def neighbor_sets(self) -> tuple[frozenset[int], ...]:
        """Open neighbourhood ``N(v)`` of every vertex."""
        return tuple(frozenset(n for n, _ in row) for row in self.adjacency)

    @cached_property
    def endpoint_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """The first and second endpoint of every edge, as index arrays."""
        pairs = np.asarray(self.edges, dtype=np.intp).reshape(-1, 2)
        first, second = pairs[:, 0].copy(), pairs[:, 1].copy()
        first.setflags(write=False)
        second.setflags(write=False)
        return first, second

    def csr(self) -> csr_matrix:
        """Symmetric 0/1 adjacency matrix in CSR form."""
        first, second = self.endpoint_arrays
        rows = np.concatenate([first, second])
        cols = np.concatenate([second, first])
        data = np.ones(rows.shape[0], dtype=np.int8)
        return csr_matrix(
            (data, (rows, cols)), shape=(self.vertex_count, self.vertex_count)
        )

    def to_networkx(self) -> nx.Graph:
        """Convert to a ``networkx.Graph``; each edge keeps its ``index``."""
        nx_graph = nx.Graph()
        nx_graph.add_nodes_from(range(self.vertex_count))
        nx_graph.add_edges_from(
            (u, v, {"index": index}) for index, (u, v) in enumerate(self.edges)
        )
        return nx_graph


class GraphValidation(NamedTuple):
    """Outcome of ``validate``: the graph is simple; ``connected`` says more."""

    connected: bool
    components: int


def validate(graph: Graph) -> GraphValidation:
    """Check simplicity and index ranges, and report connectivity.

    Raises ``BadIndex``, ``SelfLoop`` or ``DuplicateEdge`` for the first
    offending edge in edge order. Connectivity is reported, not enforced: a
    disconnected graph is a valid graph, it just has no finite indices.
    """
    seen: dict[frozenset[int], int] = {}
    for index, (u, v) in enumerate(graph.edges):
        if not (0 <= u < graph.vertex_count and 0 <= v < graph.vertex_count):
            raise BadIndex(index, (u, v))
        if u == v:
            raise SelfLoop(index, (u, v))
        key = frozenset((u, v))
        if key in seen:
            raise DuplicateEdge(index, (u, v))
        seen[key] = index
    components = count_components(graph)
    return GraphValidation(connected=components == 1, components=components)


def count_components(graph: Graph) -> int:
    """Number of connected components (0 for the empty graph)."""
    if graph.vertex_count == 0:
        return 0
    count, _ = connected_components(graph.csr(), directed=False)
    return int(count)


def is_connected(graph: Graph) -> bool:
    """Whether the graph has exactly one component."""
    return count_components(graph) == 1


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """All-pairs hop distances of ``graph``.

    ``matrix[u, v]`` is ``d_G(u, v)``, or ``UNREACHABLE`` when no path exists.
    The vertex-edge and edge-edge tables are derived lazily from it.
    """

    graph: Graph
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        """Freeze the underlying array."""
        self.matrix.setflags(write=False)

    def __getitem__(self, pair: tuple[int, int]) -> int:
        """Return ``d_G(u, v)`` for ``pair = (u, v)``."""
        return int(self.matrix[pair])

    @cached_property
    def connected(self) -> bool:
        """Whether every entry is finite (and the graph is non-empty)."""
        return self.graph.vertex_count > 0 and not bool(
            (self.matrix == UNREACHABLE).any()
        )

    def require_connected(self) -> None:
        """Raise ``Disconnected`` unless every pair is reachable."""
        if not self.connected:
            raise Disconnected(
                f"graph with {self.graph.vertex_count} vertices is not connected"
            )

    @cached_property
    def vertex_edge(self) -> np.ndarray:
        """``n x m`` table of ``d_G(v, e) = min(d(v, x), d(v, y))``."""
        self.require_connected()
        first, second = self.graph.endpoint_arrays
        table = np.minimum(self.matrix[:, first], self.matrix[:, second])
        table.setflags(write=False)
        return table

    @cached_property
    def edge_d1(self) -> np.ndarray:
        """``m x m`` table of the endpoint-minimum edge distance ``d¹``."""
        self.require_connected()
        first, second = self.graph.endpoint_arrays
        table = np.minimum.reduce(
            [
                self.matrix[np.ix_(first, first)],
                self.matrix[np.ix_(first, second)],
                self.matrix[np.ix_(second, first)],
                self.matrix[np.ix_(second, second)],
            ]
        )
        table.setflags(write=False)
        return table

    @cached_property
    def edge_d0(self) -> np.ndarray:
        """``m x m`` table of the line-graph edge distance ``d⁰``."""
        table = self.edge_d1 + 1
        np.fill_diagonal(table, 0)
        table.setflags(write=False)
        return table


def all_pairs_distances(graph: Graph) -> DistanceMatrix:
    """Run a unit-weight search from every vertex and collect the hop counts.

    Sources are split into chunks of ``BFS_CHUNK_ROWS`` rows; with more than one
    chunk they run on a pool capped by ``CUTWIENER_THREADS``, each writing its
    own disjoint block of rows.
    """
    n = graph.vertex_count
    matrix = np.full((n, n), UNREACHABLE, dtype=DISTANCE_DTYPE)
    if n == 0:
        return DistanceMatrix(graph, matrix)
    adjacency = graph.csr()

    def _rows(start: int) -> None:
        stop = min(start + BFS_CHUNK_ROWS, n)
        block = shortest_path(
            adjacency,
            method="D",
            directed=False,
            unweighted=True,
            indices=np.arange(start, stop),
        )
        block = np.atleast_2d(block)
        finite = np.isfinite(block)
        matrix[start:stop][finite] = block[finite].astype(DISTANCE_DTYPE)
        _LOGGER.debug("Distances for sources %d..%d done", start, stop - 1)

    starts = range(0, n, BFS_CHUNK_ROWS)
    if len(starts) == 1:
        _rows(0)
    else:
        with ThreadPoolExecutor(max_workers=worker_count()) as pool:
            list(pool.map(_rows, starts))
    return DistanceMatrix(graph, matrix)


def vertex_edge_distance(dm: DistanceMatrix, vertex: int, edge: int) -> int:
    """``d_G(v, e)``: the smaller distance from ``vertex`` to an endpoint."""
    x, y = dm.graph.edges[edge]
    return min(dm[vertex, x], dm[vertex, y])


def edge_distance_d1(dm: DistanceMatrix, edge: int, other: int) -> int:
    """``d¹(e, f)``: the smallest distance between an endpoint of each edge."""
    x, y = dm.graph.edges[edge]
    a, b = dm.graph.edges[other]
    return min(dm[x, a], dm[x, b], dm[y, a], dm[y, b])


def edge_distance_d0(dm: DistanceMatrix, edge: int, other: int) -> int:
    """``d⁰(e, f)``: the distance between ``e`` and ``f`` in the line graph."""
    if edge == other:
        return 0
    d1 = edge_distance_d1(dm, edge, other)
    if d1 == UNREACHABLE:
        return UNREACHABLE
    return d1 + 1


def line_graph(graph: Graph) -> Graph:
    """Build ``L(G)``: vertex ``k`` is edge ``k``; edges join edges sharing an end.

    Edges of the result are sorted pairs ``(e, f)`` with ``e < f``, in
    lexicographic order. In a simple graph two edges share at most one
    endpoint, so no pair is produced twice.
    """
    pairs: list[Edge] = []
    for row in graph.adjacency:
        incident = sorted(index for _, index in row)
        pairs.extend(
            (incident[i], incident[j])
            for i in range(len(incident))
            for j in range(i + 1, len(incident))
        )
    pairs.sort()
    return Graph(graph.edge_count, tuple(pairs))


def as_weights(
    values: Sequence[Weight] | np.ndarray | None, count: int, what: str
) -> np.ndarray:
    """Normalise a weight vector: int64 for integers, float64 otherwise.

    ``None`` means unit weights. Raises ``InvalidWeights`` for a wrong length,
    a non-numeric entry, a negative entry or a non-finite float.
    """
    if values is None:
        return np.ones(count, dtype=np.int64)
    array = np.asarray(values)
    if array.size == 0:
        array = array.astype(np.int64)
    if array.dtype == np.bool_ or array.dtype.kind not in "iuf":
        if array.dtype.kind == "O" and all(
            isinstance(value, int) and not isinstance(value, bool) for value in array
        ):
            return _checked(array, count, what)
        raise InvalidWeights(f"{what} weights must be numbers, got {array.dtype}")
    if array.dtype.kind == "f" and not np.isfinite(array).all():
        raise InvalidWeights(f"{what} weights must be finite")
    converted = array.astype(np.float64 if array.dtype.kind == "f" else np.int64)
    return _checked(converted, count, what)


def _checked(array: np.ndarray, count: int, what: str) -> np.ndarray:
    if array.shape != (count,):
        raise InvalidWeights(
            f"expected {count} {what} weights, got shape {array.shape}"
        )
    if (array < 0).any():
        raise InvalidWeights(f"{what} weights must be non-negative")
    array.setflags(write=False)
    return array


def is_exact(*weights: np.ndarray) -> bool:
    """Whether every weight vector holds integers (integer-mode arithmetic)."""
    return all(w.dtype.kind in "iuO" for w in weights)


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """A graph with one weight per vertex and one per edge."""

    graph: Graph
    vertex_weights: np.ndarray = field(repr=False)
    edge_weights: np.ndarray = field(repr=False)

    @classmethod
    def build(
        cls,
        graph: Graph,
        vertex_weights: Sequence[Weight] | np.ndarray | None = None,
        edge_weights: Sequence[Weight] | np.ndarray | None = None,
    ) -> "WeightedGraph":
        """Attach weights (unit where omitted) after checking them."""
        return cls(
            graph,
            as_weights(vertex_weights, graph.vertex_count, "vertex"),
            as_weights(edge_weights, graph.edge_count, "edge"),
        )

    @property
    def exact(self) -> bool:
        """Whether all weights are integers."""
        return is_exact(self.vertex_weights, self.edge_weights)


def weight_total(weights: np.ndarray) -> Weight:
    """Sum of a weight vector, exact for integers and ``fsum`` for floats."""
    if weights.dtype.kind == "f":
        return math.fsum(weights.tolist())
    return sum(int(value) for value in weights.tolist())
