"""Quotient graphs ``G/F_i`` with the maps ℓ_i and α_i, plain and weighted.

A ``QuotientStructure`` is the weight-free part: components of ``G - F_i``,
the quotient graph on them, ℓ_i (vertex to component) and α_i (edge to a
quotient vertex or a quotient edge). ``WeightedQuotient`` pairs a structure
with the induced weights w^i and w_e^i. Structures are built once per class
and cached per ``(graph, partition)`` in a ``QuotientSet``; their distance
matrices are computed on first use.
"""

import logging
import threading
from collections.abc import Iterable
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .exceptions import NotCoarser
from .graph import (
    DistanceMatrix,
    Graph,
    Weight,
    all_pairs_distances,
    as_weights,
    edge_distance_d1,
    vertex_edge_distance,
)
from .theta import EdgePartition, is_c_partition

_LOGGER = logging.getLogger(__name__)

# Distinct (graph, partition) pairs whose quotients are kept alive.
QUOTIENT_CACHE_SIZE = 16


@dataclass(frozen=True)
class QuotientVertex:
    """α_i(e) when both endpoints of ``e`` lie in component ``index``."""

    index: int


@dataclass(frozen=True)
class QuotientEdge:
    """α_i(e) when ``e`` crosses between components; ``index`` is the quotient edge."""

    index: int


type Alpha = QuotientVertex | QuotientEdge


def components_without(
    graph: Graph, class_edges: Iterable[int]
) -> tuple[int, tuple[int, ...]]:
    """Label every vertex with its component in ``graph`` minus ``class_edges``.

    Labels run from 0 and are assigned in order of each component's smallest
    vertex.
    """
    if graph.vertex_count == 0:
        return 0, ()
    kept = np.ones(graph.edge_count, dtype=bool)
    kept[np.fromiter(set(class_edges), dtype=np.intp)] = False
    first, second = graph.endpoint_arrays
    adjacency = csr_matrix(
        (np.ones(int(kept.sum()), dtype=np.int8), (first[kept], second[kept])),
        shape=(graph.vertex_count, graph.vertex_count),
    )
    _, raw = connected_components(adjacency, directed=False)
    labels: dict[int, int] = {}
    ell = tuple(labels.setdefault(label, len(labels)) for label in raw.tolist())
    return len(labels), ell


@dataclass(frozen=True, eq=False)
class QuotientStructure:
    """``G/F`` for one edge class ``F``, with ℓ and α, before any weights."""

    quotient: Graph
    ell: tuple[int, ...] = field(repr=False)
    alpha: tuple[Alpha, ...] = field(repr=False)
    members: tuple[tuple[int, ...], ...] = field(repr=False)
    crossing: tuple[tuple[int, ...], ...] = field(repr=False)

    @cached_property
    def distances(self) -> DistanceMatrix:
        """All-pairs distances of the quotient graph."""
        return all_pairs_distances(self.quotient)

    @cached_property
    def alpha_positions(self) -> np.ndarray:
        """Per original edge, its α image as a row of ``object_distances``.

        Quotient vertices occupy rows ``0 .. K-1`` and quotient edges the rows
        after them.
        """
        offset = self.quotient.vertex_count
        positions = np.fromiter(
            (
                image.index if isinstance(image, QuotientVertex) else offset + image.index
                for image in self.alpha
            ),
            dtype=np.intp,
            count=len(self.alpha),
        )
        positions.setflags(write=False)
        return positions

    @cached_property
    def object_distances(self) -> np.ndarray:
        """Distances between all quotient vertices and edges, in one table.

        Vertex-vertex entries are hop distances, vertex-edge entries
        ``d(X, F)`` and edge-edge entries ``d¹(E, F)``, all in the quotient.
        """
        dm = self.distances
        dm.require_connected()
        table = np.block(
            [
                [dm.matrix, dm.vertex_edge],
                [dm.vertex_edge.T, dm.edge_d1],
            ]
        )
        table.setflags(write=False)
        return table

    def mixed_distance(self, image: Alpha, other: Alpha) -> int:
        """Distance between two α images inside this quotient."""
        dm = self.distances
        match image, other:
            case QuotientVertex(index=x), QuotientVertex(index=y):
                return dm[x, y]
            case QuotientVertex(index=x), QuotientEdge(index=f):
                return vertex_edge_distance(dm, x, f)
            case QuotientEdge(index=e), QuotientVertex(index=y):
                return vertex_edge_distance(dm, y, e)
            case QuotientEdge(index=e), QuotientEdge(index=f):
                return edge_distance_d1(dm, e, f)
        raise TypeError(f"not an α image: {image!r}, {other!r}")  # pragma: no cover

    def component_vertex_weights(self, vertex_weights: np.ndarray) -> np.ndarray:
        """Per quotient vertex, the total original vertex weight inside it."""
        return _accumulate(self.quotient.vertex_count, list(self.ell), vertex_weights)


def quotient_structure(graph: Graph, class_edges: Iterable[int]) -> QuotientStructure:
    """Build ``G/F`` with ℓ and α for the edge set ``class_edges``."""
    count, ell = components_without(graph, class_edges)
    pairs: dict[tuple[int, int], list[int]] = {}
    for index, (u, v) in enumerate(graph.edges):
        if ell[u] != ell[v]:
            key = (min(ell[u], ell[v]), max(ell[u], ell[v]))
            pairs.setdefault(key, []).append(index)
    quotient_edges = sorted(pairs)
    position = {pair: index for index, pair in enumerate(quotient_edges)}
    alpha: list[Alpha] = []
    for u, v in graph.edges:
        if ell[u] == ell[v]:
            alpha.append(QuotientVertex(ell[u]))
        else:
            alpha.append(QuotientEdge(position[min(ell[u], ell[v]), max(ell[u], ell[v])]))
    members: list[list[int]] = [[] for _ in range(count)]
    for vertex, label in enumerate(ell):
        members[label].append(vertex)
    return QuotientStructure(
        quotient=Graph(count, tuple(quotient_edges)),
        ell=ell,
        alpha=tuple(alpha),
        members=tuple(tuple(group) for group in members),
        crossing=tuple(tuple(pairs[pair]) for pair in quotient_edges),
    )


def _accumulate(size: int, targets: list[int], values: np.ndarray) -> np.ndarray:
    """Sum ``values`` into ``size`` buckets, keeping the weights' dtype."""
    out = np.zeros(size, dtype=values.dtype)
    if targets:
        np.add.at(out, np.asarray(targets, dtype=np.intp), values)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class WeightedQuotient:
    """``(G/F_i, w^i, w_e^i)`` together with ℓ_i and α_i.

    ``vertex_weight[X]`` sums the input weights of edges with both ends in
    component ``X``; ``edge_weight[F]`` sums those crossing along quotient edge
    ``F``. Every input edge lands in exactly one of the two.
    """

    structure: QuotientStructure
    vertex_weight: np.ndarray = field(repr=False)
    edge_weight: np.ndarray = field(repr=False)

    @property
    def quotient(self) -> Graph:
        """The quotient graph ``G/F_i``."""
        return self.structure.quotient

    @property
    def ell(self) -> tuple[int, ...]:
        """ℓ_i: original vertex to quotient vertex."""
        return self.structure.ell

    @property
    def alpha(self) -> tuple[Alpha, ...]:
        """α_i: original edge to quotient vertex or quotient edge."""
        return self.structure.alpha

    @property
    def distances(self) -> DistanceMatrix:
        """Distances of the quotient graph (shared with the structure)."""
        return self.structure.distances

    def component_vertex_weights(self, vertex_weights: np.ndarray) -> np.ndarray:
        """Per quotient vertex, the total original vertex weight inside it."""
        return self.structure.component_vertex_weights(vertex_weights)


def weigh(structure: QuotientStructure, edge_weights: np.ndarray) -> WeightedQuotient:
    """Attach the induced weights w^i and w_e^i to a quotient structure."""
    inside: list[int] = []
    inside_targets: list[int] = []
    across: list[int] = []
    across_targets: list[int] = []
    for index, image in enumerate(structure.alpha):
        if isinstance(image, QuotientVertex):
            inside.append(index)
            inside_targets.append(image.index)
        else:
            across.append(index)
            across_targets.append(image.index)
    return WeightedQuotient(
        structure=structure,
        vertex_weight=_accumulate(
            structure.quotient.vertex_count, inside_targets, edge_weights[inside]
        ),
        edge_weight=_accumulate(
            structure.quotient.edge_count, across_targets, edge_weights[across]
        ),
    )


def build_quotient(
    graph: Graph,
    edge_weights: "np.ndarray | list[Weight] | None",
    class_edges: Iterable[int],
) -> WeightedQuotient:
    """Build the weighted quotient ``(G/F, w^F, w_e^F)`` for one edge class."""
    weights = as_weights(edge_weights, graph.edge_count, "edge")
    return weigh(quotient_structure(graph, class_edges), weights)


class QuotientSet:
    """The quotients of one graph over every class of one partition.

    Structures are built on first request and kept; safe to share between the
    worker threads of a pool.
    """

    def __init__(self, graph: Graph, partition: EdgePartition) -> None:
        """Bind the graph and partition; nothing is built yet."""
        self.graph = graph
        self.partition = partition
        self._structures: dict[int, QuotientStructure] = {}
        self._lock = threading.Lock()
        self._verified = False

    def __len__(self) -> int:
        """Number of quotients (classes)."""
        return len(self.partition)

    def structure(self, index: int) -> QuotientStructure:
        """The quotient for class ``index``, built on first use."""
        with self._lock:
            cached = self._structures.get(index)
        if cached is not None:
            return cached
        built = quotient_structure(self.graph, self.partition.classes[index])
        _LOGGER.debug(
            "Quotient %d: %d components, %d quotient edges",
            index,
            built.quotient.vertex_count,
            built.quotient.edge_count,
        )
        with self._lock:
            return self._structures.setdefault(index, built)

    def weighted(self, index: int, edge_weights: np.ndarray) -> WeightedQuotient:
        """The quotient for class ``index`` under ``edge_weights``."""
        return weigh(self.structure(index), edge_weights)

    def require_coarser(self, dm: DistanceMatrix) -> None:
        """Raise ``NotCoarser`` unless the partition is a c-partition.

        The check needs Θ* (quadratic in the edge count), so its success is
        remembered for the lifetime of this set.
        """
        if self._verified:
            return
        if not is_c_partition(self.graph, dm, self.partition):
            raise NotCoarser(
                "partition splits a Θ*-class; the cut method needs a coarser one"
            )
        self._verified = True

    def edge_distance(self, edge: int, other: int) -> int:
        """``Σ_i d_{G/F_i}(α_i(e), α_i(f))``."""
        total = 0
        for index in range(len(self)):
            structure = self.structure(index)
            total += structure.mixed_distance(
                structure.alpha[edge], structure.alpha[other]
            )
        return total

    def vertex_distance(self, u: int, v: int) -> int:
        """``Σ_i d_{G/F_i}(ℓ_i(u), ℓ_i(v))``."""
        total = 0
        for index in range(len(self)):
            structure = self.structure(index)
            total += structure.distances[structure.ell[u], structure.ell[v]]
        return total

    def edge_distance_matrix(self) -> np.ndarray:
        """The ``m x m`` table of ``edge_distance`` for every edge pair."""
        edge_count = self.graph.edge_count
        total = np.zeros((edge_count, edge_count), dtype=np.int64)
        for index in range(len(self)):
            structure = self.structure(index)
            positions = structure.alpha_positions
            total += structure.object_distances[np.ix_(positions, positions)]
        return total

    def vertex_distance_matrix(self) -> np.ndarray:
        """The ``n x n`` table of ``vertex_distance`` for every vertex pair."""
        n = self.graph.vertex_count
        total = np.zeros((n, n), dtype=np.int64)
        for index in range(len(self)):
            structure = self.structure(index)
            ell = np.asarray(structure.ell, dtype=np.intp)
            total += structure.distances.matrix[np.ix_(ell, ell)]
        return total


@lru_cache(maxsize=QUOTIENT_CACHE_SIZE)
def quotient_set(graph: Graph, partition: EdgePartition) -> QuotientSet:
    """The shared ``QuotientSet`` for ``(graph, partition)``."""
    return QuotientSet(graph, partition)


def edge_distance_via_quotients(
    graph: Graph,
    dm: DistanceMatrix,
    c_partition: EdgePartition,
    edge: int,
    other: int,
) -> int:
    """``d¹(e, f)`` recovered as the sum of α-image distances over all quotients.

    Raises ``NotCoarser`` when ``c_partition`` is not coarser than Θ*.
    """
    quotients = quotient_set(graph, c_partition)
    quotients.require_coarser(dm)
    return quotients.edge_distance(edge, other)


def vertex_distance_via_quotients(
    graph: Graph,
    dm: DistanceMatrix,
    c_partition: EdgePartition,
    u: int,
    v: int,
) -> int:
    """``d(u, v)`` recovered as the sum of ℓ-image distances over all quotients."""
    quotients = quotient_set(graph, c_partition)
    quotients.require_coarser(dm)
    return quotients.vertex_distance(u, v)
