"""Twin-vertex reduction with correction terms.

Vertices with equal open neighbourhoods ("twins") are interchangeable for
distances to everything outside their class. A class ``C = {c_1..c_k}`` with
common neighbourhood ``N = {n_1..n_s}`` can therefore be collapsed onto one
kept vertex ``c``: its weight becomes the class total, each edge ``c n_j``
takes the total weight of the edges ``c_i n_j``, and three additive corrections
restore ``W``, ``Ŵ_e`` and ``W_ve`` of the original graph.

Every edge ``c_i n_j`` exists, so ``I(C)`` is the full ``k x s`` grid of them
and the corrections are sums over that grid only.
"""

import logging
import math
import random
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .exceptions import NotTwinClass
from .graph import Graph, Weight, as_weights

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class Corrections:
    """Additive terms ``ΔW``, ``ΔŴ_e``, ``ΔW_ve`` of one or more reductions."""

    w: Weight = 0
    we_hat: Weight = 0
    wve: Weight = 0

    def __add__(self, other: "Corrections") -> "Corrections":
        """Component-wise sum."""
        return Corrections(
            self.w + other.w, self.we_hat + other.we_hat, self.wve + other.wve
        )


@dataclass(frozen=True)
class TwinClasses:
    """Vertices grouped by open neighbourhood, classes by smallest member."""

    classes: tuple[tuple[int, ...], ...]

    @property
    def nontrivial(self) -> tuple[tuple[int, ...], ...]:
        """Classes with at least two vertices."""
        return tuple(group for group in self.classes if len(group) > 1)

    def __len__(self) -> int:
        """Number of classes."""
        return len(self.classes)


def twin_classes(graph: Graph) -> TwinClasses:
    """Group the vertices of ``graph`` by ``N(v)``.

    Twins are never adjacent: ``u ∈ N(v) = N(u)`` would need ``u ∈ N(u)``.
    """
    groups: dict[frozenset[int], list[int]] = {}
    for vertex, neighbours in enumerate(graph.neighbor_sets):
        groups.setdefault(neighbours, []).append(vertex)
    return TwinClasses(tuple(tuple(group) for group in groups.values()))


def _sum(values: Iterable[Weight]) -> Weight:
    items = list(values)
    if all(isinstance(value, int) for value in items):
        return sum(items)
    return math.fsum(items)


def _halve(value: Weight) -> Weight:
    return value // 2 if isinstance(value, int) else value / 2


def uniform_corrections(
    class_size: int, neighbour_count: int, vertex_weight: Weight, edge_weight: Weight
) -> Corrections:
    """Corrections when every ``w(c_i) = a`` and every edge of ``I(C)`` weighs ``b``.

    ``ΔW = a²k(k-1)``, ``ΔŴ_e = b²ks(k-1)(s-1)/2`` and ``ΔW_ve = abk(k-1)s``.
    ``k(k-1)`` is even, so the halving is exact for integers.
    """
    k, s = class_size, neighbour_count
    a, b = vertex_weight, edge_weight
    return Corrections(
        w=a * a * k * (k - 1),
        we_hat=_halve(b * b * k * s * (k - 1) * (s - 1)),
        wve=a * b * k * (k - 1) * s,
    )


@dataclass(frozen=True, eq=False)
class ReductionStep:
    """One collapse of a twin class onto its kept vertex.

    Indices in ``members``, ``kept`` and ``neighbors`` refer to the graph the
    step was applied to. ``vertex_map`` sends each of its vertices to the
    reduced graph (``None`` for removed ones); ``edge_map`` sends each edge to
    the edge it became, so ``c_i n_j`` maps to the kept ``c n_j``.
    """

    members: tuple[int, ...]
    kept: int
    neighbors: tuple[int, ...]
    graph: Graph
    vertex_weights: np.ndarray = field(repr=False)
    edge_weights: np.ndarray = field(repr=False)
    vertex_map: tuple[int | None, ...] = field(repr=False)
    edge_map: tuple[int, ...] = field(repr=False)
    corrections: Corrections
    class_vertex_weights: tuple[Weight, ...] = field(repr=False)
    class_edge_weights: tuple[Weight, ...] = field(repr=False)

    @property
    def removed(self) -> tuple[int, ...]:
        """``C \\ {c}``."""
        return tuple(vertex for vertex in self.members if vertex != self.kept)

    @property
    def trivial(self) -> bool:
        """A one-vertex class: the graph is unchanged and every correction is 0."""
        return len(self.members) == 1

    @property
    def uniform(self) -> Corrections | None:
        """Closed-form corrections, or None unless the class weights are uniform."""
        vertex_values = set(self.class_vertex_weights)
        edge_values = set(self.class_edge_weights)
        if len(vertex_values) != 1 or len(edge_values) > 1:
            return None
        edge_weight = edge_values.pop() if edge_values else 0
        return uniform_corrections(
            len(self.members), len(self.neighbors), vertex_values.pop(), edge_weight
        )


def _corrections(
    vertex_values: Sequence[Weight], grid: list[list[Weight]]
) -> Corrections:
    """The three corrections from ``w(c_i)`` and the ``k x s`` grid ``w_e(c_i n_j)``.

    ``I(C)_ij`` is every ``c_r n_t`` with ``r != i`` and ``t != j``; its weight
    is the grid total minus row ``i`` and column ``j`` plus the cell counted
    twice.
    """
    vertex_total = _sum(vertex_values)
    delta_w = vertex_total * vertex_total - _sum(v * v for v in vertex_values)

    rows = [_sum(row) for row in grid]
    columns = [_sum(column) for column in zip(*grid, strict=True)] if grid else []
    grid_total = _sum(rows)
    paired = _sum(
        cell * (grid_total - rows[i] - columns[j] + cell)
        for i, row in enumerate(grid)
        for j, cell in enumerate(row)
    )
    delta_we_hat = _halve(paired)

    delta_wve = _sum(
        weight * (grid_total - row_total)
        for weight, row_total in zip(vertex_values, rows, strict=True)
    )
    return Corrections(delta_w, delta_we_hat, delta_wve)


def _check_class(graph: Graph, members: Sequence[int]) -> tuple[int, ...]:
    group = tuple(sorted({int(vertex) for vertex in members}))
    if not group:
        raise NotTwinClass("empty vertex class")
    for vertex in group:
        if not 0 <= vertex < graph.vertex_count:
            raise NotTwinClass(f"vertex {vertex} outside 0..{graph.vertex_count - 1}")
    neighbours = graph.neighbor_sets[group[0]]
    for vertex in group[1:]:
        if graph.neighbor_sets[vertex] != neighbours:
            raise NotTwinClass(
                f"vertices {group[0]} and {vertex} have different neighbourhoods"
            )
    outside = [
        vertex
        for vertex in range(graph.vertex_count)
        if graph.neighbor_sets[vertex] == neighbours and vertex not in group
    ]
    if outside:
        raise NotTwinClass(f"class {list(group)} is missing its twins {outside}")
    return group


def reduce_once(
    graph: Graph,
    w: Sequence[Weight] | np.ndarray | None,
    w_e: Sequence[Weight] | np.ndarray | None,
    members: Sequence[int],
    kept: int | None = None,
) -> ReductionStep:
    """Collapse the twin class ``members`` onto ``kept`` (default: its smallest vertex).

    Raises ``NotTwinClass`` when ``members`` is not a whole twin class or
    ``kept`` is not in it. A one-vertex class yields a trivial step.
    """
    group = _check_class(graph, members)
    keep = group[0] if kept is None else int(kept)
    if keep not in group:
        raise NotTwinClass(f"kept vertex {keep} is not in class {list(group)}")
    vertex_weights = as_weights(w, graph.vertex_count, "vertex")
    edge_weights = as_weights(w_e, graph.edge_count, "edge")
    neighbours = tuple(sorted(graph.neighbor_sets[keep]))
    removed = set(group) - {keep}

    vertex_map: list[int | None] = []
    survivors: list[int] = []
    for vertex in range(graph.vertex_count):
        if vertex in removed:
            vertex_map.append(None)
        else:
            vertex_map.append(len(survivors))
            survivors.append(vertex)

    # Edge of the kept vertex towards each neighbour, in the input numbering.
    kept_edge = dict(graph.adjacency[keep])
    new_edges: list[tuple[int, int]] = []
    edge_position: dict[int, int] = {}
    for index, (u, v) in enumerate(graph.edges):
        if u not in removed and v not in removed:
            edge_position[index] = len(new_edges)
            mapped_u, mapped_v = vertex_map[u], vertex_map[v]
            assert mapped_u is not None and mapped_v is not None
            new_edges.append((mapped_u, mapped_v))
    edge_map: list[int] = []
    for index, (u, v) in enumerate(graph.edges):
        if index in edge_position:
            edge_map.append(edge_position[index])
        else:
            neighbour = v if u in removed else u
            edge_map.append(edge_position[kept_edge[neighbour]])

    new_vertex_weights = vertex_weights[survivors].copy()
    kept_position = vertex_map[keep]
    assert kept_position is not None
    new_vertex_weights[kept_position] = vertex_weights[list(group)].sum()
    new_edge_weights = np.zeros(len(new_edges), dtype=edge_weights.dtype)
    np.add.at(new_edge_weights, np.asarray(edge_map, dtype=np.intp), edge_weights)
    new_vertex_weights.setflags(write=False)
    new_edge_weights.setflags(write=False)

    vertex_values = vertex_weights.tolist()
    edge_values = edge_weights.tolist()
    class_vertex = [vertex_values[vertex] for vertex in group]
    incident = {vertex: dict(graph.adjacency[vertex]) for vertex in group}
    grid = [
        [edge_values[incident[vertex][neighbour]] for neighbour in neighbours]
        for vertex in group
    ]
    step = ReductionStep(
        members=group,
        kept=keep,
        neighbors=neighbours,
        graph=Graph(len(survivors), tuple(new_edges)),
        vertex_weights=new_vertex_weights,
        edge_weights=new_edge_weights,
        vertex_map=tuple(vertex_map),
        edge_map=tuple(edge_map),
        corrections=_corrections(class_vertex, grid),
        class_vertex_weights=tuple(class_vertex),
        class_edge_weights=tuple(cell for row in grid for cell in row),
    )
    if step.trivial:
        _LOGGER.warning(
            "Reducing one-vertex class {%d} leaves the graph unchanged", keep
        )
    else:
        _LOGGER.debug(
            "Reduced class %s onto %d (|N| = %d): %s",
            list(group),
            keep,
            len(neighbours),
            step.corrections,
        )
    return step


@dataclass(frozen=True, eq=False)
class ReductionResult:
    """Outcome of a reduction run: the reduced weighted graph and its history."""

    graph: Graph
    vertex_weights: np.ndarray = field(repr=False)
    edge_weights: np.ndarray = field(repr=False)
    steps: tuple[ReductionStep, ...]
    total: Corrections


def reduce_classes(
    graph: Graph,
    w: Sequence[Weight] | np.ndarray | None,
    w_e: Sequence[Weight] | np.ndarray | None,
    classes: Iterable[Sequence[int]],
) -> ReductionResult:
    """Collapse the given twin classes one after another, in the given order.

    Classes are named in ``graph``'s numbering and remapped through the
    earlier steps before each collapse; each keeps its smallest surviving
    vertex. Other twin classes are left alone.
    """
    current = graph
    vertex_weights = as_weights(w, graph.vertex_count, "vertex")
    edge_weights = as_weights(w_e, graph.edge_count, "edge")
    position: list[int | None] = list(range(graph.vertex_count))
    steps: list[ReductionStep] = []
    total = Corrections()
    for group in classes:
        members = []
        for vertex in group:
            mapped = position[vertex]
            if mapped is None:
                raise NotTwinClass(f"vertex {vertex} was removed by an earlier step")
            members.append(mapped)
        step = reduce_once(current, vertex_weights, edge_weights, members)
        steps.append(step)
        total = total + step.corrections
        position = [None if p is None else step.vertex_map[p] for p in position]
        current = step.graph
        vertex_weights = step.vertex_weights
        edge_weights = step.edge_weights
    return ReductionResult(current, vertex_weights, edge_weights, tuple(steps), total)


def reduce_fully(
    graph: Graph,
    w: Sequence[Weight] | np.ndarray | None = None,
    w_e: Sequence[Weight] | np.ndarray | None = None,
    rng: random.Random | None = None,
) -> ReductionResult:
    """Collapse twin classes until every class is a single vertex.

    Without ``rng`` the class with the smallest member goes first; with one,
    the next class is drawn at random. Collapsing a class leaves every other
    twin relation intact, so the loop ends after at most ``n`` steps either way.
    """
    current = graph
    vertex_weights = as_weights(w, graph.vertex_count, "vertex")
    edge_weights = as_weights(w_e, graph.edge_count, "edge")
    steps: list[ReductionStep] = []
    total = Corrections()
    while True:
        candidates = twin_classes(current).nontrivial
        if not candidates:
            break
        group = rng.choice(candidates) if rng is not None else candidates[0]
        step = reduce_once(current, vertex_weights, edge_weights, group)
        steps.append(step)
        total = total + step.corrections
        current = step.graph
        vertex_weights = step.vertex_weights
        edge_weights = step.edge_weights
    _LOGGER.debug(
        "Reduced %d -> %d vertices in %d steps",
        graph.vertex_count,
        current.vertex_count,
        len(steps),
    )
    return ReductionResult(current, vertex_weights, edge_weights, tuple(steps), total)
