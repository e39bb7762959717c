"""Test-graph families: the hexagon grid ``G_{m,n}``, named graphs, random graphs.

``G_{m,n}`` is built as ``m + 1`` rows, each a path on ``2n + 1`` vertices,
with a rung between consecutive rows at every even position. Vertex ``(i, j)``
is ``i * (2n + 1) + j``. The row edges come first (row by row), then the rungs
(layer by layer), so the two halves of ``gmn_two_class_partition`` are
contiguous index ranges.
"""

import logging
import math
import random
from collections.abc import Sequence
from dataclasses import dataclass
from typing import NamedTuple

from .exceptions import BadParams, BadSpec
from .graph import Graph
from .theta import EdgePartition

_LOGGER = logging.getLogger(__name__)

FAMILY_GMN = "gmn"
FAMILY_RANDOM = "random"
FAMILY_PATH = "path"
FAMILY_CYCLE = "cycle"
FAMILY_STAR = "star"
FAMILY_COMPLETE_BIPARTITE = "complete_bipartite"
FAMILY_COMPLETE = "complete"
NAMED_FAMILIES = (
    FAMILY_PATH,
    FAMILY_CYCLE,
    FAMILY_STAR,
    FAMILY_COMPLETE_BIPARTITE,
    FAMILY_COMPLETE,
)
FAMILIES = (FAMILY_GMN, FAMILY_RANDOM, *NAMED_FAMILIES)


@dataclass(frozen=True)
class GridHexSpec:
    """``m`` horizontal and ``n`` vertical layers of hexagons."""

    m: int
    n: int

    def __post_init__(self) -> None:
        """Reject layer counts below one."""
        if self.m < 1 or self.n < 1:
            raise BadSpec(f"G_(m,n) needs m >= 1 and n >= 1, got m={self.m}, n={self.n}")

    @property
    def width(self) -> int:
        """Vertices per row, ``2n + 1``."""
        return 2 * self.n + 1

    def vertex(self, row: int, position: int) -> int:
        """Index of vertex ``(row, position)``."""
        return row * self.width + position

    @property
    def row_edge_count(self) -> int:
        """Edges along the rows, ``2n(m + 1)``."""
        return 2 * self.n * (self.m + 1)


def gen_gmn(spec: GridHexSpec) -> Graph:
    """Build ``G_{m,n}``: ``(m+1)(2n+1)`` vertices and ``3mn + m + 2n`` edges."""
    edges: list[tuple[int, int]] = []
    for row in range(spec.m + 1):
        for position in range(2 * spec.n):
            edges.append((spec.vertex(row, position), spec.vertex(row, position + 1)))
    for row in range(spec.m):
        for position in range(0, spec.width, 2):
            edges.append((spec.vertex(row, position), spec.vertex(row + 1, position)))
    graph = Graph((spec.m + 1) * spec.width, tuple(edges))
    assert graph.edge_count == 3 * spec.m * spec.n + spec.m + 2 * spec.n
    return graph


def gmn_two_class_partition(spec: GridHexSpec) -> EdgePartition:
    """``{F_1, F_2}``: all rungs, and all row edges.

    Each rung layer and each pair of row columns is a union of Θ*-classes, so
    this is a c-partition.
    """
    rows = spec.row_edge_count
    total = rows + spec.m * (spec.n + 1)
    return EdgePartition.from_classes([range(rows, total), range(rows)], total)


def gmn_odd_columns(spec: GridHexSpec) -> list[list[int]]:
    """Vertices at the odd row positions, one list per position.

    In the row quotient each list lands on one twin class together with the
    rung components around it; collapsing the ``n`` classes in order leaves
    the weighted path ``P_{2n+1}``.
    """
    return [
        [spec.vertex(row, position) for row in range(spec.m + 1)]
        for position in range(1, spec.width, 2)
    ]


def _exact_div(numerator: int, denominator: int) -> int:
    quotient, remainder = divmod(numerator, denominator)
    if remainder:
        raise ArithmeticError(f"{numerator} is not divisible by {denominator}")
    return quotient


def closed_formula_we(m: int, n: int) -> int:
    """The closed form of the edge-Wiener index of ``G_{m,n}``."""
    GridHexSpec(m, n)
    numerator = (
        9 * m**3 * n**2
        + 18 * m**2 * n**3
        + 6 * m**3 * n
        + 36 * m**2 * n**2
        + 24 * m * n**3
        + m**3
        + 24 * m**2 * n
        + 24 * m * n**2
        + 8 * n**3
        + 15 * m * n
        - m
        - 2 * n
    )
    return _exact_div(numerator, 6)


class IndexTriple(NamedTuple):
    """``(W, Ŵ_e, W_ve)`` of one weighted graph, or three corrections."""

    w: int
    we_hat: int
    wve: int


class PipelineForms(NamedTuple):
    """Closed forms along the two-class cut of ``G_{m,n}``.

    ``rungs`` is the quotient over ``F_1`` (a path ``P_{m+1}``), ``reduced``
    the fully reduced quotient over ``F_2`` (a path ``P_{2n+1}``) and
    ``corrections`` what that reduction adds back.
    """

    rungs: IndexTriple
    reduced: IndexTriple
    corrections: IndexTriple

    def edge_wiener_hat(self) -> int:
        """``Ŵ_e(G_{m,n})`` assembled from the three parts."""
        return sum(self.rungs) + sum(self.reduced) + sum(self.corrections)


def gmn_pipeline_closed_forms(spec: GridHexSpec) -> PipelineForms:
    """Closed forms of the three indices of both weighted quotients of ``G_{m,n}``."""
    m, n = spec.m, spec.n
    rungs = IndexTriple(
        w=_exact_div(2 * n**2 * (m**3 + 3 * m**2 + 2 * m), 3),
        we_hat=_exact_div((n + 1) ** 2 * (m**3 - 3 * m**2 + 2 * m), 6),
        wve=_exact_div(2 * n * (n + 1) * (m**3 - m), 3),
    )
    reduced = IndexTriple(
        w=_exact_div(m**2 * (n**3 + 3 * n**2 + 2 * n), 3),
        we_hat=_exact_div(2 * (m + 1) ** 2 * (2 * n**3 - 3 * n**2 + n), 3),
        wve=_exact_div(m * (m + 1) * (4 * n**3 + 3 * n**2 - n), 3),
    )
    return PipelineForms(rungs, reduced, IndexTriple(0, m * (m + 1) * n, 0))


def gen_random_connected(vertex_count: int, edge_probability: float, seed: int) -> Graph:
    """A random connected graph, reproducible from ``seed``.

    A random spanning tree is planted first (each vertex of a random order
    attaches to a uniformly chosen earlier one); every other
    pair is then added independently with probability ``edge_probability``.
    Edges come out sorted.
    """
    if vertex_count < 1:
        raise BadParams(f"need at least one vertex, got {vertex_count}")
    if not 0.0 <= edge_probability <= 1.0:
        raise BadParams(f"edge probability must lie in [0, 1], got {edge_probability}")
    rng = random.Random(seed)
    order = list(range(vertex_count))
    rng.shuffle(order)
    edges: set[tuple[int, int]] = set()
    for position in range(1, vertex_count):
        u, v = order[position], order[rng.randrange(position)]
        edges.add((min(u, v), max(u, v)))
    for u in range(vertex_count):
        for v in range(u + 1, vertex_count):
            if (u, v) not in edges and rng.random() < edge_probability:
                edges.add((u, v))
    return Graph(vertex_count, tuple(sorted(edges)))


def _arity(family: str, params: Sequence[int], count: int) -> None:
    if len(params) != count:
        raise BadParams(f"{family} takes {count} parameter(s), got {len(params)}")


def gen_named(family: str, *params: int) -> Graph:
    """Paths, cycles, stars ``K_{1,k}``, ``K_{a,b}`` and ``K_n``.

    ``path(n)`` and ``cycle(n)`` count vertices; the star's centre is 0 and
    ``K_{a,b}`` puts its ``a`` side first.
    """
    match family:
        case "path":
            _arity(family, params, 1)
            (size,) = params
            if size < 1:
                raise BadParams(f"path needs at least 1 vertex, got {size}")
            return Graph(size, tuple((v, v + 1) for v in range(size - 1)))
        case "cycle":
            _arity(family, params, 1)
            (size,) = params
            if size < 3:
                raise BadParams(f"cycle needs at least 3 vertices, got {size}")
            return Graph(size, tuple((v, (v + 1) % size) for v in range(size)))
        case "star":
            _arity(family, params, 1)
            (leaves,) = params
            if leaves < 1:
                raise BadParams(f"star needs at least 1 leaf, got {leaves}")
            return Graph(leaves + 1, tuple((0, leaf) for leaf in range(1, leaves + 1)))
        case "complete_bipartite":
            _arity(family, params, 2)
            a, b = params
            if a < 1 or b < 1:
                raise BadParams(f"K_(a,b) needs a, b >= 1, got {a}, {b}")
            return Graph(a + b, tuple((u, a + v) for u in range(a) for v in range(b)))
        case "complete":
            _arity(family, params, 1)
            (size,) = params
            if size < 1:
                raise BadParams(f"complete graph needs at least 1 vertex, got {size}")
            return Graph(
                size, tuple((u, v) for u in range(size) for v in range(u + 1, size))
            )
    raise BadParams(f"unknown graph family {family!r}; expected one of {NAMED_FAMILIES}")


def duplicate_vertex(graph: Graph, vertex: int) -> Graph:
    """Add a twin of ``vertex``: a new last vertex with the same neighbours.

    The new edges are appended in ascending neighbour order.
    """
    if not 0 <= vertex < graph.vertex_count:
        raise BadParams(f"vertex {vertex} outside 0..{graph.vertex_count - 1}")
    twin = graph.vertex_count
    extra = tuple((neighbour, twin) for neighbour in sorted(graph.neighbor_sets[vertex]))
    return Graph(graph.vertex_count + 1, graph.edges + extra)


def _integer(token: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise BadParams(f"expected an integer parameter, got {token!r}") from None


def _probability(token: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise BadParams(f"expected a probability, got {token!r}") from None
    if not math.isfinite(value):
        raise BadParams(f"expected a finite probability, got {token!r}")
    return value


def generate(family: str, params: Sequence[str], seed: int = 0) -> Graph:
    """Build a graph from a family name and its textual parameters.

    ``gmn M N``, ``random N P``, or any named family with integer sizes.
    ``seed`` only affects ``random``.
    """
    if family == FAMILY_GMN:
        _arity(family, params, 2)
        graph = gen_gmn(GridHexSpec(_integer(params[0]), _integer(params[1])))
    elif family == FAMILY_RANDOM:
        _arity(family, params, 2)
        graph = gen_random_connected(_integer(params[0]), _probability(params[1]), seed)
    else:
        graph = gen_named(family, *(_integer(token) for token in params))
    _LOGGER.debug(
        "Generated %s%s: %d vertices, %d edges",
        family,
        tuple(params),
        graph.vertex_count,
        graph.edge_count,
    )
    return graph
