"""The Djoković–Winkler relation Θ, its transitive closure Θ*, and c-partitions.

Θ* is found the straightforward way: every edge pair is tested against the
precomputed distance matrix and the related pairs are merged in a union-find.
The pairwise test runs as vectorised blocks of rows; merging is single-threaded
over the collected pairs.
"""

import logging
import random
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .const import worker_count
from .exceptions import BadGroup, NotAPartition
from .graph import DistanceMatrix, Graph

_LOGGER = logging.getLogger(__name__)

# Rows of the m x m relation table evaluated per work item. Bounds the
# temporary arrays to THETA_BLOCK_ROWS * m entries each.
THETA_BLOCK_ROWS = 512


class DisjointSet:
    """Union-find over ``0 .. count - 1`` with path compression and union by rank."""

    def __init__(self, count: int) -> None:
        """Start with every element in its own singleton set."""
        self.parent = list(range(count))
        self.rank = [0] * count
        self.groups = count

    def find(self, element: int) -> int:
        """Return the representative of the set holding ``element``."""
        root = element
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[element] != root:
            self.parent[element], element = root, self.parent[element]
        return root

    def unite(self, first: int, second: int) -> bool:
        """Merge the sets of ``first`` and ``second``; False if already one set."""
        rep_first = self.find(first)
        rep_second = self.find(second)
        if rep_first == rep_second:
            return False
        if self.rank[rep_first] < self.rank[rep_second]:
            rep_first, rep_second = rep_second, rep_first
        self.parent[rep_second] = rep_first
        if self.rank[rep_first] == self.rank[rep_second]:
            self.rank[rep_first] += 1
        self.groups -= 1
        return True

    def __len__(self) -> int:
        """Number of sets."""
        return self.groups

    def to_list(self) -> list[list[int]]:
        """All sets, each ascending, ordered by their smallest element."""
        by_root: dict[int, list[int]] = {}
        for element in range(len(self.parent)):
            by_root.setdefault(self.find(element), []).append(element)
        return sorted(by_root.values(), key=lambda group: group[0])


@dataclass(frozen=True)
class EdgePartition:
    """A partition of the edge indices ``0 .. edge_count - 1`` into classes.

    Always canonical: each class is ascending and classes are ordered by their
    smallest edge index, so two partitions with the same classes compare (and
    hash) equal however they were built.
    """

    classes: tuple[tuple[int, ...], ...]
    edge_count: int

    @classmethod
    def from_classes(
        cls, classes: Iterable[Iterable[int]], edge_count: int
    ) -> "EdgePartition":
        """Canonicalise ``classes``, raising ``NotAPartition`` if they are not one."""
        normalised = [tuple(sorted(int(edge) for edge in group)) for group in classes]
        seen: set[int] = set()
        for group in normalised:
            if not group:
                raise NotAPartition("partition contains an empty class")
            for edge in group:
                if not 0 <= edge < edge_count:
                    raise NotAPartition(
                        f"edge index {edge} outside 0..{edge_count - 1}"
                    )
                if edge in seen:
                    raise NotAPartition(f"edge {edge} appears in two classes")
                seen.add(edge)
        if len(seen) != edge_count:
            missing = sorted(set(range(edge_count)) - seen)
            raise NotAPartition(f"edges not covered by any class: {missing}")
        normalised.sort(key=lambda group: group[0])
        return cls(tuple(normalised), edge_count)

    @classmethod
    def single_class(cls, edge_count: int) -> "EdgePartition":
        """The trivial partition ``{E(G)}``; no classes at all for an edgeless graph."""
        if edge_count == 0:
            return cls((), 0)
        return cls.from_classes([range(edge_count)], edge_count)

    @cached_property
    def class_of(self) -> tuple[int, ...]:
        """Class index of every edge."""
        owner = [0] * self.edge_count
        for index, group in enumerate(self.classes):
            for edge in group:
                owner[edge] = index
        return tuple(owner)

    def __len__(self) -> int:
        """Number of classes."""
        return len(self.classes)


def theta_related(dm: DistanceMatrix, edge: int, other: int) -> bool:
    """Whether ``e = xy`` and ``f = ab`` satisfy ``d(x,a)+d(y,b) != d(x,b)+d(y,a)``.

    Swapping the labels of both endpoints of one edge swaps the two sides, so
    the answer does not depend on the orientation the edges were stored in.
    Every edge is related to itself (``0 + 0 != 1 + 1``).
    """
    x, y = dm.graph.edges[edge]
    a, b = dm.graph.edges[other]
    return dm[x, a] + dm[y, b] != dm[x, b] + dm[y, a]


def theta_matrix_block(dm: DistanceMatrix, rows: slice) -> np.ndarray:
    """Θ for edges ``rows`` against every edge, as a boolean block.

    Finite hop distances are below the vertex count, so int32 sums cannot
    overflow; callers check connectivity first.
    """
    first, second = dm.graph.endpoint_arrays
    matrix = dm.matrix
    x, y = first[rows], second[rows]
    left = matrix[np.ix_(x, first)] + matrix[np.ix_(y, second)]
    right = matrix[np.ix_(x, second)] + matrix[np.ix_(y, first)]
    return left != right


def theta_pairs(dm: DistanceMatrix) -> list[tuple[int, int]]:
    """All Θ-related pairs ``(e, f)`` with ``e < f``."""
    dm.require_connected()
    edge_count = dm.graph.edge_count

    def _block(start: int) -> list[tuple[int, int]]:
        stop = min(start + THETA_BLOCK_ROWS, edge_count)
        related = theta_matrix_block(dm, slice(start, stop))
        rows, cols = np.nonzero(related)
        rows = rows + start
        keep = rows < cols
        return list(zip(rows[keep].tolist(), cols[keep].tolist(), strict=True))

    starts = range(0, edge_count, THETA_BLOCK_ROWS)
    if len(starts) <= 1:
        blocks = [_block(start) for start in starts]
    else:
        with ThreadPoolExecutor(max_workers=worker_count()) as pool:
            blocks = list(pool.map(_block, starts))
    return [pair for block in blocks for pair in block]


def theta_star_partition(graph: Graph, dm: DistanceMatrix) -> EdgePartition:
    """The Θ*-classes of a connected graph, ordered by smallest edge index."""
    union = DisjointSet(graph.edge_count)
    pairs = theta_pairs(dm)
    for edge, other in pairs:
        union.unite(edge, other)
    partition = EdgePartition.from_classes(union.to_list(), graph.edge_count)
    _LOGGER.debug(
        "Θ*: %d related pairs over %d edges -> %d classes",
        len(pairs),
        graph.edge_count,
        len(partition),
    )
    return partition


def _coerce(
    partition: EdgePartition | Sequence[Sequence[int]], edge_count: int
) -> EdgePartition:
    if isinstance(partition, EdgePartition):
        if partition.edge_count != edge_count:
            raise NotAPartition(
                f"partition covers {partition.edge_count} edges, graph has {edge_count}"
            )
        return partition
    return EdgePartition.from_classes(partition, edge_count)


def is_c_partition(
    graph: Graph,
    dm: DistanceMatrix,
    partition: EdgePartition | Sequence[Sequence[int]],
    theta_star: EdgePartition | None = None,
) -> bool:
    """Whether every Θ*-class lies inside a single class of ``partition``.

    Raw class lists are accepted and checked first (``NotAPartition``). Pass a
    precomputed ``theta_star`` to skip recomputing Θ*.
    """
    candidate = _coerce(partition, graph.edge_count)
    reference = theta_star or theta_star_partition(graph, dm)
    owner = candidate.class_of
    return all(len({owner[edge] for edge in group}) == 1 for group in reference.classes)


def merge_classes(
    partition: EdgePartition, groups: Iterable[Iterable[int]]
) -> EdgePartition:
    """Union the classes named by each group into one class.

    ``groups`` must partition the class indices ``0 .. len(partition) - 1``;
    otherwise ``BadGroup`` is raised. Merging only ever coarsens, so a
    c-partition stays a c-partition.
    """
    seen: set[int] = set()
    merged: list[list[int]] = []
    for group in groups:
        members = [int(index) for index in group]
        if not members:
            raise BadGroup("empty merge group")
        edges: list[int] = []
        for index in members:
            if not 0 <= index < len(partition):
                raise BadGroup(f"class index {index} outside 0..{len(partition) - 1}")
            if index in seen:
                raise BadGroup(f"class {index} appears in two groups")
            seen.add(index)
            edges.extend(partition.classes[index])
        merged.append(edges)
    if len(seen) != len(partition):
        missing = sorted(set(range(len(partition))) - seen)
        raise BadGroup(f"classes missing from the groups: {missing}")
    return EdgePartition.from_classes(merged, partition.edge_count)


def random_coarsening(partition: EdgePartition, rng: random.Random) -> EdgePartition:
    """Merge the classes into a random number of random groups.

    Used by the verification sweeps to exercise c-partitions other than Θ*
    itself. With one class the partition is returned unchanged.
    """
    count = len(partition)
    if count <= 1:
        return partition
    target = rng.randint(1, count)
    labels = [rng.randrange(target) for _ in range(count)]
    groups: dict[int, list[int]] = {}
    for index, label in enumerate(labels):
        groups.setdefault(label, []).append(index)
    return merge_classes(partition, groups.values())

