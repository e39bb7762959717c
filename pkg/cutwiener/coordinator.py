"""The cut method: indices of a graph assembled from its weighted quotients.

For a c-partition ``{F_1..F_r}``::

    Ŵ_e(G, w_e) = Σ_i W(G/F_i, w^i) + Ŵ_e(G/F_i, w_e^i) + W_ve(G/F_i, w^i, w_e^i)
    W_e(G, w_e) = Ŵ_e(G, w_e) + Σ_{e<f} w_e(e) w_e(f)
    W(G, w)     = Σ_i W(G/F_i, w_V^i)          with w_V^i(X) = Σ_{v∈X} w(v)

and, because ``d(v, e)`` splits over the quotients like ``d(u, v)`` does,
``W_ve(G, w, w_e)`` is the sum over quotients of ``w_V^i`` paired against
``w^i`` (vertex-vertex distances) and ``w_e^i`` (vertex-edge distances).

Per-quotient terms are independent and run on a worker pool; they are summed
in class order so results do not depend on scheduling.
"""

import logging
import math
import time
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .const import (
    METHOD_ALL,
    METHOD_CUT,
    METHOD_DIRECT,
    METHOD_ORACLE,
    PARTITION_FILE,
    PARTITION_SINGLE_CLASS,
    PARTITION_THETA_STAR,
    worker_count,
)
from .exceptions import UsageError
from .graph import (
    DistanceMatrix,
    Graph,
    Weight,
    WeightedGraph,
    all_pairs_distances,
    as_weights,
)
from .indices import (
    IndexReport,
    bilinear_sum,
    direct_report,
    edge_pair_term,
    edge_wiener_hat,
    exactness_of,
    oracle_report,
    vertex_edge_wiener,
    wiener,
)
from .quotient import QuotientSet, WeightedQuotient, quotient_set
from .reduction import ReductionResult, reduce_fully
from .theta import EdgePartition, theta_star_partition

_LOGGER = logging.getLogger(__name__)


def _total(values: Sequence[Weight]) -> Weight:
    """Sum in the given order; exact for integers, ``fsum`` otherwise."""
    if all(isinstance(value, int) for value in values):
        return sum(values)
    return math.fsum(values)


@dataclass(frozen=True, eq=False)
class QuotientTerms:
    """The three indices of one weighted quotient, as they enter ``Ŵ_e(G)``.

    With reduction, each value already includes the reduction's correction.
    """

    class_index: int
    quotient: WeightedQuotient = field(repr=False)
    w: Weight
    we_hat: Weight
    wve: Weight
    reduction: ReductionResult | None = field(default=None, repr=False)

    @property
    def total(self) -> Weight:
        """This quotient's contribution to ``Ŵ_e(G)``."""
        return _total([self.w, self.we_hat, self.wve])


class CutMethodCoordinator:
    """Evaluate the cut method for one graph over one c-partition.

    Construction checks connectivity and that the partition is coarser than
    Θ*, so every method afterwards can assume both.
    """

    def __init__(
        self,
        graph: Graph,
        partition: EdgePartition,
        *,
        dm: DistanceMatrix | None = None,
        reduce: bool = False,
    ) -> None:
        """Bind the graph and partition and check the cut preconditions."""
        self.graph = graph
        self.partition = partition
        self.dm = dm if dm is not None else all_pairs_distances(graph)
        self.reduce = reduce
        self.dm.require_connected()
        self.quotients: QuotientSet = quotient_set(graph, partition)
        self.quotients.require_coarser(self.dm)

    def _map[T](self, work: Callable[[int], T], count: int) -> list[T]:
        """Run ``work`` over the class indices, results in class order."""
        if count <= 1:
            return [work(index) for index in range(count)]
        with ThreadPoolExecutor(max_workers=worker_count()) as pool:
            return list(pool.map(work, range(count)))

    def _terms(self, index: int, edge_weights: np.ndarray) -> QuotientTerms:
        weighted = self.quotients.weighted(index, edge_weights)
        graph = weighted.quotient
        vertex_weights = weighted.vertex_weight
        quotient_edge_weights = weighted.edge_weight
        if not self.reduce:
            dm = weighted.distances
            return QuotientTerms(
                class_index=index,
                quotient=weighted,
                w=wiener(graph, dm, vertex_weights),
                we_hat=edge_wiener_hat(graph, dm, quotient_edge_weights),
                wve=vertex_edge_wiener(graph, dm, vertex_weights, quotient_edge_weights),
            )
        result = reduce_fully(graph, vertex_weights, quotient_edge_weights)
        dm = all_pairs_distances(result.graph)
        return QuotientTerms(
            class_index=index,
            quotient=weighted,
            w=wiener(result.graph, dm, result.vertex_weights) + result.total.w,
            we_hat=edge_wiener_hat(result.graph, dm, result.edge_weights)
            + result.total.we_hat,
            wve=vertex_edge_wiener(
                result.graph, dm, result.vertex_weights, result.edge_weights
            )
            + result.total.wve,
            reduction=result,
        )

    def quotient_terms(
        self, edge_weights: Sequence[Weight] | np.ndarray | None = None
    ) -> list[QuotientTerms]:
        """Per-class indices of every weighted quotient, in class order."""
        weights = as_weights(edge_weights, self.graph.edge_count, "edge")
        terms: list[QuotientTerms] = self._map(
            lambda index: self._terms(index, weights), len(self.partition)
        )
        for term in terms:
            _LOGGER.debug(
                "Class %d: W=%s Ŵe=%s Wve=%s reductions=%d",
                term.class_index,
                term.w,
                term.we_hat,
                term.wve,
                len(term.reduction.steps) if term.reduction else 0,
            )
        return terms

    def edge_wiener_hat(
        self, edge_weights: Sequence[Weight] | np.ndarray | None = None
    ) -> Weight:
        """``Ŵ_e(G, w_e)`` as the sum of the quotient terms."""
        return _total([term.total for term in self.quotient_terms(edge_weights)])

    def edge_wiener(
        self, edge_weights: Sequence[Weight] | np.ndarray | None = None
    ) -> Weight:
        """``W_e(G, w_e)``: ``Ŵ_e`` plus the pair term (``C(m, 2)`` for unit weights)."""
        weights = as_weights(edge_weights, self.graph.edge_count, "edge")
        return _total([self.edge_wiener_hat(weights), edge_pair_term(weights)])

    def _wiener_term(self, index: int, vertex_weights: np.ndarray) -> Weight:
        structure = self.quotients.structure(index)
        component_weights = structure.component_vertex_weights(vertex_weights)
        return bilinear_sum(
            component_weights, structure.distances.matrix, component_weights, halve=True
        )

    def wiener(self, vertex_weights: Sequence[Weight] | np.ndarray | None = None) -> Weight:
        """``W(G, w)`` as ``Σ_i W(G/F_i, w_V^i)``."""
        weights = as_weights(vertex_weights, self.graph.vertex_count, "vertex")
        return _total(
            self._map(lambda index: self._wiener_term(index, weights), len(self.partition))
        )

    def _vertex_edge_term(
        self, index: int, vertex_weights: np.ndarray, edge_weights: np.ndarray
    ) -> Weight:
        weighted = self.quotients.weighted(index, edge_weights)
        dm = weighted.distances
        component_weights = weighted.component_vertex_weights(vertex_weights)
        return _total(
            [
                bilinear_sum(component_weights, dm.matrix, weighted.vertex_weight, halve=False),
                bilinear_sum(
                    component_weights, dm.vertex_edge, weighted.edge_weight, halve=False
                ),
            ]
        )

    def vertex_edge_wiener(
        self,
        vertex_weights: Sequence[Weight] | np.ndarray | None = None,
        edge_weights: Sequence[Weight] | np.ndarray | None = None,
    ) -> Weight:
        """``W_ve(G, w, w_e)`` summed over the quotients."""
        weights = as_weights(vertex_weights, self.graph.vertex_count, "vertex")
        edge_w = as_weights(edge_weights, self.graph.edge_count, "edge")
        return _total(
            self._map(
                lambda index: self._vertex_edge_term(index, weights, edge_w),
                len(self.partition),
            )
        )

    def report(
        self,
        vertex_weights: np.ndarray,
        edge_weights: np.ndarray,
        terms: Sequence[QuotientTerms] | None = None,
    ) -> IndexReport:
        """All four indices by the cut method, reusing ``terms`` when given."""
        if terms is None:
            terms = self.quotient_terms(edge_weights)
        we_hat = _total([term.total for term in terms])
        return IndexReport(
            w=self.wiener(vertex_weights),
            we_hat=we_hat,
            we=_total([we_hat, edge_pair_term(edge_weights)]),
            wve=self.vertex_edge_wiener(vertex_weights, edge_weights),
            method=METHOD_CUT,
            exactness=exactness_of(vertex_weights, edge_weights),
            classes=len(self.partition),
        )


def edge_wiener_hat_cut(
    graph: Graph,
    w_e: Sequence[Weight] | np.ndarray | None,
    c_partition: EdgePartition,
    *,
    dm: DistanceMatrix | None = None,
    reduce: bool = False,
) -> Weight:
    """``Ŵ_e(G, w_e)`` from the weighted quotients over ``c_partition``.

    Raises ``NotCoarser`` or ``Disconnected`` when the preconditions fail.
    """
    return CutMethodCoordinator(graph, c_partition, dm=dm, reduce=reduce).edge_wiener_hat(
        w_e
    )


def edge_wiener_cut(
    graph: Graph,
    c_partition: EdgePartition,
    w_e: Sequence[Weight] | np.ndarray | None = None,
    *,
    dm: DistanceMatrix | None = None,
    reduce: bool = False,
) -> Weight:
    """``W_e(G)`` by the cut method; unit edge weights unless ``w_e`` is given."""
    return CutMethodCoordinator(graph, c_partition, dm=dm, reduce=reduce).edge_wiener(w_e)


def wiener_cut(
    graph: Graph,
    w: Sequence[Weight] | np.ndarray | None,
    c_partition: EdgePartition,
    *,
    dm: DistanceMatrix | None = None,
) -> Weight:
    """``W(G, w)`` as the sum of the quotients' Wiener indices."""
    return CutMethodCoordinator(graph, c_partition, dm=dm).wiener(w)


def resolve_partition(
    graph: Graph,
    dm: DistanceMatrix,
    source: str,
    classes: Sequence[Sequence[int]] | None = None,
) -> EdgePartition:
    """The partition named by ``source``: Θ*, the single class, or ``classes``."""
    if source == PARTITION_THETA_STAR:
        return theta_star_partition(graph, dm)
    if source == PARTITION_SINGLE_CLASS:
        return EdgePartition.single_class(graph.edge_count)
    if source == PARTITION_FILE:
        if classes is None:
            raise UsageError("partition source 'file' needs partition classes")
        return EdgePartition.from_classes(classes, graph.edge_count)
    raise UsageError(f"unknown partition source {source!r}")


@dataclass(frozen=True, eq=False)
class Evaluation:
    """Reports of every method that ran, and the cut method's quotient terms."""

    reports: tuple[IndexReport, ...]
    partition: EdgePartition | None = None
    terms: tuple[QuotientTerms, ...] = ()


def _timed(timing: bool, compute: Callable[[], IndexReport]) -> IndexReport:
    started = time.perf_counter()
    report = compute()
    if not timing:
        return report
    return replace(report, elapsed_ms=(time.perf_counter() - started) * 1000.0)


def evaluate(
    weighted: WeightedGraph,
    method: str,
    *,
    partition_source: str = PARTITION_THETA_STAR,
    partition_classes: Sequence[Sequence[int]] | None = None,
    reduce: bool = False,
    timing: bool = False,
) -> Evaluation:
    """Compute the indices of ``weighted`` by ``method`` (or every method for ``all``).

    Reports come in the order direct, cut, oracle.
    """
    graph = weighted.graph
    vertex_weights, edge_weights = weighted.vertex_weights, weighted.edge_weights
    dm = all_pairs_distances(graph)
    dm.require_connected()
    run_direct = method in (METHOD_DIRECT, METHOD_ALL)
    run_cut = method in (METHOD_CUT, METHOD_ALL)
    run_oracle = method in (METHOD_ORACLE, METHOD_ALL)
    if not (run_direct or run_cut or run_oracle):
        raise UsageError(f"unknown method {method!r}")

    reports: list[IndexReport] = []
    partition: EdgePartition | None = None
    terms: tuple[QuotientTerms, ...] = ()
    if run_direct:
        reports.append(
            _timed(timing, lambda: direct_report(graph, dm, vertex_weights, edge_weights))
        )
    if run_cut:
        partition = resolve_partition(graph, dm, partition_source, partition_classes)
        coordinator = CutMethodCoordinator(graph, partition, dm=dm, reduce=reduce)
        computed: list[QuotientTerms] = []

        def _cut() -> IndexReport:
            computed.extend(coordinator.quotient_terms(edge_weights))
            return coordinator.report(vertex_weights, edge_weights, computed)

        reports.append(_timed(timing, _cut))
        terms = tuple(computed)
    if run_oracle:
        reports.append(
            _timed(timing, lambda: oracle_report(graph, vertex_weights, edge_weights))
        )
    return Evaluation(tuple(reports), partition, terms)
