"""Tests for the cut method and the evaluation entry point."""

import random
import time

import numpy as np
import pytest

from cutwiener.const import (
    METHOD_ALL,
    METHOD_CUT,
    PARTITION_FILE,
    PARTITION_SINGLE_CLASS,
    PARTITION_THETA_STAR,
    REPORT_METHOD_ORACLE,
)
from cutwiener.coordinator import (
    CutMethodCoordinator,
    edge_wiener_cut,
    edge_wiener_hat_cut,
    evaluate,
    resolve_partition,
    wiener_cut,
)
from cutwiener.exceptions import Disconnected, NotCoarser, UsageError
from cutwiener.generators import (
    GridHexSpec,
    closed_formula_we,
    gen_gmn,
    gen_named,
    gmn_two_class_partition,
)
from cutwiener.graph import Graph, WeightedGraph, all_pairs_distances
from cutwiener.indices import (
    edge_wiener,
    edge_wiener_hat,
    edge_wiener_oracle,
    vertex_edge_wiener,
    wiener,
)
from cutwiener.theta import EdgePartition, random_coarsening, theta_star_partition
from tests.conftest import SWEEP_SEED, random_weights, sweep_graphs


def test_c6_over_theta_star(c6):
    """Three ``K_2`` quotients, each contributing ``W = 4`` and nothing else."""
    dm = all_pairs_distances(c6)
    partition = theta_star_partition(c6, dm)
    coordinator = CutMethodCoordinator(c6, partition, dm=dm)
    terms = coordinator.quotient_terms()
    assert [(term.w, term.we_hat, term.wve) for term in terms] == [(4, 0, 0)] * 3
    assert coordinator.edge_wiener_hat() == 12
    assert coordinator.edge_wiener() == 27
    assert edge_wiener_cut(c6, partition) == 27


def test_claw_edge_wiener(claw):
    partition = theta_star_partition(claw, all_pairs_distances(claw))
    assert edge_wiener_cut(claw, partition) == 3


def test_single_class_reduces_to_direct_sums():
    graph = gen_named("complete", 5)
    partition = EdgePartition.single_class(graph.edge_count)
    dm = all_pairs_distances(graph)
    assert edge_wiener_hat_cut(graph, None, partition) == edge_wiener_hat(graph, dm)


def test_split_class_is_refused(c6):
    partition = EdgePartition.from_classes([[0], [3], [1, 4], [2, 5]], 6)
    with pytest.raises(NotCoarser):
        CutMethodCoordinator(c6, partition)


def test_disconnected_graph_is_refused():
    graph = Graph(4, ((0, 1), (2, 3)))
    with pytest.raises(Disconnected):
        CutMethodCoordinator(graph, EdgePartition.single_class(2))


def test_cut_matches_direct_on_weighted_sweep():
    """Over Θ* and over a random coarsening of it, the cut method gives the
    direct ``Ŵ_e``, ``W_e``, ``W`` and ``W_ve`` for weights in ``0..5``, and the
    line-graph ``W_e`` for unit weights."""
    rng = random.Random(SWEEP_SEED)
    for case, graph in sweep_graphs(200):
        dm = all_pairs_distances(graph)
        w = random_weights(rng, graph.vertex_count)
        w_e = random_weights(rng, graph.edge_count)
        theta_star = theta_star_partition(graph, dm)
        expected = (
            edge_wiener_hat(graph, dm, w_e),
            edge_wiener(graph, dm, w_e),
            wiener(graph, dm, w),
            vertex_edge_wiener(graph, dm, w, w_e),
        )
        unit_oracle = edge_wiener_oracle(graph)
        for partition in (theta_star, random_coarsening(theta_star, rng)):
            coordinator = CutMethodCoordinator(graph, partition, dm=dm)
            assert coordinator.edge_wiener() == unit_oracle, case
            got = (
                coordinator.edge_wiener_hat(w_e),
                coordinator.edge_wiener(w_e),
                coordinator.wiener(w),
                coordinator.vertex_edge_wiener(w, w_e),
            )
            assert got == expected, case


def test_reduction_inside_quotients_changes_nothing():
    rng = random.Random(SWEEP_SEED + 2)
    for case, graph in sweep_graphs(60):
        dm = all_pairs_distances(graph)
        w_e = random_weights(rng, graph.edge_count)
        partition = theta_star_partition(graph, dm)
        plain = edge_wiener_hat_cut(graph, w_e, partition, dm=dm)
        reduced = edge_wiener_hat_cut(graph, w_e, partition, dm=dm, reduce=True)
        assert plain == reduced, case


def test_float_weights_agree_with_direct():
    graph = gen_gmn(GridHexSpec(2, 2))
    dm = all_pairs_distances(graph)
    w_e = np.linspace(0.1, 2.0, graph.edge_count)
    cut = edge_wiener_cut(graph, theta_star_partition(graph, dm), w_e, dm=dm)
    assert cut == pytest.approx(edge_wiener(graph, dm, w_e), rel=1e-9)


def test_wiener_cut_with_vertex_weights(c6):
    partition = EdgePartition.from_classes([[0, 3], [1, 4], [2, 5]], 6)
    w = [1, 0, 2, 0, 3, 0]
    dm = all_pairs_distances(c6)
    assert wiener_cut(c6, w, partition) == wiener(c6, dm, w)


@pytest.mark.parametrize("m", range(1, 7))
@pytest.mark.parametrize("n", range(1, 7))
def test_gmn_matches_closed_formula(m, n):
    """Direct, cut over Θ*, cut over ``{F_1, F_2}`` with reduction, and the
    line-graph oracle all give the closed form."""
    spec = GridHexSpec(m, n)
    graph = gen_gmn(spec)
    dm = all_pairs_distances(graph)
    expected = closed_formula_we(m, n)
    assert edge_wiener(graph, dm) == expected
    assert edge_wiener_cut(graph, theta_star_partition(graph, dm), dm=dm) == expected
    assert (
        edge_wiener_cut(graph, gmn_two_class_partition(spec), dm=dm, reduce=True)
        == expected
    )
    assert edge_wiener_oracle(graph) == expected


def test_large_gmn_is_fast():
    """``G_{30,30}`` (about 2800 edges) over Θ* well inside ten seconds."""
    graph = gen_gmn(GridHexSpec(30, 30))
    started = time.perf_counter()
    dm = all_pairs_distances(graph)
    value = edge_wiener_cut(graph, theta_star_partition(graph, dm), dm=dm)
    assert time.perf_counter() - started < 10.0
    assert value == closed_formula_we(30, 30)


def test_resolve_partition(c6):
    dm = all_pairs_distances(c6)
    assert len(resolve_partition(c6, dm, PARTITION_THETA_STAR)) == 3
    assert len(resolve_partition(c6, dm, PARTITION_SINGLE_CLASS)) == 1
    assert len(resolve_partition(c6, dm, PARTITION_FILE, [[0, 3, 1, 4], [2, 5]])) == 2
    with pytest.raises(UsageError):
        resolve_partition(c6, dm, PARTITION_FILE)
    with pytest.raises(UsageError):
        resolve_partition(c6, dm, "halves")


def test_evaluate_all_methods_in_order(c6):
    evaluation = evaluate(WeightedGraph.build(c6), METHOD_ALL)
    assert [report.method for report in evaluation.reports] == [
        "direct",
        METHOD_CUT,
        REPORT_METHOD_ORACLE,
    ]
    assert {report.we for report in evaluation.reports} == {27}
    assert evaluation.reports[1].classes == 3
    assert len(evaluation.terms) == 3
    assert all(report.elapsed_ms is None for report in evaluation.reports)


def test_evaluate_with_timing_and_reduction(c6):
    evaluation = evaluate(
        WeightedGraph.build(c6),
        METHOD_CUT,
        partition_source=PARTITION_SINGLE_CLASS,
        reduce=True,
        timing=True,
    )
    (report,) = evaluation.reports
    assert report.elapsed_ms is not None and report.elapsed_ms >= 0
    assert (report.w, report.we_hat, report.we, report.wve) == (27, 12, 27, 36)
    assert evaluation.terms[0].reduction is not None


def test_single_vertex_over_the_single_class_partition():
    evaluation = evaluate(
        WeightedGraph.build(gen_named("path", 1)),
        METHOD_ALL,
        partition_source=PARTITION_SINGLE_CLASS,
    )
    assert [report.method for report in evaluation.reports] == [
        "direct",
        METHOD_CUT,
        REPORT_METHOD_ORACLE,
    ]
    for report in evaluation.reports:
        assert (report.w, report.we_hat, report.we, report.wve) == (0, 0, 0, 0)
    assert evaluation.reports[1].classes == 0
    assert evaluation.terms == ()


def test_evaluate_rejects_unknown_method(c6):
    with pytest.raises(UsageError):
        evaluate(WeightedGraph.build(c6), "guess")
