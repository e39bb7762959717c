"""Tests for twin classes and the reduction with correction terms."""

import logging
import random

import numpy as np
import pytest

from cutwiener.exceptions import NotTwinClass
from cutwiener.generators import (
    GridHexSpec,
    duplicate_vertex,
    gen_gmn,
    gen_named,
    gmn_odd_columns,
    gmn_two_class_partition,
)
from cutwiener.graph import Graph, all_pairs_distances
from cutwiener.indices import edge_wiener_hat, vertex_edge_wiener, wiener
from cutwiener.quotient import build_quotient
from cutwiener.reduction import (
    Corrections,
    reduce_classes,
    reduce_fully,
    reduce_once,
    twin_classes,
    uniform_corrections,
)
from tests.conftest import SWEEP_SEED, isomorphic, random_weights, sweep_graphs


def _triple(graph, w, w_e):
    dm = all_pairs_distances(graph)
    return (
        wiener(graph, dm, w),
        edge_wiener_hat(graph, dm, w_e),
        vertex_edge_wiener(graph, dm, w, w_e),
    )


def _restored(graph, w, w_e, corrections):
    w_, we_hat, wve = _triple(graph, w, w_e)
    return (w_ + corrections.w, we_hat + corrections.we_hat, wve + corrections.wve)


@pytest.mark.parametrize(
    ("graph", "classes"),
    [
        (gen_named("star", 3), ((0,), (1, 2, 3))),
        (gen_named("cycle", 4), ((0, 2), (1, 3))),
        (gen_named("path", 3), ((0, 2), (1,))),
        (gen_named("path", 4), ((0,), (1,), (2,), (3,))),
        (gen_named("complete", 3), ((0,), (1,), (2,))),
    ],
)
def test_twin_classes(graph, classes):
    assert twin_classes(graph).classes == classes


def test_claw_reduction_uses_uniform_forms(claw):
    step = reduce_once(claw, None, None, [1, 2, 3])
    assert step.graph == Graph(2, ((0, 1),))
    assert step.vertex_weights.tolist() == [1, 3]
    assert step.edge_weights.tolist() == [3]
    assert step.corrections == Corrections(6, 0, 6)
    assert step.uniform == step.corrections
    assert step.removed == (2, 3)
    assert step.vertex_map == (0, 1, None, None)
    assert step.edge_map == (0, 0, 0)
    assert _restored(step.graph, step.vertex_weights, step.edge_weights, step.corrections) == (
        9,
        0,
        6,
    )


def test_c4_reduction():
    graph = gen_named("cycle", 4)
    step = reduce_once(graph, None, None, [0, 2])
    assert step.graph == Graph(3, ((0, 1), (2, 0)))
    assert step.vertex_weights.tolist() == [2, 1, 1]
    assert step.edge_weights.tolist() == [2, 2]
    assert step.corrections == Corrections(2, 2, 4)
    assert _restored(step.graph, step.vertex_weights, step.edge_weights, step.corrections) == (
        8,
        2,
        8,
    )


def test_keep_other_member():
    graph = gen_named("cycle", 4)
    step = reduce_once(graph, [1, 1, 5, 1], None, [0, 2], kept=2)
    assert step.kept == 2
    assert step.vertex_map == (None, 0, 1, 2)
    assert step.vertex_weights.tolist() == [1, 6, 1]


@pytest.mark.parametrize(
    ("members", "kept"),
    [([0, 1], None), ([1], None), ([1, 2], 3), ([], None), ([1, 9], None)],
)
def test_reduce_once_rejects_non_classes(claw, members, kept):
    with pytest.raises(NotTwinClass):
        reduce_once(claw, None, None, members, kept)


def test_trivial_class_is_flagged(caplog):
    graph = gen_named("path", 3)
    with caplog.at_level(logging.WARNING):
        step = reduce_once(graph, None, None, [1])
    assert step.trivial
    assert step.graph == graph
    assert step.corrections == Corrections(0, 0, 0)
    assert "unchanged" in caplog.text


@pytest.mark.parametrize(
    ("k", "s", "a", "b"), [(2, 1, 1, 1), (3, 2, 2, 5), (4, 3, 0, 1), (5, 1, 7, 0)]
)
def test_uniform_forms_match_general_sums(k, s, a, b):
    """``K_{k,s}`` reduced on its ``k`` side with uniform weights."""
    graph = gen_named("complete_bipartite", k, s)
    w = [a] * k + [1] * s
    step = reduce_once(graph, w, [b] * graph.edge_count, range(k))
    assert step.corrections == uniform_corrections(k, s, a, b)
    assert step.corrections == Corrections(
        a * a * k * (k - 1), b * b * k * s * (k - 1) * (s - 1) // 2, a * b * k * (k - 1) * s
    )


def test_duplicated_vertices_restore_all_three_indices():
    """Adding a twin and reducing it away again with random weights recovers
    ``W``, ``Ŵ_e`` and ``W_ve`` of the twinned graph exactly."""
    rng = random.Random(SWEEP_SEED)
    for case, base in sweep_graphs(100, max_vertices=9):
        graph = duplicate_vertex(base, rng.randrange(base.vertex_count))
        w = random_weights(rng, graph.vertex_count)
        w_e = random_weights(rng, graph.edge_count)
        group = next(
            group for group in twin_classes(graph).nontrivial if graph.vertex_count - 1 in group
        )
        step = reduce_once(graph, w, w_e, group)
        assert _restored(step.graph, step.vertex_weights, step.edge_weights, step.corrections) == (
            _triple(graph, w, w_e)
        ), case
        assert step.edge_weights.sum() == w_e.sum(), case
        assert step.vertex_weights.sum() == w.sum(), case


def test_float_weights_restore_within_tolerance():
    graph = duplicate_vertex(gen_named("cycle", 5), 0)
    w = np.linspace(0.5, 3.0, graph.vertex_count)
    w_e = np.linspace(0.25, 2.0, graph.edge_count)
    step = reduce_once(graph, w, w_e, [0, 5])
    restored = _restored(step.graph, step.vertex_weights, step.edge_weights, step.corrections)
    assert restored == pytest.approx(_triple(graph, w, w_e), rel=1e-9)


def test_reduce_fully_on_sweep_is_exact_and_idempotent():
    rng = random.Random(SWEEP_SEED + 1)
    for case, graph in sweep_graphs(60):
        w = random_weights(rng, graph.vertex_count)
        w_e = random_weights(rng, graph.edge_count)
        result = reduce_fully(graph, w, w_e)
        assert not twin_classes(result.graph).nontrivial, case
        assert _restored(result.graph, result.vertex_weights, result.edge_weights, result.total) == (
            _triple(graph, w, w_e)
        ), case
        again = reduce_fully(result.graph, result.vertex_weights, result.edge_weights)
        assert again.steps == ()
        assert again.total == Corrections()


def test_random_order_reaches_the_same_totals():
    graph = gen_named("complete_bipartite", 3, 4)
    w = np.arange(1, 8)
    w_e = np.arange(12) % 4
    ordered = reduce_fully(graph, w, w_e)
    shuffled = reduce_fully(graph, w, w_e, rng=random.Random(4))
    assert ordered.graph == Graph(2, ((0, 1),))
    assert shuffled.graph.vertex_count == 2
    assert _restored(ordered.graph, ordered.vertex_weights, ordered.edge_weights, ordered.total) == (
        _restored(shuffled.graph, shuffled.vertex_weights, shuffled.edge_weights, shuffled.total)
    )


@pytest.mark.parametrize(("m", "n"), [(1, 2), (2, 3), (4, 2)])
def test_gmn_row_quotient_reduces_to_a_path(m, n):
    """Over the row edges, reducing every odd-position class leaves ``P_{2n+1}``
    with weights ``m, 0, m, ..., m``, edge weights ``m + 1`` and only a
    ``Ŵ_e`` correction of ``m(m+1)n``."""
    spec = GridHexSpec(m, n)
    rows, _ = gmn_two_class_partition(spec).classes
    weighted = build_quotient(gen_gmn(spec), None, rows)
    result = reduce_fully(weighted.quotient, weighted.vertex_weight, weighted.edge_weight)
    assert result.graph == gen_named("path", 2 * n + 1)
    assert result.vertex_weights.tolist() == [0 if k % 2 else m for k in range(2 * n + 1)]
    assert result.edge_weights.tolist() == [m + 1] * (2 * n)
    assert result.total == Corrections(0, m * (m + 1) * n, 0)
    assert len(result.steps) == n


@pytest.mark.parametrize("m", range(1, 5))
@pytest.mark.parametrize("n", range(1, 5))
def test_gmn_odd_columns_reduce_in_n_steps(m, n):
    """Collapsing just the odd-position classes works for ``n = 1`` too, where
    the two end columns are twins as well and stay untouched."""
    spec = GridHexSpec(m, n)
    rows, _ = gmn_two_class_partition(spec).classes
    weighted = build_quotient(gen_gmn(spec), None, rows)
    classes = [[int(weighted.ell[v]) for v in column] for column in gmn_odd_columns(spec)]
    result = reduce_classes(
        weighted.quotient, weighted.vertex_weight, weighted.edge_weight, classes
    )
    assert len(result.steps) == n
    assert result.total == Corrections(0, m * (m + 1) * n, 0)
    assert result.graph.vertex_count == 2 * n + 1
    path_w = np.array([0 if k % 2 else m for k in range(2 * n + 1)])
    path_w_e = np.full(2 * n, m + 1)
    assert _triple(result.graph, result.vertex_weights, result.edge_weights) == _triple(
        gen_named("path", 2 * n + 1), path_w, path_w_e
    )
    assert isomorphic(result.graph, gen_named("path", 2 * n + 1))


def test_reduce_classes_rejects_removed_vertex(claw):
    with pytest.raises(NotTwinClass):
        reduce_classes(claw, None, None, [[1, 2, 3], [2]])
