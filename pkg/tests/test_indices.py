"""Tests for the directly computed indices and the networkx oracle."""

import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cutwiener import indices as indices_module
from cutwiener.const import EXACTNESS_FLOAT, EXACTNESS_INTEGER, METHOD_DIRECT
from cutwiener.exceptions import Disconnected
from cutwiener.generators import gen_named
from cutwiener.graph import Graph, all_pairs_distances
from cutwiener.indices import (
    IndexReport,
    bilinear_sum,
    direct_report,
    edge_pair_term,
    edge_wiener,
    edge_wiener_hat,
    edge_wiener_oracle,
    oracle_report,
    same_value,
    vertex_edge_wiener,
    vertex_edge_wiener_oracle,
    wiener,
    wiener_oracle,
)
from tests.conftest import connected_graphs, random_weights, sweep_graphs


def _direct(graph, w=None, w_e=None):
    dm = all_pairs_distances(graph)
    return (
        wiener(graph, dm, w),
        edge_wiener_hat(graph, dm, w_e),
        edge_wiener(graph, dm, w_e),
        vertex_edge_wiener(graph, dm, w, w_e),
    )


@pytest.mark.parametrize(
    ("family", "params", "expected"),
    [
        ("cycle", (6,), (27, 12, 27, 36)),
        ("star", (3,), (9, 0, 3, 6)),
        ("path", (3,), (4, 0, 1, 2)),
        ("path", (2,), (1, 0, 0, 0)),
        ("path", (1,), (0, 0, 0, 0)),
        ("complete", (4,), (6, 3, 18, 12)),
    ],
)
def test_known_unit_values(family, params, expected):
    """``(W, Ŵ_e, W_e, W_ve)`` of small graphs with unit weights."""
    assert _direct(gen_named(family, *params)) == expected


def test_we_exceeds_we_hat_by_pair_count():
    """With unit weights ``W_e = Ŵ_e + C(m, 2)``."""
    for _, graph in sweep_graphs(200):
        _, we_hat, we, _ = _direct(graph)
        m = graph.edge_count
        assert we == we_hat + m * (m - 1) // 2


def test_weighted_gap_is_the_pair_term():
    rng = random.Random(5)
    for _, graph in sweep_graphs(200):
        w_e = random_weights(rng, graph.edge_count)
        _, we_hat, we, _ = _direct(graph, None, w_e)
        assert we - we_hat == edge_pair_term(w_e)


def test_indices_scale_quadratically():
    graph = gen_named("cycle", 7)
    w = np.arange(7)
    w_e = np.arange(1, 8)
    base = _direct(graph, w, w_e)
    scaled = _direct(graph, 3 * w, 3 * w_e)
    assert scaled == tuple(9 * value for value in base)


def test_zero_weight_vertices_drop_out():
    """A leaf of weight 0 contributes nothing to ``W``."""
    graph = gen_named("path", 4)
    assert _direct(graph, [1, 1, 1, 0])[0] == _direct(gen_named("path", 3))[0]


def test_direct_matches_oracle_on_weighted_sweep():
    rng = random.Random(17)
    for case, graph in sweep_graphs(200):
        w = random_weights(rng, graph.vertex_count)
        w_e = random_weights(rng, graph.edge_count)
        w_, we_hat, we, wve = _direct(graph, w, w_e)
        assert w_ == wiener_oracle(graph, w), case
        assert we == edge_wiener_oracle(graph, w_e), case
        assert wve == vertex_edge_wiener_oracle(graph, w, w_e), case
        assert we_hat == we - edge_pair_term(w_e), case


@given(
    connected_graphs(max_vertices=7),
    st.lists(st.floats(min_value=0.0, max_value=10.0), min_size=49, max_size=49),
)
def test_float_weights_match_oracle(graph, pool):
    w = np.array(pool[: graph.vertex_count], dtype=np.float64)
    w_e = np.array(pool[-graph.edge_count :] if graph.edge_count else [], dtype=np.float64)
    w_, _, we, wve = _direct(graph, w, w_e)
    assert isinstance(w_, float)
    assert same_value(w_, wiener_oracle(graph, w))
    assert same_value(we, edge_wiener_oracle(graph, w_e))
    assert same_value(wve, vertex_edge_wiener_oracle(graph, w, w_e))


def test_big_weights_stay_exact():
    """Products beyond int64 are summed in arbitrary precision."""
    graph = gen_named("path", 4)
    big = np.array([2**40] * 4, dtype=np.int64)
    # Path distances 1,2,3,1,2,1 sum to 10.
    assert _direct(graph, big)[0] == 10 * 2**80
    assert _direct(graph, big)[0] == wiener_oracle(graph, big)


def test_object_path_equals_int64_path(monkeypatch):
    graph = gen_named("complete_bipartite", 2, 3)
    w = np.array([3, 1, 4, 1, 5])
    w_e = np.array([9, 2, 6, 5, 3, 5])
    expected = _direct(graph, w, w_e)
    monkeypatch.setattr(indices_module, "INT64_SAFE_BOUND", 0)
    assert _direct(graph, w, w_e) == expected


def test_bilinear_sum_of_empty_vectors():
    empty = np.zeros(0, dtype=np.int64)
    assert bilinear_sum(empty, np.zeros((0, 0), dtype=np.int32), empty, halve=True) == 0


def test_disconnected_graph_is_refused():
    graph = Graph(3, ((0, 1),))
    dm = all_pairs_distances(graph)
    with pytest.raises(Disconnected):
        wiener(graph, dm)
    with pytest.raises(Disconnected):
        edge_wiener_oracle(graph)


def test_same_value():
    assert same_value(3, 3)
    assert not same_value(3, 4)
    assert same_value(1.0, 1.0 + 1e-12)
    assert not same_value(1.0, 1.001)


def test_reports_agree_and_render(c6):
    dm = all_pairs_distances(c6)
    ones = np.ones(6, dtype=np.int64)
    direct = direct_report(c6, dm, ones, ones)
    oracle = oracle_report(c6, ones, ones)
    assert (direct.w, direct.we_hat, direct.we, direct.wve) == (27, 12, 27, 36)
    assert (oracle.w, oracle.we_hat, oracle.we, oracle.wve) == (27, 12, 27, 36)
    assert direct.method == METHOD_DIRECT
    assert direct.exactness == EXACTNESS_INTEGER
    assert direct.as_dict(("We", "W")) == {
        "W": 27,
        "We": 27,
        "method": "direct",
        "exactness": "integer",
    }


def test_report_timing_is_optional_and_ignored_by_equality():
    report = IndexReport(1, 2, 3, 4, "cut", EXACTNESS_FLOAT, classes=2)
    timed = IndexReport(1, 2, 3, 4, "cut", EXACTNESS_FLOAT, classes=2, elapsed_ms=1.23456)
    assert report == timed
    assert "elapsed_ms" not in report.as_dict()
    assert timed.as_dict()["elapsed_ms"] == 1.235
    assert list(timed.as_dict()) == [
        "W",
        "We",
        "WeHat",
        "Wve",
        "method",
        "exactness",
        "classes",
        "elapsed_ms",
    ]
