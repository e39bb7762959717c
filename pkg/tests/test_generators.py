"""Tests for the graph generators and the ``G_{m,n}`` closed forms."""

import numpy as np
import pytest

from cutwiener.exceptions import BadParams, BadSpec
from cutwiener.generators import (
    FAMILIES,
    GridHexSpec,
    IndexTriple,
    closed_formula_we,
    duplicate_vertex,
    gen_gmn,
    gen_named,
    gen_random_connected,
    generate,
    gmn_pipeline_closed_forms,
    gmn_two_class_partition,
)
from cutwiener.graph import Graph, all_pairs_distances, is_connected, validate
from cutwiener.indices import edge_wiener_hat, vertex_edge_wiener, wiener
from cutwiener.quotient import build_quotient
from tests.conftest import isomorphic


def _triple(graph, w, w_e):
    dm = all_pairs_distances(graph)
    return IndexTriple(
        wiener(graph, dm, w),
        edge_wiener_hat(graph, dm, w_e),
        vertex_edge_wiener(graph, dm, w, w_e),
    )


@pytest.mark.parametrize("m", range(1, 9))
@pytest.mark.parametrize("n", range(1, 9))
def test_gmn_counts(m, n):
    graph = gen_gmn(GridHexSpec(m, n))
    assert graph.vertex_count == (m + 1) * (2 * n + 1)
    assert graph.edge_count == 3 * m * n + m + 2 * n
    assert validate(graph).connected


def test_g11_is_the_hexagon():
    assert isomorphic(gen_gmn(GridHexSpec(1, 1)), gen_named("cycle", 6))


def test_gmn_layout():
    """Row edges first, then rungs at the even positions."""
    spec = GridHexSpec(1, 1)
    assert gen_gmn(spec).edges == ((0, 1), (1, 2), (3, 4), (4, 5), (0, 3), (2, 5))
    assert spec.vertex(1, 2) == 5
    assert gmn_two_class_partition(spec).classes == ((0, 1, 2, 3), (4, 5))


@pytest.mark.parametrize(("m", "n"), [(0, 1), (1, 0), (-2, 3)])
def test_gmn_rejects_empty_layers(m, n):
    with pytest.raises(BadSpec):
        GridHexSpec(m, n)
    with pytest.raises(BadSpec):
        closed_formula_we(m, n)


@pytest.mark.parametrize(
    ("m", "n", "expected"), [(1, 1, 27), (2, 1, 95), (1, 2, 117)]
)
def test_closed_formula_values(m, n, expected):
    assert closed_formula_we(m, n) == expected


def test_pipeline_forms_of_g11():
    forms = gmn_pipeline_closed_forms(GridHexSpec(1, 1))
    assert forms.rungs == IndexTriple(4, 0, 0)
    assert forms.reduced == IndexTriple(2, 0, 4)
    assert forms.corrections == IndexTriple(0, 2, 0)
    assert forms.edge_wiener_hat() == 12


@pytest.mark.parametrize("m", range(1, 5))
@pytest.mark.parametrize("n", range(1, 5))
def test_pipeline_forms_match_weighted_paths(m, n):
    """Each closed form equals the indices of the weighted path it describes,
    and the three parts add up to ``Ŵ_e`` of the whole graph."""
    spec = GridHexSpec(m, n)
    forms = gmn_pipeline_closed_forms(spec)
    _, rungs = gmn_two_class_partition(spec).classes
    rung_quotient = build_quotient(gen_gmn(spec), None, rungs)
    assert forms.rungs == _triple(
        rung_quotient.quotient, rung_quotient.vertex_weight, rung_quotient.edge_weight
    )
    path = gen_named("path", 2 * n + 1)
    reduced_w = np.array([0 if k % 2 else m for k in range(2 * n + 1)])
    reduced_w_e = np.full(2 * n, m + 1)
    assert forms.reduced == _triple(path, reduced_w, reduced_w_e)
    m_edges = spec.row_edge_count + m * (n + 1)
    assert forms.edge_wiener_hat() + m_edges * (m_edges - 1) // 2 == closed_formula_we(m, n)


def test_random_connected_is_reproducible_and_sorted():
    graph = gen_random_connected(12, 0.3, seed=99)
    assert graph == gen_random_connected(12, 0.3, seed=99)
    assert list(graph.edges) == sorted(graph.edges)
    assert all(u < v for u, v in graph.edges)
    assert is_connected(graph)


def test_random_connected_extremes():
    assert gen_random_connected(1, 0.5, seed=1) == Graph(1, ())
    assert gen_random_connected(7, 0.0, seed=3).edge_count == 6
    assert gen_random_connected(7, 1.0, seed=3).edge_count == 21


@pytest.mark.parametrize(("count", "probability"), [(0, 0.5), (4, -0.1), (4, 1.5)])
def test_random_connected_rejects(count, probability):
    with pytest.raises(BadParams):
        gen_random_connected(count, probability, seed=0)


@pytest.mark.parametrize(
    ("family", "params", "vertices", "edges"),
    [
        ("path", (5,), 5, 4),
        ("cycle", (5,), 5, 5),
        ("star", (4,), 5, 4),
        ("complete_bipartite", (2, 3), 5, 6),
        ("complete", (5,), 5, 10),
    ],
)
def test_named_families(family, params, vertices, edges):
    graph = gen_named(family, *params)
    assert (graph.vertex_count, graph.edge_count) == (vertices, edges)
    assert validate(graph).connected


@pytest.mark.parametrize(
    ("family", "params"),
    [("cycle", (2,)), ("path", (0,)), ("star", (3, 1)), ("wheel", (5,))],
)
def test_named_families_reject(family, params):
    with pytest.raises(BadParams):
        gen_named(family, *params)


def test_duplicate_vertex():
    graph = duplicate_vertex(gen_named("path", 3), 1)
    assert graph == Graph(4, ((0, 1), (1, 2), (0, 3), (2, 3)))
    with pytest.raises(BadParams):
        duplicate_vertex(graph, 4)


def test_generate_parses_textual_params():
    assert generate("gmn", ["2", "3"]) == gen_gmn(GridHexSpec(2, 3))
    assert generate("random", ["6", "0.5"], seed=8) == gen_random_connected(6, 0.5, 8)
    assert generate("cycle", ["4"]) == gen_named("cycle", 4)
    assert set(FAMILIES) >= {"gmn", "random", "path", "cycle"}


@pytest.mark.parametrize(
    ("family", "params", "error"),
    [
        ("gmn", ["2"], BadParams),
        ("gmn", ["two", "3"], BadParams),
        ("gmn", ["0", "3"], BadSpec),
        ("random", ["5", "nan"], BadParams),
        ("random", ["5", "often"], BadParams),
    ],
)
def test_generate_rejects(family, params, error):
    with pytest.raises(error):
        generate(family, params)
