"""Shared fixtures and helpers for the cutwiener test suite."""

import os
import random
from collections.abc import Iterator
from pathlib import Path

import hypothesis
import networkx as nx
import numpy as np
import pytest
from hypothesis import strategies as st

from cutwiener.generators import gen_named, gen_random_connected
from cutwiener.graph import Graph

FIXTURES_DIR = Path(__file__).parent / "fixtures"

# ``ci`` is derandomised so a failure reproduces on every run; ``dev`` explores
# more. Pick with HYPOTHESIS_PROFILE.
hypothesis.settings.register_profile(
    "ci", max_examples=40, derandomize=True, deadline=None
)
hypothesis.settings.register_profile("dev", max_examples=300, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ci"))

# Seed of the sweeps over random graphs. The sweeps draw every graph and weight
# vector from this one seed, so a failing case is named by its position.
SWEEP_SEED = 20240917


def fixture_path(name: str) -> Path:
    """Path of a file under ``tests/fixtures/``."""
    return FIXTURES_DIR / name


def load_fixture(name: str) -> str:
    """Text of a file under ``tests/fixtures/``."""
    return fixture_path(name).read_text(encoding="utf-8")


def sweep_graphs(count: int, *, max_vertices: int = 12) -> Iterator[tuple[int, Graph]]:
    """``count`` seeded random connected graphs, numbered from 0.

    Sizes run from 2 to ``max_vertices`` and densities from sparse trees to
    near-complete graphs, so bridges, even cycles and odd cycles all turn up.
    """
    rng = random.Random(SWEEP_SEED)
    for case in range(count):
        vertex_count = rng.randint(2, max_vertices)
        density = rng.choice((0.0, 0.1, 0.25, 0.5, 0.8))
        yield case, gen_random_connected(vertex_count, density, rng.randrange(2**32))


def random_weights(rng: random.Random, count: int, high: int = 5) -> np.ndarray:
    """Integer weights drawn uniformly from ``0 .. high``."""
    return np.array([rng.randint(0, high) for _ in range(count)], dtype=np.int64)


def isomorphic(graph: Graph, other: Graph) -> bool:
    """Whether two graphs are isomorphic, by networkx."""
    return nx.is_isomorphic(graph.to_networkx(), other.to_networkx())


@st.composite
def connected_graphs(draw: st.DrawFn, max_vertices: int = 9) -> Graph:
    """Random connected graphs for property tests."""
    vertex_count = draw(st.integers(min_value=1, max_value=max_vertices))
    density = draw(st.floats(min_value=0.0, max_value=1.0))
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    return gen_random_connected(vertex_count, density, seed)


@pytest.fixture
def c6() -> Graph:
    """The 6-cycle ``0-1-2-3-4-5-0``; edge ``k`` is ``{k, k+1 mod 6}``."""
    return gen_named("cycle", 6)


@pytest.fixture
def claw() -> Graph:
    """The star ``K_{1,3}`` with centre 0."""
    return gen_named("star", 3)
