"""Edge-list and partition file formats.

Edge list::

    # comment
    n m
    u v [w_e]        (m lines, 0-based vertex indices)
    #vertex-weights  (optional section)
    w                (n lines)

Missing weights default to 1. Partition files hold one class per line as
space-separated edge indices.
"""

import math
from collections.abc import Iterator
from pathlib import Path

import numpy as np

from .const import COMMENT_CHAR, DEFAULT_WEIGHT, VERTEX_WEIGHTS_MARKER
from .exceptions import FormatError
from .graph import Graph, Weight, WeightedGraph


def _data_lines(text: str) -> Iterator[tuple[int, str]]:
    """Yield ``(line number, content)`` with comments and blanks removed.

    The vertex-weight marker is yielded verbatim so the caller can switch
    sections on it; every other ``#`` starts a comment.
    """
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped == VERTEX_WEIGHTS_MARKER:
            yield number, stripped
            continue
        content = stripped.split(COMMENT_CHAR, 1)[0].strip()
        if content:
            yield number, content


def _count(token: str, what: str, line: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise FormatError(f"{what} must be an integer, got {token!r}", line) from None
    if value < 0:
        raise FormatError(f"{what} must be non-negative, got {value}", line)
    return value


def _weight(token: str, line: int) -> Weight:
    """Parse a weight: an integer when it reads as one, else a finite float."""
    try:
        value: Weight = int(token)
    except ValueError:
        try:
            value = float(token)
        except ValueError:
            raise FormatError(f"weight must be a number, got {token!r}", line) from None
        if not math.isfinite(value):
            raise FormatError(f"weight must be finite, got {token!r}", line)
    if value < 0:
        raise FormatError(f"weight must be non-negative, got {token!r}", line)
    return value


def parse_edge_list(text: str) -> WeightedGraph:
    """Parse the edge-list format into a weighted graph.

    The graph itself is not validated here (self-loops, duplicates and index
    ranges are ``validate``'s job); this only checks the file's shape.
    """
    lines = _data_lines(text)
    header = next(lines, None)
    if header is None or header[1] == VERTEX_WEIGHTS_MARKER:
        raise FormatError("missing 'n m' header line", header[0] if header else None)
    line, content = header
    fields = content.split()
    if len(fields) != 2:
        raise FormatError(f"header must be 'n m', got {content!r}", line)
    vertex_count = _count(fields[0], "vertex count", line)
    edge_count = _count(fields[1], "edge count", line)

    edges: list[tuple[int, int]] = []
    edge_weights: list[Weight] = []
    vertex_weights: list[Weight] | None = None
    for line, content in lines:
        if content == VERTEX_WEIGHTS_MARKER:
            if vertex_weights is not None:
                raise FormatError("second vertex-weight section", line)
            vertex_weights = []
            continue
        if vertex_weights is not None:
            fields = content.split()
            if len(fields) != 1:
                raise FormatError("vertex weight lines hold one number", line)
            if len(vertex_weights) == vertex_count:
                raise FormatError(f"more than {vertex_count} vertex weights", line)
            vertex_weights.append(_weight(fields[0], line))
            continue
        fields = content.split()
        if len(fields) not in (2, 3):
            raise FormatError(f"edge lines are 'u v [w_e]', got {content!r}", line)
        if len(edges) == edge_count:
            raise FormatError(f"more than {edge_count} edge lines", line)
        edges.append(
            (_count(fields[0], "vertex index", line), _count(fields[1], "vertex index", line))
        )
        edge_weights.append(_weight(fields[2], line) if len(fields) == 3 else DEFAULT_WEIGHT)

    if len(edges) != edge_count:
        raise FormatError(f"header promises {edge_count} edges, found {len(edges)}")
    if vertex_weights is not None and len(vertex_weights) != vertex_count:
        raise FormatError(
            f"expected {vertex_count} vertex weights, found {len(vertex_weights)}"
        )
    return WeightedGraph.build(
        Graph.from_edges(vertex_count, edges),
        vertex_weights,
        edge_weights,
    )


def _read_text(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except UnicodeDecodeError as err:
        raise FormatError(f"{path} is not UTF-8 text (byte {err.start})") from err


def read_edge_list(path: Path) -> WeightedGraph:
    """Read and parse an edge-list file. ``OSError`` propagates."""
    return parse_edge_list(_read_text(path))


def _render(value: object) -> str:
    return repr(float(value)) if isinstance(value, float | np.floating) else str(value)


def format_edge_list(weighted: WeightedGraph, comment: str | None = None) -> str:
    """Render a weighted graph in the edge-list format.

    Edge weights are written only when some edge weight differs from 1, and
    the vertex-weight section only when some vertex weight does, so a plain
    graph renders as a plain edge list.
    """
    graph = weighted.graph
    out: list[str] = []
    if comment:
        out.extend(f"{COMMENT_CHAR} {text}".rstrip() for text in comment.splitlines())
    out.append(f"{graph.vertex_count} {graph.edge_count}")
    edge_weights = weighted.edge_weights.tolist()
    with_edge_weights = any(w != DEFAULT_WEIGHT for w in edge_weights)
    for (u, v), w in zip(graph.edges, edge_weights, strict=True):
        out.append(f"{u} {v} {_render(w)}" if with_edge_weights else f"{u} {v}")
    vertex_weights = weighted.vertex_weights.tolist()
    if any(w != DEFAULT_WEIGHT for w in vertex_weights):
        out.append(VERTEX_WEIGHTS_MARKER)
        out.extend(_render(w) for w in vertex_weights)
    return "\n".join(out) + "\n"


def write_edge_list(
    path: Path, weighted: WeightedGraph, comment: str | None = None
) -> None:
    """Write a weighted graph to ``path`` in the edge-list format."""
    path.write_text(format_edge_list(weighted, comment), encoding="utf-8")


def parse_partition(text: str) -> list[list[int]]:
    """Parse a partition file into a list of edge-index classes.

    Only the shape is checked here; whether the classes really partition a
    graph's edge set is ``EdgePartition.from_classes``'s job.
    """
    classes: list[list[int]] = []
    for line, content in _data_lines(text):
        if content == VERTEX_WEIGHTS_MARKER:
            raise FormatError("unexpected vertex-weight marker in a partition", line)
        classes.append([_count(token, "edge index", line) for token in content.split()])
    return classes


def read_partition(path: Path) -> list[list[int]]:
    """Read and parse a partition file. ``OSError`` propagates."""
    return parse_partition(_read_text(path))
