"""Builders for the JSON documents the CLI emits, and their text rendering.

Everything here turns computed objects into plain ``models`` dicts; nothing
computes an index. Keys keep a fixed order so a report is byte-stable for a
given input and seed.
"""

from collections.abc import Iterable, Mapping, Sequence
from typing import Any

import numpy as np

from .const import EXACTNESS_FLOAT, EXACTNESS_INTEGER
from .graph import WeightedGraph
from .indices import IndexReport, same_value
from .models import (
    Corrections as CorrectionsDocument,
    GraphSummary,
    IndexReportDocument,
    PartitionDocument,
    QuotientDump,
    ReductionStepDocument,
    Verdict,
)
from .quotient import QuotientSet
from .reduction import Corrections, ReductionStep
from .theta import EdgePartition


def graph_summary(weighted: WeightedGraph) -> GraphSummary:
    """Vertex and edge counts and the arithmetic mode of the weights."""
    return {
        "vertices": weighted.graph.vertex_count,
        "edges": weighted.graph.edge_count,
        "exactness": EXACTNESS_INTEGER if weighted.exact else EXACTNESS_FLOAT,
    }


def _numbers(values: np.ndarray) -> list[Any]:
    return list(values.tolist())


def quotient_dump(quotients: QuotientSet, edge_weights: np.ndarray) -> list[QuotientDump]:
    """Per class: the class edges, components, quotient edges and both weight vectors."""
    dumps: list[QuotientDump] = []
    for index, class_edges in enumerate(quotients.partition.classes):
        weighted = quotients.weighted(index, edge_weights)
        dumps.append(
            {
                "class_index": index,
                "class_edges": list(class_edges),
                "components": [list(group) for group in weighted.structure.members],
                "edges": [list(pair) for pair in weighted.quotient.edges],
                "vertex_weights": _numbers(weighted.vertex_weight),
                "edge_weights": _numbers(weighted.edge_weight),
            }
        )
    return dumps


def partition_report(
    weighted: WeightedGraph,
    partition: EdgePartition,
    source: str,
    is_c_partition: bool,
    quotients: QuotientSet | None = None,
) -> PartitionDocument:
    """The classes of ``partition`` with their endpoint pairs, their sizes and
    whether it is coarser than Θ*.
    """
    document: PartitionDocument = {
        "graph": graph_summary(weighted),
        "source": source,
        "classes": [list(group) for group in partition.classes],
        "class_endpoints": [
            [list(weighted.graph.edges[edge]) for edge in group]
            for group in partition.classes
        ],
        "class_sizes": [len(group) for group in partition.classes],
        "is_c_partition": is_c_partition,
    }
    if quotients is not None:
        document["quotients"] = quotient_dump(quotients, weighted.edge_weights)
    return document


def corrections_document(corrections: Corrections) -> CorrectionsDocument:
    """``{"W", "WeHat", "Wve"}`` of a correction triple."""
    return {
        "W": corrections.w,
        "WeHat": corrections.we_hat,
        "Wve": corrections.wve,
    }


def reduction_trace(
    steps: Iterable[ReductionStep], quotient: int | None = None
) -> list[ReductionStepDocument]:
    """One entry per step, tagged with the quotient it ran on when given."""
    trace: list[ReductionStepDocument] = []
    for step in steps:
        entry: ReductionStepDocument = {
            "members": list(step.members),
            "kept": step.kept,
            "neighbors": list(step.neighbors),
            "trivial": step.trivial,
            "corrections": corrections_document(step.corrections),
        }
        if quotient is not None:
            entry = {"quotient": quotient, **entry}
        trace.append(entry)
    return trace


def verdicts(reports: Sequence[IndexReport], keys: Sequence[str]) -> list[Verdict]:
    """Per selected index, every method's value and whether they all agree."""
    result: list[Verdict] = []
    for key in keys:
        values = {report.method: report.value(key) for report in reports}
        first = next(iter(values.values()))
        result.append(
            {
                "index": key,
                "values": values,
                "agree": all(same_value(first, value) for value in values.values()),
            }
        )
    return result


def report_documents(
    reports: Sequence[IndexReport], keys: Sequence[str]
) -> list[IndexReportDocument]:
    """``IndexReport.as_dict`` for each report."""
    return [report.as_dict(keys) for report in reports]


def _text_lines(value: Any, indent: int) -> list[str]:
    pad = "  " * indent
    if isinstance(value, Mapping):
        lines = []
        for key, item in value.items():
            if isinstance(item, Mapping | list) and item and not _is_flat(item):
                lines.append(f"{pad}{key}:")
                lines.extend(_text_lines(item, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_flat(item)}")
        return lines
    if isinstance(value, list):
        lines = []
        for item in value:
            if isinstance(item, Mapping | list) and not _is_flat(item):
                lines.append(f"{pad}-")
                lines.extend(_text_lines(item, indent + 1))
            else:
                lines.append(f"{pad}- {_flat(item)}")
        return lines
    return [f"{pad}{_flat(value)}"]


def _is_flat(value: Any) -> bool:
    if isinstance(value, list):
        return all(not isinstance(item, Mapping | list) for item in value)
    return False


def _flat(value: Any) -> str:
    if isinstance(value, list):
        return " ".join(str(item) for item in value)
    if isinstance(value, bool):
        return "yes" if value else "no"
    return str(value)


def render_text(document: Mapping[str, Any]) -> str:
    """Human-readable rendering of any report document, one field per line."""
    return "\n".join(_text_lines(document, 0)) + "\n"

