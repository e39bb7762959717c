"""Typed shapes of the JSON documents the CLI writes.

These ``TypedDict``s are a static contract for the report stream: every
document is built from them, so a key typo is a ``mypy`` error instead of a
silently different report. Index values are ``int`` in integer mode and
``float`` in float mode.
"""

from typing import NotRequired, TypedDict

type Number = int | float


class IndexReportDocument(TypedDict, total=False):
    """One method's indices. Only the selected index keys are present.

    ``classes`` is the number of partition classes (cut method only);
    ``elapsed_ms`` appears only when timing was requested, so default reports
    are byte-stable.
    """

    W: Number
    We: Number
    WeHat: Number
    Wve: Number
    method: str
    exactness: str
    classes: int
    elapsed_ms: float


class Verdict(TypedDict):
    """Agreement of one index across all methods."""

    index: str
    values: dict[str, Number]
    agree: bool


class VerifyDocument(TypedDict):
    """``verify``: the per-method reports and one verdict per index."""

    graph: "GraphSummary"
    reports: list[IndexReportDocument]
    verdicts: list[Verdict]
    ok: bool


class GraphSummary(TypedDict):
    """Size and weighting of the input graph."""

    vertices: int
    edges: int
    exactness: str


class ComputeDocument(TypedDict):
    """``compute``: one report per method that ran."""

    graph: GraphSummary
    partition: NotRequired[str]
    reports: list[IndexReportDocument]
    quotients: NotRequired[list["QuotientDump"]]
    reduction: NotRequired[list["ReductionStepDocument"]]


class PartitionDocument(TypedDict):
    """``partition``: the Θ*-classes (or a checked partition) of a graph."""

    graph: GraphSummary
    source: str
    classes: list[list[int]]
    class_endpoints: list[list[list[int]]]
    class_sizes: list[int]
    is_c_partition: bool
    quotients: NotRequired[list["QuotientDump"]]


class QuotientDump(TypedDict):
    """One weighted quotient ``G/F_i``."""

    class_index: int
    class_edges: list[int]
    components: list[list[int]]
    edges: list[list[int]]
    vertex_weights: list[Number]
    edge_weights: list[Number]


class Corrections(TypedDict):
    """The three additive correction terms of one reduction (or their sum)."""

    W: Number
    WeHat: Number
    Wve: Number


class ReductionStepDocument(TypedDict):
    """One twin-class step, in the vertex numbering current at that step."""

    quotient: NotRequired[int]
    members: list[int]
    kept: int
    neighbors: list[int]
    trivial: bool
    corrections: Corrections


class ReductionDocument(TypedDict):
    """``reduce``: the step trace, the totals and the reduced graph's size."""

    graph: GraphSummary
    steps: list[ReductionStepDocument]
    total: Corrections
    reduced: GraphSummary
