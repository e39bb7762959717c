"""Errors raised by cutwiener.

Every error a caller can act on derives from ``CutWienerError`` and carries the
process exit code the CLI maps it to, so the command line never needs a second
table keyed on exception type. I/O failures are left as ``OSError``.
"""

from .const import EXIT_FORMAT, EXIT_GRAPH, EXIT_MISMATCH, EXIT_USAGE


class CutWienerError(Exception):
    """Base class for all cutwiener errors."""

    exit_code: int = EXIT_USAGE


class UsageError(CutWienerError):
    """Invalid command-line usage or invalid call parameters."""

    exit_code = EXIT_USAGE


class BadSpec(UsageError):
    """A ``G_{m,n}`` specification with ``m < 1`` or ``n < 1``."""


class BadParams(UsageError):
    """Generator parameters outside their documented range."""


class FormatError(CutWienerError):
    """A malformed edge-list or partition file."""

    exit_code = EXIT_FORMAT

    def __init__(self, message: str, line: int | None = None) -> None:
        """Record the 1-based line the problem was found on, if known."""
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class GraphPreconditionError(CutWienerError):
    """The graph, weights or partition violate an operation's precondition."""

    exit_code = EXIT_GRAPH


class _EdgeError(GraphPreconditionError):
    """An error pinned to one edge of the input."""

    reason = "invalid edge"

    def __init__(self, edge: int, pair: tuple[int, int]) -> None:
        """Record the offending edge index and its endpoint pair."""
        self.edge = edge
        self.pair = pair
        super().__init__(f"{self.reason}: edge {edge} = {{{pair[0]}, {pair[1]}}}")


class SelfLoop(_EdgeError):
    """An edge whose two endpoints coincide."""

    reason = "self-loop"


class DuplicateEdge(_EdgeError):
    """A second edge over an unordered pair that already has one."""

    reason = "duplicate edge"


class BadIndex(_EdgeError):
    """An edge endpoint outside ``0 .. vertex_count - 1``."""

    reason = "vertex index out of range"


class Disconnected(GraphPreconditionError):
    """An index was requested for a disconnected graph."""


class NotAPartition(GraphPreconditionError):
    """Edge classes that are empty, overlap, or fail to cover every edge."""


class NotCoarser(GraphPreconditionError):
    """A partition that splits some Θ*-class across two of its parts."""


class BadGroup(GraphPreconditionError):
    """Merge groups that overlap or leave a class out."""


class NotTwinClass(GraphPreconditionError):
    """A vertex set that is not an equivalence class of equal neighbourhoods."""


class InvalidWeights(GraphPreconditionError):
    """Weights of the wrong length, negative, or not finite."""


class VerificationMismatch(CutWienerError):
    """Two computation methods disagreed on an index value."""

    exit_code = EXIT_MISMATCH
