"""
Command-line front end for cutwiener.

Usage:

    # all four indices by the cut method over the Θ*-classes
    python -m cutwiener compute --gen gmn 3 2 --method cut

    # one index of a graph file, every method, compared
    python -m cutwiener verify --in graph.txt --index we

    # write G_{4,3} in the edge-list format
    python -m cutwiener generate gmn 4 3 --out g43.txt

    # Θ*-classes and the weighted quotients over them
    python -m cutwiener partition --in graph.txt --dump-quotients

    # collapse all twin classes, keep the reduced graph
    python -m cutwiener reduce --in graph.txt --out reduced.txt

Reports go to stdout (or ``--out`` for compute, verify and partition) as JSON
unless ``--format text``. Logs go to stderr. Exit codes: 0 ok, 1 usage, 2 I/O,
3 malformed file, 4 graph precondition, 5 methods disagree.
"""

import argparse
import json
import logging
import sys
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Any, NoReturn, TextIO

import colorlog

from .const import (
    DOMAIN,
    EXIT_IO,
    EXIT_OK,
    EXIT_USAGE,
    FORMAT_JSON,
    FORMAT_TEXT,
    INDEX_ALL,
    INDEX_KEYS,
    METHOD_ALL,
    METHOD_CUT,
    METHODS,
    PARTITION_FILE,
    PARTITION_SOURCES,
    PARTITION_THETA_STAR,
    selected_index_keys,
)
from .coordinator import evaluate, resolve_partition
from .diagnostics import (
    corrections_document,
    graph_summary,
    partition_report,
    quotient_dump,
    reduction_trace,
    render_text,
    report_documents,
    verdicts,
)
from .edgelist import format_edge_list, read_edge_list, read_partition, write_edge_list
from .exceptions import CutWienerError, Disconnected, UsageError, VerificationMismatch
from .generators import FAMILIES, generate
from .graph import WeightedGraph, all_pairs_distances, validate
from .models import ComputeDocument, ReductionDocument, VerifyDocument
from .quotient import quotient_set
from .reduction import reduce_fully
from .theta import is_c_partition, theta_star_partition

_LOGGER = logging.getLogger(__name__)

COMMAND_COMPUTE = "compute"
COMMAND_VERIFY = "verify"
COMMAND_GENERATE = "generate"
COMMAND_PARTITION = "partition"
COMMAND_REDUCE = "reduce"
# Commands whose ``--out`` receives the report rather than a graph file.
REPORT_COMMANDS = (COMMAND_COMPUTE, COMMAND_VERIFY, COMMAND_PARTITION)

SEED_LIMIT = 2**64

LOG_FORMAT = "%(log_color)s%(levelname)-8s%(reset)s %(name)s: %(message)s"


class _ArgumentParser(argparse.ArgumentParser):
    """Exit with the usage code on bad arguments (argparse's 2 means I/O here)."""

    def error(self, message: str) -> NoReturn:
        """Print usage and the problem to stderr, then exit 1."""
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    """One validated CLI invocation."""

    command: str
    input_path: Path | None = None
    generator: tuple[str, ...] | None = None
    indices: tuple[str, ...] = tuple(INDEX_KEYS.values())
    method: str = METHOD_ALL
    partition_source: str = PARTITION_THETA_STAR
    partition_file: Path | None = None
    output_format: str = FORMAT_JSON
    out: Path | None = None
    seed: int = 0
    reduce: bool = False
    dump_quotients: bool = False
    trace_reduction: bool = False
    timing: bool = False

    def __post_init__(self) -> None:
        """Check the cross-field rules; raise ``UsageError`` on any violation."""
        if self.command == COMMAND_GENERATE:
            if not self.generator:
                raise UsageError("generate needs a family and its parameters")
        elif (self.input_path is None) == (self.generator is None):
            raise UsageError(f"{self.command} needs exactly one of --in or --gen")
        if self.command == COMMAND_VERIFY and self.method != METHOD_ALL:
            raise UsageError("verify always runs every method")
        if self.method not in METHODS:
            raise UsageError(f"unknown method {self.method!r}")
        if self.partition_source not in PARTITION_SOURCES:
            raise UsageError(f"unknown partition source {self.partition_source!r}")
        if (self.partition_source == PARTITION_FILE) != (self.partition_file is not None):
            raise UsageError("--partition file and --partition-file go together")
        if (self.reduce or self.trace_reduction) and self.command == COMMAND_COMPUTE:
            if self.method not in (METHOD_CUT, METHOD_ALL):
                raise UsageError("--reduce applies to the cut method only")
        if not 0 <= self.seed < SEED_LIMIT:
            raise UsageError(f"--seed must be an unsigned 64-bit integer, got {self.seed}")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        """Build the config from parsed arguments."""
        command = args.command
        if command == COMMAND_GENERATE:
            return cls(
                command=command,
                generator=(args.family, *args.params),
                out=args.out,
                seed=args.seed,
            )
        partition_file = args.partition_file
        source = args.partition or (
            PARTITION_FILE if partition_file else PARTITION_THETA_STAR
        )
        method = getattr(args, "method", METHOD_ALL)
        return cls(
            command=command,
            input_path=args.input,
            generator=tuple(args.gen) if args.gen else None,
            indices=selected_index_keys(args.index),
            method=method,
            partition_source=source,
            partition_file=partition_file,
            output_format=args.format,
            out=args.out,
            seed=args.seed,
            reduce=args.reduce or args.trace_reduction,
            dump_quotients=args.dump_quotients,
            trace_reduction=args.trace_reduction,
            timing=args.timing,
        )


def configure_logging(verbosity: int) -> None:
    """Attach one coloured stderr handler to the package logger.

    ``verbosity`` is -1 for ``--quiet``, 0 by default and 1 for ``--verbose``.
    """
    handler = colorlog.StreamHandler(sys.stderr)
    handler.setFormatter(colorlog.ColoredFormatter(LOG_FORMAT))
    logger = logging.getLogger(DOMAIN)
    logger.handlers[:] = [handler]
    logger.setLevel({-1: logging.WARNING, 0: logging.INFO, 1: logging.DEBUG}[verbosity])


def _load(config: RunConfig) -> WeightedGraph:
    if config.input_path is not None:
        weighted = read_edge_list(config.input_path)
        origin = str(config.input_path)
    else:
        assert config.generator is not None
        family, *params = config.generator
        weighted = WeightedGraph.build(generate(family, params, config.seed))
        origin = " ".join(config.generator)
    result = validate(weighted.graph)
    if not result.connected:
        raise Disconnected(f"{origin} has {result.components} components")
    return weighted


def _partition_classes(config: RunConfig) -> list[list[int]] | None:
    if config.partition_file is None:
        return None
    return read_partition(config.partition_file)


def _emit(config: RunConfig, document: Mapping[str, Any], stream: TextIO) -> None:
    if config.output_format == FORMAT_TEXT:
        text = render_text(document)
    else:
        text = json.dumps(document, indent=2, ensure_ascii=False) + "\n"
    if config.out is not None and config.command in REPORT_COMMANDS:
        config.out.write_text(text, encoding="utf-8")
    else:
        stream.write(text)


def _compute(config: RunConfig, stream: TextIO) -> int:
    weighted = _load(config)
    evaluation = evaluate(
        weighted,
        config.method,
        partition_source=config.partition_source,
        partition_classes=_partition_classes(config),
        reduce=config.reduce,
        timing=config.timing,
    )
    document: ComputeDocument = {
        "graph": graph_summary(weighted),
        "reports": report_documents(evaluation.reports, config.indices),
    }
    partition = evaluation.partition
    if partition is not None:
        document["partition"] = config.partition_source
    if config.dump_quotients:
        if partition is None:
            partition = resolve_partition(
                weighted.graph,
                all_pairs_distances(weighted.graph),
                config.partition_source,
                _partition_classes(config),
            )
        document["quotients"] = quotient_dump(
            quotient_set(weighted.graph, partition), weighted.edge_weights
        )
    if config.trace_reduction:
        document["reduction"] = [
            entry
            for term in evaluation.terms
            if term.reduction is not None
            for entry in reduction_trace(term.reduction.steps, quotient=term.class_index)
        ]
    _emit(config, document, stream)
    _LOGGER.info("Computed %s by %s", ", ".join(config.indices), config.method)
    return EXIT_OK


def _verify(config: RunConfig, stream: TextIO) -> int:
    weighted = _load(config)
    evaluation = evaluate(
        weighted,
        METHOD_ALL,
        partition_source=config.partition_source,
        partition_classes=_partition_classes(config),
        reduce=config.reduce,
        timing=config.timing,
    )
    checks = verdicts(evaluation.reports, config.indices)
    document: VerifyDocument = {
        "graph": graph_summary(weighted),
        "reports": report_documents(evaluation.reports, config.indices),
        "verdicts": checks,
        "ok": all(check["agree"] for check in checks),
    }
    _emit(config, document, stream)
    if not document["ok"]:
        disagreeing = [check["index"] for check in checks if not check["agree"]]
        raise VerificationMismatch(f"methods disagree on {', '.join(disagreeing)}")
    _LOGGER.info("All methods agree on %s", ", ".join(config.indices))
    return EXIT_OK


def _generate(config: RunConfig, stream: TextIO) -> int:
    assert config.generator is not None
    family, *params = config.generator
    weighted = WeightedGraph.build(generate(family, params, config.seed))
    comment = f"generated: {' '.join(config.generator)} (seed {config.seed})"
    if config.out is not None:
        write_edge_list(config.out, weighted, comment)
        _LOGGER.info("Wrote %s to %s", family, config.out)
    else:
        stream.write(format_edge_list(weighted, comment))
    return EXIT_OK


def _partition(config: RunConfig, stream: TextIO) -> int:
    weighted = _load(config)
    graph = weighted.graph
    dm = all_pairs_distances(graph)
    theta_star = theta_star_partition(graph, dm)
    if config.partition_source == PARTITION_THETA_STAR:
        partition = theta_star
    else:
        partition = resolve_partition(
            graph, dm, config.partition_source, _partition_classes(config)
        )
    document = partition_report(
        weighted,
        partition,
        config.partition_source,
        is_c_partition(graph, dm, partition, theta_star),
        quotient_set(graph, partition) if config.dump_quotients else None,
    )
    _emit(config, document, stream)
    _LOGGER.info("%d classes (%d Θ*-classes)", len(partition), len(theta_star))
    return EXIT_OK


def _reduce(config: RunConfig, stream: TextIO) -> int:
    weighted = _load(config)
    result = reduce_fully(weighted.graph, weighted.vertex_weights, weighted.edge_weights)
    reduced = WeightedGraph(result.graph, result.vertex_weights, result.edge_weights)
    document: ReductionDocument = {
        "graph": graph_summary(weighted),
        "steps": reduction_trace(result.steps),
        "total": corrections_document(result.total),
        "reduced": graph_summary(reduced),
    }
    if config.out is not None:
        write_edge_list(config.out, reduced, f"reduced in {len(result.steps)} steps")
    _emit(config, document, stream)
    _LOGGER.info(
        "Reduced %d -> %d vertices in %d steps",
        weighted.graph.vertex_count,
        result.graph.vertex_count,
        len(result.steps),
    )
    return EXIT_OK


_COMMANDS = {
    COMMAND_COMPUTE: _compute,
    COMMAND_VERIFY: _verify,
    COMMAND_GENERATE: _generate,
    COMMAND_PARTITION: _partition,
    COMMAND_REDUCE: _reduce,
}


def run(config: RunConfig, stream: TextIO | None = None) -> int:
    """Execute one command; library errors propagate to the caller."""
    return _COMMANDS[config.command](config, stream or sys.stdout)


def _add_logging_options(parser: argparse.ArgumentParser) -> None:
    level = parser.add_mutually_exclusive_group()
    level.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    level.add_argument("-q", "--quiet", action="store_true", help="warnings only")


def _add_input_options(parser: argparse.ArgumentParser, *, methods: bool) -> None:
    _add_logging_options(parser)
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--in", dest="input", type=Path, help="edge-list file")
    source.add_argument(
        "--gen",
        nargs="+",
        metavar="ARG",
        help=f"generated graph: FAMILY PARAMS... ({', '.join(FAMILIES)})",
    )
    if methods:
        parser.add_argument(
            "--method", choices=METHODS, default=METHOD_ALL, help="(default: all)"
        )
    parser.add_argument(
        "--partition", choices=PARTITION_SOURCES, help="c-partition for the cut method"
    )
    parser.add_argument("--partition-file", type=Path, help="one class per line")
    parser.add_argument(
        "--index",
        choices=[*INDEX_KEYS, INDEX_ALL],
        default=INDEX_ALL,
        help="indices to report (default: all)",
    )
    parser.add_argument("--out", type=Path, help="write here instead of stdout")
    parser.add_argument(
        "--format", choices=(FORMAT_JSON, FORMAT_TEXT), default=FORMAT_JSON
    )
    parser.add_argument("--seed", type=int, default=0, help="random seed (default: 0)")
    parser.add_argument(
        "--dump-quotients", action="store_true", help="include every weighted quotient"
    )
    parser.add_argument(
        "--trace-reduction", action="store_true", help="include each reduction step"
    )
    parser.add_argument(
        "--reduce", action="store_true", help="reduce twin classes inside each quotient"
    )
    parser.add_argument(
        "--timing", action="store_true", help="report elapsed_ms per method"
    )


def build_parser() -> argparse.ArgumentParser:
    """The full argument parser."""
    parser = _ArgumentParser(
        prog=DOMAIN,
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    _add_input_options(
        sub.add_parser(COMMAND_COMPUTE, help="compute indices"), methods=True
    )
    _add_input_options(
        sub.add_parser(COMMAND_VERIFY, help="compare every method"), methods=False
    )
    _add_input_options(
        sub.add_parser(COMMAND_PARTITION, help="Θ*-classes and quotients"),
        methods=False,
    )
    _add_input_options(
        sub.add_parser(COMMAND_REDUCE, help="collapse twin classes"), methods=False
    )

    gen = sub.add_parser(COMMAND_GENERATE, help="write a generated graph")
    gen.add_argument("family", choices=FAMILIES)
    gen.add_argument("params", nargs="*", help="family parameters")
    gen.add_argument("--out", type=Path, help="edge-list file (default: stdout)")
    gen.add_argument("--seed", type=int, default=0, help="random seed (default: 0)")
    _add_logging_options(gen)
    return parser


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def main(argv: Sequence[str] | None = None) -> int:
    """Parse ``argv``, run the command and map failures to exit codes."""
    args = build_parser().parse_args(argv)
    configure_logging(-1 if args.quiet else 1 if args.verbose else 0)
    try:
        return run(RunConfig.from_args(args))
    except CutWienerError as err:
        return _fail(str(err), err.exit_code)
    except OSError as err:
        return _fail(f"{err.strerror or err}: {err.filename}", EXIT_IO)


if __name__ == "__main__":
    sys.exit(main())
