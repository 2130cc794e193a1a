# cli.py
"""Command line front-end: align reads, run the classical baseline,
estimate resources and move circuits in and out of cQASM.

Exit codes: 0 ok, 2 input error, 3 resource ceiling, 4 serialization limit.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any

from . import utils
from .aligner import Aligner
from .circuit import Circuit
from .classical import classical_align
from .const import (
    DEFAULT_GAMMA,
    DEFAULT_SHOTS,
    SCHEMA_VERSION,
    VERSION,
    AutoKnown,
    BoyerRandomized,
    Diffusion,
    Fixed,
    IterationPolicy,
    QueryConfig,
    Schedule,
)
from .database import (
    build_database,
    build_hamming_evolution,
    build_preparation,
    build_qpd_circuit,
)
from .dna import DnaString
from .errors import (
    InvalidParameters,
    MaxRoundsExceeded,
    QibamError,
    ResourceLimitError,
    UnsupportedOpForSerialization,
)
from .fasta import read_fasta
from .oracles import (
    DistributedQuery,
    build_diffusion,
    build_memory_oracle,
    build_query_oracle,
    build_state_reflection,
)
from .qasm import execute, parse, serialize
from .resources import estimate
from .statevector import marginal, new_state, sample

logger = logging.getLogger(__name__)

PROG = "qibam"

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_RESOURCE = 3
EXIT_SERIALIZATION = 4

STAGES = ("init", "hamming", "diffusion", "memory-oracle", "reflection", "query-oracle")


# ######################### Argument parsing ############################


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated qubit list: {text!r}")


def _add_reference(parser: argparse.ArgumentParser, required: bool = True) -> None:
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument("--ref-seq", metavar="SEQ", help="reference sequence given inline")
    group.add_argument("--ref-file", metavar="FASTA", help="reference read from the first FASTA record")


def _add_output(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=["json", "csv"], default="json",
                        help="report format (default: json)")
    parser.add_argument("--out", metavar="PATH", default=None,
                        help="file to which to write the report (default: stdout)")


def parse_command_line(argv: Sequence[str] | None = None) -> argparse.Namespace:
    """Parse the qibam command line."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true",
                        help="log at DEBUG level instead of WARNING")
    common.add_argument("--log-file", metavar="PATH", default=None,
                        help="write the log to a file instead of stderr")

    parser = argparse.ArgumentParser(prog=PROG, description="DNA read alignment on a state-vector simulator.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    commands = parser.add_subparsers(dest="command", required=True)

    align = commands.add_parser("align", parents=[common],
                                help="align a read against a reference on the simulator")
    _add_reference(align)
    queries = align.add_mutually_exclusive_group(required=True)
    queries.add_argument("--query", help="the read to align")
    queries.add_argument("--query-file", metavar="PATH",
                         help="one read per line, aligned as a batch")
    align.add_argument("--gamma", type=float, default=DEFAULT_GAMMA,
                       help=f"width of the distributed query (default: {DEFAULT_GAMMA})")
    align.add_argument("--schedule", choices=[s.value for s in Schedule],
                       default=Schedule.TWO_PHASE.value,
                       help="oracle schedule (default: two-phase)")
    align.add_argument("--diffusion", choices=[d.value for d in Diffusion],
                       default=Diffusion.DATABASE.value,
                       help="reflection target (default: database)")
    iterations = align.add_mutually_exclusive_group()
    iterations.add_argument("--iterations", metavar="N", type=int, default=None,
                            help="fixed number of Grover iterations (default: 1)")
    iterations.add_argument("--auto", metavar="S", type=int, nargs="?", const=1, default=None,
                            help="optimal iterations for S known solutions (default S: 1)")
    iterations.add_argument("--boyer", action="store_true",
                            help="randomized iteration counts with classical verification")
    align.add_argument("--max-rounds", metavar="POS_INT", type=int, default=30,
                       help="round limit of --boyer (default: 30)")
    align.add_argument("--shots", metavar="POS_INT", type=int, default=DEFAULT_SHOTS,
                       help=f"number of measurement shots (default: {DEFAULT_SHOTS})")
    align.add_argument("--seed", type=int, default=0, help="sampling seed (default: 0)")
    align.add_argument("--exclude-last", action="store_true",
                       help="withhold the last window from the database")
    align.add_argument("--jobs", metavar="POS_INT", type=int, default=4,
                       help="worker threads of a --query-file batch (default: 4)")
    _add_output(align)
    align.set_defaults(handler=cmd_align)

    baseline = commands.add_parser("baseline", parents=[common],
                                   help="classical minimum-Hamming-distance scan")
    _add_reference(baseline)
    baseline.add_argument("--query", required=True, help="the read to align")
    _add_output(baseline)
    baseline.set_defaults(handler=cmd_baseline)

    resources = commands.add_parser("estimate", parents=[common],
                                    help="closed-form qubit and gate counts")
    resources.add_argument("-A", dest="alphabet", type=int, default=4,
                           help="alphabet size (default: 4)")
    resources.add_argument("-N", dest="reference_length", type=int, required=True,
                           help="reference length")
    resources.add_argument("-M", dest="read_length", type=int, required=True,
                           help="read length")
    _add_output(resources)
    resources.set_defaults(handler=cmd_estimate)

    emit = commands.add_parser("emit-qasm", parents=[common],
                               help="write one pipeline stage as cQASM")
    emit.add_argument("--stage", choices=STAGES, required=True, help="circuit stage")
    _add_reference(emit, required=False)
    emit.add_argument("-M", dest="read_length", type=int, default=None,
                      help="read length (default: length of --query)")
    emit.add_argument("--query", default=None, help="read for the query-dependent stages")
    emit.add_argument("--gamma", type=float, default=DEFAULT_GAMMA,
                      help=f"width of the distributed query (default: {DEFAULT_GAMMA})")
    emit.add_argument("--exclude-last", action="store_true",
                      help="withhold the last window from the database")
    emit.add_argument("--out", metavar="PATH", default=None,
                      help="file to which to write the circuit (default: stdout)")
    emit.set_defaults(handler=cmd_emit_qasm)

    run = commands.add_parser("run-qasm", parents=[common],
                              help="execute a cQASM file on |0...0>")
    run.add_argument("input", help="cQASM file")
    run.add_argument("--qubits-list", metavar="Q,Q,...", type=_int_list, default=None,
                     help="measured qubits, first = least significant (default: all)")
    run.add_argument("--shots", metavar="POS_INT", type=int, default=DEFAULT_SHOTS,
                     help=f"number of measurement shots (default: {DEFAULT_SHOTS})")
    run.add_argument("--seed", type=int, default=0, help="sampling seed (default: 0)")
    _add_output(run)
    run.set_defaults(handler=cmd_run_qasm)

    return parser.parse_args(argv)


# ######################### Commands ####################################


def _reference(args: argparse.Namespace) -> tuple[str, DnaString]:
    if args.ref_file is not None:
        record = read_fasta(args.ref_file)
        return record.identifier, record.sequence
    return "inline", DnaString(args.ref_seq)


def _iteration_policy(args: argparse.Namespace) -> IterationPolicy:
    if args.boyer:
        return BoyerRandomized(max_rounds=args.max_rounds, seed=args.seed)
    if args.auto is not None:
        return AutoKnown(args.auto)
    return Fixed(1 if args.iterations is None else args.iterations)


def _config_dict(cfg: QueryConfig, exclusions: Sequence[int]) -> dict[str, Any]:
    return {
        "gamma": cfg.gamma,
        "schedule": cfg.schedule.value,
        "diffusion": cfg.diffusion.value,
        "iterations": {"policy": type(cfg.iterations).__name__, **cfg.iterations._asdict()},
        "shots": cfg.shots,
        "seed": cfg.seed,
        "exclusions": list(exclusions),
    }


def _header() -> dict[str, Any]:
    return {"schema_version": SCHEMA_VERSION, "tool_version": VERSION}


def _align_one(
    reference_id: str,
    reference: DnaString,
    query: str,
    cfg: QueryConfig,
    exclude_last: bool,
) -> dict[str, Any]:
    started = time.perf_counter()
    exclusions = [len(reference) - len(query)] if exclude_last else []
    aligner = Aligner(reference, query, exclusions)
    prepared = time.perf_counter()
    report: dict[str, Any] = {
        "input": {
            "reference_id": reference_id,
            "reference_length": len(reference),
            "query": str(aligner.query),
            "config": _config_dict(cfg, exclusions),
        },
        "classical": aligner.classical.as_dict(),
    }
    if isinstance(cfg.iterations, BoyerRandomized):
        try:
            outcome = aligner.boyer_search(cfg)
        except MaxRoundsExceeded as e:
            outcome = e.outcome
        report["boyer"] = outcome._asdict()
    else:
        report["result"] = aligner.run(cfg).as_dict()
    report["timing"] = {
        "prepare_seconds": prepared - started,
        "run_seconds": time.perf_counter() - prepared,
    }
    return report


def _read_queries(path: str) -> list[str]:
    lines = Path(path).read_text().splitlines()
    queries = [line.strip() for line in lines if line.strip() and not line.startswith("#")]
    if not queries:
        raise InvalidParameters(f"{path} holds no queries")
    return queries


def _result_rows(report: dict[str, Any]) -> list[dict[str, Any]]:
    if "boyer" in report:
        return [dict(report["boyer"])]
    result = report["result"]
    distances = result["classical_distances"]
    return [
        {
            "tag": tag,
            "exact_probability": probability,
            "shot_count": result["histogram"].get(str(tag), 0),
            "classical_distance": distances.get(str(tag), ""),
        }
        for tag, probability in enumerate(result["tag_probabilities"])
    ]


def cmd_align(args: argparse.Namespace) -> str:
    reference_id, reference = _reference(args)
    cfg = QueryConfig(
        gamma=args.gamma,
        schedule=Schedule(args.schedule),
        iterations=_iteration_policy(args),
        shots=args.shots,
        seed=args.seed,
        diffusion=Diffusion(args.diffusion),
    )
    if args.query is not None:
        report = _align_one(reference_id, reference, args.query, cfg, args.exclude_last)
        if args.format == "csv":
            return _to_csv(_result_rows(report))
        return _to_json({**_header(), **report})

    queries = _read_queries(args.query_file)
    logger.info("Aligning %d queries on %d threads", len(queries), args.jobs)

    def job(number: int, query: str) -> dict[str, Any]:
        seeded = cfg._replace(seed=utils.derive_seed(cfg.seed, number))
        if isinstance(cfg.iterations, BoyerRandomized):
            seeded = seeded._replace(
                iterations=cfg.iterations._replace(seed=seeded.seed)
            )
        return _align_one(reference_id, reference, query, seeded, args.exclude_last)

    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as executor:
        runs = list(executor.map(job, range(len(queries)), queries))
    if args.format == "csv":
        return _to_csv(
            [{"query": run["input"]["query"], **row} for run in runs for row in _result_rows(run)]
        )
    return _to_json({**_header(), "runs": runs})


def cmd_baseline(args: argparse.Namespace) -> str:
    reference_id, reference = _reference(args)
    alignment = classical_align(reference, args.query)
    if args.format == "csv":
        return _to_csv(
            [
                {"index": i, "window": str(window), "distance": distance}
                for i, (window, distance) in enumerate(
                    zip(alignment.windows, alignment.distances)
                )
            ]
        )
    report = {
        **_header(),
        "input": {
            "reference_id": reference_id,
            "reference_length": len(reference),
            "query": str(DnaString(args.query)),
        },
        "classical": alignment.as_dict(),
    }
    return _to_json(report)


def cmd_estimate(args: argparse.Namespace) -> str:
    result = estimate(args.alphabet, args.reference_length, args.read_length)
    if args.format == "csv":
        return _to_csv(
            [{"quantity": key, "value": value} for key, value in _flatten(result.as_dict())]
        )
    return _to_json({**_header(), "estimate": result.as_dict()})


def _stage_circuit(args: argparse.Namespace) -> Circuit:
    if args.stage == "query-oracle":
        m = args.read_length or (len(args.query) if args.query else 1)
        oracle = build_query_oracle(DistributedQuery(2 * m, args.gamma))
        return Circuit(oracle.qubits[-1] + 1, (oracle,), name="query-oracle")

    if args.ref_seq is None and args.ref_file is None:
        raise InvalidParameters(f"Stage {args.stage!r} needs --ref-seq or --ref-file")
    _, reference = _reference(args)
    m = args.read_length or (len(args.query) if args.query else None)
    if m is None:
        raise InvalidParameters("Give -M or --query to set the read length")
    exclusions = [len(reference) - m] if args.exclude_last else []
    db = build_database(reference, m, exclusions)

    if args.stage == "init":
        return build_qpd_circuit(db)
    if args.stage == "diffusion":
        return Circuit(db.num_qubits, tuple(build_diffusion(db.num_qubits)), name="diffusion")
    if args.query is None:
        raise InvalidParameters(f"Stage {args.stage!r} needs --query")
    if args.stage == "hamming":
        return build_hamming_evolution(args.query, db)
    if args.stage == "memory-oracle":
        return Circuit(db.num_qubits, tuple(build_memory_oracle(db, args.query)), name="memory-oracle")
    prep = build_preparation(db, args.query)
    return Circuit(db.num_qubits, tuple(build_state_reflection(prep)), name="reflection")


def cmd_emit_qasm(args: argparse.Namespace) -> str:
    circuit = _stage_circuit(args)
    logger.info("Emitting %r", circuit)
    return serialize(circuit)


def cmd_run_qasm(args: argparse.Namespace) -> str:
    started = time.perf_counter()
    circuit = parse(Path(args.input).read_text(), name=Path(args.input).stem)
    parsed = time.perf_counter()
    state = execute(circuit, new_state(circuit.num_qubits))
    qubits = list(range(circuit.num_qubits)) if args.qubits_list is None else args.qubits_list
    probabilities = marginal(state, qubits)
    histogram = sample(state, qubits, args.shots, args.seed)
    finished = time.perf_counter()
    if args.format == "csv":
        return _to_csv(
            [
                {"outcome": outcome, "probability": float(p), "shot_count": histogram.get(outcome, 0)}
                for outcome, p in enumerate(probabilities)
            ]
        )
    report = {
        **_header(),
        "input": {
            "file": args.input,
            "num_qubits": circuit.num_qubits,
            "ops": len(circuit),
            "qubits": qubits,
            "shots": args.shots,
            "seed": args.seed,
        },
        "marginal": [float(p) for p in probabilities],
        "histogram": {str(k): v for k, v in sorted(histogram.items())},
        "timing": {"parse_seconds": parsed - started, "run_seconds": finished - parsed},
    }
    return _to_json(report)


# ######################### Output ######################################


def _flatten(mapping: dict[str, Any], prefix: str = "") -> list[tuple[str, Any]]:
    rows: list[tuple[str, Any]] = []
    for key, value in mapping.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            rows.extend(_flatten(value, f"{name}."))
        else:
            rows.append((name, value))
    return rows


def _to_json(report: dict[str, Any]) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _to_csv(rows: list[dict[str, Any]]) -> str:
    buffer = io.StringIO()
    if rows:
        writer = csv.DictWriter(buffer, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return buffer.getvalue()


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)
        logger.info("Wrote %s", out)


def _fail(message: str, code: int) -> int:
    print(f"{PROG}: error: {message}", file=sys.stderr)
    return code


def main(argv: Sequence[str] | None = None) -> int:
    """Run the command line program."""
    args = parse_command_line(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        filename=args.log_file,
    )
    handler: Callable[[argparse.Namespace], str] = args.handler
    try:
        text = handler(args)
        _write(text, args.out)
    except ResourceLimitError as e:
        return _fail(str(e), EXIT_RESOURCE)
    except UnsupportedOpForSerialization as e:
        return _fail(str(e), EXIT_SERIALIZATION)
    except (QibamError, OSError) as e:
        return _fail(str(e), EXIT_INPUT)
    return EXIT_OK
