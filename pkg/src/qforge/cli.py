"""Batch command-line front end.

Subcommands: optimize (gate deletion), retarget (gate-set rewrite), verify
(exact or section-summed distance), stats (gate counts). Exit codes: 0 on
success, 1 for usage problems, 2 for parse errors, 3 for pass failures,
4 when verification lands over threshold.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import (
    CapacityError,
    PairingError,
    PartitionError,
    PipelineError,
    QasmError,
    RetargetError,
)
from .gatesets import resolve_gate_set
from .ir import DEFAULT_QUBIT_CAP, Circuit
from .numerics import InstantiationConfig
from .passes import (
    DeleteConfig,
    DeletePass,
    PassReport,
    RetargetConfig,
    RetargetPass,
    SectionRecord,
    run_pipeline,
)
from .qasm import emit_qasm, parse_qasm
from .verify import (
    DEFAULT_SECTION_SIZE,
    verify_exact,
    verify_upper_bound,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_PASS = 3
EXIT_VERIFY = 4


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    # argparse exits with code 2 on bad flags; route through our policy.
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(
        prog="qforge",
        description="Numerical circuit optimizer: gate deletion, gate-set "
        "retargeting, and error verification over OpenQASM 2.0 files.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_out=True):
        p.add_argument("--in", dest="input", required=True, metavar="FILE",
                       help="input QASM file")
        if needs_out:
            p.add_argument("--out", dest="output", required=True,
                           metavar="FILE", help="output QASM file")
        p.add_argument("--block-size", type=int, default=3,
                       help="qubits per partition block (default 3)")
        p.add_argument("--multistarts", type=int, default=4,
                       help="optimizer starts per instantiation (default 4)")
        p.add_argument("--epsilon", type=float, default=1e-10,
                       help="acceptance threshold per block (default 1e-10)")
        p.add_argument("--seed", type=int, default=0,
                       help="base random seed (default 0)")
        p.add_argument("--report", metavar="FILE",
                       help="write a JSON run report here")
        p.add_argument("--jobs", type=int, default=None,
                       help="worker threads over blocks "
                       "(default: available parallelism)")

    p_opt = sub.add_parser("optimize", help="delete redundant gates")
    common(p_opt)
    p_opt.add_argument("--max-sweeps", type=int, default=None,
                       help="cap deletion sweeps (default: until no change)")

    p_ret = sub.add_parser("retarget", help="rewrite onto a target gate set")
    common(p_ret)
    p_ret.add_argument("--target", required=True,
                       help="gate-set name, comma list of gates, or JSON file")

    p_ver = sub.add_parser("verify", help="bound the compiled circuit's error")
    p_ver.add_argument("--in", dest="input", required=True, metavar="FILE",
                       help="original QASM file")
    p_ver.add_argument("--compiled", metavar="FILE",
                       help="compiled QASM file (exact mode)")
    p_ver.add_argument("--report", metavar="FILE",
                       help="pass report with recorded sections "
                       "(upper-bound mode)")
    p_ver.add_argument("--section-size", type=int,
                       default=DEFAULT_SECTION_SIZE,
                       help=f"merge sections up to this many qubits "
                       f"(default {DEFAULT_SECTION_SIZE})")
    p_ver.add_argument("--epsilon", type=float, default=1e-10,
                       help="per-section pass threshold (default 1e-10)")

    p_stats = sub.add_parser("stats", help="print circuit statistics")
    p_stats.add_argument("--in", dest="input", required=True, metavar="FILE",
                         help="input QASM file")
    return parser


def _read_circuit(path: str) -> Circuit:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    return parse_qasm(text)


def _jobs(args) -> int:
    if args.jobs is not None:
        if args.jobs < 1:
            raise UsageError(f"--jobs must be >= 1, got {args.jobs}")
        return args.jobs
    return os.cpu_count() or 1


def _check_common(args):
    if args.block_size < 2:
        raise UsageError(f"--block-size must be >= 2, got {args.block_size}")
    if not args.epsilon > 0:
        raise UsageError(f"--epsilon must be positive, got {args.epsilon}")
    if args.multistarts < 1:
        raise UsageError(f"--multistarts must be >= 1, got {args.multistarts}")


def _instantiation(args) -> InstantiationConfig:
    return InstantiationConfig(
        multistarts=args.multistarts,
        threshold=args.epsilon,
        seed=args.seed,
    )


def _section_payload(section: SectionRecord) -> dict:
    return {
        "location": list(section.location),
        "span": list(section.span),
        "distance": section.distance,
        "original_qasm": emit_qasm(section.original),
        "compiled_qasm": emit_qasm(section.compiled),
    }


def _report_payload(args, command, circuit, result, report: PassReport) -> dict:
    n1, n2 = circuit.counts()
    m1, m2 = result.counts()
    payload = {
        "command": command,
        "input": {
            "path": args.input,
            "num_qubits": circuit.num_qubits,
            "counts": {"1q": n1, "2q": n2},
            "depth": circuit.depth(),
        },
        "output": {
            "path": args.output,
            "num_qubits": result.num_qubits,
            "counts": {"1q": m1, "2q": m2},
            "depth": result.depth(),
        },
        "seed": args.seed,
        "epsilon": args.epsilon,
        "block_size": args.block_size,
        "multistarts": args.multistarts,
        "wall_ms": report.wall_ms,
        "distance_bound": report.distance_bound,
        "passes": [
            {
                "name": stage.name,
                "counts_before": {
                    "1q": stage.counts_before[0],
                    "2q": stage.counts_before[1],
                },
                "counts_after": {
                    "1q": stage.counts_after[0],
                    "2q": stage.counts_after[1],
                },
                "sweeps": stage.sweeps,
                "removed": stage.removed,
                "replaced_regions": stage.replaced_regions,
                "distance_bound": stage.distance_bound,
                "wall_ms": stage.wall_ms,
                "sections": [
                    _section_payload(s) for s in stage.sections
                ],
            }
            for stage in report.stages
        ],
    }
    if command == "retarget" and n2 > 0:
        payload["two_qubit_ratio"] = m2 / n2
    return payload


def _write_outputs(args, command, circuit, result, report):
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(emit_qasm(result))
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(
                _report_payload(args, command, circuit, result, report),
                fh,
                indent=2,
            )
            fh.write("\n")


def cmd_optimize(args) -> int:
    _check_common(args)
    if args.max_sweeps is not None and args.max_sweeps < 1:
        raise UsageError(f"--max-sweeps must be >= 1, got {args.max_sweeps}")
    circuit = _read_circuit(args.input)
    config = DeleteConfig(
        threshold=args.epsilon,
        max_sweeps=args.max_sweeps,
        instantiation=_instantiation(args),
    )
    stage = DeletePass(config, args.block_size, _jobs(args))
    result, report = run_pipeline(circuit, [stage])
    _write_outputs(args, "optimize", circuit, result, report)
    n1, n2 = circuit.counts()
    m1, m2 = result.counts()
    s = report.stages[0]
    print(f"optimize: {args.input} -> {args.output}")
    print(f"1q: {n1} -> {m1}")
    print(f"2q: {n2} -> {m2}")
    print(f"removed: {s.removed}  sweeps: {s.sweeps}")
    print(f"distance bound: {report.distance_bound:.6e}")
    print(f"wall ms: {report.wall_ms:.1f}")
    return EXIT_OK


def cmd_retarget(args) -> int:
    _check_common(args)
    try:
        gate_set = resolve_gate_set(args.target)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        raise UsageError(str(exc)) from exc
    circuit = _read_circuit(args.input)
    config = RetargetConfig(
        gate_set=gate_set,
        threshold=args.epsilon,
        instantiation=_instantiation(args),
    )
    stage = RetargetPass(config, args.block_size, _jobs(args))
    result, report = run_pipeline(circuit, [stage])
    _write_outputs(args, "retarget", circuit, result, report)
    n1, n2 = circuit.counts()
    m1, m2 = result.counts()
    print(f"retarget: {args.input} -> {args.output}")
    print(f"target: {args.target}")
    print(f"1q: {n1} -> {m1}")
    print(f"2q: {n2} -> {m2}")
    if n2:
        print(f"two-qubit ratio: {m2 / n2:.4f}")
    print(f"distance bound: {report.distance_bound:.6e}")
    print(f"wall ms: {report.wall_ms:.1f}")
    return EXIT_OK


def _sections_from_report(path: str) -> list[SectionRecord]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not a valid report: {exc}") from exc
    sections = []
    for stage in doc.get("passes", []):
        for sec in stage.get("sections", []):
            sections.append(
                SectionRecord(
                    tuple(sec["location"]),
                    tuple(sec["span"]),
                    parse_qasm(sec["original_qasm"]),
                    parse_qasm(sec["compiled_qasm"]),
                    float(sec["distance"]),
                )
            )
    if not sections:
        raise UsageError(f"{path} records no sections to verify")
    return sections


def cmd_verify(args) -> int:
    if not args.epsilon > 0:
        raise UsageError(f"--epsilon must be positive, got {args.epsilon}")
    if args.section_size < 2:
        raise UsageError(
            f"--section-size must be >= 2, got {args.section_size}"
        )
    original = _read_circuit(args.input)
    if args.compiled:
        compiled = _read_circuit(args.compiled)
        if (
            original.num_qubits <= DEFAULT_QUBIT_CAP
            and compiled.num_qubits <= DEFAULT_QUBIT_CAP
        ):
            report = verify_exact(original, compiled)
        elif args.report:
            report = verify_upper_bound(
                _sections_from_report(args.report), args.section_size
            )
        else:
            raise UsageError(
                "circuit too wide for exact verification; pass --report "
                "with recorded sections"
            )
    elif args.report:
        report = verify_upper_bound(
            _sections_from_report(args.report), args.section_size
        )
    else:
        raise UsageError("verify needs --compiled or --report")
    print(report.to_text())
    budget = args.epsilon * max(1, len(report.section_distances))
    if report.total_distance <= budget:
        return EXIT_OK
    print(
        f"distance {report.total_distance:.6e} exceeds budget {budget:.6e}",
        file=sys.stderr,
    )
    return EXIT_VERIFY


def cmd_stats(args) -> int:
    circuit = _read_circuit(args.input)
    n1, n2 = circuit.counts()
    print(f"qubits: {circuit.num_qubits}")
    print(f"1q: {n1}")
    print(f"2q: {n2}")
    print(f"depth: {circuit.depth()}")
    return EXIT_OK


_COMMANDS = {
    "optimize": cmd_optimize,
    "retarget": cmd_retarget,
    "verify": cmd_verify,
    "stats": cmd_stats,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QasmError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (
        RetargetError,
        PipelineError,
        PartitionError,
        CapacityError,
        PairingError,
    ) as exc:
        print(f"pass failed: {exc}", file=sys.stderr)
        return EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
