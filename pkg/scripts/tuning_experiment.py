#!/usr/bin/env python3
"""Sweep the effort knobs and report the quality/runtime trade-off.

Part one runs gate deletion on a 16-qubit Trotterized Ising circuit under
increasing effort (multistarts, sweep budget, block width) and reports
removed-gate counts against wall time.  Part two retargets a CNOT ladder to
the square-root-iSWAP set at two block widths and reports the two-qubit
ratio.  Directional expectations: more effort never removes fewer gates,
and wider blocks trade runtime for quality.
"""
import argparse
import json
import time

from qforge.generators import cnot_ladder, tfim_trotter
from qforge.gatesets import named_gate_set
from qforge.numerics import InstantiationConfig
from qforge.passes import (
    DeleteConfig,
    RetargetConfig,
    delete_gates_partitioned,
    retarget_partitioned,
)

DELETE_GRID = [
    # label, block_size, multistarts, max_sweeps (None = until fixpoint)
    ("light (1 start, 1 sweep)", 3, 1, 1),
    ("default (4 starts)", 3, 4, None),
    ("wide blocks (4 qubits)", 4, 4, None),
]


def run_deletion(qubits: int, steps: int):
    circuit = tfim_trotter(qubits, steps=steps)
    one_q, two_q = circuit.counts()
    print(f"deletion target: {qubits}-qubit Ising evolution, "
          f"{one_q} 1q + {two_q} 2q gates")
    rows = []
    for label, block_size, multistarts, max_sweeps in DELETE_GRID:
        config = DeleteConfig(
            max_sweeps=max_sweeps,
            instantiation=InstantiationConfig(multistarts=multistarts),
        )
        started = time.perf_counter()
        out = delete_gates_partitioned(circuit, block_size, config)
        wall = time.perf_counter() - started
        removed_2q = two_q - out.circuit.counts()[1]
        rows.append({
            "config": label,
            "removed": out.removed,
            "removed_2q": removed_2q,
            "sweeps": out.sweeps,
            "wall_s": round(wall, 3),
        })
        print(f"  {label:28s} removed={out.removed:3d} "
              f"(2q: {removed_2q:3d}) sweeps={out.sweeps} wall={wall:7.2f}s")
    return rows


def run_retarget(rungs: int):
    circuit = cnot_ladder(rungs)
    _, before = circuit.counts()
    print(f"retarget target: {rungs}-rung CNOT ladder -> sqisw")
    rows = []
    for block_size in (3, 4):
        started = time.perf_counter()
        out = retarget_partitioned(
            circuit, block_size, RetargetConfig(named_gate_set("sqisw")))
        wall = time.perf_counter() - started
        after = out.circuit.counts()[1]
        rows.append({
            "block_size": block_size,
            "two_qubit_ratio": round(after / before, 3),
            "wall_s": round(wall, 3),
        })
        print(f"  block_size={block_size} 2q {before} -> {after} "
              f"(ratio {after / before:.2f}) wall={wall:7.2f}s")
    return rows


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--qubits", type=int, default=16)
    parser.add_argument("--steps", type=int, default=2)
    parser.add_argument("--ladder", type=int, default=8)
    parser.add_argument("--json", type=argparse.FileType("w"), default=None,
                        help="optional path for the results as JSON")
    args = parser.parse_args(argv)

    results = {
        "deletion": run_deletion(args.qubits, args.steps),
        "retarget": run_retarget(args.ladder),
    }
    if args.json is not None:
        json.dump(results, args.json, indent=2)
        args.json.write("\n")
        args.json.close()


if __name__ == "__main__":
    main()
