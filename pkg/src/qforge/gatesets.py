"""Target gate-set descriptions, the named-set registry, and config loading."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .gates import GATES, U3, Gate, get_gate


@dataclass(frozen=True)
class GateSet:
    """A retargeting goal: allowed two-qubit gates plus a single-qubit basis.

    ``max_depth`` bounds how many two-qubit gates a replacement template may
    use; ``depth_overrides`` tightens or relaxes that bound per gate name.
    """

    two_qubit_gates: tuple[Gate, ...]
    single_qubit_gate: Gate = U3
    max_depth: int = 3
    depth_overrides: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(
            self, "two_qubit_gates", tuple(self.two_qubit_gates)
        )
        object.__setattr__(
            self, "depth_overrides", tuple(tuple(kv) for kv in self.depth_overrides)
        )
        if not self.two_qubit_gates:
            raise ValueError("a gate set needs at least one two-qubit gate")
        for g in self.two_qubit_gates:
            if g.arity != 2:
                raise ValueError(f"{g.name} is not a two-qubit gate")
        if self.single_qubit_gate.arity != 1:
            raise ValueError(f"{self.single_qubit_gate.name} is not single-qubit")
        if self.max_depth < 1:
            raise ValueError(f"max_depth must be >= 1, got {self.max_depth}")
        for name, depth in self.depth_overrides:
            if depth < 1:
                raise ValueError(f"depth override for {name} must be >= 1")

    def depth_for(self, gate: Gate) -> int:
        for name, depth in self.depth_overrides:
            if name.upper() == gate.name:
                return depth
        return self.max_depth

    def two_qubit_names(self) -> frozenset[str]:
        return frozenset(g.name for g in self.two_qubit_gates)


NAMED_GATE_SETS: dict[str, tuple[str, ...]] = {
    "cx": ("CNOT",),
    "cnot": ("CNOT",),
    "cz": ("CZ",),
    "xx": ("XX",),
    "zz": ("ZZ",),
    "sqisw": ("SQISW",),
    "syc": ("SYC",),
    "sqisw_syc": ("SQISW", "SYC"),
}


def known_set_names() -> list[str]:
    return sorted(NAMED_GATE_SETS)


def named_gate_set(name: str) -> GateSet:
    key = name.strip().lower()
    if key not in NAMED_GATE_SETS:
        raise ValueError(
            f"unknown gate-set name {name!r}; known sets: "
            + ", ".join(known_set_names())
        )
    return GateSet(tuple(GATES[n] for n in NAMED_GATE_SETS[key]))


def load_gate_set(path: str | Path) -> GateSet:
    """Read a gate-set config document.

    The file is JSON with a ``gates`` list of two-qubit gate names and
    optional ``single_qubit_gate``, ``max_depth``, and ``depth_overrides``
    keys; see docs/formats.md for a full example.
    """
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict) or "gates" not in doc:
        raise ValueError(f"{path}: expected an object with a 'gates' list")
    gates = tuple(get_gate(n) for n in doc["gates"])
    single = get_gate(doc.get("single_qubit_gate", "U3"))
    max_depth = int(doc.get("max_depth", 3))
    overrides = tuple(
        (str(k).upper(), int(v)) for k, v in doc.get("depth_overrides", {}).items()
    )
    return GateSet(gates, single, max_depth, overrides)


def resolve_gate_set(spec: str) -> GateSet:
    """Turn a CLI target argument into a GateSet.

    Accepts a named set ("cz", "sqisw_syc", ...), an inline comma list of
    gate names ("sqisw,syc"), or a path to a JSON gate-set file.
    """
    text = spec.strip()
    if text.lower() in NAMED_GATE_SETS:
        return named_gate_set(text)
    p = Path(text)
    if text.endswith(".json") or p.is_file():
        return load_gate_set(p)
    if "," in text:
        return GateSet(tuple(get_gate(n) for n in text.split(",") if n.strip()))
    if text.upper() in GATES and GATES[text.upper()].arity == 2:
        return GateSet((GATES[text.upper()],))
    # Fall through to the named-set error with the list of known names.
    return named_gate_set(text)
