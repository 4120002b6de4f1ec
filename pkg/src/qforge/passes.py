"""Circuit transformation passes.

Two numerical rewrites built on instantiation, plus partitioned drivers:

- gate deletion: remove ops one at a time (and redundant two-qubit runs
  inside interaction regions), re-fitting the survivors' parameters against
  the circuit's own unitary, and keep each removal only when the re-fit
  lands within threshold;
- retargeting: replace every out-of-set two-qubit interaction region with
  the shortest parameterized template over the target gate set that
  instantiates to the enclosing unitary, then rewrite stray single-qubit
  gates onto the target basis in closed form.

The partitioned drivers split wide circuits into few-qubit blocks, run a
pass per block against the block's own unitary, and reassemble. Every pass
returns an outcome carrying the rewritten circuit plus per-section residual
records; the verify module consumes those records to bound whole-circuit
error without ever materializing it.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace as dc_replace

import numpy as np

from .errors import PipelineError, RetargetError
from .gates import U3, u3_angles
from .gatesets import GateSet
from .ir import Circuit, Operation, Region, circuit_matrix, group_interactions
from .numerics import (
    InstantiationConfig,
    derive_seed,
    hs_distance,
    instantiate,
)
from .partition import Block, Partition, partition, reassemble

__all__ = [
    "DeleteConfig",
    "DeleteOutcome",
    "DeletePass",
    "RetargetConfig",
    "RetargetOutcome",
    "RetargetPass",
    "SectionRecord",
    "StageReport",
    "PassReport",
    "build_templates",
    "delete_gates",
    "delete_gates_partitioned",
    "retarget",
    "retarget_partitioned",
    "run_pipeline",
]


@dataclass(frozen=True)
class DeleteConfig:
    """Knobs for the deletion sweep.

    ``max_sweeps`` of None sweeps until a whole pass removes nothing.
    ``clear_regions`` additionally attempts group removals: neighboring
    same-support pairs, and runs of two-qubit gates inside one interaction
    region. Single-op scanning alone cannot discover that a parameterless
    pair (CNOT then CNOT) multiplies out to identity, because each op on
    its own sits far from the target.
    """

    threshold: float = 1e-10
    max_sweeps: int | None = None
    instantiation: InstantiationConfig = InstantiationConfig()
    clear_regions: bool = True

    def __post_init__(self):
        if not self.threshold > 0.0:
            raise ValueError(f"threshold must be positive, got {self.threshold}")
        if self.max_sweeps is not None and self.max_sweeps < 1:
            raise ValueError(f"max_sweeps must be >= 1, got {self.max_sweeps}")


@dataclass(frozen=True)
class RetargetConfig:
    gate_set: GateSet
    max_block_gates: int = 3
    threshold: float = 1e-10
    instantiation: InstantiationConfig = InstantiationConfig()

    def __post_init__(self):
        if self.max_block_gates < 0:
            raise ValueError(
                f"max_block_gates must be >= 0, got {self.max_block_gates}"
            )
        if not self.threshold > 0.0:
            raise ValueError(f"threshold must be positive, got {self.threshold}")


@dataclass(frozen=True)
class SectionRecord:
    """One block's before/after pair plus its accepted residual distance.

    ``location`` is global qubit indices, sorted; both circuits are local to
    that location. ``distance`` is the final accepted instantiation residual
    of ``compiled`` against ``original``'s unitary (0.0 when untouched).
    """

    location: tuple[int, ...]
    span: tuple[int, int]
    original: Circuit
    compiled: Circuit
    distance: float


@dataclass(frozen=True)
class DeleteOutcome:
    circuit: Circuit
    sections: tuple[SectionRecord, ...]
    removed: int
    sweeps: int

    @property
    def distance_bound(self) -> float:
        return sum(s.distance for s in self.sections)


@dataclass(frozen=True)
class RetargetOutcome:
    circuit: Circuit
    sections: tuple[SectionRecord, ...]
    replaced_regions: int
    rewritten_1q: int

    @property
    def distance_bound(self) -> float:
        return sum(s.distance for s in self.sections)


class _Attempts:
    """Counts instantiation attempts and hands each a derived sub-seed.

    Keyed off the attempt index, so results do not depend on wall time or
    on how earlier attempts went, only on their count.
    """

    def __init__(self, base: InstantiationConfig, threshold: float):
        self._base = base
        self._threshold = threshold
        self.count = 0

    def next_config(self) -> InstantiationConfig:
        cfg = dc_replace(
            self._base,
            threshold=self._threshold,
            seed=derive_seed(self._base.seed, self.count),
        )
        self.count += 1
        return cfg


def _whole_section(original: Circuit, compiled: Circuit, distance: float):
    loc = tuple(range(original.num_qubits))
    return SectionRecord(loc, (0, len(original)), original, compiled, distance)


def _two_qubit_indices(circuit: Circuit, region: Region) -> list[int]:
    return [
        i for i in region.indices if len(circuit.ops[i].location) == 2
    ]


def _clear_adjacent_pairs(work, target, threshold, attempts):
    """Drop neighboring op pairs on the same qubits that cancel out.

    A true (g, g^-1) pair leaves the warm-start product bitwise equal to
    the target, so acceptance never depends on optimizer luck; anything
    else is kept unless the re-fit still lands within threshold. This is
    the only phase that can delete a parameterless single-qubit pair (X
    then X), which single-op scanning cannot absorb.
    """
    removed_total = 0
    residual = None
    changed = True
    while changed:
        changed = False
        i = 0
        while i + 1 < len(work):
            a, b = work.ops[i], work.ops[i + 1]
            if set(a.location) != set(b.location):
                i += 1
                continue
            candidate = work.remove_ops((i, i + 1))
            res = instantiate(candidate, target, attempts.next_config())
            if res.distance <= threshold:
                work = candidate.with_params(res.params)
                removed_total += 2
                residual = res.distance
                changed = True
            else:
                i += 1
    return work, removed_total, residual


def _clear_regions(work, target, threshold, attempts):
    """Drop whole runs of two-qubit ops whose product cancels out.

    Tries every interaction region holding at least two two-qubit ops:
    first removing all of them, then each adjacent pair. Accepts the first
    removal whose re-instantiation meets the threshold and rescans, since
    op indices shift.
    """
    removed_total = 0
    residual = None
    rescan = True
    while rescan:
        rescan = False
        for region in group_interactions(work):
            two_q = _two_qubit_indices(work, region)
            if len(two_q) < 2:
                continue
            subsets = [tuple(two_q)]
            if len(two_q) > 2:
                subsets += [
                    (two_q[j], two_q[j + 1]) for j in range(len(two_q) - 1)
                ]
            for subset in subsets:
                candidate = work.remove_ops(subset)
                res = instantiate(candidate, target, attempts.next_config())
                if res.distance <= threshold:
                    work = candidate.with_params(res.params)
                    removed_total += len(subset)
                    residual = res.distance
                    rescan = True
                    break
            if rescan:
                break
    return work, removed_total, residual


def delete_gates(
    circuit: Circuit, config: DeleteConfig = DeleteConfig()
) -> DeleteOutcome:
    """Iteratively delete gates whose loss the rest of the circuit absorbs.

    The target is the input circuit's own unitary. Each sweep visits ops
    left to right: drop the op, re-instantiate every remaining parameter
    against the target, keep the deletion only if the distance stays within
    threshold (otherwise the pre-attempt parameters stand). After a
    successful deletion the same index is visited again. Sweeps repeat
    until one removes nothing or ``max_sweeps`` is reached.
    """
    target = circuit_matrix(circuit)
    attempts = _Attempts(config.instantiation, config.threshold)
    work = circuit
    removed = 0
    sweeps = 0
    residual = 0.0
    while True:
        sweeps += 1
        changed = False
        i = 0
        while i < len(work):
            candidate = work.remove_op(i)
            res = instantiate(candidate, target, attempts.next_config())
            if res.distance <= config.threshold:
                work = candidate.with_params(res.params)
                residual = res.distance
                removed += 1
                changed = True
            else:
                i += 1
        if config.clear_regions:
            for clear in (_clear_adjacent_pairs, _clear_regions):
                work, n, r = clear(
                    work, target, config.threshold, attempts
                )
                if n:
                    removed += n
                    residual = r
                    changed = True
        if not changed:
            break
        if config.max_sweeps is not None and sweeps >= config.max_sweeps:
            break
    section = _whole_section(circuit, work, residual)
    return DeleteOutcome(work, (section,), removed, sweeps)


def _run_blocks(blocks, worker, jobs: int):
    if jobs > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(worker, range(len(blocks))))
    return [worker(i) for i in range(len(blocks))]


def _block_config(config, index: int):
    inst = dc_replace(
        config.instantiation,
        seed=derive_seed(config.instantiation.seed, index),
    )
    return dc_replace(config, instantiation=inst)


def delete_gates_partitioned(
    circuit: Circuit,
    block_size: int,
    config: DeleteConfig = DeleteConfig(),
    jobs: int = 1,
) -> DeleteOutcome:
    """Partition into blocks, delete within each block, reassemble.

    Each block is optimized against its own sub-unitary with a seed derived
    from the block index, so output is identical for any ``jobs`` value.
    """
    if block_size >= circuit.num_qubits:
        return delete_gates(circuit, config)
    part = partition(circuit, block_size)

    def worker(i):
        block = part.blocks[i]
        return delete_gates(block.circuit, _block_config(config, i))

    outcomes = _run_blocks(part.blocks, worker, jobs)
    sections = tuple(
        SectionRecord(
            b.location, b.span, b.circuit, out.circuit, out.sections[0].distance
        )
        for b, out in zip(part.blocks, outcomes)
    )
    new_blocks = tuple(
        Block(b.location, out.circuit, b.span)
        for b, out in zip(part.blocks, outcomes)
    )
    result = reassemble(Partition(circuit.num_qubits, new_blocks))
    removed = sum(out.removed for out in outcomes)
    sweeps = max((out.sweeps for out in outcomes), default=0)
    return DeleteOutcome(result, sections, removed, sweeps)


def build_templates(
    region_location, gate_set: GateSet, n: int = 3
) -> list[Circuit]:
    """Candidate two-qubit circuits for one interaction region.

    Each template is a U3 pair followed by k copies of (two-qubit gate,
    U3 pair), k running from 0 to min(n, the gate's depth cap), listed with
    k ascending and, within one k, gates in configured order. The k = 0
    template is gate-independent and appears once. Templates are local
    (qubits 0 and 1); callers map them onto the region's qubits.
    """
    if len(region_location) != 2:
        raise ValueError(
            f"templates cover exactly one qubit pair, got {region_location!r}"
        )

    def u3_layer():
        return [
            Operation(U3, (0,), (0.0, 0.0, 0.0)),
            Operation(U3, (1,), (0.0, 0.0, 0.0)),
        ]

    templates = [Circuit(2, u3_layer())]
    max_k = max(
        (min(n, gate_set.depth_for(g)) for g in gate_set.two_qubit_gates),
        default=0,
    )
    for k in range(1, max_k + 1):
        for gate in gate_set.two_qubit_gates:
            if k > min(n, gate_set.depth_for(gate)):
                continue
            ops = u3_layer()
            for _ in range(k):
                ops.append(
                    Operation(gate, (0, 1), (0.0,) * gate.num_params)
                )
                ops.extend(u3_layer())
            templates.append(Circuit(2, ops))
    return templates


def _map_template(template: Circuit, qubits) -> list[Operation]:
    return [
        Operation(op.gate, tuple(qubits[q] for q in op.location), op.params)
        for op in template.ops
    ]


def _solve_candidate(
    candidate: Circuit,
    target,
    work: Circuit,
    region: Region,
    template: Circuit,
    config: RetargetConfig,
    attempts: _Attempts,
):
    """Fit one substitution candidate against the full in-scope unitary.

    The candidate differs from the current circuit only inside the replaced
    region, so every parameter outside it already sits at a near-optimal
    value. Retries therefore keep that context warm and redraw only the
    freshly inserted template's parameter slice; redrawing the whole vector
    would throw away the solved context and rarely recovers it.
    """
    prefix = sum(len(op.params) for op in work.ops[: region.span[0]])
    width = sum(len(op.params) for op in template.ops)
    warm = candidate.params()
    best = None
    for attempt in range(max(1, config.instantiation.multistarts)):
        cfg = dc_replace(attempts.next_config(), multistarts=1)
        params = warm
        if attempt:
            rng = np.random.default_rng(cfg.seed)
            params = np.array(warm, dtype=float)
            params[prefix : prefix + width] = rng.uniform(
                -np.pi, np.pi, width
            )
        res = instantiate(candidate.with_params(params), target, cfg)
        if res.distance <= config.threshold:
            return res
        if best is None or res.distance < best.distance:
            best = res
    return best


def _region_of(regions, index: int) -> Region:
    for region in regions:
        if region.start <= index < region.stop:
            return region
    raise RetargetError(f"op {index} belongs to no interaction region")


def retarget(
    circuit: Circuit, config: RetargetConfig
) -> RetargetOutcome:
    """Rewrite a circuit onto a target gate set, preserving its unitary.

    Scans for two-qubit ops outside the target set; each one's interaction
    region is swapped for the first (shortest) template whose substitution
    instantiates back to the full circuit's unitary within threshold. Single
    qubit gates outside the target basis are then rewritten in closed form,
    and the result is re-fit once if those rewrites left any residual.
    """
    target_names = config.gate_set.two_qubit_names()
    tmat = circuit_matrix(circuit)
    attempts = _Attempts(config.instantiation, config.threshold)
    work = circuit
    replaced = 0
    residual = 0.0
    while True:
        bad = next(
            (
                i
                for i, op in enumerate(work.ops)
                if len(op.location) == 2 and op.gate.name not in target_names
            ),
            None,
        )
        if bad is None:
            break
        region = _region_of(group_interactions(work), bad)
        templates = build_templates(
            region.qubits, config.gate_set, config.max_block_gates
        )
        for template in templates:
            candidate = work.replace_region(
                region.span, _map_template(template, region.qubits)
            )
            res = _solve_candidate(
                candidate, tmat, work, region, template, config, attempts
            )
            if res.distance <= config.threshold:
                work = candidate.with_params(res.params)
                residual = res.distance
                replaced += 1
                break
        else:
            names = ", ".join(sorted(target_names))
            raise RetargetError(
                f"no template with at most {config.max_block_gates} gates "
                f"from {{{names}}} matched the region at ops "
                f"[{region.span[0]}, {region.span[1]}) on qubits "
                f"{tuple(region.qubits)}",
                span=region.span,
                qubits=region.qubits,
            )

    single = config.gate_set.single_qubit_gate
    rewritten = 0
    new_ops = []
    for op in work.ops:
        if len(op.location) == 1 and op.gate.name != single.name:
            new_ops.append(
                Operation(U3, op.location, u3_angles(op.matrix()))
            )
            rewritten += 1
        else:
            new_ops.append(op)
    if rewritten:
        work = Circuit(work.num_qubits, new_ops)
        residual = hs_distance(work, None, tmat)
        if residual > config.threshold:
            # Closed-form rewrites are phase-exact; this re-fit only fires
            # if accumulated rounding somehow crosses the threshold.
            res = instantiate(work, tmat, attempts.next_config())
            if res.distance > config.threshold:
                raise RetargetError(
                    "single-qubit basis rewrite left residual "
                    f"{res.distance:.3e} above threshold {config.threshold:.3e}"
                )
            work = work.with_params(res.params)
            residual = res.distance
    section = _whole_section(circuit, work, residual)
    return RetargetOutcome(work, (section,), replaced, rewritten)


def retarget_partitioned(
    circuit: Circuit,
    block_size: int,
    config: RetargetConfig,
    jobs: int = 1,
) -> RetargetOutcome:
    """Partition into blocks, retarget each block, reassemble."""
    if block_size >= circuit.num_qubits:
        return retarget(circuit, config)
    part = partition(circuit, block_size)

    def worker(i):
        block = part.blocks[i]
        return retarget(block.circuit, _block_config(config, i))

    outcomes = _run_blocks(part.blocks, worker, jobs)
    sections = tuple(
        SectionRecord(
            b.location, b.span, b.circuit, out.circuit, out.sections[0].distance
        )
        for b, out in zip(part.blocks, outcomes)
    )
    new_blocks = tuple(
        Block(b.location, out.circuit, b.span)
        for b, out in zip(part.blocks, outcomes)
    )
    result = reassemble(Partition(circuit.num_qubits, new_blocks))
    replaced = sum(out.replaced_regions for out in outcomes)
    rewritten = sum(out.rewritten_1q for out in outcomes)
    return RetargetOutcome(result, sections, replaced, rewritten)


@dataclass(frozen=True)
class DeletePass:
    """Pipeline stage running (partitioned) gate deletion."""

    config: DeleteConfig = DeleteConfig()
    block_size: int | None = 3
    jobs: int = 1
    name: str = "delete"

    def run(self, circuit: Circuit):
        if self.block_size is None:
            return delete_gates(circuit, self.config)
        return delete_gates_partitioned(
            circuit, self.block_size, self.config, self.jobs
        )


@dataclass(frozen=True)
class RetargetPass:
    """Pipeline stage running (partitioned) gate-set retargeting."""

    config: RetargetConfig
    block_size: int | None = 3
    jobs: int = 1
    name: str = "retarget"

    def run(self, circuit: Circuit):
        if self.block_size is None:
            return retarget(circuit, self.config)
        return retarget_partitioned(
            circuit, self.block_size, self.config, self.jobs
        )


@dataclass(frozen=True)
class StageReport:
    name: str
    counts_before: tuple[int, int]
    counts_after: tuple[int, int]
    sweeps: int
    removed: int
    replaced_regions: int
    distance_bound: float
    wall_ms: float
    sections: tuple[SectionRecord, ...]


@dataclass(frozen=True)
class PassReport:
    stages: tuple[StageReport, ...]
    wall_ms: float

    @property
    def distance_bound(self) -> float:
        return sum(stage.distance_bound for stage in self.stages)


def run_pipeline(circuit: Circuit, passes) -> tuple[Circuit, PassReport]:
    """Apply passes in order, collecting per-stage counts and residuals."""
    passes = list(passes)
    if not passes:
        raise PipelineError("pass list is empty")
    stages = []
    work = circuit
    t0 = time.perf_counter()
    for stage in passes:
        before = work.counts()
        s0 = time.perf_counter()
        outcome = stage.run(work)
        wall_ms = (time.perf_counter() - s0) * 1e3
        work = outcome.circuit
        stages.append(
            StageReport(
                name=stage.name,
                counts_before=before,
                counts_after=work.counts(),
                sweeps=getattr(outcome, "sweeps", 0),
                removed=getattr(outcome, "removed", 0),
                replaced_regions=getattr(outcome, "replaced_regions", 0),
                distance_bound=outcome.distance_bound,
                wall_ms=wall_ms,
                sections=outcome.sections,
            )
        )
    total_ms = (time.perf_counter() - t0) * 1e3
    return work, PassReport(tuple(stages), total_ms)
