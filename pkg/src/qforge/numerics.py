"""Distance functions and the multi-start instantiation engine.

The engine minimizes D(a) = 1 - |tr(V^dag C(a))| / N over the circuit's
parameter vector a, with an analytic gradient. Writing T = tr(V^dag C) and
E_j for the environment of op j (everything in V^dag C except op j itself),
dT/dp = tr(E_j dU_j/dp). The environments are accumulated with one suffix
sweep and one prefix sweep, so a full cost/gradient evaluation costs O(ops)
small tensor contractions.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import minimize

from .errors import ShapeError
from .ir import Circuit, _apply_left
from .unitary import as_matrix

# Local minimizer stopping controls: the gradient-norm floor, plus a relative
# function-decrease floor so hopeless starts stop once progress stalls.
GRAD_TOL = 1e-12
FTOL = 1e-12

# The relative-decrease stop can strand an ill-conditioned but solvable run a
# hair above threshold. Runs that stall within _POLISH_SPAN of threshold are
# re-descended from their best point with that stop disabled; genuine distance
# floors sit far above the span and never pay for the extra rounds.
_POLISH_FTOL = 1e-18
_POLISH_SPAN = 1e3
_POLISH_ROUNDS = 2

# |tr| below this fraction of N switches the gradient to the phase-fixed form,
# which stays defined at the |tr| = 0 kink.
_PHASE_FLOOR = 1e-12


def _target_matrix(target, num_qubits: int) -> np.ndarray:
    mat = as_matrix(target)
    dim = 2**num_qubits
    if mat.shape != (dim, dim):
        raise ShapeError(
            f"target shape {mat.shape} does not match {num_qubits} qubits"
        )
    return mat


def unitary_distance(u, v) -> float:
    """1 - |tr(v^dag u)| / N, clamped to zero against roundoff."""
    um = as_matrix(u)
    vm = as_matrix(v)
    if um.shape != vm.shape:
        raise ShapeError(f"shape mismatch: {um.shape} vs {vm.shape}")
    n = um.shape[0]
    d = 1.0 - abs(np.vdot(vm, um)) / n
    return d if d > 0.0 else 0.0


def unitary_distance_stable(u, v) -> float:
    """The same distance computed as a phase-aligned Frobenius difference.

    1 - |tr(v^dag u)|/N equals ||u - e^{ix} v||_F^2 / (2N) at the aligning
    phase x. The difference form is a sum of squares, so it keeps full
    relative precision near zero where the trace form loses to cancellation.
    Identical inputs give exactly 0.0.
    """
    um = as_matrix(u)
    vm = as_matrix(v)
    if um.shape != vm.shape:
        raise ShapeError(f"shape mismatch: {um.shape} vs {vm.shape}")
    n = um.shape[0]
    t = np.vdot(vm, um)
    at = abs(t)
    if at == 0.0:
        return 1.0
    phase = t / at
    diff = um - phase * vm
    return float(np.sum(diff.real**2 + diff.imag**2)) / (2.0 * n)


def hs_distance(circuit: Circuit, params, target) -> float:
    """Phase-invariant normalized trace distance of the circuit to the target."""
    mat = _target_matrix(target, circuit.num_qubits)
    u = _evaluate_matrix(circuit, params)
    return unitary_distance(u, mat)


def hs_distance_f(circuit: Circuit, params, target) -> float:
    """Phase-sensitive variant 1 - Re tr(V^dag C) / N. Not clamped; the real
    part can be negative, so values range over [0, 2]."""
    mat = _target_matrix(target, circuit.num_qubits)
    u = _evaluate_matrix(circuit, params)
    n = mat.shape[0]
    return float(1.0 - np.vdot(mat, u).real / n)


def hs_distance_p(circuit: Circuit, params, target) -> float:
    """sqrt(1 - |tr|^2 / N^2), the sine of the projective angle."""
    mat = _target_matrix(target, circuit.num_qubits)
    u = _evaluate_matrix(circuit, params)
    n = mat.shape[0]
    r = abs(np.vdot(mat, u)) / n
    inner = 1.0 - r * r
    return float(np.sqrt(inner)) if inner > 0.0 else 0.0


def _evaluate_matrix(circuit: Circuit, params) -> np.ndarray:
    from .ir import circuit_matrix

    return circuit_matrix(circuit, params)


# ---------------------------------------------------------------------------
# Cost and gradient evaluator, bound to one circuit structure and target.


def _reduce_subscripts(loc: tuple[int, ...], q: int) -> str:
    """einsum spec computing the op-local environment from L and Z rows.

    With E = L @ Z^T, returns R[a, b] = sum over the non-located axes and the
    shared column of L[(a | rest), k] * Z[(b | rest), k], i.e. the partial
    trace of E onto the located qubits, ordered as in ``loc``.
    """
    letters = iter(string.ascii_letters)
    shared_col = next(letters)
    l_ax = [""] * q
    z_ax = [""] * q
    for axis in range(q):
        if axis in loc:
            l_ax[axis] = next(letters)
            z_ax[axis] = next(letters)
        else:
            l_ax[axis] = z_ax[axis] = next(letters)
    lsub = "".join(l_ax) + shared_col
    zsub = "".join(z_ax) + shared_col
    out = "".join(l_ax[i] for i in loc) + "".join(z_ax[i] for i in loc)
    return f"{lsub},{zsub}->{out}"


class Evaluator:
    """Computes D(a) and its gradient for a fixed circuit structure."""

    def __init__(self, circuit: Circuit, target):
        q = circuit.num_qubits
        self.num_qubits = q
        self.dim = 2**q
        self.num_params = circuit.num_params
        self._vdag = _target_matrix(target, q).conj().T
        self._eye = np.eye(self.dim, dtype=np.complex128)
        self._tshape = (2,) * q + (self.dim,)
        ops = circuit.ops
        self._locs = [op.location for op in ops]
        self._fixed = [
            op.matrix() if op.gate.num_params == 0 else None for op in ops
        ]
        self._builders = [op.gate._matrix for op in ops]
        self._partials = [op.gate._partials for op in ops]
        self._dims = [op.gate.dim for op in ops]
        slices = []
        i = 0
        for op in ops:
            n = op.gate.num_params
            slices.append(slice(i, i + n) if n else None)
            i += n
        self._slices = slices
        reduce_cache: dict[tuple[int, ...], str] = {}
        self._reduce = []
        for loc in self._locs:
            if loc not in reduce_cache:
                reduce_cache[loc] = _reduce_subscripts(loc, q)
            self._reduce.append(reduce_cache[loc])

    def _materialize(self, x: np.ndarray) -> list[np.ndarray]:
        mats = []
        for fixed, builder, sl in zip(self._fixed, self._builders, self._slices):
            if fixed is not None:
                mats.append(fixed)
            else:
                mats.append(builder(*x[sl]))
        return mats

    def value(self, x: np.ndarray) -> float:
        q = self.num_qubits
        left = self._vdag
        for mat, loc in zip(self._materialize(x), self._locs):
            left = _apply_left(left, mat, loc, q)
        d = 1.0 - abs(np.trace(left)) / self.dim
        return d if d > 0.0 else 0.0

    def value_and_grad(self, x: np.ndarray) -> tuple[float, np.ndarray]:
        q = self.num_qubits
        n = self.dim
        mats = self._materialize(x)
        m = len(mats)
        # Suffix products, stored transposed so both sweeps apply from the left.
        ztail = [self._eye] * (m + 1)
        for j in range(m - 1, -1, -1):
            ztail[j] = _apply_left(ztail[j + 1], mats[j].T, self._locs[j], q)
        dt = np.zeros(self.num_params, dtype=np.complex128)
        left = self._vdag
        for j in range(m):
            sl = self._slices[j]
            if sl is not None:
                env = np.einsum(
                    self._reduce[j],
                    left.reshape(self._tshape),
                    ztail[j + 1].reshape(self._tshape),
                )
                d = self._dims[j]
                env = env.reshape(d, d)
                dus = self._partials[j](*x[sl])
                dt[sl] = np.einsum("ab,pba->p", env, dus)
            left = _apply_left(left, mats[j], self._locs[j], q)
        t = np.trace(left)
        at = abs(t)
        f = 1.0 - at / n
        if f < 0.0:
            f = 0.0
        if at > _PHASE_FLOOR:
            grad = -(t.conjugate() / at * dt).real / n
        else:
            grad = -dt.real / n
        return f, grad


def cost_and_gradient(
    circuit: Circuit, params, target
) -> tuple[float, np.ndarray]:
    """D and dD/da at the given parameter vector."""
    x = circuit.params() if params is None else np.asarray(params, dtype=np.float64)
    if x.shape != (circuit.num_params,):
        raise ShapeError(f"expected {circuit.num_params} parameters, got {x.shape}")
    return Evaluator(circuit, target).value_and_grad(x)


# ---------------------------------------------------------------------------
# Multi-start instantiation.


@dataclass(frozen=True)
class InstantiationConfig:
    """Controls for the multi-start local minimization.

    Start 1 warm-starts from the circuit's current parameters; the remaining
    starts draw uniformly from [-pi, pi]. Remaining starts are skipped as soon
    as one start reaches ``threshold``. Identical configs and inputs give
    bitwise-identical results.
    """

    multistarts: int = 4
    threshold: float = 1e-10
    max_iters: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.multistarts < 1:
            raise ValueError(f"multistarts must be >= 1, got {self.multistarts}")
        if not self.threshold > 0.0:
            raise ValueError(f"threshold must be positive, got {self.threshold}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")


@dataclass(frozen=True, eq=False)
class InstantiationResult:
    params: np.ndarray
    distance: float
    starts_used: int


def _run_start(ev: Evaluator, x0: np.ndarray, config: InstantiationConfig):
    """One local minimization; returns the best point seen at any evaluation."""
    best_f = np.inf
    best_x = x0

    def fun(x):
        nonlocal best_f, best_x
        f, g = ev.value_and_grad(x)
        if f < best_f:
            best_f = f
            best_x = x.copy()
        return f, g

    options = {"maxiter": config.max_iters, "ftol": FTOL, "gtol": GRAD_TOL}
    minimize(fun, x0, jac=True, method="L-BFGS-B", options=options)
    for _ in range(_POLISH_ROUNDS):
        if not config.threshold < best_f <= _POLISH_SPAN * config.threshold:
            break
        f_before = best_f
        minimize(
            fun,
            best_x,
            jac=True,
            method="L-BFGS-B",
            options={**options, "ftol": _POLISH_FTOL},
        )
        if not best_f < f_before:
            break
    return best_x


def instantiate(
    circuit: Circuit, target, config: InstantiationConfig = InstantiationConfig()
) -> InstantiationResult:
    """Find parameters minimizing the distance of the circuit to the target.

    Never returns a distance worse than the warm start's initial one. The
    reported distance is recomputed from the returned parameters, and ties
    between starts break toward the earlier start.
    """
    tmat = _target_matrix(target, circuit.num_qubits)
    k = circuit.num_params
    if k == 0:
        d = hs_distance(circuit, None, tmat)
        return InstantiationResult(np.zeros(0, dtype=np.float64), d, 0)
    ev = Evaluator(circuit, tmat)
    x_warm = circuit.params()
    rng = np.random.default_rng(config.seed)
    candidates = [(float(hs_distance(circuit, x_warm, tmat)), 0, x_warm)]
    starts_used = 0
    for s in range(config.multistarts):
        x0 = x_warm if s == 0 else rng.uniform(-np.pi, np.pi, k)
        xb = _run_start(ev, x0, config)
        db = float(hs_distance(circuit, xb, tmat))
        starts_used = s + 1
        candidates.append((db, starts_used, xb))
        if db <= config.threshold:
            break
    d, _, x = min(candidates, key=lambda c: (c[0], c[1]))
    return InstantiationResult(np.array(x, dtype=np.float64), d, starts_used)


def derive_seed(base: int, index: int) -> int:
    """A stable per-unit seed for splitting work deterministically."""
    return int(np.random.SeedSequence([base, index]).generate_state(1)[0])


def with_threshold(
    config: InstantiationConfig, threshold: float
) -> InstantiationConfig:
    return replace(config, threshold=threshold)


__all__ = [
    "Evaluator",
    "InstantiationConfig",
    "InstantiationResult",
    "cost_and_gradient",
    "derive_seed",
    "hs_distance",
    "hs_distance_f",
    "hs_distance_p",
    "instantiate",
    "unitary_distance",
    "unitary_distance_stable",
    "with_threshold",
]
