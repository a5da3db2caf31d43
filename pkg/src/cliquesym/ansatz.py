"""Parameter-shared circuit templates and their exact derivatives.

Three template families are provided, each built from repeated layers:

* permutation-invariant: RX on every qubit (one shared angle), RY on
  every qubit (another), RZZ on every qubit pair (a third) — 3 parameter
  classes per repetition, so predictions commute with any relabeling of
  the qubits;
* cyclic-invariant: RX and RY on every qubit plus RZZ on all
  nearest-neighbor and next-nearest-neighbor pairs around the ring — 4
  classes per repetition, commuting only with cyclic shifts;
* strongly-entangling: per-qubit general rotations (three angles each,
  nothing shared) interleaved with CNOT rings of stride 1 and stride 2.

A template records its gates, the number of independent parameter
classes, and which class each gate parameter slot draws from.  Because
every parameterized gate is a Pauli-word rotation exp(-i theta P / 2),
both the expectation gradient (via the two-point parameter-shift rule)
and the Fubini-Study metric (via generator insertion) are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .errors import ConfigurationError, UsageError
from .statevector import (
    GATE_N_PARAMS,
    Gate,
    GateKind,
    Statevector,
    accumulate_pauli,
    apply_gate_raw,
    expectation_z_all,
    z_sign_table,
)


class AnsatzKind(Enum):
    """The three circuit families, in decreasing order of symmetry."""

    PERMUTATION_INVARIANT = "permutation-invariant"
    CYCLIC_INVARIANT = "cyclic-invariant"
    STRONGLY_ENTANGLING = "strongly-entangling"


#: layer repetitions giving each family its standard parameter budget
#: (120, 120, and 108 parameters at six qubits)
DEFAULT_REPETITIONS = {
    AnsatzKind.PERMUTATION_INVARIANT: 40,
    AnsatzKind.CYCLIC_INVARIANT: 30,
    AnsatzKind.STRONGLY_ENTANGLING: 3,
}


@dataclass(frozen=True)
class CircuitTemplate:
    """A fixed gate sequence with parameter-class sharing.

    Gate parameter slots are numbered consecutively in gate order;
    ``class_of[slot]`` names the independent parameter (class) that slot
    reads.  ``n_params`` counts classes, not slots.
    """

    n_qubits: int
    gates: tuple[Gate, ...]
    n_params: int
    class_of: tuple[int, ...]

    def __post_init__(self):
        expected = 0
        for gate in self.gates:
            for q in gate.qubits:
                if not 0 <= q < self.n_qubits:
                    raise UsageError(f"gate qubit {q} out of range for {self.n_qubits} qubits")
            if gate.param_slots != tuple(range(expected, expected + len(gate.param_slots))):
                raise UsageError(
                    f"gate slots {gate.param_slots} break consecutive numbering at {expected}"
                )
            expected += len(gate.param_slots)
        if len(self.class_of) != expected:
            raise UsageError(
                f"class_of covers {len(self.class_of)} slots, template has {expected}"
            )
        if set(self.class_of) != set(range(self.n_params)):
            raise UsageError(
                f"parameter classes must be exactly 0..{self.n_params - 1}, each used at least once"
            )

    @property
    def n_slots(self) -> int:
        return len(self.class_of)


def _check_build_args(n_qubits: int, repetitions: int, min_qubits: int, why: str) -> None:
    if n_qubits < min_qubits:
        raise ConfigurationError(f"need at least {min_qubits} qubits ({why}), got {n_qubits}")
    if repetitions < 1:
        raise ConfigurationError(f"repetitions must be >= 1, got {repetitions}")


def build_permutation_invariant(n_qubits: int, repetitions: int) -> CircuitTemplate:
    """Template whose layer is RX(a) everywhere, RY(b) everywhere, RZZ(c)
    on all qubit pairs; three parameter classes per repetition."""
    _check_build_args(n_qubits, repetitions, 2, "a layer needs at least one pair")
    gates: list[Gate] = []
    class_of: list[int] = []
    slot = 0

    def emit(kind, qubits, cls):
        nonlocal slot
        gates.append(Gate(kind, qubits, (slot,)))
        class_of.append(cls)
        slot += 1

    for rep in range(repetitions):
        a, b, c = 3 * rep, 3 * rep + 1, 3 * rep + 2
        for q in range(n_qubits):
            emit(GateKind.RX, (q,), a)
        for q in range(n_qubits):
            emit(GateKind.RY, (q,), b)
        for i in range(n_qubits):
            for j in range(i + 1, n_qubits):
                emit(GateKind.RZZ, (i, j), c)
    return CircuitTemplate(n_qubits, tuple(gates), 3 * repetitions, tuple(class_of))


def build_cyclic_invariant(n_qubits: int, repetitions: int) -> CircuitTemplate:
    """Template whose layer is RX(a) and RY(b) everywhere plus RZZ(c) on the
    distance-1 ring pairs and RZZ(d) on the distance-2 ring pairs."""
    _check_build_args(
        n_qubits, repetitions, 5, "distance-1 and distance-2 ring pairs must be distinct orbits"
    )
    gates: list[Gate] = []
    class_of: list[int] = []
    slot = 0

    def emit(kind, qubits, cls):
        nonlocal slot
        gates.append(Gate(kind, qubits, (slot,)))
        class_of.append(cls)
        slot += 1

    for rep in range(repetitions):
        a, b, c, d = 4 * rep, 4 * rep + 1, 4 * rep + 2, 4 * rep + 3
        for q in range(n_qubits):
            emit(GateKind.RX, (q,), a)
        for q in range(n_qubits):
            emit(GateKind.RY, (q,), b)
        for i in range(n_qubits):
            emit(GateKind.RZZ, (i, (i + 1) % n_qubits), c)
        for i in range(n_qubits):
            emit(GateKind.RZZ, (i, (i + 2) % n_qubits), d)
    return CircuitTemplate(n_qubits, tuple(gates), 4 * repetitions, tuple(class_of))


def build_strongly_entangling(n_qubits: int, repetitions: int) -> CircuitTemplate:
    """Unrestricted template: per-qubit U3 rotations (no sharing) followed by
    a CNOT ring, twice per repetition with ring strides 1 and 2."""
    _check_build_args(n_qubits, repetitions, 3, "stride-2 ring needs distinct targets")
    gates: list[Gate] = []
    slot = 0
    for _ in range(repetitions):
        for stride in (1, 2):
            for q in range(n_qubits):
                gates.append(Gate(GateKind.U3, (q,), (slot, slot + 1, slot + 2)))
                slot += 3
            for i in range(n_qubits):
                gates.append(Gate(GateKind.CNOT, (i, (i + stride) % n_qubits), ()))
    return CircuitTemplate(n_qubits, tuple(gates), slot, tuple(range(slot)))


_BUILDERS = {
    AnsatzKind.PERMUTATION_INVARIANT: build_permutation_invariant,
    AnsatzKind.CYCLIC_INVARIANT: build_cyclic_invariant,
    AnsatzKind.STRONGLY_ENTANGLING: build_strongly_entangling,
}


def build_ansatz(kind: AnsatzKind, n_qubits: int, repetitions: int | None = None) -> CircuitTemplate:
    """Build any of the three templates; ``repetitions=None`` picks the default."""
    if repetitions is None:
        repetitions = DEFAULT_REPETITIONS[kind]
    return _BUILDERS[kind](n_qubits, repetitions)


# ---------------------------------------------------------------------------
# compiled forms
#
# The primitive form expands U3 into RZ, RY, RZ so that every op carries at
# most one angle; the fast form additionally fuses each run of RZZ gates
# sharing one class into a single diagonal multiply (the shared angle makes
# exp(-i theta/2 sum ZZ) a product of commuting diagonals).  The fast form
# drives evaluation and the Jacobian sweep; the parameter-shift gradient
# stays on the primitive form, keeping the two derivative routes disjoint.

_GENERATOR_WORD = {
    GateKind.RX: "X",
    GateKind.RY: "Y",
    GateKind.RZ: "Z",
    GateKind.RZZ: "ZZ",
}


@dataclass(frozen=True)
class _PrimOp:
    kind: GateKind
    qubits: tuple[int, ...]
    param_class: int | None  # None for fixed gates


@dataclass(eq=False)
class _DiagOp:
    """exp(-i theta/2 * diag(weights)) with theta read from one class."""

    weights: np.ndarray  # (2**n,) real
    param_class: int


@lru_cache(maxsize=None)
def _compile_primitive(template: CircuitTemplate) -> tuple[_PrimOp, ...]:
    ops = []
    for gate in template.gates:
        if gate.kind is GateKind.U3:
            sa, sb, sc = gate.param_slots
            ops.append(_PrimOp(GateKind.RZ, gate.qubits, template.class_of[sa]))
            ops.append(_PrimOp(GateKind.RY, gate.qubits, template.class_of[sb]))
            ops.append(_PrimOp(GateKind.RZ, gate.qubits, template.class_of[sc]))
        elif GATE_N_PARAMS[gate.kind] == 1:
            ops.append(_PrimOp(gate.kind, gate.qubits, template.class_of[gate.param_slots[0]]))
        else:
            ops.append(_PrimOp(gate.kind, gate.qubits, None))
    return tuple(ops)


@lru_cache(maxsize=None)
def _compile_fast(template: CircuitTemplate) -> tuple:
    prim = _compile_primitive(template)
    if template.n_qubits > 16:  # sign table unavailable; fall back
        return prim
    signs = z_sign_table(template.n_qubits)
    ops: list = []
    i = 0
    while i < len(prim):
        op = prim[i]
        if op.kind is GateKind.RZZ:
            j = i
            while (
                j < len(prim)
                and prim[j].kind is GateKind.RZZ
                and prim[j].param_class == op.param_class
            ):
                j += 1
            if j - i > 1:
                weights = np.zeros(signs.shape[1])
                for fused in prim[i:j]:
                    qa, qb = fused.qubits
                    weights += signs[qa] * signs[qb]
                weights.setflags(write=False)
                ops.append(_DiagOp(weights, op.param_class))
                i = j
                continue
        ops.append(op)
        i += 1
    return tuple(ops)


def _check_eval_args(template: CircuitTemplate, params, n_qubits: int) -> np.ndarray:
    params = np.asarray(params, dtype=np.float64)
    if params.shape != (template.n_params,):
        raise UsageError(
            f"expected {template.n_params} parameters, got shape {params.shape}"
        )
    if n_qubits != template.n_qubits:
        raise UsageError(
            f"template has {template.n_qubits} qubits, input has {n_qubits}"
        )
    return params


def _run_ops(ops, params, amps, n_qubits) -> None:
    for op in ops:
        if isinstance(op, _DiagOp):
            amps *= np.exp(-0.5j * params[op.param_class] * op.weights)
        else:
            values = () if op.param_class is None else (params[op.param_class],)
            apply_gate_raw(amps, n_qubits, op.kind, op.qubits, values)


def evaluate(template: CircuitTemplate, params, input: Statevector) -> Statevector:
    """Apply the template's gates in order; each slot reads its class value."""
    params = _check_eval_args(template, params, input.n_qubits)
    amps = input.amplitudes.copy()
    _run_ops(_compile_fast(template), params, amps, template.n_qubits)
    return Statevector(template.n_qubits, amps)


def evaluate_batch(template: CircuitTemplate, params, inputs: np.ndarray) -> np.ndarray:
    """Forward pass on a stack of input states of shape ``(..., 2**n)``."""
    params = _check_eval_args(template, params, template.n_qubits)
    if inputs.shape[-1] != 2**template.n_qubits:
        raise UsageError(
            f"last axis of inputs must have length {2**template.n_qubits}, "
            f"got {inputs.shape[-1]}"
        )
    amps = np.ascontiguousarray(inputs, dtype=np.complex128).copy()
    _run_ops(_compile_fast(template), params, amps, template.n_qubits)
    return amps


def state_jacobian(template: CircuitTemplate, params, amps: np.ndarray):
    """Output state and its exact derivative w.r.t. every parameter class.

    ``amps`` has shape ``(..., 2**n)`` and is not modified.  Returns
    ``(psi, jac)`` where ``psi`` is the evolved batch and ``jac`` has the
    class axis first, shape ``(n_params, ..., 2**n)``.  The derivative of
    exp(-i theta P / 2) inserts -i/2 times the Pauli word P after the
    gate; contributions from slots sharing a class accumulate into one
    row, and the whole sweep costs about twice a plain forward pass.
    """
    n = template.n_qubits
    if amps.shape[-1] != 2**n:
        raise UsageError(
            f"last axis of inputs must have length {2**n}, got {amps.shape[-1]}"
        )
    psi = np.ascontiguousarray(amps, dtype=np.complex128).copy()
    jac = np.zeros((template.n_params,) + psi.shape, dtype=np.complex128)
    active = 0  # rows >= active are still all zero and can skip the gate
    for op in _compile_fast(template):
        if isinstance(op, _DiagOp):
            c = op.param_class
            phase = np.exp(-0.5j * params[c] * op.weights)
            psi *= phase
            if active:
                jac[:active] *= phase
            jac[c] += (-0.5j) * op.weights * psi
            active = max(active, c + 1)
            continue
        values = () if op.param_class is None else (params[op.param_class],)
        apply_gate_raw(psi, n, op.kind, op.qubits, values)
        if active:
            apply_gate_raw(jac[:active], n, op.kind, op.qubits, values)
        if op.param_class is not None:
            accumulate_pauli(jac[op.param_class], psi, _GENERATOR_WORD[op.kind], op.qubits, n, -0.5j)
            active = max(active, op.param_class + 1)
    return psi, jac


def predictions_gradients_metric(template: CircuitTemplate, params, inputs: np.ndarray):
    """One batched sweep giving everything a natural-gradient step needs.

    ``inputs`` has shape ``(batch, 2**n)``.  Returns ``(z, dz, metric)``:
    per-item Z expectations ``(batch, n)``, their gradients w.r.t. the
    parameter classes ``(batch, n, n_params)``, and per-item Fubini-Study
    metrics ``(batch, n_params, n_params)``.
    """
    params = _check_eval_args(template, params, template.n_qubits)
    n = template.n_qubits
    psi, jac = state_jacobian(template, params, inputs)
    z = expectation_z_all(psi, n)
    # d<Z_q>/dtheta_c = 2 Re(<psi| Z_q |d_c psi>)
    signs = z_sign_table(n)
    weighted = psi.conj()[None, :, :] * jac  # (P, B, dim)
    dz = 2.0 * np.real(weighted @ signs.T)  # (P, B, n)
    dz = np.moveaxis(dz, 0, 2)  # (B, n, P)
    # metric g_ij = Re(<d_i|d_j> - <d_i|psi><psi|d_j>)
    jt = np.ascontiguousarray(np.moveaxis(jac, 0, 1))  # (B, P, dim)
    overlaps = jt.conj() @ jt.transpose(0, 2, 1)
    v = weighted.sum(axis=2)  # v[c, b] = <psi_b | d_c psi_b>
    metric = np.real(overlaps - v.T[:, :, None] * v.T.conj()[:, None, :])
    metric = 0.5 * (metric + metric.transpose(0, 2, 1))
    return z, dz, metric


def fubini_study_metric(template: CircuitTemplate, params, input: Statevector) -> np.ndarray:
    """Fubini-Study metric g_ij = Re[<d_i psi|d_j psi> - <d_i psi|psi><psi|d_j psi>]."""
    params = _check_eval_args(template, params, input.n_qubits)
    _, _, metric = predictions_gradients_metric(
        template, params, input.amplitudes[None, :]
    )
    return metric[0]


def expectation_gradient(
    template: CircuitTemplate, params, input: Statevector, qubit: int
) -> np.ndarray:
    """Exact gradient of ``<Z_qubit>`` by the two-point parameter-shift rule.

    Each gate slot is shifted by +-pi/2 separately (exact for Pauli-word
    rotations) and the two evaluations are differenced and halved; slots
    sharing a class sum into the same entry.  Deliberately independent of
    :func:`state_jacobian` so the two can cross-check each other.
    """
    params = _check_eval_args(template, params, input.n_qubits)
    n = template.n_qubits
    if not 0 <= qubit < n:
        raise UsageError(f"qubit {qubit} out of range for {n} qubits")
    ops = _compile_primitive(template)
    signs = z_sign_table(n)[qubit]

    # prefix[m] = state after ops[:m]; reuse it for both shifts of op m
    prefix = np.empty((len(ops) + 1, input.amplitudes.size), dtype=np.complex128)
    prefix[0] = input.amplitudes
    for m, op in enumerate(ops):
        prefix[m + 1] = prefix[m]
        values = () if op.param_class is None else (params[op.param_class],)
        apply_gate_raw(prefix[m + 1], n, op.kind, op.qubits, values)

    grad = np.zeros(template.n_params)
    for m, op in enumerate(ops):
        if op.param_class is None:
            continue
        for shift in (math.pi / 2, -math.pi / 2):
            phi = prefix[m].copy()
            apply_gate_raw(phi, n, op.kind, op.qubits, (params[op.param_class] + shift,))
            for later in ops[m + 1 :]:
                values = () if later.param_class is None else (params[later.param_class],)
                apply_gate_raw(phi, n, later.kind, later.qubits, values)
            value = float((phi.real**2 + phi.imag**2) @ signs)
            grad[op.param_class] += math.copysign(0.5, shift) * value
    return grad
