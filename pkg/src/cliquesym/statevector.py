"""Dense statevector simulation of the small gate set used by the ansatzes.

Conventions, pinned by tests:

* Qubit 0 is the least-significant bit of the computational-basis index,
  so basis state ``|q_{n-1} ... q_1 q_0>`` lives at index ``sum_i q_i 2^i``.
* Rotations use half angles: ``RX(t) = exp(-i t X / 2)`` and likewise for
  RY, RZ and ``RZZ(t) = exp(-i t (Z x Z) / 2)``.
* ``U3(a, b, c) = RZ(c) . RY(b) . RZ(a)`` applied right to left, i.e.
  ``RZ(a)`` acts on the state first.

All kernels operate in place on ``complex128`` arrays whose *last* axis is
the statevector dimension; leading axes are treated as a batch.  This is
what makes batched circuit evaluation over whole datasets cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from math import cos, sin, sqrt

import numpy as np

from .errors import ConfigurationError, UsageError

MAX_QUBITS = 24

_INV_SQRT2 = 1.0 / sqrt(2.0)


class GateKind(Enum):
    RX = "RX"
    RY = "RY"
    RZ = "RZ"
    RZZ = "RZZ"
    CZ = "CZ"
    CNOT = "CNOT"
    H = "H"
    U3 = "U3"


#: number of qubit indices each gate kind acts on
GATE_ARITY = {
    GateKind.RX: 1,
    GateKind.RY: 1,
    GateKind.RZ: 1,
    GateKind.RZZ: 2,
    GateKind.CZ: 2,
    GateKind.CNOT: 2,
    GateKind.H: 1,
    GateKind.U3: 1,
}

#: number of parameter slots each gate kind consumes
GATE_N_PARAMS = {
    GateKind.RX: 1,
    GateKind.RY: 1,
    GateKind.RZ: 1,
    GateKind.RZZ: 1,
    GateKind.CZ: 0,
    GateKind.CNOT: 0,
    GateKind.H: 0,
    GateKind.U3: 3,
}


@dataclass(frozen=True)
class Gate:
    """A single gate placement: kind, target qubits, and parameter slots.

    ``param_slots`` are indices into whatever parameter vector is supplied
    at application time.  Fixed gates carry an empty tuple.
    """

    kind: GateKind
    qubits: tuple[int, ...]
    param_slots: tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.qubits) != GATE_ARITY[self.kind]:
            raise UsageError(
                f"{self.kind.value} acts on {GATE_ARITY[self.kind]} qubit(s), "
                f"got {self.qubits}"
            )
        if len(set(self.qubits)) != len(self.qubits):
            raise UsageError(f"{self.kind.value} qubits must be distinct, got {self.qubits}")
        if len(self.param_slots) != GATE_N_PARAMS[self.kind]:
            raise UsageError(
                f"{self.kind.value} takes {GATE_N_PARAMS[self.kind]} parameter(s), "
                f"got slots {self.param_slots}"
            )


@dataclass
class Statevector:
    """Amplitudes of an ``n_qubits``-qubit pure state (complex128, length 2^n)."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (2**self.n_qubits,):
            raise UsageError(
                f"expected {2**self.n_qubits} amplitudes for {self.n_qubits} qubits, "
                f"got shape {self.amplitudes.shape}"
            )

    def copy(self) -> "Statevector":
        return Statevector(self.n_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def zero_state(n_qubits: int) -> Statevector:
    """All-qubits-|0> state."""
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise ConfigurationError(
            f"n_qubits must be in [1, {MAX_QUBITS}], got {n_qubits}"
        )
    amps = np.zeros(2**n_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return Statevector(n_qubits, amps)


# ---------------------------------------------------------------------------
# low-level kernels

def _ix1(qubit: int, value: int) -> tuple:
    # index selecting the sub-tensor with the given bit value on one qubit;
    # works for any number of leading batch axes because qubit q sits q
    # axes from the end of the reshaped (..., 2, ..., 2) tensor
    return (Ellipsis, value) + (slice(None),) * qubit


def _ix2(qa: int, va: int, qb: int, vb: int) -> tuple:
    # two-qubit variant; (qa, va) / (qb, vb) in either order
    if qa < qb:
        qa, va, qb, vb = qb, vb, qa, va
    return (
        (Ellipsis, va)
        + (slice(None),) * (qa - qb - 1)
        + (vb,)
        + (slice(None),) * qb
    )


def _as_tensor(amps: np.ndarray, n_qubits: int) -> np.ndarray:
    return amps.reshape(amps.shape[:-1] + (2,) * n_qubits)


def apply_gate_raw(
    amps: np.ndarray,
    n_qubits: int,
    kind: GateKind,
    qubits: tuple[int, ...],
    values: tuple[float, ...],
) -> None:
    """Apply one gate in place to ``amps`` of shape ``(..., 2**n_qubits)``."""
    t = _as_tensor(amps, n_qubits)
    if kind is GateKind.RX:
        (q,) = qubits
        (theta,) = values
        c, s = cos(theta / 2.0), sin(theta / 2.0)
        i0, i1 = _ix1(q, 0), _ix1(q, 1)
        a0 = t[i0].copy()
        t[i0] *= c
        t[i0] += (-1j * s) * t[i1]
        t[i1] *= c
        t[i1] += (-1j * s) * a0
    elif kind is GateKind.RY:
        (q,) = qubits
        (theta,) = values
        c, s = cos(theta / 2.0), sin(theta / 2.0)
        i0, i1 = _ix1(q, 0), _ix1(q, 1)
        a0 = t[i0].copy()
        t[i0] *= c
        t[i0] -= s * t[i1]
        t[i1] *= c
        t[i1] += s * a0
    elif kind is GateKind.RZ:
        (q,) = qubits
        (theta,) = values
        t[_ix1(q, 0)] *= np.exp(-0.5j * theta)
        t[_ix1(q, 1)] *= np.exp(0.5j * theta)
    elif kind is GateKind.RZZ:
        qa, qb = qubits
        (theta,) = values
        p_eq, p_ne = np.exp(-0.5j * theta), np.exp(0.5j * theta)
        t[_ix2(qa, 0, qb, 0)] *= p_eq
        t[_ix2(qa, 1, qb, 1)] *= p_eq
        t[_ix2(qa, 0, qb, 1)] *= p_ne
        t[_ix2(qa, 1, qb, 0)] *= p_ne
    elif kind is GateKind.CZ:
        qa, qb = qubits
        t[_ix2(qa, 1, qb, 1)] *= -1.0
    elif kind is GateKind.CNOT:
        ctrl, tgt = qubits
        ia = _ix2(ctrl, 1, tgt, 0)
        ib = _ix2(ctrl, 1, tgt, 1)
        tmp = t[ia].copy()
        t[ia] = t[ib]
        t[ib] = tmp
    elif kind is GateKind.H:
        (q,) = qubits
        i0, i1 = _ix1(q, 0), _ix1(q, 1)
        a0 = t[i0].copy()
        t[i0] += t[i1]
        t[i0] *= _INV_SQRT2
        t[i1] *= -1.0
        t[i1] += a0
        t[i1] *= _INV_SQRT2
    elif kind is GateKind.U3:
        (q,) = qubits
        a, b, c = values
        apply_gate_raw(amps, n_qubits, GateKind.RZ, (q,), (a,))
        apply_gate_raw(amps, n_qubits, GateKind.RY, (q,), (b,))
        apply_gate_raw(amps, n_qubits, GateKind.RZ, (q,), (c,))
    else:  # pragma: no cover
        raise UsageError(f"unknown gate kind {kind}")


def accumulate_pauli(
    dst: np.ndarray,
    src: np.ndarray,
    word: str,
    qubits: tuple[int, ...],
    n_qubits: int,
    scale: complex,
) -> None:
    """``dst += scale * (P src)`` in place, for Pauli word ``P`` in {X, Y, Z, ZZ}.

    Used to accumulate rotation-generator terms when building state
    derivatives; both arrays have shape ``(..., 2**n_qubits)``.
    """
    td, ts = _as_tensor(dst, n_qubits), _as_tensor(src, n_qubits)
    if word == "X":
        (q,) = qubits
        td[_ix1(q, 0)] += scale * ts[_ix1(q, 1)]
        td[_ix1(q, 1)] += scale * ts[_ix1(q, 0)]
    elif word == "Y":
        (q,) = qubits
        td[_ix1(q, 0)] += (-1j * scale) * ts[_ix1(q, 1)]
        td[_ix1(q, 1)] += (1j * scale) * ts[_ix1(q, 0)]
    elif word == "Z":
        (q,) = qubits
        td[_ix1(q, 0)] += scale * ts[_ix1(q, 0)]
        td[_ix1(q, 1)] -= scale * ts[_ix1(q, 1)]
    elif word == "ZZ":
        qa, qb = qubits
        td[_ix2(qa, 0, qb, 0)] += scale * ts[_ix2(qa, 0, qb, 0)]
        td[_ix2(qa, 1, qb, 1)] += scale * ts[_ix2(qa, 1, qb, 1)]
        td[_ix2(qa, 0, qb, 1)] -= scale * ts[_ix2(qa, 0, qb, 1)]
        td[_ix2(qa, 1, qb, 0)] -= scale * ts[_ix2(qa, 1, qb, 0)]
    else:  # pragma: no cover
        raise UsageError(f"unknown Pauli word {word}")


# ---------------------------------------------------------------------------
# public operations

def apply_gate(state: Statevector, gate: Gate, params=()) -> Statevector:
    """Apply ``gate`` to ``state`` in place and return the state.

    ``params`` is indexed by the gate's ``param_slots``.
    """
    for q in gate.qubits:
        if not 0 <= q < state.n_qubits:
            raise UsageError(
                f"qubit {q} out of range for {state.n_qubits}-qubit state"
            )
    params = np.asarray(params, dtype=np.float64)
    try:
        values = tuple(float(params[s]) for s in gate.param_slots)
    except IndexError:
        raise UsageError(
            f"parameter vector of shape {params.shape} does not cover "
            f"slots {gate.param_slots}"
        ) from None
    apply_gate_raw(state.amplitudes, state.n_qubits, gate.kind, gate.qubits, values)
    return state


def expectation_z(state: Statevector, qubit: int) -> float:
    """Exact ``<Z_qubit>`` of the state."""
    if not 0 <= qubit < state.n_qubits:
        raise UsageError(f"qubit {qubit} out of range for {state.n_qubits}-qubit state")
    probs = np.abs(state.amplitudes) ** 2
    t = _as_tensor(probs, state.n_qubits)
    p1 = float(t[_ix1(qubit, 1)].sum())
    return 1.0 - 2.0 * p1


@lru_cache(maxsize=8)
def z_sign_table(n_qubits: int) -> np.ndarray:
    """Matrix ``s[q, x] = +1/-1`` giving the Z eigenvalue of qubit q in basis state x."""
    if n_qubits > 16:
        raise ConfigurationError("sign table only built for n_qubits <= 16")
    x = np.arange(2**n_qubits)
    bits = (x[None, :] >> np.arange(n_qubits)[:, None]) & 1
    table = 1.0 - 2.0 * bits.astype(np.float64)
    table.setflags(write=False)
    return table


def expectation_z_all(amps: np.ndarray, n_qubits: int) -> np.ndarray:
    """``<Z_q>`` for every qubit; ``amps`` has shape ``(..., 2**n)``, output ``(..., n)``."""
    probs = amps.real**2 + amps.imag**2
    return probs @ z_sign_table(n_qubits).T


def permute_qubits(state: Statevector, perm) -> Statevector:
    """Relabel qubits: qubit ``i`` of the input becomes qubit ``perm[i]`` of the output."""
    n = state.n_qubits
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(n)):
        raise UsageError(f"perm must be a permutation of 0..{n - 1}, got {perm}")
    axes = [0] * n
    for i in range(n):
        # tensor axis for qubit q is n-1-q (last axis = qubit 0)
        axes[n - 1 - perm[i]] = n - 1 - i
    t = _as_tensor(state.amplitudes, n)
    return Statevector(n, np.ascontiguousarray(np.transpose(t, axes)).reshape(-1))
