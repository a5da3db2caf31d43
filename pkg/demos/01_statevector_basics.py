#!/usr/bin/env python3
"""Tour of the statevector simulator: states, gates, and conventions.

Shows how amplitudes are laid out (qubit 0 is the least-significant bit of
the basis index), how gates are applied, and what the rotation conventions
look like on concrete states.
"""

import numpy as np

from cliquesym import Gate, GateKind, apply_gate, expectation_z, zero_state

SPACER = "_" * 60


def show(state, title):
    print(title)
    for idx, amp in enumerate(state.amplitudes):
        if abs(amp) > 1e-12:
            bits = format(idx, f"0{state.n_qubits}b")[::-1]
            print(f"  |{bits}>  (qubit 0 first)  amp = {amp:.4f}")
    print()


def main():
    # Basis layout: index bit i is qubit i, so |10> at n=2 means qubit 1 set.
    state = zero_state(2)
    show(state, "Initial |00>:")

    print(SPACER)
    print("\nRX(pi) on qubit 0 flips it with a global -i phase:")
    apply_gate(state, Gate(GateKind.RX, (0,), (0,)), np.array([np.pi]))
    show(state, "After RX(pi) on qubit 0:")

    print(SPACER)
    print("\n<Z> of a flipped qubit is -1, the untouched one stays +1:")
    print(f"  <Z_0> = {expectation_z(state, 0):+.4f}")
    print(f"  <Z_1> = {expectation_z(state, 1):+.4f}")

    print(SPACER)
    print("\nAn RY(pi/2) + CNOT pair builds a Bell-like state:")
    state = zero_state(2)
    apply_gate(state, Gate(GateKind.RY, (0,), (0,)), np.array([np.pi / 2]))
    apply_gate(state, Gate(GateKind.CNOT, (0, 1), ()), np.array([]))
    show(state, "After RY(pi/2) on qubit 0, CNOT 0->1:")
    print("Both marginals are now unbiased:")
    print(f"  <Z_0> = {expectation_z(state, 0):+.4f}")
    print(f"  <Z_1> = {expectation_z(state, 1):+.4f}")

    print(SPACER)
    print("\nRZZ is diagonal: it only rotates phases, never populations.")
    probs_before = np.abs(state.amplitudes) ** 2
    apply_gate(state, Gate(GateKind.RZZ, (0, 1), (0,)), np.array([0.7]))
    probs_after = np.abs(state.amplitudes) ** 2
    print(f"  max |prob change| = {np.max(np.abs(probs_after - probs_before)):.2e}")


if __name__ == "__main__":
    main()
