#!/usr/bin/env python3
"""Gradients and the quantum geometric tensor, checked against first principles.

Three short numerical experiments on a small circuit:
  1. parameter-shift gradients vs central finite differences,
  2. the Fubini-Study metric vs a finite-difference state-overlap estimate,
  3. one natural-gradient step compared with a plain gradient step.
"""

import numpy as np

from cliquesym import (
    AnsatzKind,
    build_ansatz,
    evaluate,
    expectation_gradient,
    fubini_study_metric,
    zero_state,
)

N_QUBITS = 4
SPACER = "_" * 60


def value_of(template, params, qubit):
    from cliquesym import expectation_z

    state = evaluate(template, params, zero_state(N_QUBITS))
    return expectation_z(state, qubit)


def fd_gradient(template, params, qubit, h=1e-6):
    grad = np.empty_like(params)
    for i in range(params.size):
        bumped = params.copy()
        bumped[i] += h
        up = value_of(template, bumped, qubit)
        bumped[i] -= 2 * h
        down = value_of(template, bumped, qubit)
        grad[i] = (up - down) / (2 * h)
    return grad


def main():
    rng = np.random.default_rng(11)
    template = build_ansatz(AnsatzKind.PERMUTATION_INVARIANT, N_QUBITS, repetitions=3)
    params = rng.uniform(-np.pi, np.pi, template.n_params)
    print(f"template: {template.n_params} parameters, {len(template.gates)} gates")

    print(SPACER)
    print("\n1. Parameter-shift vs finite differences, <Z_0>:")
    shift_grad = expectation_gradient(template, params, zero_state(N_QUBITS), 0)
    numeric = fd_gradient(template, params, 0)
    print(f"   max |difference| = {np.max(np.abs(shift_grad - numeric)):.2e}")

    print(SPACER)
    print("\n2. Fubini-Study metric vs state-overlap finite differences:")
    metric = fubini_study_metric(template, params, zero_state(N_QUBITS))
    h = 1e-4

    def state_at(p):
        return evaluate(template, p, zero_state(N_QUBITS)).amplitudes

    # Re(<d_i psi|d_j psi> - <d_i psi|psi><psi|d_j psi>) via central differences.
    base = state_at(params)
    derivs = []
    for i in range(params.size):
        bumped = params.copy()
        bumped[i] += h
        up = state_at(bumped)
        bumped[i] -= 2 * h
        down = state_at(bumped)
        derivs.append((up - down) / (2 * h))
    derivs = np.array(derivs)
    overlap = derivs.conj() @ derivs.T
    berry = derivs.conj() @ base
    numeric_metric = (overlap - np.outer(berry, berry.conj())).real
    print(f"   max |difference| = {np.max(np.abs(metric - numeric_metric)):.2e}")
    eigs = np.linalg.eigvalsh(metric)
    print(f"   eigenvalue range = [{eigs[0]:.3e}, {eigs[-1]:.3e}]  (PSD)")

    print(SPACER)
    print("\n3. Natural-gradient vs plain-gradient step direction:")
    value = value_of(template, params, 0)
    grad = expectation_gradient(template, params, zero_state(N_QUBITS), 0)
    natural = np.linalg.solve(metric + 1e-3 * np.eye(params.size), grad)
    cosine = grad @ natural / (np.linalg.norm(grad) * np.linalg.norm(natural))
    print(f"   <Z_0> at start      = {value:+.4f}")
    print(f"   |plain grad|        = {np.linalg.norm(grad):.4f}")
    print(f"   |natural grad|      = {np.linalg.norm(natural):.4f}")
    print(f"   direction cosine    = {cosine:+.4f}")
    print("   (the metric rescales flat directions, so the two differ)")


if __name__ == "__main__":
    main()
