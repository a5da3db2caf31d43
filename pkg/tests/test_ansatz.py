"""Tests for the circuit templates, their gradients, and the metric."""

import numpy as np
import pytest

from cliquesym import ConfigurationError, UsageError, zero_state
from cliquesym.ansatz import (
    DEFAULT_REPETITIONS,
    AnsatzKind,
    CircuitTemplate,
    build_ansatz,
    build_cyclic_invariant,
    build_permutation_invariant,
    build_strongly_entangling,
    evaluate,
    expectation_gradient,
    fubini_study_metric,
    predictions_gradients_metric,
    state_jacobian,
)
from cliquesym.embedding import embed_graph
from cliquesym.graphs import gen_er_graph, permute_graph
from cliquesym.statevector import (
    Gate,
    GateKind,
    Statevector,
    expectation_z,
    expectation_z_all,
)


def random_state(n_qubits, seed):
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=2**n_qubits) + 1j * rng.normal(size=2**n_qubits)
    return Statevector(n_qubits, amps / np.linalg.norm(amps))


def single_rx_template():
    return CircuitTemplate(1, (Gate(GateKind.RX, (0,), (0,)),), 1, (0,))


def z_vector(template, params, state):
    return expectation_z_all(evaluate(template, params, state).amplitudes, template.n_qubits)


def fd_gradient(template, params, state, qubit, step=1e-5):
    grad = np.empty(template.n_params)
    for c in range(template.n_params):
        up, down = np.array(params), np.array(params)
        up[c] += step
        down[c] -= step
        f_up = expectation_z(evaluate(template, up, state), qubit)
        f_down = expectation_z(evaluate(template, down, state), qubit)
        grad[c] = (f_up - f_down) / (2 * step)
    return grad


def fd_state_derivatives(template, params, state, step=1e-5):
    rows = []
    for c in range(template.n_params):
        up, down = np.array(params), np.array(params)
        up[c] += step
        down[c] -= step
        rows.append(
            (evaluate(template, up, state).amplitudes - evaluate(template, down, state).amplitudes)
            / (2 * step)
        )
    return np.stack(rows)


class TestTemplateStructure:
    def test_parameter_count_closed_forms(self):
        for n in range(5, 11):
            for reps in (1, 2, 5):
                assert build_permutation_invariant(n, reps).n_params == 3 * reps
                assert build_cyclic_invariant(n, reps).n_params == 4 * reps
                assert build_strongly_entangling(n, reps).n_params == reps * 2 * n * 3

    def test_standard_budgets(self):
        assert build_permutation_invariant(6, 40).n_params == 120
        assert build_cyclic_invariant(6, 30).n_params == 120
        assert build_strongly_entangling(6, 3).n_params == 108
        assert build_permutation_invariant(8, 40).n_params == 120
        assert build_cyclic_invariant(8, 30).n_params == 120
        assert build_strongly_entangling(8, 3).n_params == 144

    def test_default_repetitions(self):
        assert DEFAULT_REPETITIONS[AnsatzKind.PERMUTATION_INVARIANT] == 40
        assert DEFAULT_REPETITIONS[AnsatzKind.CYCLIC_INVARIANT] == 30
        assert DEFAULT_REPETITIONS[AnsatzKind.STRONGLY_ENTANGLING] == 3
        t = build_ansatz(AnsatzKind.PERMUTATION_INVARIANT, 6)
        assert t.n_params == 120

    def test_permutation_layer_golden_n2(self):
        t = build_permutation_invariant(2, 1)
        assert t.n_params == 3
        assert t.gates == (
            Gate(GateKind.RX, (0,), (0,)),
            Gate(GateKind.RX, (1,), (1,)),
            Gate(GateKind.RY, (0,), (2,)),
            Gate(GateKind.RY, (1,), (3,)),
            Gate(GateKind.RZZ, (0, 1), (4,)),
        )
        assert t.class_of == (0, 0, 1, 1, 2)

    def test_permutation_layer_gate_count(self):
        # one layer at n=8: 8 RX + 8 RY + 28 pair RZZ = 44 gates
        t = build_permutation_invariant(8, 40)
        assert len(t.gates) == 40 * 44

    def test_cyclic_layer_pairs_n6(self):
        t = build_cyclic_invariant(6, 1)
        rzz = [g.qubits for g in t.gates if g.kind is GateKind.RZZ]
        assert rzz[:6] == [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]
        assert rzz[6:] == [(0, 2), (1, 3), (2, 4), (3, 5), (4, 0), (5, 1)]

    def test_cyclic_layer_gate_count(self):
        # one layer at n=8: 16 single-qubit + 8 + 8 ring RZZ = 32 gates
        t = build_cyclic_invariant(8, 30)
        assert len(t.gates) == 30 * 32

    def test_entangling_layer_golden_n3(self):
        t = build_strongly_entangling(3, 1)
        assert t.n_params == 18
        kinds = [g.kind for g in t.gates]
        assert kinds.count(GateKind.U3) == 6
        assert kinds.count(GateKind.CNOT) == 6
        cnots = [g.qubits for g in t.gates if g.kind is GateKind.CNOT]
        assert cnots == [(0, 1), (1, 2), (2, 0), (0, 2), (1, 0), (2, 1)]
        # no parameter sharing: every slot is its own class
        assert t.class_of == tuple(range(18))

    def test_classes_per_repetition(self):
        t = build_permutation_invariant(5, 4)
        per_gate = [t.class_of[s] for g in t.gates for s in g.param_slots]
        layer = len(t.gates) // 4
        for rep in range(4):
            classes = set(per_gate[rep * layer : (rep + 1) * layer])
            assert classes == {3 * rep, 3 * rep + 1, 3 * rep + 2}
        t = build_cyclic_invariant(5, 3)
        layer = len(t.gates) // 3
        per_gate = [t.class_of[s] for g in t.gates for s in g.param_slots]
        for rep in range(3):
            classes = set(per_gate[rep * layer : (rep + 1) * layer])
            assert classes == {4 * rep, 4 * rep + 1, 4 * rep + 2, 4 * rep + 3}

    def test_build_preconditions(self):
        with pytest.raises(ConfigurationError):
            build_permutation_invariant(1, 1)
        with pytest.raises(ConfigurationError):
            build_cyclic_invariant(4, 1)
        with pytest.raises(ConfigurationError):
            build_strongly_entangling(2, 1)
        with pytest.raises(ConfigurationError):
            build_permutation_invariant(6, 0)

    def test_template_validation(self):
        with pytest.raises(UsageError):  # slot numbering must be consecutive
            CircuitTemplate(1, (Gate(GateKind.RX, (0,), (1,)),), 1, (0,))
        with pytest.raises(UsageError):  # class index out of range
            CircuitTemplate(1, (Gate(GateKind.RX, (0,), (0,)),), 1, (1,))
        with pytest.raises(UsageError):  # unused class
            CircuitTemplate(1, (Gate(GateKind.RX, (0,), (0,)),), 2, (0,))
        with pytest.raises(UsageError):  # qubit out of range
            CircuitTemplate(1, (Gate(GateKind.RX, (1,), (0,)),), 1, (0,))


class TestEvaluate:
    def test_zero_params_symmetric_templates_are_identity(self):
        rng = np.random.default_rng(0)
        g = gen_er_graph(6, 0.5, rng)
        state = embed_graph(g)
        for t in (build_permutation_invariant(6, 2), build_cyclic_invariant(6, 2)):
            out = evaluate(t, np.zeros(t.n_params), state)
            assert np.allclose(out.amplitudes, state.amplitudes, atol=1e-12)

    def test_zero_params_entangling_leaves_only_cnots(self):
        from cliquesym.statevector import apply_gate_raw

        state = random_state(3, 1)
        t = build_strongly_entangling(3, 1)
        out = evaluate(t, np.zeros(t.n_params), state)
        expected = state.amplitudes.copy()
        for qubits in [(0, 1), (1, 2), (2, 0), (0, 2), (1, 0), (2, 1)]:
            apply_gate_raw(expected, 3, GateKind.CNOT, qubits, ())
        assert np.allclose(out.amplitudes, expected, atol=1e-12)
        assert not np.allclose(out.amplitudes, state.amplitudes)

    def test_permutation_pi_pulse_flips_both_qubits(self):
        t = build_permutation_invariant(2, 1)
        z = z_vector(t, [np.pi, 0.0, 0.0], zero_state(2))
        assert np.allclose(z, [-1.0, -1.0], atol=1e-12)

    def test_all_zero_input_gives_equal_expectations(self):
        t = build_permutation_invariant(6, 2)
        rng = np.random.default_rng(2)
        z = z_vector(t, rng.uniform(-np.pi, np.pi, t.n_params), zero_state(6))
        assert np.ptp(z) < 1e-10

    def test_preserves_norm(self):
        t = build_strongly_entangling(4, 2)
        rng = np.random.default_rng(3)
        out = evaluate(t, rng.uniform(-np.pi, np.pi, t.n_params), random_state(4, 4))
        assert abs(np.linalg.norm(out.amplitudes) - 1.0) < 1e-10

    def test_does_not_mutate_input(self):
        t = build_permutation_invariant(3, 1)
        state = random_state(3, 5)
        before = state.amplitudes.copy()
        evaluate(t, [0.3, 0.4, 0.5], state)
        assert np.array_equal(state.amplitudes, before)

    def test_argument_validation(self):
        t = build_permutation_invariant(3, 1)
        with pytest.raises(UsageError):
            evaluate(t, [0.1, 0.2], zero_state(3))
        with pytest.raises(UsageError):
            evaluate(t, [0.1, 0.2, 0.3], zero_state(4))


class TestCompiledEvaluation:
    @pytest.mark.parametrize(
        "build, n, reps",
        [
            (build_permutation_invariant, 6, 2),
            (build_cyclic_invariant, 6, 2),
            (build_strongly_entangling, 5, 1),
        ],
    )
    def test_matches_gate_by_gate_application(self, build, n, reps):
        # apply_gate knows nothing about the compiled/fused representation,
        # so agreement here pins the whole compilation step
        from cliquesym.statevector import apply_gate

        t = build(n, reps)
        rng = np.random.default_rng(60)
        params = rng.uniform(-np.pi, np.pi, t.n_params)
        state = random_state(n, 61)
        expected = state.copy()
        slot_values = [params[c] for c in t.class_of]
        for gate in t.gates:
            apply_gate(expected, gate, slot_values)
        out = evaluate(t, params, state)
        assert np.max(np.abs(out.amplitudes - expected.amplitudes)) < 1e-12

    def test_evaluate_batch_matches_single(self):
        from cliquesym.ansatz import evaluate_batch

        t = build_permutation_invariant(5, 3)
        rng = np.random.default_rng(62)
        params = rng.uniform(-np.pi, np.pi, t.n_params)
        batch = np.stack([random_state(5, s).amplitudes for s in range(7)])
        outs = evaluate_batch(t, params, batch)
        for b in range(7):
            single = evaluate(t, params, Statevector(5, batch[b]))
            assert np.allclose(outs[b], single.amplitudes, atol=1e-12)


class TestEquivariance:
    def test_permutation_template_commutes_with_relabeling(self):
        t = build_permutation_invariant(6, 3)
        rng = np.random.default_rng(10)
        for _ in range(20):
            g = gen_er_graph(6, float(rng.uniform(0.3, 0.8)), rng)
            perm = [int(p) for p in rng.permutation(6)]
            params = rng.uniform(-np.pi, np.pi, t.n_params)
            z_orig = z_vector(t, params, embed_graph(g))
            z_perm = z_vector(t, params, embed_graph(permute_graph(g, perm)))
            assert np.max(np.abs(z_perm[perm] - z_orig)) <= 1e-10

    def test_cyclic_template_commutes_with_shifts(self):
        t = build_cyclic_invariant(6, 3)
        rng = np.random.default_rng(11)
        for shift in range(1, 6):
            g = gen_er_graph(6, 0.5, rng)
            perm = [(i + shift) % 6 for i in range(6)]
            params = rng.uniform(-np.pi, np.pi, t.n_params)
            z_orig = z_vector(t, params, embed_graph(g))
            z_perm = z_vector(t, params, embed_graph(permute_graph(g, perm)))
            assert np.max(np.abs(z_perm[perm] - z_orig)) <= 1e-10

    def test_cyclic_template_breaks_under_transposition(self):
        t = build_cyclic_invariant(6, 3)
        rng = np.random.default_rng(12)
        g = gen_er_graph(6, 0.5, rng)
        perm = [1, 0, 2, 3, 4, 5]
        params = rng.uniform(-np.pi, np.pi, t.n_params)
        z_orig = z_vector(t, params, embed_graph(g))
        z_perm = z_vector(t, params, embed_graph(permute_graph(g, perm)))
        assert np.max(np.abs(np.asarray(z_perm)[perm] - z_orig)) > 1e-3


class TestExpectationGradient:
    def test_single_rx_analytic(self):
        t = single_rx_template()
        state = zero_state(1)
        assert abs(expectation_gradient(t, [0.0], state, 0)[0]) < 1e-12
        assert abs(expectation_gradient(t, [np.pi / 2], state, 0)[0] + 1.0) < 1e-12
        for theta in (0.3, 1.1, 2.7):
            grad = expectation_gradient(t, [theta], state, 0)[0]
            assert abs(grad + np.sin(theta)) < 1e-12

    @pytest.mark.parametrize(
        "build, reps",
        [
            (build_permutation_invariant, 2),
            (build_cyclic_invariant, 2),
            (build_strongly_entangling, 1),
        ],
    )
    def test_matches_finite_differences(self, build, reps):
        t = build(6, reps)
        rng = np.random.default_rng(20)
        state = random_state(6, 21)
        params = rng.uniform(-np.pi, np.pi, t.n_params)
        for qubit in (0, 3):
            grad = expectation_gradient(t, params, state, qubit)
            assert np.max(np.abs(grad - fd_gradient(t, params, state, qubit))) < 1e-6

    def test_shared_slots_accumulate(self):
        # two RX gates sharing one class on one qubit act as RX(2 theta)
        t = CircuitTemplate(
            1,
            (Gate(GateKind.RX, (0,), (0,)), Gate(GateKind.RX, (0,), (1,))),
            1,
            (0, 0),
        )
        theta = 0.7
        grad = expectation_gradient(t, [theta], zero_state(1), 0)[0]
        assert abs(grad + 2 * np.sin(2 * theta)) < 1e-12

    def test_invalid_qubit(self):
        t = single_rx_template()
        with pytest.raises(UsageError):
            expectation_gradient(t, [0.1], zero_state(1), 1)


class TestStateJacobian:
    @pytest.mark.parametrize(
        "build, reps",
        [
            (build_permutation_invariant, 2),
            (build_cyclic_invariant, 1),
            (build_strongly_entangling, 1),
        ],
    )
    def test_matches_finite_difference_states(self, build, reps):
        t = build(6, reps)
        rng = np.random.default_rng(30)
        state = random_state(6, 31)
        params = rng.uniform(-np.pi, np.pi, t.n_params)
        psi, jac = state_jacobian(t, params, state.amplitudes)
        assert np.allclose(psi, evaluate(t, params, state).amplitudes, atol=1e-12)
        fd = fd_state_derivatives(t, params, state)
        assert np.max(np.abs(jac - fd)) < 1e-6

    def test_batched_matches_single(self):
        t = build_permutation_invariant(4, 2)
        rng = np.random.default_rng(32)
        params = rng.uniform(-np.pi, np.pi, t.n_params)
        batch = np.stack([random_state(4, s).amplitudes for s in range(5)])
        psi_b, jac_b = state_jacobian(t, params, batch)
        for b in range(5):
            psi_1, jac_1 = state_jacobian(t, params, batch[b])
            assert np.array_equal(psi_b[b], psi_1)
            assert np.array_equal(jac_b[:, b, :], jac_1)


class TestFubiniStudyMetric:
    def test_single_rx_is_quarter(self):
        t = single_rx_template()
        for theta in (0.0, 0.4, 1.3, 3.0):
            g = fubini_study_metric(t, [theta], zero_state(1))
            assert np.allclose(g, [[0.25]], atol=1e-12)

    def test_symmetric_and_psd(self):
        rng = np.random.default_rng(40)
        for build, reps in [
            (build_permutation_invariant, 3),
            (build_cyclic_invariant, 2),
            (build_strongly_entangling, 1),
        ]:
            t = build(6, reps)
            params = rng.uniform(-np.pi, np.pi, t.n_params)
            g = fubini_study_metric(t, params, random_state(6, 41))
            assert np.max(np.abs(g - g.T)) < 1e-12
            assert np.linalg.eigvalsh(g).min() > -1e-9

    def test_two_qubit_layer_matches_overlap_oracle(self):
        t = build_permutation_invariant(2, 1)
        rng = np.random.default_rng(42)
        state = random_state(2, 43)
        params = rng.uniform(-np.pi, np.pi, 3)
        psi = evaluate(t, params, state).amplitudes
        dpsi = fd_state_derivatives(t, params, state)
        expected = np.empty((3, 3))
        for i in range(3):
            for j in range(3):
                expected[i, j] = np.real(
                    np.vdot(dpsi[i], dpsi[j])
                    - np.vdot(dpsi[i], psi) * np.vdot(psi, dpsi[j])
                )
        g = fubini_study_metric(t, params, state)
        assert g.shape == (3, 3)
        assert np.max(np.abs(g - expected)) < 1e-6

    def test_six_qubit_metric_matches_overlap_oracle(self):
        t = build_cyclic_invariant(6, 1)
        rng = np.random.default_rng(44)
        state = embed_graph(gen_er_graph(6, 0.5, rng))
        params = rng.uniform(-np.pi, np.pi, t.n_params)
        psi = evaluate(t, params, state).amplitudes
        dpsi = fd_state_derivatives(t, params, state)
        expected = np.real(
            dpsi.conj() @ dpsi.T
            - np.outer(dpsi.conj() @ psi, psi.conj() @ dpsi.T)
        )
        assert np.max(np.abs(fubini_study_metric(t, params, state) - expected)) < 1e-6


class TestBatchedAnalysis:
    def test_matches_component_routines(self):
        t = build_cyclic_invariant(5, 1)
        rng = np.random.default_rng(50)
        params = rng.uniform(-np.pi, np.pi, t.n_params)
        graphs = [gen_er_graph(5, 0.5, rng) for _ in range(4)]
        batch = np.stack([embed_graph(g).amplitudes for g in graphs])
        z, dz, metric = predictions_gradients_metric(t, params, batch)
        assert z.shape == (4, 5)
        assert dz.shape == (4, 5, t.n_params)
        assert metric.shape == (4, t.n_params, t.n_params)
        for b, g in enumerate(graphs):
            state = embed_graph(g)
            assert np.allclose(z[b], z_vector(t, params, state), atol=1e-12)
            for q in range(5):
                shift = expectation_gradient(t, params, state, q)
                assert np.max(np.abs(dz[b, q] - shift)) < 1e-10
            assert np.allclose(
                metric[b], fubini_study_metric(t, params, state), atol=1e-12
            )

    def test_rejects_wrong_width(self):
        t = build_permutation_invariant(3, 1)
        with pytest.raises(UsageError):
            predictions_gradients_metric(t, [0.1, 0.2, 0.3], np.zeros((2, 4), dtype=complex))
