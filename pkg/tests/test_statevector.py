import numpy as np
import pytest

from oracles import dense_1q, kron_chain, random_state
from pigeonsim.errors import (
    CapacityError,
    ImpossiblePostselectionError,
    InvalidInstructionError,
)
from pigeonsim.gates import ONE_QUBIT_GATES, GateKind
from pigeonsim.statevector import (
    MAX_QUBITS,
    Statevector,
    apply_1q,
    apply_cx,
    build_product_state,
    inner_product,
    probability_of,
    project,
    renormalize,
    zero_state,
)

SQ2 = 1.0 / np.sqrt(2.0)


def test_zero_state():
    s = zero_state(2)
    assert s.num_qubits == 2
    assert np.array_equal(s.amps, [1, 0, 0, 0])
    assert s.norm_sq() == pytest.approx(1.0, abs=1e-15)


def test_zero_state_capacity():
    with pytest.raises(CapacityError):
        zero_state(0)
    with pytest.raises(CapacityError):
        zero_state(MAX_QUBITS + 1)


def test_statevector_rejects_wrong_length():
    with pytest.raises(ValueError):
        Statevector(2, [1, 0])


def test_statevector_copies_its_input():
    src = np.array([1, 0], dtype=np.complex128)
    s = Statevector(1, src)
    src[0] = 5.0
    assert s.amps[0] == 1.0


def test_hadamard_on_zero():
    s = apply_1q(zero_state(1), GateKind.H, 0)
    assert np.allclose(s.amps, [SQ2, SQ2], atol=1e-15)


def test_apply_1q_is_pure():
    s = zero_state(1)
    apply_1q(s, GateKind.X, 0)
    assert s.amps[0] == 1.0  # original untouched


def test_phase_pipeline_single_qubit():
    # H then S then H sends |0> to ((1+i)|0> + (1-i)|1>)/2
    s = zero_state(1)
    for kind in (GateKind.H, GateKind.S, GateKind.H):
        s = apply_1q(s, kind, 0)
    assert np.allclose(s.amps, [(1 + 1j) / 2, (1 - 1j) / 2], atol=1e-12)


def test_apply_1q_matches_dense_oracle():
    rng = np.random.default_rng(1001)
    for _ in range(60):
        n = int(rng.integers(1, 6))
        target = int(rng.integers(0, n))
        kind = ONE_QUBIT_GATES[int(rng.integers(0, len(ONE_QUBIT_GATES)))]
        amps = random_state(rng, n)
        got = apply_1q(Statevector(n, amps), kind, target)
        want = dense_1q(n, target, kind.matrix) @ amps
        assert np.allclose(got.amps, want, atol=1e-12)


def test_cx_moves_the_right_amplitude():
    # |q1 q0> = |10>: control qubit 1 set, target qubit 0 flips
    s = Statevector(2, [0, 0, 1, 0])
    assert np.array_equal(apply_cx(s, 1, 0).amps, [0, 0, 0, 1])
    # control clear: nothing happens
    s = Statevector(2, [0, 1, 0, 0])
    assert np.array_equal(apply_cx(s, 1, 0).amps, [0, 1, 0, 0])


def test_bell_pair():
    s = apply_cx(apply_1q(zero_state(2), GateKind.H, 0), 0, 1)
    assert np.allclose(s.amps, [SQ2, 0, 0, SQ2], atol=1e-15)


def test_apply_cx_validates_operands():
    s = zero_state(2)
    with pytest.raises(InvalidInstructionError):
        apply_cx(s, 1, 1)
    with pytest.raises(IndexError):
        apply_cx(s, 0, 2)
    with pytest.raises(InvalidInstructionError):
        apply_1q(s, GateKind.CX, 0)


def test_inner_product_values():
    plus = build_product_state(["plus"])
    plus_i = build_product_state(["plus_i"])
    minus_i = build_product_state(["minus_i"])
    assert inner_product(plus, plus) == pytest.approx(1.0, abs=1e-15)
    # <+i|+> = (1-i)/2 and <-i|+> = (1+i)/2
    assert abs(inner_product(plus_i, plus) - (0.5 - 0.5j)) < 1e-15
    assert abs(inner_product(minus_i, plus) - (0.5 + 0.5j)) < 1e-15


def test_inner_product_conjugates_first_argument():
    a = Statevector(1, [1j, 0])
    b = Statevector(1, [1, 0])
    assert inner_product(a, b) == pytest.approx(-1j)
    with pytest.raises(ValueError):
        inner_product(zero_state(1), zero_state(2))


def test_plus_decomposes_in_pm_i_basis():
    # |+> = (1-i)/2 |+i> + (1+i)/2 |-i>, coefficients from inner products
    plus = build_product_state(["plus"])
    plus_i = build_product_state(["plus_i"])
    minus_i = build_product_state(["minus_i"])
    c_p = inner_product(plus_i, plus)
    c_m = inner_product(minus_i, plus)
    rebuilt = c_p * plus_i.amps + c_m * minus_i.amps
    assert np.max(np.abs(rebuilt - plus.amps)) < 1e-12


def test_pm_i_basis_is_complete_for_random_states():
    rng = np.random.default_rng(77)
    plus_i = build_product_state(["plus_i"])
    minus_i = build_product_state(["minus_i"])
    for _ in range(100):
        psi = Statevector(1, random_state(rng, 1))
        rebuilt = (
            inner_product(plus_i, psi) * plus_i.amps
            + inner_product(minus_i, psi) * minus_i.amps
        )
        assert np.max(np.abs(rebuilt - psi.amps)) < 1e-12


def test_probability_of():
    s = apply_1q(zero_state(1), GateKind.H, 0)
    assert probability_of(s, 0, 0) == pytest.approx(0.5, abs=1e-14)
    assert probability_of(s, 0, 1) == pytest.approx(0.5, abs=1e-14)
    with pytest.raises(ValueError):
        probability_of(s, 0, 2)


def test_probabilities_sum_to_norm():
    rng = np.random.default_rng(4242)
    for _ in range(50):
        n = int(rng.integers(1, 6))
        s = Statevector(n, random_state(rng, n))
        for q in range(n):
            total = probability_of(s, q, 0) + probability_of(s, q, 1)
            assert abs(total - 1.0) < 1e-12


def test_project_on_bell_pair():
    bell = apply_cx(apply_1q(zero_state(2), GateKind.H, 0), 0, 1)
    kept, weight = project(bell, 0, 0)
    assert weight == pytest.approx(0.5, abs=1e-14)
    assert np.allclose(kept.amps, [SQ2, 0, 0, 0], atol=1e-15)
    normalized = renormalize(kept)
    assert np.allclose(normalized.amps, [1, 0, 0, 0], atol=1e-12)


def test_project_impossible_branch():
    with pytest.raises(ImpossiblePostselectionError):
        project(zero_state(1), 0, 1)


def test_project_is_idempotent():
    rng = np.random.default_rng(913)
    for _ in range(100):
        n = int(rng.integers(1, 5))
        s = Statevector(n, random_state(rng, n))
        q = int(rng.integers(0, n))
        out = int(rng.integers(0, 2))
        p = probability_of(s, q, out)
        if p < 1e-6:
            continue
        once, w1 = project(s, q, out)
        twice, w2 = project(once, q, out)
        assert np.array_equal(once.amps, twice.amps)
        assert abs(w1 - p) < 1e-12
        assert abs(w2 - w1) < 1e-12


def test_renormalize_rejects_null_state():
    with pytest.raises(ImpossiblePostselectionError):
        renormalize(Statevector(1, [0, 0]))


def test_build_product_state_vectors():
    s = build_product_state(["plus_i"])
    assert np.allclose(s.amps, [SQ2, SQ2 * 1j], atol=1e-15)
    assert build_product_state(["+i"]) .amps == pytest.approx(s.amps)
    # qubit order: labels[0] is the low bit
    s2 = build_product_state(["one", "zero"])
    assert np.array_equal(s2.amps, [0, 1, 0, 0])


def test_build_product_state_matches_kron_oracle():
    rng = np.random.default_rng(5150)
    vecs = {
        "zero": np.array([1, 0], dtype=complex),
        "one": np.array([0, 1], dtype=complex),
        "plus": np.array([SQ2, SQ2], dtype=complex),
        "minus": np.array([SQ2, -SQ2], dtype=complex),
        "plus_i": np.array([SQ2, SQ2 * 1j], dtype=complex),
        "minus_i": np.array([SQ2, -SQ2 * 1j], dtype=complex),
    }
    names = list(vecs)
    for _ in range(30):
        labels = [names[int(rng.integers(0, 6))] for _ in range(int(rng.integers(1, 5)))]
        got = build_product_state(labels)
        want = kron_chain([vecs[x].reshape(2, 1) for x in labels]).ravel()
        assert np.allclose(got.amps, want, atol=1e-14)


def test_build_product_state_errors():
    with pytest.raises(ValueError):
        build_product_state(["sideways"])
    with pytest.raises(CapacityError):
        build_product_state([])


def test_norm_preserved_by_random_gate_sequences():
    # 1000 random states, each hit with a random gate
    rng = np.random.default_rng(20260814)
    for _ in range(1000):
        n = int(rng.integers(1, 7))
        s = Statevector(n, random_state(rng, n))
        if n >= 2 and rng.random() < 0.3:
            a, b = rng.choice(n, size=2, replace=False)
            s = apply_cx(s, int(a), int(b))
        else:
            kind = ONE_QUBIT_GATES[int(rng.integers(0, len(ONE_QUBIT_GATES)))]
            s = apply_1q(s, kind, int(rng.integers(0, n)))
        assert abs(s.norm_sq() - 1.0) < 1e-12


def test_states_stay_finite():
    rng = np.random.default_rng(31337)
    s = Statevector(3, random_state(rng, 3))
    for _ in range(200):
        kind = ONE_QUBIT_GATES[int(rng.integers(0, len(ONE_QUBIT_GATES)))]
        s = apply_1q(s, kind, int(rng.integers(0, 3)))
    assert np.all(np.isfinite(s.amps.real)) and np.all(np.isfinite(s.amps.imag))
