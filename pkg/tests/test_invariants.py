import numpy as np
import pytest

from twoq.invariants import (C12, C12_RAW, C21, C21_RAW, CNOT_PHASE, MAGIC, classify_cnot,
                             classify_poly, cnot_matrix, gamma, gamma_batch, gamma_poly,
                             trace_gamma)
from twoq.linalg import (I2, SX, SY, SZ, YY, char_poly4, kron, kron_factor, rx, rz,
                         su4_normalize)
from twoq.sampling import haar_su4, haar_unitary, planted_unitary, random_su2

from helpers import DJ, F, HH, SWAP, random_so4


def coeffs(p):
    return np.array(p, dtype=complex)


def test_magic_basis_properties(rng):
    assert abs(np.linalg.det(MAGIC) - 1) <= 1e-12
    assert np.linalg.norm(MAGIC @ MAGIC.T + YY) <= 1e-12
    assert np.allclose(MAGIC @ MAGIC.conj().T, np.eye(4))
    for _ in range(100):
        x = random_so4(rng)
        a, b, phase = kron_factor(MAGIC @ x @ MAGIC.conj().T)
        assert np.linalg.norm(MAGIC @ x @ MAGIC.conj().T - phase * kron(a, b)) <= 1e-8


def test_magic_maps_locals_to_real_orthogonal(rng):
    m = kron(random_su2(rng), random_su2(rng))
    o = MAGIC.conj().T @ m @ MAGIC
    assert np.allclose(o.imag, 0, atol=1e-12)
    assert np.isclose(np.linalg.det(o.real), 1)


def test_cnot_matrices():
    # control wire 0 is the low bit of the basis index
    assert np.array_equal(C12_RAW, np.eye(4)[[0, 3, 2, 1]])
    assert np.array_equal(C21_RAW, np.eye(4)[[0, 1, 3, 2]])
    for c in (C12, C21):
        assert abs(np.linalg.det(c) - 1) <= 1e-12
    assert np.allclose(C12, CNOT_PHASE * C12_RAW)
    with pytest.raises(ValueError):
        cnot_matrix(0, 0)


def test_gamma_of_cnots_matches_pauli_products():
    assert np.max(np.abs(gamma(C21) - (-1j) * kron(SZ, SX))) <= 1e-12
    assert np.max(np.abs(gamma(C12) - (-1j) * kron(SX, SZ))) <= 1e-12
    for c in (C12, C21):
        assert np.allclose(coeffs(char_poly4(gamma(c))), [0, 2, 0, 1], atol=1e-12)


def test_gamma_identity_and_unitarity(rng):
    assert np.allclose(gamma(np.eye(4)), np.eye(4))
    g = gamma(haar_su4(rng))
    assert np.allclose(g @ g.conj().T, np.eye(4))
    assert abs(np.linalg.det(g) - 1) <= 1e-10


def test_gamma_batch(rng):
    us = np.array([haar_su4(rng) for _ in range(5)])
    gb = gamma_batch(us)
    for k in range(5):
        assert np.allclose(gb[k], gamma(us[k]))


def test_trace_gamma_examples():
    assert np.isclose(trace_gamma(np.eye(4)), 4)
    assert abs(trace_gamma(C12)) <= 1e-12
    d, p = 0.7, 0.3
    u = C12 @ kron(rz(d), rx(p)) @ C12
    tr = trace_gamma(u)
    # the eigenvalues are -e^{+-i(d+-p)}, so the trace carries a minus sign
    assert abs(tr + (2 * np.cos(d + p) + 2 * np.cos(d - p))) <= 1e-12
    assert abs(tr.imag) <= 1e-12


def test_two_cnot_core_spectrum():
    d, p = 0.7, 0.3
    z = np.linalg.eigvals(gamma(C12 @ kron(rz(d), rx(p)) @ C12))
    expect = -np.exp(1j * np.array([d + p, -(d + p), d - p, -(d - p)]))
    assert np.allclose(np.sort_complex(z), np.sort_complex(expect), atol=1e-10)


@pytest.mark.parametrize("u,k", [(HH, 0), (DJ, 1), (F, 3), (SWAP, 3),
                                 (np.eye(4), 0), (C12_RAW, 1)])
def test_reference_classes(u, k):
    assert classify_cnot(u) == k


def test_classify_poly_order_and_both_class0_signs():
    assert classify_poly([-4, 6, -4, 1]) == 0
    assert classify_poly([4, 6, 4, 1]) == 0
    assert classify_poly([0, 2, 0, 1]) == 1
    assert classify_poly([0.5, 1.0, 0.5, 1]) == 2
    assert classify_poly([0.5j, 1.0, -0.5j, 1]) == 3
    assert classify_poly([1e-10, 2, 0, 1]) == 1
    assert classify_poly([1e-8, 2, 0, 1]) == 2


def test_local_invariance_1000(rng):
    worst = 0.0
    for _ in range(1000):
        u = haar_su4(rng)
        a, b, c, d = (random_su2(rng) for _ in range(4))
        lhs = coeffs(char_poly4(gamma(kron(a, b) @ u @ kron(c, d))))
        worst = max(worst, np.max(np.abs(lhs - coeffs(char_poly4(gamma(u))))))
    assert worst <= 1e-8


def test_phase_flip(rng):
    for _ in range(50):
        u = haar_su4(rng)
        c3, c2, c1, c0 = char_poly4(gamma(u))
        f3, f2, f1, f0 = char_poly4(gamma(1j * u))
        assert np.allclose([f3, f2, f1, f0], [-c3, c2, -c1, c0], atol=1e-12)


@pytest.mark.parametrize("k", [0, 1, 2])
def test_class_of_constructed_circuits(rng, k):
    for _ in range(500):
        assert classify_cnot(planted_unitary(k, rng)) == k


def test_class_at_most_k_with_arbitrary_middle_layers(rng):
    for k in (1, 2):
        for _ in range(200):
            u = kron(random_su2(rng), random_su2(rng))
            for _ in range(k):
                u = kron(random_su2(rng), random_su2(rng)) @ C12_RAW @ u
            assert classify_cnot(u) <= k


def test_haar_samples_are_class_3(rng):
    hits = sum(classify_cnot(haar_unitary(4, rng)) == 3 for _ in range(100))
    assert hits >= 99


def test_classification_ignores_global_phase(rng):
    for k in range(4):
        u = planted_unitary(k, rng)
        for phi in np.linspace(-np.pi, np.pi, 9):
            assert classify_cnot(np.exp(1j * phi) * u) == k


def test_gamma_poly_normalizes(rng):
    u = haar_unitary(4, rng)
    assert np.allclose(coeffs(gamma_poly(u)), coeffs(char_poly4(gamma(su4_normalize(u)))))


def test_permutation_example_needs_the_phase():
    # gamma of the raw permutation (det -1) is not the SU(4) invariant
    assert np.allclose(coeffs(char_poly4(gamma(np.exp(0.25j * np.pi) * DJ))), [0, 2, 0, 1],
                       atol=1e-12)
    assert classify_cnot(kron(I2, SX) @ C21_RAW) == 1
    assert np.allclose(C21_RAW @ kron(I2, SX), DJ)
