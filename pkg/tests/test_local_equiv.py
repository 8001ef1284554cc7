import itertools

import numpy as np
import pytest

from twoq.exceptions import NotEquivalent
from twoq.invariants import C12, C21, C21_RAW
from twoq.linalg import I2, SX, SZ, dist_phase, expm_i_herm, kron
from twoq.local_equiv import (LocalEquivalence, iter_local_equivalences, match_spectra,
                              solve_local_equivalence)
from twoq.sampling import haar_su4, random_su2
from twoq.timing import ScanConfig, scan

from helpers import REF_A2, REF_B2, REF_C2, REF_D2

H42 = 0.42 * kron(I2, SZ) + kron(SX, SX)
LAMS = (1, 1j, -1, -1j)


def assert_witness(eq, u, v, tol=1e-8):
    assert eq.residual(u, v) <= tol
    for m in (eq.a, eq.b, eq.c, eq.d):
        assert abs(np.linalg.det(m) - 1) <= 1e-10
    assert min(abs(eq.lam - z) for z in LAMS) <= 1e-12


def planted(v, rng):
    a, b, c, d = (random_su2(rng) for _ in range(4))
    lam = LAMS[rng.integers(4)]
    return lam * kron(a, b) @ v @ kron(c, d)


def test_reflexive(rng):
    u = haar_su4(rng)
    assert_witness(solve_local_equivalence(u, u), u, u)
    trivial = LocalEquivalence(I2, I2, I2, I2, 1)
    assert trivial.residual(u, u) <= 1e-14


def test_plant_and_recover_c12(rng):
    for _ in range(50):
        u = planted(C12, rng)
        assert_witness(solve_local_equivalence(u, C12), u, C12)


@pytest.mark.parametrize("target", ["c12", "c21", "random"])
def test_completeness_planted(rng, target):
    for _ in range(167):
        v = {"c12": C12, "c21": C21}.get(target)
        if v is None:
            v = haar_su4(rng)
        u = planted(v, rng)
        assert_witness(solve_local_equivalence(u, v), u, v)


def test_negative_soundness(rng):
    for _ in range(100):
        u, v = haar_su4(rng), haar_su4(rng)
        with pytest.raises(NotEquivalent):
            solve_local_equivalence(u, v)


def test_every_enumerated_witness_is_sound(rng):
    u = planted(C21, rng)
    found = list(itertools.islice(iter_local_equivalences(u, C21), 40))
    assert found
    for eq in found:
        assert_witness(eq, u, C21)


def test_inverse_witness(rng):
    u = planted(C12, rng)
    eq = solve_local_equivalence(u, C12)
    assert eq.inverse().residual(C12, u) <= 1e-8


def test_h42_timing_against_c21():
    t = scan(H42, ScanConfig(0.0, 2.0, 2001))[0].t
    w = expm_i_herm(H42, t)
    wn = w / np.linalg.det(w) ** 0.25
    assert_witness(solve_local_equivalence(wn, C21), wn, C21)
    # the six-digit reference corrections are a witness too
    m = kron(REF_A2, REF_B2) @ w @ kron(REF_C2, REF_D2)
    assert dist_phase(m, C21_RAW) <= 1e-6


def test_match_spectra_identity_and_reverse():
    e = np.exp(1j * np.array([0.1, 0.5, 1.0, 2.0]))
    assert match_spectra(e, e) == (0, 1, 2, 3)
    assert match_spectra(e, e[::-1]) == (3, 2, 1, 0)
    assert match_spectra(e, np.exp(1j * np.array([0.1, 0.5, 1.0, 2.5]))) is None


def test_match_spectra_degenerate_is_lexicographically_least():
    eu = np.exp(1j * np.array([0.3, 0.3, 1.0, 2.0]))
    ev = np.exp(1j * np.array([2.0, 0.3, 1.0, 0.3]))
    valid = [p for p in itertools.permutations(range(4))
             if all(abs(eu[k] - ev[p[k]]) <= 1e-6 for k in range(4))]
    assert match_spectra(eu, ev) == min(valid) == (1, 3, 2, 0)


def test_spectra_filter_rejects_before_factoring(rng, monkeypatch):
    import twoq.local_equiv as le
    calls = []
    real = le.kron_factor
    monkeypatch.setattr(le, "kron_factor", lambda *a, **k: calls.append(1) or real(*a, **k))
    with pytest.raises(NotEquivalent):
        solve_local_equivalence(haar_su4(rng), haar_su4(rng))
    assert not calls


def test_deterministic(rng):
    u = planted(C12, rng)
    e1, e2 = solve_local_equivalence(u, C12), solve_local_equivalence(u.copy(), C12)
    for x, y in zip((e1.a, e1.b, e1.c, e1.d, e1.lam), (e2.a, e2.b, e2.c, e2.d, e2.lam)):
        assert np.array_equal(x, y)
