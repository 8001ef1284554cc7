"""Local-equivalence invariant of SU(4) and the CNOT-count test.

Wire convention: wire 0 is the *right* tensor factor and wire 1 the left
one, so ``kron(a, b)`` applies ``a`` to wire 1 and ``b`` to wire 0. With
this convention ``C12`` (control on wire 0, target on wire 1) satisfies
``gamma(C12) = -i kron(sx, sz)`` and ``gamma(C21) = -i kron(sz, sx)``.
"""
import numpy as np

from ._config import DEFAULT_TOL
from .linalg import YY, char_poly4, su4_normalize

# Rows of the Bell "magic" basis with the final column negated so that
# det(E) = 1 while E E^t = -kron(sy, sy) still holds.
MAGIC = np.array([[1, 0, 0, -1j],
                  [0, 1j, 1, 0],
                  [0, 1j, -1, 0],
                  [1, 0, 0, 1j]], dtype=complex) / np.sqrt(2)
MAGIC.setflags(write=False)

CNOT_PHASE = np.exp(0.25j * np.pi)


def cnot_matrix(control, target):
    """Raw 0/1 permutation matrix of a CNOT on the given wires."""
    if {control, target} != {0, 1}:
        raise ValueError(f"invalid CNOT wires ({control}, {target})")
    m = np.zeros((4, 4), dtype=complex)
    for idx in range(4):
        bits = [idx & 1, (idx >> 1) & 1]  # bits[w] is the state of wire w
        if bits[control]:
            bits[target] ^= 1
        m[bits[0] + 2 * bits[1], idx] = 1
    return m


C12_RAW = cnot_matrix(0, 1)
C21_RAW = cnot_matrix(1, 0)
C12 = CNOT_PHASE * C12_RAW
C21 = CNOT_PHASE * C21_RAW
for _m in (C12_RAW, C21_RAW, C12, C21):
    _m.setflags(write=False)

NORMALIZED_CNOTS = {(0, 1): C12, (1, 0): C21}

_CLASS0 = (np.array([-4, 6, -4, 1], dtype=complex),
           np.array([4, 6, 4, 1], dtype=complex))
_CLASS1 = np.array([0, 2, 0, 1], dtype=complex)


def gamma(u):
    """``u (sy x sy) u^t (sy x sy)``."""
    u = np.asarray(u, dtype=complex)
    return u @ YY @ u.T @ YY


def gamma_batch(u):
    return u @ YY @ np.transpose(u, (0, 2, 1)) @ YY


def trace_gamma(u):
    return complex(np.trace(gamma(u)))


def gamma_poly(u):
    """Characteristic polynomial of ``gamma`` of the SU(4)-normalised ``u``."""
    return char_poly4(gamma(su4_normalize(u)))


def classify_poly(coeffs, tol=DEFAULT_TOL.classify):
    """CNOT class from the coefficient vector ``(c3, c2, c1, c0)``."""
    c = np.asarray(coeffs, dtype=complex)
    if min(np.max(np.abs(c - t)) for t in _CLASS0) <= tol:
        return 0
    if np.max(np.abs(c - _CLASS1)) <= tol:
        return 1
    if np.max(np.abs(c[:3].imag)) <= tol:
        return 2
    return 3


def classify_cnot(u, tol=DEFAULT_TOL.classify):
    """Minimal number of CNOTs (0-3) needed to implement ``u``.

    ``u`` may have any determinant; global phase is irrelevant.

    >>> from twoq.linalg import HADAMARD, kron
    >>> classify_cnot(kron(HADAMARD, HADAMARD))
    0
    """
    return classify_poly(gamma_poly(u), tol)
