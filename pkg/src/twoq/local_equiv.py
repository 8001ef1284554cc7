"""Constructive solver for local equivalence of two-qubit operators.

Given ``u`` and ``v`` in SU(4) with matching invariants, find one-qubit
``a, b, c, d`` in SU(2) and ``lam`` in ``{1, i, -1, -i}`` with

    u = lam * kron(a, b) @ v @ kron(c, d)

In the magic basis local gates become real orthogonal matrices, so the
problem reduces to finding ``x, y`` in SO(4) with ``u' = x v' y``. Both
``u' u'^t`` and ``v' v'^t`` are diagonalised by real rotations ``q`` and
``r``; with the eigenvalues aligned, ``s = v'^* r^t q u'`` is in SO(4)
and ``u' = q^t r v' s``.
"""
import itertools
from dataclasses import dataclass

import numpy as np

from ._config import DEFAULT_TOL
from .exceptions import NotAProduct, NotEquivalent
from .invariants import MAGIC
from .linalg import dagger, kron, kron_factor, sym_unitary_real_eigenbasis

# -lam gives the same eigenbases as lam and only flips the overall sign of
# the witness, so searching lam in (1, i) covers all of {1, i, -1, -i}
_LAMBDAS = (1, 1j)
_FOURTH_ROOTS = np.array((1, 1j, -1, -1j), dtype=complex)
_PERMS = tuple(itertools.permutations(range(4)))
# sign patterns with an even number of -1 entries keep det = +1
_EVEN_SIGNS = tuple(np.array(s, dtype=float)
                    for s in itertools.product((1, -1), repeat=4)
                    if np.prod(s) > 0)


@dataclass(frozen=True)
class LocalEquivalence:
    """Witness of ``u = lam * kron(a, b) @ v @ kron(c, d)``.

    ``a`` and ``c`` act on wire 1 (left tensor factor); ``b`` and ``d`` on
    wire 0.
    """

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray
    lam: complex

    def apply(self, v):
        return self.lam * kron(self.a, self.b) @ v @ kron(self.c, self.d)

    def residual(self, u, v):
        return float(np.linalg.norm(np.asarray(u) - self.apply(v)))

    def inverse(self):
        """Witness of ``v = lam' * kron(a', b') @ u @ kron(c', d')``."""
        return LocalEquivalence(dagger(self.a), dagger(self.b),
                                dagger(self.c), dagger(self.d), 1 / self.lam)


def match_spectra(eu, ev, tol=DEFAULT_TOL.spectrum):
    """Lexicographically least permutation ``p`` with ``eu[k] ~ ev[p[k]]``.

    Returns ``None`` when no permutation matches within ``tol``.
    """
    return next(iter_spectrum_matches(eu, ev, tol), None)


def iter_spectrum_matches(eu, ev, tol=DEFAULT_TOL.spectrum):
    eu = np.asarray(eu)
    ev = np.asarray(ev)
    close = np.abs(eu[:, None] - ev[None, :]) <= tol
    for perm in _PERMS:
        if all(close[k, perm[k]] for k in range(4)):
            yield perm


def _nearest_orthogonal(s):
    w, _, vt = np.linalg.svd(s.real)
    return w @ vt


def iter_local_equivalences(u, v, tol=DEFAULT_TOL):
    """Yield every witness found by the bounded search, in a fixed order.

    The order is: magic-basis phase ``1`` then ``i``, then spectrum alignments
    in lexicographic order, then even column-sign patterns. Each yielded
    witness satisfies the defining equation within ``tol.equiv``.
    """
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    vm = dagger(MAGIC) @ v @ MAGIC
    r, ev = sym_unitary_real_eigenbasis(vm @ vm.T, tol)
    for lam in _LAMBDAS:
        um = dagger(MAGIC) @ (lam * u) @ MAGIC
        q, eu = sym_unitary_real_eigenbasis(um @ um.T, tol)
        for perm in iter_spectrum_matches(eu, ev, tol.spectrum):
            rp = r[list(perm)]
            if np.linalg.det(rp) < 0:
                rp[-1] *= -1
            for signs in _EVEN_SIGNS:
                rs = signs[:, None] * rp
                s = _nearest_orthogonal(dagger(vm) @ rs.T @ q @ um)
                x = MAGIC @ q.T @ rs @ dagger(MAGIC)
                y = MAGIC @ s @ dagger(MAGIC)
                try:
                    a, b, px = kron_factor(x, tol.factor)
                    c, d, py = kron_factor(y, tol.factor)
                except NotAProduct:
                    continue
                raw = px * py / lam
                total = complex(_FOURTH_ROOTS[np.argmin(np.abs(_FOURTH_ROOTS - raw))])
                eq = LocalEquivalence(a, b, c, d, total)
                if eq.residual(u, v) <= tol.equiv:
                    yield eq


def solve_local_equivalence(u, v, tol=DEFAULT_TOL):
    """First witness of ``u = lam * kron(a, b) @ v @ kron(c, d)``.

    Both ``u`` and ``v`` must have determinant one.

    Raises
    ------
    NotEquivalent
        If the search finds no witness within ``tol.equiv``.
    """
    for eq in iter_local_equivalences(u, v, tol):
        return eq
    raise NotEquivalent("operators are not equivalent up to one-qubit gates")
