"""CNOT-optimal synthesis of two-qubit operators.

The operator is classified first; the branch for its class then builds a
circuit with exactly that many CNOTs:

* 0 CNOTs: factor the matrix as a tensor product.
* 1 CNOT: solve local equivalence against a normalised CNOT.
* 2 CNOTs: read the core angles off the spectrum of ``gamma(u)`` and solve
  local equivalence against ``C12 (Rz(delta) x Rx(phi)) C12``.
* 3 CNOTs: pick ``theta`` so that ``u (Rz(theta) x I) C12`` has a real
  ``tr gamma`` and synthesise that with two CNOTs.
"""
import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from ._config import DEFAULT_TOL
from .circuit import Circuit, CnotGate, OneQubitGate
from .exceptions import NotAProduct, SynthesisFailed
from .invariants import C12, CNOT_PHASE, NORMALIZED_CNOTS, classify_cnot, gamma
from .linalg import (HADAMARD, I2, dist_phase, is_identity_up_to_phase, kron,
                     kron_factor, principal_root4, rx, rz)
from .local_equiv import iter_local_equivalences

# bound on witnesses inspected per target when minimising one-qubit gates
WITNESS_CAP = 64
ROUND_TRIP_TOL = 1e-8


@dataclass
class _Layered:
    """``phase * L[k] C[k] ... C[1] L[0]`` with ``L[j] = kron(op1, op0)``.

    ``layers[j]`` holds ``[(op0, label0), (op1, label1)]`` for wires 0, 1.
    """

    layers: list
    cnots: list
    phase: complex = 1.0
    meta: dict = field(default_factory=dict)

    def matrix(self):
        return self.to_circuit(0.0).to_matrix()

    def to_circuit(self, identity_tol=DEFAULT_TOL.identity):
        phase = complex(self.phase)
        gates = []
        for j, layer in enumerate(self.layers):
            for wire, (op, label) in enumerate(layer):
                if identity_tol and is_identity_up_to_phase(op, identity_tol):
                    phase *= np.trace(op) / 2
                    continue
                gates.append(OneQubitGate(wire, op, label))
            if j < len(self.cnots):
                gates.append(CnotGate(*self.cnots[j]))
        return Circuit(tuple(gates), phase)

    def flipped(self, mask):
        """Same operator with the masked CNOTs reversed via Hadamard conjugation."""
        layers = [[slot for slot in layer] for layer in self.layers]
        cnots = list(self.cnots)
        for j, flip in enumerate(mask):
            if not flip:
                continue
            c, t = cnots[j]
            cnots[j] = (t, c)
            layers[j] = [(HADAMARD @ op, None) for op, _ in layers[j]]
            layers[j + 1] = [(op @ HADAMARD, None) for op, _ in layers[j + 1]]
        return _Layered(layers, cnots, self.phase, dict(self.meta))

    def score(self, tol=DEFAULT_TOL.identity):
        return sum(not is_identity_up_to_phase(op, tol)
                   for layer in self.layers for op, _ in layer)


def _slot(op, label=None):
    return (np.asarray(op, dtype=complex), label)


def _normalized(u):
    u = np.asarray(u, dtype=complex)
    root = principal_root4(np.linalg.det(u))
    return u / root, root


def _best(candidates, tol):
    """Candidate with the fewest non-identity one-qubit gates (first on ties)."""
    best, best_score = None, None
    for cand in candidates:
        score = cand.score(tol.identity)
        if best is None or score < best_score:
            best, best_score = cand, score
            if score == 0:
                break
    return best


def _layered0(u, tol):
    try:
        a, b, phase = kron_factor(u, tol.factor)
    except NotAProduct as exc:
        raise SynthesisFailed("class-0 operator did not factor",
                              {"residual": exc.residual}) from exc
    return _Layered([[_slot(b), _slot(a)]], [], phase)


def _layered1(u, tol):
    un, root = _normalized(u)

    def candidates():
        for wires, v in NORMALIZED_CNOTS.items():
            for eq in itertools.islice(iter_local_equivalences(un, v, tol), WITNESS_CAP):
                yield _Layered([[_slot(eq.d), _slot(eq.c)], [_slot(eq.b), _slot(eq.a)]],
                               [wires], root * eq.lam * CNOT_PHASE)

    best = _best(candidates(), tol)
    if best is None:
        raise SynthesisFailed("no one-CNOT witness for a class-1 operator")
    return best


def two_cnot_core(delta, phi):
    """``C12 (Rz(delta) x Rx(phi)) C12`` with Rz on wire 1 (the target)."""
    return C12 @ kron(rz(delta), rx(phi)) @ C12


def _wrap(a):
    a = float(np.mod(a + np.pi, 2 * np.pi) - np.pi)
    return np.pi if a <= -np.pi else a


def core_angle_candidates(u, pair_tol=1e-6):
    """Candidate ``(delta, phi)`` for a class-2 operator.

    The roots of ``chi[gamma]`` are ``-e^{+-i(delta+phi)}`` and
    ``-e^{+-i(delta-phi)}``; each of the three ways to split the four roots
    into two conjugate pairs gives one candidate.
    """
    z = np.linalg.eigvals(gamma(_normalized(u)[0]))
    out = []
    for (i, j), (k, l) in (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))):
        if abs(z[j] - np.conj(z[i])) > pair_tol or abs(z[l] - np.conj(z[k])) > pair_tol:
            continue
        alpha, beta = np.angle(-z[i]), np.angle(-z[k])
        out.append((_wrap((alpha + beta) / 2), _wrap((alpha - beta) / 2)))
    return out


def _layered2(u, tol):
    un, root = _normalized(u)
    for delta, phi in core_angle_candidates(un):
        v = two_cnot_core(delta, phi)
        core = [_slot(rx(phi), f"rx({phi!r})"), _slot(rz(delta), f"rz({delta!r})")]

        def candidates():
            for eq in itertools.islice(iter_local_equivalences(un, v, tol), WITNESS_CAP):
                yield _Layered([[_slot(eq.d), _slot(eq.c)], core,
                                [_slot(eq.b), _slot(eq.a)]],
                               [(0, 1), (0, 1)], root * eq.lam * CNOT_PHASE ** 2,
                               {"delta": delta, "phi": phi})

        best = _best(candidates(), tol)
        if best is not None:
            return best
    raise SynthesisFailed("no two-CNOT witness for a class-2 operator")


def _im_trace_gamma(un, theta):
    return float(np.imag(np.trace(gamma(un @ kron(rz(theta), I2) @ C12))))


def reduction_angles(u, grid=64):
    """Roots of ``theta -> Im tr gamma(u (Rz(theta) x I) C12)`` in ``[-pi, pi)``.

    ``u`` must have determinant one. Each sign change on a uniform grid is
    refined to ``1e-12``; the grid is refined once (x8) before giving up.
    """
    f = lambda t: _im_trace_gamma(u, t)  # noqa: E731
    for n in (grid, 8 * grid):
        ts = np.linspace(-np.pi, np.pi, n + 1)
        fs = np.array([f(t) for t in ts[:-1]] + [0.0])
        fs[-1] = fs[0]
        roots = []
        for i in range(n):
            if fs[i] == 0.0:
                roots.append(float(ts[i]))
            elif np.sign(fs[i]) * np.sign(fs[i + 1]) < 0:
                roots.append(float(brentq(f, ts[i], ts[i + 1], xtol=1e-12,
                                          rtol=4 * np.finfo(float).eps)))
        if roots:
            return roots
    raise SynthesisFailed("no sign change of Im tr gamma on the reduction grid")


def _layered3(u, tol):
    un, root = _normalized(u)
    candidates = []
    for theta in reduction_angles(un):
        reduced = un @ kron(rz(theta), I2) @ C12
        k = classify_cnot(reduced, tol.classify)
        if k > 2:
            continue
        try:
            inner = _LAYERED[k](reduced, tol)
        except SynthesisFailed:
            continue
        # u = reduced C12^* (Rz(-theta) x I); the fix-up acts first
        first = [_slot(I2), _slot(rz(-theta), f"rz({-theta!r})")]
        candidates.append(_Layered([first] + inner.layers, [(0, 1)] + inner.cnots,
                                   root * inner.phase / CNOT_PHASE,
                                   dict(inner.meta, theta=theta)))
    best = _best(candidates, tol)
    if best is None:
        raise SynthesisFailed("no reduction angle gave a class <= 2 operator")
    return best


_LAYERED = {0: _layered0, 1: _layered1, 2: _layered2, 3: _layered3}


def _check_class(u, expected, tol):
    k = classify_cnot(u, tol.classify)
    if k != expected:
        raise ValueError(f"operator has CNOT class {k}, not {expected}")


def synth0(u, tol=DEFAULT_TOL):
    _check_class(u, 0, tol)
    return _layered0(u, tol).to_circuit(tol.identity)


def synth1(u, tol=DEFAULT_TOL):
    _check_class(u, 1, tol)
    return _layered1(u, tol).to_circuit(tol.identity)


def synth2(u, tol=DEFAULT_TOL):
    _check_class(u, 2, tol)
    return _layered2(u, tol).to_circuit(tol.identity)


def synth3(u, tol=DEFAULT_TOL):
    _check_class(u, 3, tol)
    return _layered3(u, tol).to_circuit(tol.identity)


def _orientations(layered, tol):
    k = len(layered.cnots)
    return _best((layered.flipped(mask)
                  for mask in itertools.product((False, True), repeat=k)), tol)


def synthesize(u, orient_search=False, tol=DEFAULT_TOL):
    """CNOT-optimal circuit for a 4x4 unitary.

    Parameters
    ----------
    u : array_like, shape (4, 4)
        Unitary of any determinant.
    orient_search : bool
        Also try every reversal pattern of the CNOTs and keep the one with
        the fewest non-identity one-qubit gates.
    tol : ToleranceConfig

    Raises
    ------
    SynthesisFailed
        If a branch cannot reproduce ``u`` to within ``1e-8`` or the CNOT
        count disagrees with the classifier.
    """
    u = np.asarray(u, dtype=complex)
    k = classify_cnot(u, tol.classify)
    layered = _LAYERED[k](u, tol)
    if orient_search:
        layered = _orientations(layered, tol)
    circuit = layered.to_circuit(tol.identity)
    err = dist_phase(circuit.to_matrix(), u)
    if err > ROUND_TRIP_TOL or circuit.cnot_count != k:
        raise SynthesisFailed("synthesised circuit does not reproduce the input",
                              {"class": k, "cnots": circuit.cnot_count,
                               "distance": err, **layered.meta})
    return circuit


def cnot_orientation_search(u, tol=DEFAULT_TOL):
    return synthesize(u, orient_search=True, tol=tol)
