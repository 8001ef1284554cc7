"""Time a two-qubit Hamiltonian so that ``exp(iHt)`` is a CNOT up to locals.

``exp(iHt)`` is locally a CNOT exactly when the characteristic polynomial
of ``gamma`` of its SU(4) normalisation is ``(x^2 + 1)^2``. The objective is
the max-norm distance of ``(c3, c2, c1)`` from ``(0, 2, 0)``. The sign
ambiguity ``gamma(iu) = -gamma(u)`` flips only ``c3`` and ``c1``, whose
targets are zero, so no branch is needed.
"""
import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from ._config import DEFAULT_TOL
from .exceptions import NotEquivalent
from .invariants import NORMALIZED_CNOTS, gamma, gamma_batch
from .linalg import (I2, SX, SZ, char_poly4, char_poly4_batch, expm_i_herm,
                     expm_i_herm_batch, kron, principal_root4, su4_normalize,
                     su4_normalize_batch)
from .local_equiv import LocalEquivalence, solve_local_equivalence

_TARGET = np.array([0.0, 2.0, 0.0])
_INVPHI = (math.sqrt(5) - 1) / 2
# grid evaluation is chunked to bound memory on long scans
_CHUNK = 4096


@dataclass(frozen=True)
class ScanConfig:
    t_min: float = 0.0
    t_max: float = 2 * math.pi
    steps: int = 4096
    tol_candidate: float = 1e-3
    tol_accept: float = 1e-6

    def __post_init__(self):
        if not (math.isfinite(self.t_min) and math.isfinite(self.t_max)):
            raise ValueError("t_min and t_max must be finite")
        if not self.t_min < self.t_max:
            raise ValueError(f"need t_min < t_max, got {self.t_min} >= {self.t_max}")
        if int(self.steps) != self.steps or self.steps < 2:
            raise ValueError(f"steps must be an integer >= 2, got {self.steps}")

    def grid(self):
        return np.linspace(self.t_min, self.t_max, int(self.steps))


@dataclass(frozen=True)
class TimingCandidate:
    t: float
    residual: float


@dataclass(frozen=True)
class TimingResult:
    """``target = equiv.lam * kron(a, b) @ exp(iHt) @ kron(c, d)``.

    ``target`` names the determinant-one CNOT (``"c12"`` or ``"c21"``)
    and ``residual`` is the Frobenius error of that equation.
    """

    t: float
    equiv: LocalEquivalence
    target: str
    residual: float

    @property
    def cnot(self):
        return NORMALIZED_CNOTS[_TARGET_WIRES[self.target]]


_TARGET_WIRES = {"c12": (0, 1), "c21": (1, 0)}


def _objective_from_poly(coeffs):
    c = np.asarray(coeffs)
    dev = np.abs(c[..., :3] - _TARGET)
    return dev.max(axis=-1)


def scan_objective(h, t):
    """Max-norm distance of ``chi[gamma(exp(iHt))]`` from ``(x^2 + 1)^2``."""
    w = su4_normalize(expm_i_herm(h, t))
    return float(_objective_from_poly(char_poly4(gamma(w))))


def scan_objective_batch(h, ts):
    ts = np.asarray(ts, dtype=float)
    out = np.empty(ts.shape)
    for lo in range(0, ts.size, _CHUNK):
        w = su4_normalize_batch(expm_i_herm_batch(h, ts[lo:lo + _CHUNK]))
        out[lo:lo + _CHUNK] = _objective_from_poly(char_poly4_batch(gamma_batch(w)))
    return out


def golden_section(f, lo, hi, xtol=1e-10):
    """Minimise ``f`` on ``[lo, hi]`` until the bracket is shorter than ``xtol``.

    Returns ``(x, f(x))`` for the best point evaluated.
    """
    a, b = float(lo), float(hi)
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    best = min((fc, c), (fd, d))
    while b - a > xtol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
        best = min(best, (fc, c), (fd, d))
    return best[1], best[0]


def _local_minima(vals):
    """Indices of strict interior minima plus endpoints lower than their neighbour."""
    n = len(vals)
    idx = []
    if vals[0] < vals[1]:
        idx.append(0)
    inner = np.nonzero((vals[1:-1] < vals[:-2]) & (vals[1:-1] < vals[2:]))[0] + 1
    idx.extend(int(i) for i in inner)
    if vals[-1] < vals[-2]:
        idx.append(n - 1)
    return idx


def scan(h, cfg=ScanConfig()):
    """Refined local minima of the objective that fall below ``cfg.tol_candidate``.

    Every sampled local minimum is refined by golden-section search over its
    neighbouring grid interval before the threshold is applied, so a coarse
    grid does not hide a sharp minimum. Results are sorted by ``t``.
    """
    h = np.asarray(h, dtype=complex)
    ts = cfg.grid()
    vals = scan_objective_batch(h, ts)
    f = lambda t: scan_objective(h, t)  # noqa: E731
    out = []
    for i in _local_minima(vals):
        lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, len(ts) - 1)]
        t, r = golden_section(f, lo, hi)
        if vals[i] < r:
            t, r = float(ts[i]), float(vals[i])
        if r <= cfg.tol_candidate:
            out.append(TimingCandidate(float(t), float(r)))
    out.sort(key=lambda c: c.t)
    deduped = []
    for c in out:
        if deduped and abs(c.t - deduped[-1].t) <= 1e-9:
            if c.residual < deduped[-1].residual:
                deduped[-1] = c
            continue
        deduped.append(c)
    return deduped


def extract_cnot(h, t, tol_accept=1e-6, tol=DEFAULT_TOL):
    """One-qubit corrections turning ``exp(iHt)`` into a CNOT.

    Tries ``c21`` first, then ``c12``.

    Raises
    ------
    NotEquivalent
        If neither target is reached within ``tol_accept``.
    """
    w = expm_i_herm(np.asarray(h, dtype=complex), t)
    root = principal_root4(np.linalg.det(w))
    wn = w / root
    loose = tol.replace(equiv=tol_accept, spectrum=max(tol.spectrum, math.sqrt(tol_accept)))
    for name in ("c21", "c12"):
        v = NORMALIZED_CNOTS[_TARGET_WIRES[name]]
        try:
            eq = solve_local_equivalence(wn, v, loose)
        except NotEquivalent:
            continue
        inv = eq.inverse()
        inv = LocalEquivalence(inv.a, inv.b, inv.c, inv.d, inv.lam / root)
        res = inv.residual(v, w)
        if res <= tol_accept:
            return TimingResult(float(t), inv, name, res)
    raise NotEquivalent(f"exp(iHt) at t={t!r} is not locally a CNOT within {tol_accept}")


def time_hamiltonian(h, cfg=ScanConfig(), tol=DEFAULT_TOL):
    """Scan, then extract corrections for every candidate that admits them."""
    results = []
    for cand in scan(h, cfg):
        try:
            results.append(extract_cnot(h, cand.t, cfg.tol_accept, tol))
        except NotEquivalent:
            continue
    return results


def weighted_hamiltonian(w):
    """``w I x sz + sx x sx``."""
    return w * kron(I2, SZ) + kron(SX, SX)


@dataclass(frozen=True)
class SweepEntry:
    w: float
    result: Optional[TimingResult]

    @property
    def found(self):
        return self.result is not None


def weight_sweep(w_values, cfg=ScanConfig(), tol=DEFAULT_TOL) -> List[SweepEntry]:
    """First timing (smallest ``t``) for each weight, or ``None`` if none exists.

    This probes a numerical observation, not a theorem: a missing entry is
    reported, not raised.
    """
    out = []
    for w in w_values:
        w = float(w)
        if not 0.0 <= w <= 1.0:
            raise ValueError(f"weights must lie in [0, 1], got {w}")
        results = time_hamiltonian(weighted_hamiltonian(w), cfg, tol)
        out.append(SweepEntry(w, results[0] if results else None))
    return out
