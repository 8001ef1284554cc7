"""Fixed-size complex linear algebra kernels for two-qubit operators.

Everything here works on 2x2 and 4x4 ``numpy`` arrays. Tensor products
follow ``numpy.kron``: ``kron(a, b)[2*i + k, 2*j + l] == a[i, j] * b[k, l]``.
"""
from typing import NamedTuple

import numpy as np

from ._config import DEFAULT_TOL
from .exceptions import DiagonalizationFailed, NotAProduct, NotSymmetric

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
YY = np.kron(SY, SY)

for _m in (I2, I4, SX, SY, SZ, HADAMARD, YY):
    _m.setflags(write=False)


class MonicQuartic(NamedTuple):
    """Coefficients of ``x**4 + c3*x**3 + c2*x**2 + c1*x + c0``."""

    c3: complex
    c2: complex
    c1: complex
    c0: complex

    def roots(self):
        return np.roots([1.0, self.c3, self.c2, self.c1, self.c0])


def rx(theta):
    """Rotation ``exp(-i theta sx / 2)``."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def ry(theta):
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz(theta):
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


ROTATIONS = {"x": rx, "y": ry, "z": rz}


def dagger(m):
    return m.conj().T


def kron(a, b):
    """Kronecker product of two 2x2 matrices (faster than ``np.kron``)."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != (2, 2) or b.shape != (2, 2):
        return np.kron(a, b)
    return (a[:, None, :, None] * b[None, :, None, :]).reshape(4, 4)


def unitarity_residual(m):
    m = np.asarray(m)
    return float(np.linalg.norm(m @ dagger(m) - np.eye(m.shape[0])))


def char_poly4(g):
    """Characteristic polynomial ``det(xI - g)`` of a 4x4 matrix.

    Uses Newton's identities on the power sums ``tr g^k``.
    """
    g = np.asarray(g, dtype=complex)
    g2 = g @ g
    p1 = np.trace(g)
    p2 = np.trace(g2)
    p3 = np.trace(g2 @ g)
    p4 = np.trace(g2 @ g2)
    e1 = p1
    e2 = (e1 * p1 - p2) / 2
    e3 = (e2 * p1 - e1 * p2 + p3) / 3
    e4 = (e3 * p1 - e2 * p2 + e1 * p3 - p4) / 4
    return MonicQuartic(complex(-e1), complex(e2), complex(-e3), complex(e4))


def char_poly4_minors(g):
    """Same polynomial as :func:`char_poly4`, from sums of principal minors."""
    g = np.asarray(g, dtype=complex)
    idx = range(4)
    e1 = np.trace(g)
    e2 = sum(np.linalg.det(g[np.ix_([i, j], [i, j])])
             for i in idx for j in idx if i < j)
    e3 = sum(np.linalg.det(g[np.ix_(rest, rest)])
             for rest in ([1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]))
    e4 = np.linalg.det(g)
    return MonicQuartic(complex(-e1), complex(e2), complex(-e3), complex(e4))


def char_poly4_batch(g):
    """Vectorised :func:`char_poly4` over a stack of shape ``(n, 4, 4)``.

    Returns an ``(n, 4)`` array of ``(c3, c2, c1, c0)``.
    """
    g2 = g @ g
    p1 = np.trace(g, axis1=1, axis2=2)
    p2 = np.trace(g2, axis1=1, axis2=2)
    p3 = np.einsum("nij,nji->n", g2, g)
    p4 = np.einsum("nij,nji->n", g2, g2)
    e1 = p1
    e2 = (e1 * p1 - p2) / 2
    e3 = (e2 * p1 - e1 * p2 + p3) / 3
    e4 = (e3 * p1 - e2 * p2 + e1 * p3 - p4) / 4
    return np.stack([-e1, e2, -e3, e4], axis=1)


def principal_root4(det):
    """Fourth root of ``det`` with argument in ``(-pi/4, pi/4]``."""
    arg = np.angle(det)
    arg = np.where(arg <= -np.pi, np.pi, arg)
    return np.abs(det) ** 0.25 * np.exp(0.25j * arg)


def su4_normalize(u):
    """Divide ``u`` by the principal fourth root of its determinant."""
    u = np.asarray(u, dtype=complex)
    return u / principal_root4(np.linalg.det(u))


def su4_normalize_batch(u):
    d = principal_root4(np.linalg.det(u))
    return u / d[:, None, None]


def jacobi_eigh(a, tol=1e-15, atol=0.0, max_sweeps=60):
    """Cyclic Jacobi eigensolver for a small real symmetric matrix.

    Off-diagonal entries at or below ``atol`` are treated as zero, which
    keeps rotations inside (numerically) degenerate eigenspaces from being
    driven by round-off.

    Returns ``(w, v)`` with ``a = v @ diag(w) @ v.T``; ``w`` is not sorted.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    scale = max(np.linalg.norm(a), 1e-300)
    for _ in range(max_sweeps):
        off = np.max(np.abs(np.tril(a, -1)))
        if off <= max(tol * scale, atol):
            return np.diag(a).copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= max(atol, 1e-300):
                    continue
                theta = (a[q, q] - a[p, p]) / (2 * apq)
                t = np.copysign(1.0, theta) / (abs(theta) + np.hypot(theta, 1.0))
                c = 1 / np.hypot(t, 1.0)
                s = t * c
                rot = np.array([[c, s], [-s, c]])
                a[:, [p, q]] = a[:, [p, q]] @ rot
                a[[p, q], :] = rot.T @ a[[p, q], :]
                v[:, [p, q]] = v[:, [p, q]] @ rot
                a[p, q] = a[q, p] = 0.0
    raise DiagonalizationFailed(f"Jacobi did not converge in {max_sweeps} sweeps")


def _principal_arg(z):
    arg = np.angle(z)
    return np.where(arg <= -np.pi, np.pi, arg)


# entries of a symmetric unitary are O(1); anything below this is round-off
_NOISE = 1e-14


def _clustered_basis(re, im, cluster_tol):
    w, v = jacobi_eigh(re, atol=_NOISE)
    order = np.argsort(w, kind="stable")
    w, v = w[order], v[:, order]
    start = 0
    for k in range(1, 5):
        if k == 4 or w[k] - w[k - 1] > cluster_tol:
            if k - start > 1:
                block = v[:, start:k]
                _, sub = jacobi_eigh(block.T @ im @ block, atol=_NOISE)
                v[:, start:k] = block @ sub
            start = k
    return v


def sym_unitary_real_eigenbasis(p, tol=DEFAULT_TOL, sym_tol=1e-8):
    """Real orthogonal diagonalisation of a symmetric unitary 4x4 matrix.

    The real and imaginary parts of a symmetric unitary commute, so they
    share a real orthonormal eigenbasis. The real part is diagonalised
    first; degenerate clusters are then split by the imaginary part.

    Returns
    -------
    q : ndarray, shape (4, 4)
        Real, ``q @ q.T == I`` and ``det(q) == +1``.
    eigs : ndarray, shape (4,)
        Unit-modulus eigenvalues with ``q @ p @ q.T == diag(eigs)``, sorted
        by principal argument in ``(-pi, pi]`` (stable in the original
        diagonalisation order).
    """
    p = np.asarray(p, dtype=complex)
    asym = np.linalg.norm(p - p.T)
    if asym > sym_tol:
        raise NotSymmetric(f"matrix is not symmetric (residual {asym:.3e})",
                           invariant="symmetric", residual=asym)
    p = (p + p.T) / 2
    re, im = p.real, p.imag
    v = _clustered_basis(re, im, tol.cluster)
    if np.linalg.norm(v.T @ im @ v - np.diag(np.diag(v.T @ im @ v))) > 1e-9:
        # near-degenerate real part just outside the cluster gap; a generic
        # combination of the commuting pair separates the eigenvectors
        _, v = jacobi_eigh(re + 0.7548776662466927 * im, atol=_NOISE)
    q = v.T
    eigs = np.diag(q @ p @ q.T)
    order = np.argsort(_principal_arg(eigs), kind="stable")
    q, eigs = q[order], eigs[order]
    if np.linalg.det(q) < 0:
        q[-1] *= -1
    resid = np.linalg.norm(q @ p @ q.T - np.diag(eigs))
    if resid > 1e-8:
        raise DiagonalizationFailed(
            f"real eigenbasis reconstruction residual {resid:.3e}")
    return q, eigs


def herm_eig4(h):
    """Eigendecomposition ``h = V diag(w) V^*`` with ``w`` ascending."""
    h = np.asarray(h, dtype=complex)
    try:
        w, v = np.linalg.eigh((h + dagger(h)) / 2)
    except np.linalg.LinAlgError as exc:
        raise DiagonalizationFailed(str(exc)) from exc
    return v, w


def expm_i_herm(h, t):
    """``exp(i h t)`` for Hermitian ``h`` via its eigendecomposition."""
    v, w = herm_eig4(h)
    return (v * np.exp(1j * w * t)) @ dagger(v)


def expm_i_herm_batch(h, ts):
    """``exp(i h t)`` for every ``t`` in ``ts``; shape ``(len(ts), n, n)``."""
    v, w = herm_eig4(h)
    phases = np.exp(1j * np.outer(np.asarray(ts, dtype=float), w))
    return np.einsum("ik,nk,jk->nij", v, phases, v.conj())


def _sign_fix(m):
    """Flip ``m`` so its largest entry has positive real part (ties on Im)."""
    flat = m.ravel()
    k = int(np.argmax(np.abs(flat) - 1e-12 * np.arange(flat.size)))
    z = flat[k]
    if z.real < -1e-12 or (abs(z.real) <= 1e-12 and z.imag < 0):
        return -m, -1.0
    return m, 1.0


def kron_factor(m, tol=DEFAULT_TOL.factor):
    """Factor ``m`` as ``phase * kron(a, b)`` with ``a, b`` in SU(2).

    The factors are read off the largest-norm 2x2 block. The remaining sign
    freedom ``(a, b) -> (-a, b)`` is fixed by making the largest-magnitude
    entry of each factor (first in row-major order on ties) have positive
    real part; the sign goes to ``phase``.

    Raises
    ------
    NotAProduct
        If the best product approximation misses ``m`` by more than ``tol``
        in Frobenius norm.
    """
    m = np.asarray(m, dtype=complex)
    blocks = m.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3)  # [i, j, k, l]
    norms = np.linalg.norm(blocks, axis=(2, 3))
    i, j = np.unravel_index(np.argmax(norms), norms.shape)
    b = blocks[i, j]
    a = np.einsum("ijkl,kl->ij", blocks, b.conj()) / np.vdot(b, b)
    da, db = np.linalg.det(a), np.linalg.det(b)
    if abs(da) < 1e-12 or abs(db) < 1e-12:
        raise NotAProduct(float(np.linalg.norm(m)))
    ra, rb = np.sqrt(da), np.sqrt(db)
    a, b = a / ra, b / rb
    phase = ra * rb
    phase /= abs(phase)
    a, sa = _sign_fix(a)
    b, sb = _sign_fix(b)
    phase *= sa * sb
    resid = float(np.linalg.norm(m - phase * kron(a, b)))
    if resid > tol:
        raise NotAProduct(resid)
    return a, b, complex(phase)


def dist_phase(u, v):
    """Frobenius distance between unitaries minimised over global phase.

    Equals ``sqrt(2n - 2|tr(u^* v)|)`` but is evaluated as ``|u - p v|``
    with the optimal phase ``p``, which keeps full precision near zero.
    """
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    overlap = np.trace(dagger(v) @ u)
    p = overlap / abs(overlap) if abs(overlap) > 1e-300 else 1.0
    return float(np.linalg.norm(u - p * v))


def is_identity_up_to_phase(m, tol=DEFAULT_TOL.identity):
    """True if ``m`` is within ``tol`` of ``e^{i phi} I`` (Frobenius)."""
    m = np.asarray(m)
    if m.shape == (2, 2):
        (m00, m01), (m10, m11) = m.tolist()
        tr = m00 + m11
        if abs(tr) < 1e-12:
            return False
        p = tr / abs(tr)
        err = abs(m00 - p) ** 2 + abs(m01) ** 2 + abs(m10) ** 2 + abs(m11 - p) ** 2
        return err <= tol * tol
    tr = np.trace(m)
    if abs(tr) < 1e-12:
        return False
    d = m - (tr / abs(tr)) * np.eye(m.shape[0])
    return bool(np.linalg.norm(d) <= tol)
