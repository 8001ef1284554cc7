"""Input checks shared by the estimators and the command line."""
import numpy as np

from .exceptions import ValidationError


def as_matrix(m, n, name="matrix"):
    """Complex ``n x n`` array with finite entries."""
    try:
        a = np.asarray(m, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{name} is not numeric: {exc}", "numeric") from exc
    if a.shape != (n, n):
        raise ValidationError(f"{name} must have shape ({n}, {n}), got {a.shape}", "shape")
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"{name} has non-finite entries", "finite")
    return a


def check_unitary(m, tol=1e-10, n=4, name="matrix"):
    a = as_matrix(m, n, name)
    res = float(np.linalg.norm(a @ a.conj().T - np.eye(n)))
    if res > tol:
        raise ValidationError(f"{name} is not unitary: ||m m* - I||_F = {res:.3e} > {tol:g}",
                              "unitary", res)
    return a


def check_hermitian(m, tol=1e-12, n=4, name="matrix"):
    a = as_matrix(m, n, name)
    res = float(np.linalg.norm(a - a.conj().T))
    if res > tol:
        raise ValidationError(f"{name} is not Hermitian: ||m - m*||_F = {res:.3e} > {tol:g}",
                              "hermitian", res)
    return a


def check_unitary_batch(ms, tol=1e-10, n=4):
    """Validate a stack of shape ``(k, n, n)`` (a single matrix is promoted)."""
    try:
        a = np.asarray(ms, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"input is not numeric: {exc}", "numeric") from exc
    if a.shape == (n, n):
        a = a[None]
    if a.ndim != 3 or a.shape[1:] != (n, n):
        raise ValidationError(f"expected shape (k, {n}, {n}), got {a.shape}", "shape")
    if not np.all(np.isfinite(a)):
        raise ValidationError("input has non-finite entries", "finite")
    res = np.linalg.norm(a @ np.conj(np.transpose(a, (0, 2, 1))) - np.eye(n), axis=(1, 2))
    bad = np.nonzero(res > tol)[0]
    if bad.size:
        k = int(bad[0])
        raise ValidationError(f"matrix {k} is not unitary: ||m m* - I||_F = {res[k]:.3e} > {tol:g}",
                              "unitary", float(res[k]))
    return a
