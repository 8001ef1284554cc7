"""scikit-learn style wrappers.

The estimators hold no learned state beyond validated configuration:
``fit`` checks parameters and records metadata, the heavy lifting happens
in ``predict`` / ``transform``. Inputs are stacks of shape ``(k, 4, 4)``
or flattened ``(k, 16)``; one ``4 x 4`` matrix is accepted as ``k = 1``.
"""
import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._config import DEFAULT_TOL
from .circuit import Circuit
from .invariants import classify_poly, gamma_batch
from .linalg import char_poly4_batch, su4_normalize_batch
from .synthesis import synthesize
from .timing import ScanConfig, scan, time_hamiltonian
from .validation import check_hermitian, check_unitary_batch


def _stack(x, unitary_tol):
    a = np.asarray(x, dtype=complex)
    if a.ndim == 2 and a.shape[1] == 16:
        a = a.reshape(-1, 4, 4)
    return check_unitary_batch(a, unitary_tol)


def _polys(x, unitary_tol):
    u = su4_normalize_batch(_stack(x, unitary_tol))
    return char_poly4_batch(gamma_batch(u))


class CnotCountClassifier(ClassifierMixin, BaseEstimator):
    """Predicts the minimal CNOT count (0-3) of each operator.

    The rule is fixed, so ``fit`` only validates and sets ``classes_``.
    """

    def __init__(self, tol=DEFAULT_TOL.classify, unitary_tol=1e-8):
        self.tol = tol
        self.unitary_tol = unitary_tol

    def fit(self, X, y=None):
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if X is not None:
            _stack(X, self.unitary_tol)
        self.classes_ = np.arange(4)
        return self

    def predict(self, X):
        check_is_fitted(self, "classes_")
        return np.array([classify_poly(p, self.tol) for p in _polys(X, self.unitary_tol)])


class InvariantTransformer(TransformerMixin, BaseEstimator):
    """Maps operators to the real parts and imaginary parts of ``(c3, c2, c1)``.

    Two operators are locally equivalent up to phase iff their rows agree
    up to the sign flip of the odd coefficients.
    """

    def __init__(self, unitary_tol=1e-8):
        self.unitary_tol = unitary_tol

    def fit(self, X, y=None):
        self.n_features_out_ = 6
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_out_")
        c = _polys(X, self.unitary_tol)[:, :3]
        return np.concatenate([c.real, c.imag], axis=1)


class CircuitSynthesizer(TransformerMixin, BaseEstimator):
    """``transform`` gives CNOT-optimal circuits, ``inverse_transform`` matrices."""

    def __init__(self, orient_search=False, unitary_tol=1e-8):
        self.orient_search = orient_search
        self.unitary_tol = unitary_tol

    def fit(self, X=None, y=None):
        self.fitted_ = True
        return self

    def transform(self, X):
        check_is_fitted(self, "fitted_")
        return [synthesize(u, orient_search=self.orient_search)
                for u in _stack(X, self.unitary_tol)]

    def inverse_transform(self, circuits):
        if isinstance(circuits, Circuit):
            circuits = [circuits]
        return np.array([c.to_matrix() for c in circuits])


class HamiltonianTimer(BaseEstimator):
    """Finds durations at which ``exp(iHt)`` is a CNOT up to one-qubit gates.

    After ``fit(H)``: ``candidates_`` holds the refined scan minima and
    ``results_`` the ones for which corrections were extracted.
    """

    def __init__(self, t_min=0.0, t_max=2 * np.pi, steps=4096,
                 tol_candidate=1e-3, tol_accept=1e-6, hermitian_tol=1e-8):
        self.t_min = t_min
        self.t_max = t_max
        self.steps = steps
        self.tol_candidate = tol_candidate
        self.tol_accept = tol_accept
        self.hermitian_tol = hermitian_tol

    def _config(self):
        return ScanConfig(self.t_min, self.t_max, self.steps,
                          self.tol_candidate, self.tol_accept)

    def fit(self, H, y=None):
        h = check_hermitian(H, self.hermitian_tol, name="Hamiltonian")
        cfg = self._config()
        self.candidates_ = scan(h, cfg)
        self.results_ = time_hamiltonian(h, cfg)
        return self

    def predict(self, H):
        """Smallest CNOT duration for each Hamiltonian in a stack (NaN if none)."""
        h = np.asarray(H, dtype=complex)
        if h.shape == (4, 4):
            h = h[None]
        cfg = self._config()
        out = []
        for m in h:
            res = time_hamiltonian(check_hermitian(m, self.hermitian_tol, name="Hamiltonian"), cfg)
            out.append(res[0].t if res else np.nan)
        return np.array(out)
