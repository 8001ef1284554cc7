from dataclasses import dataclass, replace


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical tolerances used across the package.

    Attributes
    ----------
    unitary : float
        Frobenius bound on ``m m^* - I`` for a matrix to count as unitary.
    hermitian : float
        Frobenius bound on ``m - m^*``.
    factor : float
        Acceptance residual of :func:`twoq.linalg.kron_factor`.
    equiv : float
        Acceptance residual of a local-equivalence witness.
    classify : float
        Max-norm tolerance on characteristic-polynomial coefficients.
    cluster : float
        Gap below which eigenvalues of a real symmetric matrix are merged.
    spectrum : float
        Tolerance used when matching two unit-modulus spectra.
    identity : float
        A one-qubit gate within this distance of a phase times ``I`` is
        dropped from emitted circuits.
    """

    unitary: float = 1e-10
    hermitian: float = 1e-12
    factor: float = 1e-8
    equiv: float = 1e-8
    classify: float = 1e-9
    cluster: float = 1e-8
    spectrum: float = 1e-6
    identity: float = 1e-10

    def replace(self, **changes):
        return replace(self, **changes)


DEFAULT_TOL = ToleranceConfig()
