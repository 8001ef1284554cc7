"""Random unitaries for tests and the self-test command."""
import numpy as np


def haar_unitary(n, rng):
    """Haar-distributed ``n x n`` unitary from the QR of a Ginibre matrix."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def haar_su4(rng):
    u = haar_unitary(4, rng)
    return u / np.linalg.det(u) ** 0.25


def random_su2(rng):
    a, b, c, d = rng.standard_normal(4)
    nrm = np.sqrt(a * a + b * b + c * c + d * d)
    a, b, c, d = a / nrm, b / nrm, c / nrm, d / nrm
    return np.array([[a + 1j * b, c + 1j * d], [-c + 1j * d, a - 1j * b]])


def _random_layer(rng):
    from .linalg import kron
    return kron(random_su2(rng), random_su2(rng))


def planted_unitary(k, rng, margin=0.05):
    """Operator built from ``k`` CNOTs separated by random one-qubit layers.

    For ``k = 2`` the middle layer is ``Rz(delta) x Rx(phi)`` with both angles
    at least ``margin`` away from multiples of ``pi/2``, so the class is
    exactly 2. CNOT orientations are random.
    """
    from .invariants import cnot_matrix
    from .linalg import kron, rx, rz

    def angle():
        while True:
            a = rng.uniform(-np.pi, np.pi)
            r = np.mod(a, np.pi / 2)
            if min(r, np.pi / 2 - r) >= margin:
                return a

    def orientation():
        return (0, 1) if rng.random() < 0.5 else (1, 0)

    if k not in (0, 1, 2, 3):
        raise ValueError(f"k must be 0-3, got {k}")
    u = _random_layer(rng)
    if k == 2:
        # Rz sits on the target wire; wire 1 is the left tensor factor
        wires = orientation()
        c = cnot_matrix(*wires)
        rot_z, rot_x = rz(angle()), rx(angle())
        core = kron(rot_z, rot_x) if wires == (0, 1) else kron(rot_x, rot_z)
        u = _random_layer(rng) @ c @ core @ c @ u
    else:
        for _ in range(k):
            u = _random_layer(rng) @ cnot_matrix(*orientation()) @ u
    return u * np.exp(1j * rng.uniform(-np.pi, np.pi))
