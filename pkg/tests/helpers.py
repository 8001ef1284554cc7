import numpy as np

from twoq.linalg import HADAMARD, kron

F = 0.5 * np.array([[1, 1, 1, 1],
                    [1, 1j, -1, -1j],
                    [1, -1, 1, -1],
                    [1, -1j, -1, 1j]])
DJ = np.eye(4, dtype=complex)[[1, 0, 2, 3]]
SWAP = np.eye(4, dtype=complex)[[0, 2, 1, 3]]
HH = kron(HADAMARD, HADAMARD)

# reference one-qubit corrections for H_42, to six significant digits
REF_A2 = 0.5 * np.array([[1 - 1j, -1 + 1j], [1 + 1j, 1 + 1j]])
REF_B2 = np.diag([-0.21503 - 0.976607j, -0.21503 + 0.976607j])
REF_C2 = 0.707107 * np.array([[-1, -1], [1, -1]])
REF_D2 = np.array([[0.152049 + 0.690566j, 0.690566 - 0.152049j],
                     [-0.690566 - 0.152049j, 0.152049 - 0.690566j]])


def random_so4(rng):
    q, r = np.linalg.qr(rng.standard_normal((4, 4)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] *= -1
    return q
