"""Two-qubit circuit model over CNOT plus arbitrary one-qubit gates.

Gates are listed in application order (first element acts first). Wire 0
is the right tensor factor: a one-qubit ``g`` on wire 0 is ``kron(I, g)``,
on wire 1 it is ``kron(g, I)``.
"""
import json
import re
from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

import numpy as np

from ._config import DEFAULT_TOL
from .invariants import cnot_matrix
from .linalg import HADAMARD, I2, ROTATIONS, is_identity_up_to_phase, kron


@dataclass(frozen=True)
class OneQubitGate:
    wire: int
    op: np.ndarray
    label: Optional[str] = None

    def __post_init__(self):
        if self.wire not in (0, 1):
            raise ValueError(f"wire must be 0 or 1, got {self.wire}")
        op = np.array(self.op, dtype=complex)
        if op.shape != (2, 2):
            raise ValueError(f"one-qubit op must be 2x2, got {op.shape}")
        op.setflags(write=False)
        object.__setattr__(self, "op", op)

    def matrix(self):
        return embed(self.op, self.wire)


@dataclass(frozen=True)
class CnotGate:
    control: int
    target: int

    def __post_init__(self):
        if {self.control, self.target} != {0, 1}:
            raise ValueError(f"invalid CNOT wires ({self.control}, {self.target})")

    def matrix(self):
        return cnot_matrix(self.control, self.target)


Gate = Union[OneQubitGate, CnotGate]


def embed(op, wire):
    return kron(I2, op) if wire == 0 else kron(op, I2)


@dataclass(frozen=True)
class Circuit:
    gates: tuple = ()
    global_phase: complex = 1.0

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "global_phase", complex(self.global_phase))

    def to_matrix(self):
        m = np.eye(4, dtype=complex)
        for g in self.gates:
            m = g.matrix() @ m
        return self.global_phase * m

    @property
    def cnot_count(self):
        return sum(isinstance(g, CnotGate) for g in self.gates)

    def one_qubit_count(self, tol=DEFAULT_TOL.identity):
        """Number of one-qubit gates that are not a phase times identity."""
        return sum(isinstance(g, OneQubitGate)
                   and not is_identity_up_to_phase(g.op, tol)
                   for g in self.gates)

    def __len__(self):
        return len(self.gates)

    def to_json(self):
        return circuit_to_json(self)

    def to_qasm(self):
        return circuit_to_qasm(self)


def circuit_to_matrix(c):
    return c.to_matrix()


# -- Euler angles -----------------------------------------------------------

_CONVENTIONS = {"ZYZ": ("z", "y"), "ZXZ": ("z", "x"), "XZX": ("x", "z")}


class EulerAngles(NamedTuple):
    """``u = exp(i phase) R_a(theta) R_b(phi) R_a(psi)`` for convention ``ABA``."""

    phase: float
    theta: float
    phi: float
    psi: float
    convention: str = "ZYZ"

    def matrix(self):
        outer, mid = _CONVENTIONS[self.convention]
        r_out, r_mid = ROTATIONS[outer], ROTATIONS[mid]
        return (np.exp(1j * self.phase)
                * r_out(self.theta) @ r_mid(self.phi) @ r_out(self.psi))


def _wrap(a):
    """Map an angle into ``(-pi, pi]``."""
    a = float(np.mod(a + np.pi, 2 * np.pi) - np.pi)
    return np.pi if a <= -np.pi else a


def _zyz_core(v):
    """ZYZ angles of ``v`` up to global phase."""
    a, b = abs(v[0, 0]), abs(v[1, 0])
    phi = 2 * np.arctan2(b, a)
    if b < 1e-12:
        return 2 * np.angle(v[1, 1]), 0.0, 0.0
    if a < 1e-12:
        return 2 * np.angle(v[1, 0]), np.pi, 0.0
    s, d = np.angle(v[1, 1]), np.angle(v[1, 0])
    return s + d, phi, s - d


def euler_decompose(u, convention="ZYZ"):
    """Euler angles of a one-qubit unitary.

    ``theta`` and ``psi`` lie in ``(-pi, pi]`` and ``phi`` in ``[0, pi]``.
    When ``phi`` is 0 or pi only the combined outer rotation is determined
    and ``psi`` is set to 0.
    """
    u = np.asarray(u, dtype=complex)
    if convention not in _CONVENTIONS:
        raise ValueError(f"unknown Euler convention {convention!r}")
    det = np.linalg.det(u)
    v = u / np.sqrt(det)
    if convention == "XZX":
        v = HADAMARD @ v @ HADAMARD
    theta, phi, psi = _zyz_core(v)
    if convention in ("ZXZ", "XZX"):
        # Rz(t) Rx(p) Rz(s) = Rz(t - pi/2) Ry(p) Rz(s + pi/2)
        theta, psi = theta + np.pi / 2, psi - np.pi / 2
    if phi < 1e-12:
        theta, psi = theta + psi, 0.0
    elif phi > np.pi - 1e-12:
        theta, psi = theta - psi, 0.0
    theta, psi = _wrap(theta), _wrap(psi)
    rot = EulerAngles(0.0, theta, phi, psi, convention).matrix()
    k = np.unravel_index(np.argmax(np.abs(rot)), rot.shape)
    phase = _wrap(np.angle(u[k] / rot[k]))
    return EulerAngles(phase, theta, float(phi), psi, convention)


# -- serialization ----------------------------------------------------------

def _c(z):
    return [float(z.real), float(z.imag)]


def _z(pair):
    re_, im_ = pair
    return complex(float(re_), float(im_))


def circuit_to_dict(c):
    gates = []
    for g in c.gates:
        if isinstance(g, CnotGate):
            gates.append({"type": "cnot", "control": g.control, "target": g.target})
        else:
            entry = {"type": "u", "wire": g.wire,
                     "matrix": [[_c(z) for z in row] for row in g.op]}
            if g.label is not None:
                entry["label"] = g.label
            gates.append(entry)
    return {"global_phase": _c(c.global_phase), "gates": gates}


def circuit_from_dict(d):
    gates = []
    for g in d["gates"]:
        if g["type"] == "cnot":
            gates.append(CnotGate(int(g["control"]), int(g["target"])))
        elif g["type"] == "u":
            op = np.array([[_z(p) for p in row] for row in g["matrix"]])
            gates.append(OneQubitGate(int(g["wire"]), op, g.get("label")))
        else:
            raise ValueError(f"unknown gate type {g['type']!r}")
    return Circuit(tuple(gates), _z(d.get("global_phase", [1.0, 0.0])))


def circuit_to_json(c, indent=2):
    return json.dumps(circuit_to_dict(c), indent=indent)


def circuit_from_json(text):
    return circuit_from_dict(json.loads(text))


def u3(theta, phi, lam):
    """OpenQASM ``u(theta, phi, lambda)``."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -np.exp(1j * lam) * s],
                     [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c]])


def circuit_to_qasm(c):
    """OpenQASM 2 text; the global phase is recorded in a comment header.

    Each one-qubit gate ``e^{iP} Rz(t) Ry(p) Rz(s)`` becomes
    ``u(p, t, s)``, whose matrix differs from it by ``e^{i(P - (t+s)/2)}``;
    those factors are folded into the header phase.
    """
    phase = complex(c.global_phase)
    body = []
    for g in c.gates:
        if isinstance(g, CnotGate):
            body.append(f"cx q[{g.control}],q[{g.target}];")
        else:
            e = euler_decompose(g.op, "ZYZ")
            phase *= np.exp(1j * (e.phase - (e.theta + e.psi) / 2))
            body.append(f"u({float(e.phi)!r},{float(e.theta)!r},{float(e.psi)!r}) q[{g.wire}];")
    head = [f"// global_phase: {float(phase.real)!r} {float(phase.imag)!r}",
            "OPENQASM 2.0;", 'include "qelib1.inc";', "qreg q[2];"]
    return "\n".join(head + body) + "\n"


_PHASE_RE = re.compile(r"//\s*global_phase:\s*(\S+)\s+(\S+)")
_CX_RE = re.compile(r"cx\s+q\[(\d)\]\s*,\s*q\[(\d)\]\s*;")
_U_RE = re.compile(r"u3?\(([^,]+),([^,]+),([^)]+)\)\s+q\[(\d)\]\s*;")


def circuit_from_qasm(text):
    """Parse the text produced by :func:`circuit_to_qasm`."""
    phase = 1.0 + 0j
    gates = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        m = _PHASE_RE.match(line)
        if m:
            phase = complex(float(m.group(1)), float(m.group(2)))
            continue
        if line.startswith("//") or line.startswith(("OPENQASM", "include", "qreg")):
            continue
        m = _CX_RE.fullmatch(line)
        if m:
            gates.append(CnotGate(int(m.group(1)), int(m.group(2))))
            continue
        m = _U_RE.fullmatch(line)
        if m:
            th, ph, la = (float(m.group(k)) for k in (1, 2, 3))
            gates.append(OneQubitGate(int(m.group(4)), u3(th, ph, la)))
            continue
        raise ValueError(f"line {lineno}: cannot parse {raw!r}")
    return Circuit(tuple(gates), phase)


def load_circuit(text):
    """Parse either serialization, detected by the first character."""
    return circuit_from_json(text) if text.lstrip().startswith("{") else circuit_from_qasm(text)

