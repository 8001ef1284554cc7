"""``twoq`` command line.

Exit status: 0 success, 1 usage or parse error, 2 validation error,
3 not equivalent / no timing found, 4 internal synthesis failure.
"""
import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from ._config import DEFAULT_TOL
from .circuit import circuit_to_json, circuit_to_qasm, load_circuit
from .exceptions import SynthesisFailed, ValidationError
from .invariants import classify_cnot, gamma_poly, trace_gamma
from .linalg import dist_phase, su4_normalize
from .timing import ScanConfig, time_hamiltonian, weight_sweep

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_NOT_EQUIV, EXIT_SYNTH = 0, 1, 2, 3, 4

MATRIX_TOL = 1e-8


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path):
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _entry(x):
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise UsageError(f"complex entries must be [re, im] pairs, got {x!r}")
        re_, im_ = x
    else:
        re_, im_ = x, 0.0
    if isinstance(re_, bool) or isinstance(im_, bool):
        raise UsageError(f"non-numeric matrix entry {x!r}")
    try:
        return complex(float(re_), float(im_))
    except (TypeError, ValueError) as exc:
        raise UsageError(f"non-numeric matrix entry {x!r}") from exc


def parse_matrix_document(text):
    """Matrix from a ``{"matrix": ...}`` or ``{"matrix2": ...}`` document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise UsageError("matrix file must be a JSON object")
    key = "matrix" if "matrix" in doc else "matrix2" if "matrix2" in doc else None
    if key is None:
        raise UsageError('matrix file needs a "matrix" or "matrix2" key')
    rows = doc[key]
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise UsageError(f'"{key}" must be a list of rows')
    n = 4 if key == "matrix" else 2
    m = np.array([[_entry(x) for x in r] for r in rows], dtype=complex) if rows else np.zeros((0, 0))
    if m.shape != (n, n):
        raise ValidationError(f'"{key}" must be {n}x{n}, got shape {m.shape}', "shape")
    if not np.all(np.isfinite(m)):
        raise ValidationError("matrix has non-finite entries", "finite")
    return m


def _load_unitary(path):
    m = parse_matrix_document(_read(path))
    if m.shape != (4, 4):
        raise ValidationError(f"expected a 4x4 matrix, got {m.shape}", "shape")
    res = float(np.linalg.norm(m @ m.conj().T - np.eye(4)))
    if res > MATRIX_TOL:
        raise ValidationError(f"matrix is not unitary: ||m m* - I||_F = {res:.3e} > {MATRIX_TOL:g}",
                              "unitary", res)
    return m


def _load_hermitian(path):
    m = parse_matrix_document(_read(path))
    if m.shape != (4, 4):
        raise ValidationError(f"expected a 4x4 matrix, got {m.shape}", "shape")
    res = float(np.linalg.norm(m - m.conj().T))
    if res > MATRIX_TOL:
        raise ValidationError(f"matrix is not Hermitian: ||m - m*||_F = {res:.3e} > {MATRIX_TOL:g}",
                              "hermitian", res)
    return m


def _c(z):
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _mat(m):
    return [[_c(z) for z in row] for row in np.asarray(m)]


def _emit(obj):
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def cmd_classify(args):
    u = _load_unitary(args.file)
    coeffs = gamma_poly(u)
    out = {"cnot_class": classify_cnot(u, args.tol),
           "char_poly": [_c(c) for c in coeffs],
           "trace_gamma": _c(trace_gamma(su4_normalize(u)))}
    _emit(out)
    return EXIT_OK


def cmd_synth(args):
    from .synthesis import synthesize

    u = _load_unitary(args.file)
    circuit = synthesize(u, orient_search=args.orient_search == "on")
    text = circuit_to_qasm(circuit) if args.format == "qasm" else circuit_to_json(circuit) + "\n"
    sys.stdout.write(text)
    if args.verbose:
        info = {"cnot_count": circuit.cnot_count,
                "one_qubit_count": circuit.one_qubit_count(),
                "residual": dist_phase(circuit.to_matrix(), u)}
        sys.stderr.write(json.dumps(info) + "\n")
    return EXIT_OK


def cmd_verify(args):
    u = _load_unitary(args.matrix)
    try:
        circuit = load_circuit(_read(args.circuit))
    except (ValueError, KeyError, TypeError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise UsageError(f"cannot parse circuit: {exc}") from exc
    d = dist_phase(circuit.to_matrix(), u)
    ok = d <= args.tol
    _emit({"distance": d, "ok": bool(ok)})
    return EXIT_OK if ok else EXIT_NOT_EQUIV


def _timing_entry(r):
    e = r.equiv
    return {"t": r.t, "residual": r.residual, "target": r.target,
            "lam": _c(e.lam),
            "locals": {"a": _mat(e.a), "b": _mat(e.b), "c": _mat(e.c), "d": _mat(e.d)}}


def _weights(text):
    try:
        ws = [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"--weight-sweep expects comma-separated numbers: {exc}") from exc
    if not ws:
        raise UsageError("--weight-sweep needs at least one weight")
    bad = [w for w in ws if not (math.isfinite(w) and 0.0 <= w <= 1.0)]
    if bad:
        raise UsageError(f"weights must lie in [0, 1], got {bad[0]!r}")
    return ws


def cmd_time_ham(args):
    try:
        cfg = ScanConfig(args.t_min, args.t_max, args.steps, args.tol_candidate, args.tol_accept)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.weight_sweep is not None:
        if args.file is not None:
            raise UsageError("give either a Hamiltonian file or --weight-sweep, not both")
        entries = weight_sweep(_weights(args.weight_sweep), cfg)
        out = []
        for e in entries:
            item = {"w": e.w, "found": e.found, "status": "observation"}
            if e.found:
                item.update(_timing_entry(e.result))
            else:
                sys.stderr.write(f"no CNOT timing found for w={e.w!r}\n")
            out.append(item)
        _emit(out)
        return EXIT_OK if any(e.found for e in entries) else EXIT_NOT_EQUIV
    if args.file is None:
        raise UsageError("time-ham needs a Hamiltonian file or --weight-sweep")
    h = _load_hermitian(args.file)
    out = [_timing_entry(r) for r in time_hamiltonian(h, cfg)]
    _emit(out)
    return EXIT_OK if out else EXIT_NOT_EQUIV


def cmd_selftest(args):
    from .selftest import run_selftest

    seed_text = os.environ.get("TWOQ_SEED", "0")
    try:
        seed = int(seed_text)
    except ValueError as exc:
        raise UsageError(f"TWOQ_SEED must be an integer, got {seed_text!r}") from exc
    report = run_selftest(seed, args.count)
    _emit(report)
    return EXIT_OK if report["failures"] == 0 else EXIT_SYNTH


def build_parser():
    p = _Parser(prog="twoq", description="Two-qubit CNOT counting, synthesis and timing.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    c = sub.add_parser("classify", help="minimal CNOT count of a 4x4 unitary")
    c.add_argument("file", help='matrix file, or "-" for stdin')
    c.add_argument("--tol", type=float, default=DEFAULT_TOL.classify)
    c.set_defaults(func=cmd_classify)

    s = sub.add_parser("synth", help="CNOT-optimal circuit for a 4x4 unitary")
    s.add_argument("file")
    s.add_argument("--format", choices=("json", "qasm"), default="json")
    s.add_argument("--orient-search", choices=("on", "off"), default="on")
    s.add_argument("--verbose", action="store_true")
    s.set_defaults(func=cmd_synth)

    v = sub.add_parser("verify", help="check a circuit against a matrix")
    v.add_argument("matrix")
    v.add_argument("circuit", help="JSON or QASM circuit file")
    v.add_argument("--tol", type=float, default=1e-8)
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("time-ham", help="durations where exp(iHt) is a CNOT up to locals")
    t.add_argument("file", nargs="?")
    t.add_argument("--t-min", type=float, default=0.0)
    t.add_argument("--t-max", type=float, default=2 * math.pi)
    t.add_argument("--steps", type=int, default=4096)
    t.add_argument("--tol-candidate", type=float, default=1e-3)
    t.add_argument("--tol-accept", type=float, default=1e-6)
    t.add_argument("--weight-sweep", metavar="W1,W2,...",
                   help="time w I x sz + sx x sx for each weight instead of a file")
    t.set_defaults(func=cmd_time_ham)

    st = sub.add_parser("selftest", help="randomised round-trip checks (seed from TWOQ_SEED)")
    st.add_argument("--count", type=int, default=50)
    st.set_defaults(func=cmd_selftest)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"twoq: {exc}\n")
        return EXIT_USAGE
    except ValidationError as exc:
        sys.stderr.write(f"twoq: validation failed ({exc.invariant}): {exc}\n")
        return EXIT_INVALID
    except SynthesisFailed as exc:
        diag = json.dumps(exc.diagnostics, default=str)
        sys.stderr.write(f"twoq: synthesis failed: {exc} {diag}\n")
        return EXIT_SYNTH
