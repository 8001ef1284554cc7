"""Randomised round-trip checks behind ``twoq selftest``."""
import numpy as np

from .invariants import classify_cnot
from .linalg import dist_phase
from .sampling import haar_unitary, planted_unitary
from .synthesis import ROUND_TRIP_TOL, synthesize


def run_selftest(seed, count=50):
    """Synthesise planted operators of every class plus Haar samples.

    Returns a JSON-ready report; nothing in it depends on wall-clock time.
    """
    rng = np.random.default_rng(seed)
    cases = []
    for _ in range(count):
        for k in range(4):
            cases.append((f"planted-{k}", k, planted_unitary(k, rng)))
        cases.append(("haar", 3, haar_unitary(4, rng)))
    failures = []
    worst = 0.0
    for i, (kind, expected, u) in enumerate(cases):
        try:
            c = synthesize(u)
        except Exception as exc:  # noqa: BLE001 - reported, not raised
            failures.append({"index": i, "kind": kind, "error": type(exc).__name__})
            continue
        d = dist_phase(c.to_matrix(), u)
        worst = max(worst, d)
        k = classify_cnot(u)
        if d > ROUND_TRIP_TOL or c.cnot_count != k or k != expected:
            failures.append({"index": i, "kind": kind, "class": k,
                             "cnots": c.cnot_count, "distance": d})
    return {"seed": seed, "checks": len(cases), "failures": len(failures),
            "max_distance_ok": worst <= ROUND_TRIP_TOL, "details": failures}
