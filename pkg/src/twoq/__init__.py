"""CNOT-count classification, CNOT-optimal synthesis and Hamiltonian timing
for two-qubit operators."""
__version__ = "0.1.0"

from ._config import DEFAULT_TOL, ToleranceConfig
from .circuit import (Circuit, CnotGate, EulerAngles, OneQubitGate, circuit_from_json,
                      circuit_from_qasm, circuit_to_json, circuit_to_matrix,
                      circuit_to_qasm, euler_decompose, load_circuit)
from .exceptions import (DiagonalizationFailed, NotAProduct, NotEquivalent, NotSymmetric,
                         SynthesisFailed, TwoQError, ValidationError)
from .invariants import (C12, C21, MAGIC, classify_cnot, gamma, gamma_poly,
                         trace_gamma)
from .linalg import (MonicQuartic, char_poly4, dist_phase, expm_i_herm, herm_eig4, kron,
                     kron_factor, su4_normalize, sym_unitary_real_eigenbasis)
from .local_equiv import LocalEquivalence, match_spectra, solve_local_equivalence
from .synthesis import (cnot_orientation_search, synth0, synth1, synth2, synth3,
                        synthesize)
from .timing import (ScanConfig, TimingCandidate, TimingResult, extract_cnot, scan,
                     scan_objective, time_hamiltonian, weight_sweep)

# the estimators pull in scikit-learn, which dominates start-up time of the
# command line, so they are imported on first access
_ESTIMATORS = ("CircuitSynthesizer", "CnotCountClassifier", "HamiltonianTimer",
               "InvariantTransformer")

__all__ = sorted(name for name in dir() if not name.startswith("_")) + list(_ESTIMATORS)


def __getattr__(name):
    if name in _ESTIMATORS:
        from . import estimators
        return getattr(estimators, name)
    raise AttributeError(f"module 'twoq' has no attribute {name!r}")
