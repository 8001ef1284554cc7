import json
import subprocess
import sys

import numpy as np
import pytest

from twoq.circuit import load_circuit
from twoq.cli import main, parse_matrix_document
from twoq.linalg import dist_phase

from golden.cases import CASES, GOLDEN, ROOT, run


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_stdout(name):
    argv, code = CASES[name]
    proc = run(argv)
    assert proc.returncode == code, proc.stderr.decode()
    assert proc.stdout == (GOLDEN / f"{name}.stdout").read_bytes()


@pytest.mark.parametrize("name", ["classify_qft", "synth_qft_qasm", "time_ham_h42"])
def test_byte_identical_reruns(name):
    argv, _ = CASES[name]
    assert run(argv).stdout == run(argv).stdout


def twoq(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        import io
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def data(name):
    return str(ROOT / "data" / name)


def test_classify_output(capsys):
    code, out, _ = twoq(capsys, "classify", data("qft.json"))
    doc = json.loads(out)
    assert code == 0 and doc["cnot_class"] == 3
    assert len(doc["char_poly"]) == 4 and len(doc["trace_gamma"]) == 2
    assert json.loads(twoq(capsys, "classify", data("hh.json"))[1])["cnot_class"] == 0


def test_classify_non_unitary_names_invariant(capsys):
    code, _, err = twoq(capsys, "classify", data("zeros.json"))
    assert code == 2
    assert "unitary" in err and "2.000e+00" in err


def test_stdin(capsys, monkeypatch):
    text = (ROOT / "data" / "dj.json").read_text()
    code, out, _ = twoq(capsys, "classify", "-", stdin=text, monkeypatch=monkeypatch)
    assert code == 0 and json.loads(out)["cnot_class"] == 1


def exit_code(argv):
    try:
        return main(argv)
    except SystemExit as exc:  # argparse reports usage errors this way
        return exc.code


@pytest.mark.parametrize("argv,code", [
    (["classify"], 1),
    (["nonsense"], 1),
    (["classify", "/no/such/file.json"], 1),
    (["synth", data("dj.json"), "--format", "svg"], 1),
    (["time-ham"], 1),
    (["time-ham", "--weight-sweep", "0.5,2"], 1),
    (["time-ham", "--weight-sweep", "a,b"], 1),
    (["time-ham", data("h42.json"), "--steps", "1"], 1),
    (["time-ham", data("h42.json"), "--weight-sweep", "0.5"], 1),
    (["synth", data("zeros.json")], 2),
    (["time-ham", data("qft.json")], 2),
    (["verify", data("qft.json"), data("empty_circuit.json")], 3),
    (["time-ham", data("zero_hamiltonian.json")], 3),
    (["classify", data("identity.json")], 0),
])
def test_exit_codes(capsys, argv, code):
    assert exit_code(argv) == code
    capsys.readouterr()


def test_usage_errors_exit_one():
    for argv in (["classify"], ["nonsense"], ["synth", "x", "--format", "svg"]):
        proc = subprocess.run([sys.executable, "-m", "twoq", *argv], capture_output=True)
        assert proc.returncode == 1


def test_matrix_document_errors(tmp_path, capsys):
    cases = {"bad.json": "{not json", "list.json": "[1, 2]", "nokey.json": '{"m": []}',
             "pair.json": '{"matrix": [[[1, 2, 3]]]}', "text.json": '{"matrix": [["a"]]}'}
    for name, text in cases.items():
        (tmp_path / name).write_text(text)
        assert main(["classify", str(tmp_path / name)]) == 1
    (tmp_path / "shape.json").write_text('{"matrix": [[1, 0], [0, 1]]}')
    assert main(["classify", str(tmp_path / "shape.json")]) == 2
    (tmp_path / "nan.json").write_text(
        json.dumps({"matrix": [[float("nan")] * 4] * 4}).replace("NaN", "NaN"))
    assert main(["classify", str(tmp_path / "nan.json")]) == 2
    capsys.readouterr()


def test_matrix_document_accepts_real_entries_and_matrix2():
    m = parse_matrix_document('{"matrix": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}')
    assert np.array_equal(m, np.eye(4))
    m2 = parse_matrix_document('{"matrix2": [[[0, 1], 0], [0, [0, -1]]], "name": "s"}')
    assert np.array_equal(m2, np.diag([1j, -1j]))


def test_synth_verbose_and_round_trip(capsys, tmp_path):
    code, out, err = twoq(capsys, "synth", data("planted2.json"), "--verbose")
    info = json.loads(err.strip().splitlines()[-1])
    assert code == 0 and info["cnot_count"] == 2 and info["residual"] <= 1e-8
    assert set(info) == {"cnot_count", "one_qubit_count", "residual"}
    path = tmp_path / "c.json"
    path.write_text(out)
    code, out, _ = twoq(capsys, "verify", data("planted2.json"), str(path))
    assert code == 0 and json.loads(out)["ok"]


def test_every_emitted_circuit_verifies(capsys, tmp_path):
    for name in ("hh", "dj", "qft", "swap", "identity", "cnot", "planted2"):
        for fmt in ("json", "qasm"):
            code, out, _ = twoq(capsys, "synth", data(f"{name}.json"), "--format", fmt)
            path = tmp_path / f"{name}.{fmt}"
            path.write_text(out)
            assert twoq(capsys, "verify", data(f"{name}.json"), str(path))[0] == 0


def test_orient_search_flag(capsys):
    on = load_circuit(twoq(capsys, "synth", data("dj.json"))[1])
    off = load_circuit(twoq(capsys, "synth", data("dj.json"), "--orient-search", "off")[1])
    assert on.cnot_count == off.cnot_count == 1
    assert on.one_qubit_count() <= off.one_qubit_count()


def test_time_ham_entry_layout(capsys):
    code, out, _ = twoq(capsys, "time-ham", data("h42.json"), "--t-min", "0", "--t-max", "2",
                        "--steps", "2001")
    entries = json.loads(out)
    assert code == 0 and len(entries) == 1
    e = entries[0]
    assert abs(e["t"] - 0.80587) <= 1e-3 and e["residual"] <= 1e-6
    assert e["target"] in ("c12", "c21") and set(e["locals"]) == {"a", "b", "c", "d"}


def test_weight_sweep_reports_each_weight(capsys):
    code, out, _ = twoq(capsys, "time-ham", "--weight-sweep", "0,1", "--steps", "1024")
    entries = json.loads(out)
    assert code == 0 and [e["w"] for e in entries] == [0.0, 1.0]
    assert all(e["status"] == "observation" for e in entries)


def test_selftest_uses_seed(capsys, monkeypatch):
    monkeypatch.setenv("TWOQ_SEED", "7")
    code, out, _ = twoq(capsys, "selftest", "--count", "3")
    doc = json.loads(out)
    assert code == 0 and doc["seed"] == 7 and doc["checks"] == 15 and doc["failures"] == 0
    monkeypatch.setenv("TWOQ_SEED", "x")
    assert twoq(capsys, "selftest")[0] == 1


def test_verify_detects_distance(capsys):
    code, out, _ = twoq(capsys, "verify", data("qft.json"), data("empty_circuit.json"))
    from helpers import F
    d = json.loads(out)["distance"]
    assert code == 3 and d == dist_phase(np.eye(4), F)


def test_verify_bad_circuit(capsys, tmp_path):
    (tmp_path / "c.qasm").write_text("OPENQASM 2.0;\nccx q[0],q[1],q[2];\n")
    assert twoq(capsys, "verify", data("qft.json"), str(tmp_path / "c.qasm"))[0] == 1
