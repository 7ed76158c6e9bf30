import json

import pytest

from fluxlattice.cli import main


@pytest.fixture(autouse=True)
def _workdir(tmp_path, monkeypatch):
    # keep a stray settings.ini out of the way
    monkeypatch.chdir(tmp_path)


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_validate_builtin(capsys):
    assert 0 == main(["validate", "--builtin", "two_blocks"])
    assert _json(capsys) == {"valid": True, "violations": []}


def test_validate_reports_violations(tmp_path, capsys):
    doc_ = {"name": "broken", "nodes": ["a", "b", "c"],
            "branches": [{"kind": "C", "nodes": ["a", "b"], "value": 10, "unit": "fF"}]}
    path_ = tmp_path / "broken.json"
    path_.write_text(json.dumps(doc_))
    assert 1 == main(["validate", "--netlist", str(path_)])
    out_ = capsys.readouterr()
    assert "disconnected" in out_.err
    assert not json.loads(out_.out)["valid"]


def test_netlist_errors_exit_with_one(tmp_path):
    path_ = tmp_path / "bad.json"
    path_.write_text("{\"nodes\": [")
    assert 1 == main(["params", "--netlist", str(path_)])
    assert 1 == main(["params", "--netlist", str(tmp_path / "missing.json")])
    assert 1 == main(["params"])
    assert 1 == main(["unknown"])
    assert 1 == main(["params", "--builtin", "qubit_resonator", "--param", "X=1"])


def test_params(capsys):
    assert 0 == main(["params", "--builtin", "qubit_resonator"])
    d_ = _json(capsys)
    assert "phi_q1" in d_["qubits"]
    assert d_["resonators"]["phi_r1"]["omega_GHz"] > 0


def test_reduce_is_deterministic(capsys):
    assert 0 == main(["reduce", "--builtin", "two_blocks", "--samples", "4", "--seed", "3"])
    first_ = capsys.readouterr().out
    assert 0 == main(["reduce", "--builtin", "two_blocks", "--samples", "4", "--seed", "3"])
    assert first_ == capsys.readouterr().out
    d_ = json.loads(first_)
    assert ["phi_q1", "phi_q2", "phi_r1", "phi_r2"] == d_["reduced"]["labels"]
    assert d_["check"]["kinetic_pullback_error"] < 1e-9
    assert 3 == d_["check"]["seed"]


def test_grid_spectrum_csv(capsys):
    assert 0 == main(["spectrum", "--blocks", "1", "--levels", "4", "--g", "0.01"])
    lines_ = capsys.readouterr().out.splitlines()
    assert "index,energy,qubit_label,photon_label" == lines_[0]
    assert 5 == len(lines_)
    assert lines_[1].endswith(",g,0")


def test_circuit_spectrum_to_file(tmp_path):
    out_ = tmp_path / "levels.json"
    assert 0 == main(["spectrum", "--builtin", "qubit_resonator", "--truncation", "phi_q1=3",
                      "--truncation", "phi_r1=6", "--levels", "3", "-f", "json", "-o", str(out_)])
    d_ = json.loads(out_.read_text())
    assert 3 == len(d_["energies"])
    assert d_["hermiticity_error"] < 1e-12


def test_harmonic_qubit_fails_numerically():
    assert 2 == main(["spectrum", "--builtin", "qubit_resonator", "--param", "E_Jq=0", "--two_level"])


def test_classify(capsys):
    assert 0 == main(["classify", "--builtin", "qubit_resonator"])
    d_ = _json(capsys)
    assert "longitudinal" == d_["couplings"]["phi_q1-phi_r1"]["tag"]
    assert 0 == main(["classify", "--builtin", "qubit_resonator", "--asymmetry", "0.1"])
    d_ = _json(capsys)
    assert "mixed" == d_["asymmetry"]["tag"]
    assert d_["asymmetry"]["d"] == pytest.approx(.1)
    assert 1 == main(["classify", "--builtin", "qubit_resonator", "--asymmetry", "1.5"])
    assert 1 == main(["classify", "--builtin", "two_blocks", "--asymmetry", "0.1"])


def test_scan(capsys):
    assert 0 == main(["scan", "--blocks", "1", "--g", "0.1", "--amplitude", "0.1", "--duration", "20",
                      "--start", "3.9", "--stop", "4.1", "--steps", "3", "--threads", "1"])
    lines_ = capsys.readouterr().out.splitlines()
    assert "frequency,transfer,peak" == lines_[0]
    assert 4 == len(lines_)


def test_plan(capsys):
    assert 0 == main(["plan", "--connections", "4", "--guard", "0.01"])
    d_ = _json(capsys)
    assert ["alpha", "beta", "gamma", "delta"] == d_["connections"]
    assert 2 == main(["plan", "--g_min", "0.02", "--g_max", "0.05", "--guard", "0.5"])


def test_locality(capsys):
    assert 0 == main(["locality", "--blocks", "2", "--g_c", "0.1", "--frequency", "4", "--duration", "5",
                      "--resonator_levels", "3"])
    d_ = _json(capsys)
    assert "q1" == d_["driven"]
    assert d_["max_qubit_disturbance"] < 1e-8


def test_settings_file(tmp_path, capsys):
    (tmp_path / "settings.ini").write_text("[SCAN]\namplitude = 0.2\nduration = 5\nresonator_levels = 3\n")
    assert 0 == main(["locality", "--blocks", "1", "--frequency", "4"])
    assert "q1" == _json(capsys)["driven"]


def test_dynamics_tolerances_come_from_settings(tmp_path, capsys, caplog):
    settings_ = tmp_path / "settings.ini"
    settings_.write_text("[FLUXLATTICE]\nconvergence_tolerance = 1e-30\nmax_halvings = 1\n"
                         "[SCAN]\nduration = 5\nresonator_levels = 3\n")
    assert 2 == main(["locality", "--blocks", "1", "--frequency", "4"])
    assert "ConvergenceError" in caplog.text
    capsys.readouterr()
    settings_.write_text("[FLUXLATTICE]\nconvergence_tolerance = 0\n[SCAN]\nduration = 5\nresonator_levels = 3\n")
    assert 0 == main(["locality", "--blocks", "1", "--frequency", "4"])
    assert "convergence" not in _json(capsys)


def test_spectrum_truncation_stability(capsys):
    assert 0 == main(["spectrum", "--builtin", "qubit_resonator", "--levels", "4", "--stability", "-f", "json"])
    d_ = _json(capsys)["truncation_stability"]
    assert {"phi_q1": 12, "phi_r1": 10} == d_["dims"]
    assert d_["worst"] < 1e-8
    assert 2 == main(["spectrum", "--builtin", "qubit_resonator", "--truncation", "phi_q1=2", "--truncation",
                      "phi_r1=3", "--stability"])
