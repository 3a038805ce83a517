import io
import json

import pytest

from elliptica.cli import main


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


def run_json(*argv):
    code, text = run(*argv, "--json")
    return code, json.loads(text)


@pytest.fixture(autouse=True)
def isolated_cwd(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)


def test_decompose():
    code, rep = run_json("decompose", "5", "2")
    assert code == 0
    assert rep["variety"]["label"] == "S^2(E)"
    assert rep["sigma_coeffs"] == [-2, -1]
    assert rep["schema"] == "elliptica/1"
    code, rep = run_json("decompose", "4", "3")
    assert rep["variety"]["label"] == "P^3" and rep["sigma_coeffs"] == [0, 0, 0]


def test_decompose_invalid_pair():
    code, rep = run_json("decompose", "6", "4")
    assert code == 2 and rep["error"] == "InvalidParams"


def test_verify_relations():
    code, rep = run_json("verify", "5", "2", "relations")
    assert code == 0 and rep["rank"] == 10 and rep["passed"]


def test_verify_ybe():
    code, rep = run_json("verify", "3", "1", "ybe", "--u", "0.11+0.07i", "--v", "0.05+0.13i")
    assert code == 0 and rep["residual"] < 1e-9 and rep["passed"]


def test_verify_ybe_higher_family_is_reported_only():
    code, rep = run_json("verify", "5", "2", "ybe")
    assert code == 0
    assert "no assertion" in rep["note"]


@pytest.mark.parametrize("which", ["graph", "orbit"])
def test_verify_first_family_checks(which):
    code, rep = run_json("verify", "4", "1", which)
    assert code == 0 and rep["passed"]


def test_verify_fails_with_wrong_characteristic():
    code, rep = run_json("verify", "3", "1", "ybe", "--chars", "0,0")
    assert code == 1 and rep["passed"] is False


def test_verify_denominator_near_zero():
    code, rep = run_json("verify", "3", "1", "relations", "--tau", "0.333333333333+0i")
    assert code == 1
    assert rep["error"] == "DenominatorNearZero" and "index" in rep


def test_hilbert():
    code, rep = run_json("hilbert", "5", "2", "3")
    assert code == 0 and rep["kernel"] == [0, 0, 5]
    code, rep = run_json("hilbert", "8", "3", "3")
    assert rep["B"] == [1, 8, 32, 72]
    code, _ = run_json("hilbert", "12", "5", "3")
    assert code == 2


def test_slopes():
    code, rep = run_json("slopes", "8", "3")
    assert code == 0
    assert rep["pushforward"]["slope"] == "8/3"
    assert (rep["kernel"]["rank"], rep["kernel"]["deg"]) == (5, -8)
    code, rep = run_json("slopes", "--class", "1", "3", "--class", "1", "3")
    assert rep["criterion"] is True
    code, rep = run_json("slopes", "--class", "1", "2", "--class", "1", "2")
    assert rep["criterion"] is False


def test_theta_command():
    code, rep = run_json("theta", "3", "0.1+0.2i")
    assert code == 0 and len(rep["values"]) == 3


def test_human_output():
    code, text = run("decompose", "8", "3")
    assert code == 0
    assert "kprime: 3" in text.splitlines()


def test_json_is_byte_identical():
    args = ("verify", "4", "1", "graph", "--seed", "7")
    assert run(*args, "--json") == run(*args, "--json")


def test_bad_complex_is_invalid():
    code, _ = run("verify", "3", "1", "ybe", "--tau", "nonsense")
    assert code == 2


def test_calibrate_persists(tmp_path):
    cfg = tmp_path / "run.cfg"
    code, rep = run_json("calibrate", "3", "--config", str(cfg))
    assert code == 0 and rep["chars"] == "3/2,1/6"
    assert "chars.3 = 3/2,1/6" in cfg.read_text()
    code, rep = run_json("verify", "3", "1", "ybe", "--config", str(cfg))
    assert code == 0 and rep["chars"] == "3/2,1/6"


def test_default_config_is_read(tmp_path):
    (tmp_path / "elliptica.cfg").write_text("chars.3 = 0,0\n")
    code, rep = run_json("verify", "3", "1", "ybe")
    assert code == 1 and rep["chars"] == "0,0"


def test_missing_explicit_config():
    code, _ = run("decompose", "5", "2", "--config", "nope.cfg")
    assert code == 2


def test_calibrate_dry_run_writes_nothing(tmp_path):
    code, rep = run_json("calibrate", "4", "--dry-run")
    assert code == 0 and "config" not in rep
    assert not (tmp_path / "elliptica.cfg").exists()
