import json
import shutil
import subprocess

import pytest

from qhat import bondal
from qhat.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def result(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    return json.loads(out)


def test_ext_of_d_into_p(capsys):
    assert result(capsys, "ext", "D", "P", "--range", "0..2")["ext"] == [1, 1, 0]


def test_hom_between_projectives(capsys):
    assert result(capsys, "hom", "P2", "P3")["hom"] == 0
    assert result(capsys, "hom", "P3", "P2")["hom"] == 2


def test_k0_of_spherical_object(capsys):
    assert result(capsys, "k0", "E")["k0"] == [0, 0, 0]


def test_resolve(capsys):
    assert result(capsys, "resolve", "S2")["resolution"] == "SumComplex(-1:P3+P3, 0:P2)"
    assert result(capsys, "resolve", "D", "--side", "injective")["resolution"] == "SumComplex(0:I3, 1:I1+I2, 2:I1)"


def test_serre_mutate_twist(capsys):
    assert result(capsys, "serre", "P3")["dims"] == {"0": [2, 2, 1]}
    assert result(capsys, "serre", "I3", "--inverse")["dims"] == {"0": [0, 0, 1]}
    # L_P(I3) is C tilde, whose minimal model has the shape of its displayed resolution
    assert result(capsys, "mutate", "P", "I3")["result"] == "SumComplex(-2:P3, -1:P2+P3, 0:P1)"
    assert "twist" in result(capsys, "twist", "E", "Ct")


def test_shifted_operand(capsys):
    assert result(capsys, "ext", "P3[1]", "P3", "--range=-1..1")["ext"] == [0, 0, 1]


def test_file_operand(capsys, tmp_path):
    f = tmp_path / "rep.json"
    f.write_text(json.dumps({"dims": [1, 1, 0], "maps": {"a1": [[1]], "b1": [[0]]}}))
    assert result(capsys, "hom", "Ct", "--file", str(f))["hom"] == 0
    assert result(capsys, "k0", str(f))["k0"] == [1, 1, 0]


def test_json_output(capsys, tmp_path):
    out = tmp_path / "r.json"
    result(capsys, "k0", "P", "--json", str(out))
    assert json.loads(out.read_text()) == {"k0": [1, 1, 1]}


def test_unknown_fixture(capsys):
    code, _, err = run(capsys, "hom", "Nope", "P")
    assert code == 2 and "unknown fixture" in err


def test_malformed_file(capsys, tmp_path):
    f = tmp_path / "bad.json"
    f.write_text("{not json")
    code, _, err = run(capsys, "k0", "--file", str(f))
    assert code == 2 and "malformed" in err
    f.write_text(json.dumps({"dims": [1, 1, 1], "maps": {"a1": [[1]], "b2": [[1]]}}))
    code, _, err = run(capsys, "k0", "--file", str(f))
    assert code == 2 and "not a valid" in err


def test_wrong_operand_count(capsys):
    code, _, err = run(capsys, "hom", "P")
    assert code == 2


def test_verify_single_check(capsys, tmp_path):
    out = tmp_path / "report.json"
    code, text, _ = run(capsys, "verify", "--check", "hom-table", "--json", str(out))
    assert code == 0
    assert "hom-table" in text and "PASS" in text
    data = json.loads(out.read_text())
    assert data["failures"] == 0 and "timings" not in data


def test_verify_aborts_on_invalid_fixture(capsys, tmp_path, monkeypatch):
    d = tmp_path / "fixtures"
    shutil.copytree(bondal.fixture_dir(), d)
    path = d / "families.json"
    data = json.loads(path.read_text())
    data["families"]["torsion"]["samples"] = [[1, 0]]
    path.write_text(json.dumps(data))
    monkeypatch.setenv("QHAT_FIXTURES", str(d))
    code, _, err = run(capsys, "verify", "--check", "families")
    assert code == 2 and "torsion parameters must be nonzero" in err


def test_verify_counts_failing_checks(capsys, tmp_path, monkeypatch):
    d = tmp_path / "fixtures"
    shutil.copytree(bondal.fixture_dir(), d)
    path = d / "families.json"
    data = json.loads(path.read_text())
    # a torsion module with b2 nonzero on a 1-dimensional vertex 3 is not in the orthogonal
    data["families"]["torsion"]["dims"] = [1, 1, 1]
    data["families"]["torsion"]["maps"] = {"a1": [["a"]], "b1": [[0]], "a2": [[1]], "b2": [[0]]}
    data["families"]["torsion"]["samples"] = [[1, 1]]
    path.write_text(json.dumps(data))
    monkeypatch.setenv("QHAT_FIXTURES", str(d))
    code, text, _ = run(capsys, "verify", "--check", "families", "--check", "hom-table")
    assert code == 1
    assert "FAIL" in text and "0/2" not in text and "1/2 checks passed" in text


def test_unknown_check(capsys):
    code, _, err = run(capsys, "verify", "--check", "nonexistent")
    assert code == 2 and "unknown check" in err


@pytest.mark.skipif(shutil.which("qhat") is None, reason="console script not installed")
def test_console_script():
    p = subprocess.run(["qhat", "hom", "P3", "P1"], capture_output=True, text=True, timeout=120)
    assert p.returncode == 0
    assert json.loads(p.stdout)["hom"] == 2
