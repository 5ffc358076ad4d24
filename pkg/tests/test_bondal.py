import json
import shutil
from fractions import Fraction

import pytest

from qhat import bondal
from qhat.bondal import FixtureError, UnknownCheckError, load_fixtures, parse_matrix, verify
from qhat.chaincat import homotopic
from qhat.linalg import Mat


@pytest.fixture
def fixture_copy(tmp_path):
    d = tmp_path / "fixtures"
    shutil.copytree(bondal.fixture_dir(), d)
    return d


def edit(path, fn):
    data = json.loads(path.read_text())
    fn(data)
    path.write_text(json.dumps(data))


def test_all_named_objects_present(fs):
    for name in ("P1", "P2", "P3", "I1", "I2", "I3", "S1", "S2", "S3",
                 "P", "Pt", "E", "Ct", "D", "A", "SP", "P_A", "I_A", "P_Ct", "I_D"):
        assert name in fs.objects, name
    for name in ("f1", "f2", "g1", "g2", "eps_A", "iota_A", "A_to_CPI2", "CP2_to_A"):
        assert name in fs.maps, name
    assert sorted(fs.families["torsion"]) == ["T_1_-2", "T_1_1", "T_3_1"]
    assert sorted(fs.families["pic0"]) == ["M_-1", "M_1", "M_2", "M_5"]


def test_constructed_objects(fs):
    P, Pt = fs.modules["P"], fs.modules["Pt"]
    assert P.dims == Pt.dims == (1, 1, 1)
    assert P.maps["a1"] == Mat([[1]]) and P.maps["b1"] == Mat([[0]])
    assert Pt.maps["b2"] == Mat([[1]]) and Pt.maps["a2"] == Mat([[0]])
    # A is the cone of D -> C tilde, two terms
    assert (fs.obj("A").bottom, fs.obj("A").top) == (-1, 0)
    assert fs.map("A.inc").target is fs.obj("A")


def test_torsion_fixture(fs):
    T = fs.resolve("T_1_1")
    assert T.obj(0).dims == (1, 1, 0)


def test_resolve_shift_suffix(fs):
    X = fs.resolve("P3[1]")
    assert (X.bottom, X.top) == (-1, -1)
    with pytest.raises(KeyError):
        fs.resolve("nothing")


def test_basis_morphisms_not_homotopic(fs):
    assert homotopic(fs.map("f1"), fs.map("f2")) is None
    assert homotopic(fs.map("g1"), fs.map("g2")) is None


def test_provenance_records_completions(fs):
    assert fs.provenance["D_to_Ct"]["provenance"] == "completed"
    assert fs.provenance["eps_A"]["provenance"] == "displayed"
    assert "transposed" in fs.provenance["eps_A"]["note"]
    assert "read as zero" in fs.provenance["ladder_i2_i1:step4.g2"]["note"]


def test_parse_matrix_forms():
    assert parse_matrix("id", (2, 2), "x")[0] == Mat.identity(2)
    assert parse_matrix(0, (2, 3), "x")[0] == Mat.zeros(2, 3)
    m, note = parse_matrix([[1, 2]], (2, 1), "x")
    assert m == Mat([[1], [2]]) and note
    assert parse_matrix([["1/2"]], (1, 1), "x")[0][0, 0] == Fraction(1, 2)
    with pytest.raises(FixtureError):
        parse_matrix([[1, 2], [3, 4]], (2, 3), "x")
    with pytest.raises(FixtureError):
        parse_matrix(3, (2, 2), "x")
    with pytest.raises(FixtureError):
        parse_matrix("id", (2, 3), "x")


def test_tampered_chain_map_names_the_display(fixture_copy):
    edit(fixture_copy / "maps.json",
         lambda d: d["maps"]["CP2_to_A"]["components"]["0"].update({"1": 2}))
    with pytest.raises(FixtureError) as exc:
        load_fixtures(fixture_copy)
    assert exc.value.display == "CP2_to_A"


def test_tampered_differential_names_the_display(fixture_copy):
    edit(fixture_copy / "complexes.json",
         lambda d: d["objects"]["P_A"]["diffs"]["-2"].update({"3": [[1, 0, 0, 0]]}))
    with pytest.raises(FixtureError) as exc:
        load_fixtures(fixture_copy)
    assert exc.value.display.startswith("P_A")


def test_tampered_ladder_step_names_the_display(fixture_copy):
    edit(fixture_copy / "ladder_i3_i2.json",
         lambda d: d["maps"]["step1"]["components"]["-1"].update({"3": 2}))
    with pytest.raises(FixtureError) as exc:
        load_fixtures(fixture_copy)
    assert "step1" in exc.value.display


def test_wrong_standard_module_rejected(fixture_copy):
    edit(fixture_copy / "modules.json", lambda d: d["modules"]["P2"]["maps"].update({"a2": [[0], [1]]}))
    with pytest.raises(FixtureError) as exc:
        load_fixtures(fixture_copy)
    assert exc.value.display == "P2"


def test_zero_family_parameter_rejected(fixture_copy):
    edit(fixture_copy / "families.json", lambda d: d["families"]["pic0"]["samples"].append([0]))
    with pytest.raises(FixtureError):
        load_fixtures(fixture_copy)


def test_sample_sets_are_overridable(fixture_copy, monkeypatch):
    edit(fixture_copy / "families.json", lambda d: d["families"]["pic0"].update({"samples": [[3]]}))
    monkeypatch.setenv("QHAT_FIXTURES", str(fixture_copy))
    fs = load_fixtures()
    assert list(fs.families["pic0"]) == ["M_3"]
    assert fs.digest != load_fixtures(bondal.Path(bondal.__file__).parent / "fixtures").digest
    report = verify("families", fixtures=fs)
    assert report.failures == 0


def test_missing_fixture_file(fixture_copy):
    (fixture_copy / "maps.json").unlink()
    with pytest.raises(FixtureError):
        load_fixtures(fixture_copy)


def test_unknown_check():
    with pytest.raises(UnknownCheckError):
        verify("nonexistent")


def test_report_is_deterministic(fs):
    a = verify(["hom-table", "ladder-i3-i2"], seed=3, fixtures=fs).dumps()
    b = verify(["hom-table", "ladder-i3-i2"], seed=3, fixtures=fs).dumps()
    assert a == b
    data = json.loads(a)
    assert data["seed"] == 3 and data["fixture_hash"] == fs.digest
    assert "timings" not in data
    assert [c["check"] for c in data["checks"]] == ["hom-table", "ladder-i3-i2"]


def test_report_timings_opt_in(fs):
    data = verify("hom-table", fixtures=fs).to_json(timings=True)
    assert set(data["timings"]) == {"hom-table"}


def test_failed_claim_carries_counterexample(fs):
    lad = fs.ladders["ladder_i3_i2"]
    claim = {"id": "bogus", "kind": "equal", "lhs": "step5.f1", "rhs": "step5.f2", "statement": "x"}
    out = bondal.run_claim(fs, lad, claim, None)
    assert not out["ok"] and "difference" in out


def test_every_ladder_claim_passes(fs):
    for name in fs.ladders:
        for r in bondal.run_ladder(fs, name):
            assert r["ok"], (name, r["claim"])
