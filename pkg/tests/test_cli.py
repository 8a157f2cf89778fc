import json
import subprocess
import sys

import pytest

from abelprob import Cyclotomic
from abelprob import cli
from abelprob import serialize as ser
from abelprob.cli import main
from abelprob.morphisms import is_automorphism


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_uniform(capsys):
    code, out, _ = run(["classify", '{"group": {"moduli": [4]}, "pmf": ["1/4", "1/4", "1/4", "1/4"]}'], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["classification"]["is_idempotent"] and doc["classification"]["shift"] == [0]
    assert doc["classification"]["subgroup"]["order"] == 4 and doc["spectral_agrees"]


def test_charfn_round_trip(capsys):
    code, out, _ = run(["charfn", '{"group": "4", "pmf": ["1/2", "1/2", 0, 0]}'], capsys)
    doc = json.loads(out)
    assert code == 0
    g = ser.load_group(doc["group"])
    vals = [ser.load_value(v, f"values[{i}]") for i, v in enumerate(doc["values"])]
    assert vals[0] == 1 and vals[2] == 0
    assert doc["float"][1] == [0.5, 0.5] and g.order == 4


def test_noninvertible_bundle_passes_check_independence(tmp_path, capsys):
    path = tmp_path / "noninvertible.json"
    code, _, _ = run(["counterexample", "prop1", "--group", "4", "--b", "1/2", "-o", str(path)], capsys)
    assert code == 0
    bundle = json.loads(path.read_text())
    assert all(bundle["claims"].values())
    # the emitted bundle re-validates through the loaders
    group, dists, fs = ser.load_bundle(bundle)
    assert group.moduli == (4,) and len(dists) == fs.n == 2
    code, out, _ = run(["check-independence", str(path), "--method", "both"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["independent"] and doc["methods_agree"]
    assert [r["independent"] for r in doc["reports"]] == [True, True]


def test_dependent_bundle_reports_witness(capsys):
    bundle = {
        "group": {"moduli": [4]},
        "dists": [{"pmf": ["1/2", "1/2", 0, 0]}, {"pmf": ["1/2", "1/2", 0, 0]}],
        "forms": {"coeffs": [[[[1]], [[1]]], [[[1]], [[3]]]]},
    }
    code, out, _ = run(["check-independence", json.dumps(bundle)], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["independent"] is False
    pmf = doc["reports"][0]
    assert pmf["witness"] == {"point": [[0], [0]], "left": "1/4", "right": "1/8"}


def test_verify_command_finds_no_violation(capsys):
    argv = ["verify-thm1", "--group", "4", "--n", "2", "--mode", "exhaustive", "--trials", "200", "--seed", "42"]
    code, out, _ = run(argv, capsys)
    doc = json.loads(out)
    assert code == 0 and doc["violations"] == [] and doc["same_subgroup_failures"] == []
    assert doc["coefficient_tuples"] == 16 and doc["independent_instances"] > 0


def test_fewer_forms_command(capsys):
    code, out, _ = run(["counterexample", "thm2", "--p", "5", "--n", "3", "--k", "2"], capsys)
    doc = json.loads(out)
    assert code == 0 and all(doc["claims"].values())
    assert doc["verdicts"] == {"charfn": True, "pmf": True}
    # irrational masses serialize as cyclotomic coefficient lists and load back
    mass = ser.load_value(doc["dists"][0]["pmf"][25], "m")  # the element (1, 0, 0)
    assert isinstance(mass, Cyclotomic) and mass.is_real()


def test_subgroups_and_automorphisms(capsys):
    code, out, _ = run(["subgroups", "--group", "2,2"], capsys)
    assert code == 0 and json.loads(out)["count"] == 5
    code, out, _ = run(["automorphisms", "--group", "2,4"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["count"] == 8
    g = ser.load_group(doc["group"])
    assert all(is_automorphism(ser.load_hom(h, g, "h")) for h in doc["automorphisms"])


@pytest.mark.parametrize(
    "argv, fragment",
    [
        (["classify", '{"group": "4", "pmf": ["1/2", "1/4", "1/2", 0]}'], "pmf"),
        (["classify", '{"group": "4", "pmf": ["1/2", "x", "1/2", 0]}'], "pmf[1]"),
        (["classify", '{"group": "4", "pmf": [1, 0]'], "malformed JSON"),
        (["classify", '{"pmf": [1, 0, 0, 0]}'], "group: missing field"),
        (["check-independence", '{"group": "4", "dists": [{"pmf": [1,0,0,0]}], "forms": {"coeffs": [[[[1]], [[1]]]]}}'], "dists"),
        (["check-independence", '{"group": "4", "dists": [], "forms": {"coeffs": [[[["a"]]]]}}'], "forms.coeffs[0][0][0][0]"),
        (["counterexample", "prop1", "--group", "3"], "error"),
        (["counterexample", "prop1", "--group", "4", "--b", "3/2"], "error"),
        (["counterexample", "thm2", "--p", "3", "--n", "3", "--k", "2"], "error"),
        (["verify-thm1", "--group", "4,x"], "group"),
        (["classify", "/no/such/file.json"], "no such file"),
    ],
)
def test_input_errors_exit_2(argv, fragment, capsys):
    code, out, err = run(argv, capsys)
    assert code == 2 and out == ""
    assert fragment in err


def test_failed_claim_exits_1(monkeypatch, capsys):
    # a disagreement between the two idempotence tests is a failed claim, not bad input
    monkeypatch.setattr(cli, "spectral_idempotent", lambda mu: False)
    code, out, _ = run(["classify", '{"group": "4", "pmf": ["1/4", "1/4", "1/4", "1/4"]}'], capsys)
    assert code == 1 and json.loads(out)["spectral_agrees"] is False


def test_output_is_deterministic(tmp_path):
    argv = [sys.executable, "-m", "abelprob", "verify-thm1", "--group", "2,4", "--mode", "sampled", "--trials", "20", "--samples", "8", "--seed", "3"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["violations"] == []


def test_every_report_reparses(capsys):
    commands = [
        ["classify", '{"group": "2,2", "pmf": [0, "1/2", 0, "1/2"]}'],
        ["charfn", '{"group": "3", "pmf": ["1/3", "2/3", 0]}'],
        ["counterexample", "prop1", "--group", "2,2", "--b", "1/3"],
        ["subgroups", "--group", "6"],
    ]
    for argv in commands:
        code, out, _ = run(argv, capsys)
        assert code == 0
        doc = json.loads(out)
        assert ser.dumps(doc) == out
        g = ser.load_group(doc["group"])
        if "pmf" in json.dumps(doc) and "dists" in doc:
            ser.load_bundle(doc)
        if "subgroups" in doc:
            assert [ser.load_subgroup(s, g).order for s in doc["subgroups"]] == [s["order"] for s in doc["subgroups"]]
