import json
import os
from fractions import Fraction
from pathlib import Path

import pytest

import crnsign

ROOT = Path(os.environ.get("CRNSIGN_SOURCE_DIR", Path(__file__).resolve().parents[2]))


def fixture(name):
    return crnsign.load(ROOT / "fixtures" / f"{name}.crn")


def test_parse_and_stoichiometry():
    net = crnsign.parse("A + 2B -> C\nC -> A\n")
    assert net.species == ["A", "B", "C"]
    assert net.reactions == ["A+2B->C", "C->A"]
    assert net.stoichiometry() == [[-1, 1], [-2, 0], [1, -1]]
    assert all(isinstance(x, Fraction) for row in net.stoichiometry() for x in row)
    assert crnsign.parse(net.text()) == net


def test_parse_error_position():
    with pytest.raises(crnsign.ParseError, match=r"^2:"):
        crnsign.parse("A -> B\nA -> -> C\n")
    with pytest.raises(ValueError):
        crnsign.parse("")


def test_two_class_network():
    net = fixture("two_classes")
    rep = crnsign.analyze(net, seed=1)
    assert len(rep["badclasses"]) == 2
    assert rep["signcheck"]["ambiguous_entries"] == [["C", "D"], ["D", "C"]]

    fixed, fix = crnsign.sign_fix(net)
    assert len(fix["steps"]) == 2
    assert crnsign.bad_classes(fixed) == []
    assert fix["kernels"]["correspondence"] == [True, True]
    assert all(step["kernel_correspondence"] for step in fix["steps"])
    s_hat = crnsign.fractions(fix["result"]["stoichiometry_exact"])
    assert s_hat == fixed.stoichiometry()
    assert len(s_hat) == 9 and len(s_hat[0]) == 8


def test_order_and_deficiency():
    net = fixture("complex_bounds")
    d = crnsign.deficiency(net)
    assert (d["n"], d["ell"]) == (5, 2)
    _, fix = crnsign.sign_fix(net, order=[1, 0])
    assert fix["order"] == [2, 1]
    assert crnsign.kernels(net)["rank"] == 3


def test_altfix_and_cli():
    alt = crnsign.altfix(fixture("altfix_demo"))
    assert "demonstration" in json.dumps(alt)
    code, out, err = crnsign.run_cli(["analyze", str(ROOT / "fixtures" / "two_classes.crn"), "--check"])
    assert code == 1
    assert json.loads(out)["badclasses"]
    code, _, err = crnsign.run_cli(["analyze", "/nonexistent.crn"])
    assert code == 2 and err
