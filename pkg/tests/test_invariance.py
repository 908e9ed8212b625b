"""Theorem harness: registry, verdict table, linear invariance and Puiseux pairs."""

import json
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from germmult.corpus import named_germs
from germmult.germ import PuiseuxCurve, hypersurface, map_parse
from germmult.invariance import (
    CONSISTENT,
    HYPOTHESIS_FAILED,
    VIOLATION,
    Expectation,
    TheoremInstance,
    characteristic_pairs,
    example_42_map,
    linear_invariance_suite,
    paper_examples,
    puiseux_pair_note,
    verify_instance,
)

GOLDEN = Path(__file__).parent / "golden" / "registry.json"


@pytest.fixture(scope="module")
def registry():
    return paper_examples()


@pytest.fixture(scope="module")
def verdicts(registry):
    return {k: verify_instance(inst, seed=0) for k, inst in registry.items()}


def test_registry_matches_golden(registry):
    got = {k: v.to_dict() for k, v in sorted(registry.items())}
    assert json.loads(json.dumps(got)) == json.loads(GOLDEN.read_text())


def test_registry_contents(registry):
    assert len(registry) == 5
    ex12 = registry["paper:example-1.2"].expected
    assert ex12.values == (1, 0) and ex12.failed_hypothesis == "differentiable"
    surf = registry["paper:cube-root-surface"]
    assert surf.expected.values == (1, 1) and surf.expected.verdict == CONSISTENT
    assert registry["paper:cusp-flattening"].expected.failed_hypothesis == "isomorphism"
    assert registry["paper:example-4.2"].expected.values == (4, 4)


def test_verdicts_match_expectations(verdicts):
    for v in verdicts.values():
        assert v.matches_expectation, v.to_dict()
        assert v.conclusion != VIOLATION


def test_surface_verdict(verdicts):
    v = verdicts["paper:cube-root-surface"]
    assert v.conclusion == CONSISTENT
    assert np.max(np.abs(np.array(v.hypotheses["derivative"]) - np.eye(3))) <= 1e-6
    assert (v.invariants["X"]["m"], v.invariants["Y"]["m"]) == (3, 1)


def test_example_12_verdict(verdicts):
    v = verdicts["paper:example-1.2"]
    assert v.conclusion == HYPOTHESIS_FAILED
    assert v.failed_hypothesis == "differentiable"
    assert (v.invariants["X"]["parity"], v.invariants["Y"]["parity"]) == (1, 0)


def test_cusp_flattening_verdict(verdicts):
    v = verdicts["paper:cusp-flattening"]
    assert v.conclusion == HYPOTHESIS_FAILED
    assert v.hypotheses["smallest_singular_value"] < 1e-8
    assert (v.invariants["X"]["m"], v.invariants["Y"]["m"]) == (2, 1)


def test_example_42_verdict(verdicts):
    v = verdicts["paper:example-4.2"]
    assert v.conclusion == CONSISTENT and v.compared == "m"
    assert v.invariants["X"]["m"] == v.invariants["Y"]["m"] == 4
    assert v.soundness["passed"]


def test_example_42_map_sends_curve_to_curve():
    m = example_42_map()
    for t in (0.3, 0.1 + 0.2j, -0.05j):
        x, y = t**4, t**6 + t**7
        out = m(np.array([x.real if isinstance(x, complex) else x, np.imag(x), np.real(y), np.imag(y)]))
        yt = t**6 + t**9
        assert out == pytest.approx([np.real(x), np.imag(x), np.real(yt), np.imag(yt)], abs=1e-12)


def test_violation_is_detected():
    # a linear map cannot change the multiplicity; mislabelling Y exposes a violation
    X = hypersurface("y^2 - x^3", "xy")
    Y = hypersurface("y", "xy")
    inst = TheoremInstance(
        "synthetic", X, Y, map_parse(["x", "y"], ["x", "y"]), "T3.1", Expectation(CONSISTENT, "parity", (0, 1))
    )
    v = verify_instance(inst)
    assert v.conclusion == VIOLATION and not v.matches_expectation


def test_instance_validation():
    X = hypersurface("y", "xy")
    Z = hypersurface("z", "xyz")
    ident = map_parse(["x", "y"], ["x", "y"])
    with pytest.raises(ValueError):
        TheoremInstance("a", X, X, ident, "T9.9", Expectation(CONSISTENT, "parity", (1, 1)))
    with pytest.raises(ValueError):
        TheoremInstance("b", X, X, ident, "T4.1", Expectation(CONSISTENT, "m", (1, 1)))
    with pytest.raises(ValueError):
        TheoremInstance("c", X, Z, ident, "T3.1", Expectation(CONSISTENT, "parity", (1, 1)))


def test_registry_instances_are_frozen(registry):
    inst = registry["paper:sine-graph"]
    with pytest.raises(Exception):
        inst.id = "other"
    assert replace(inst, notes="x").notes == "x"


@pytest.mark.parametrize("name", ["cusp", "node", "surface-V", "example-4.2-X"])
def test_linear_invariance(name):
    g = next(g for g in named_germs() if g.name == name)
    rep = linear_invariance_suite(g, trials=2, seed=3)
    assert rep.passed, rep.mismatches
    assert len(rep.trials) == 2


def test_characteristic_pairs():
    c = PuiseuxCurve(Fraction(4), ((Fraction(6), Fraction(1)), (Fraction(7), Fraction(1))))
    ct = PuiseuxCurve(Fraction(4), ((Fraction(6), Fraction(1)), (Fraction(9), Fraction(1))))
    assert characteristic_pairs(c) == ((3, 2), (7, 4))
    assert characteristic_pairs(ct) == ((3, 2), (9, 4))
    note = puiseux_pair_note(c, ct)
    assert note.differ and note.to_dict()["pairs"] == [[[3, 2], [7, 4]], [[3, 2], [9, 4]]]
    cusp = PuiseuxCurve(Fraction(2), ((Fraction(3), Fraction(1)),))
    assert characteristic_pairs(cusp) == ((3, 2),)
    assert characteristic_pairs(PuiseuxCurve(Fraction(1), ())) == ()
