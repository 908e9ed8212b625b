"""Germ specs, schema loading, mapping germs and the derivative test."""

import json
from fractions import Fraction

import numpy as np
import pytest

from germmult.errors import (
    AlreadyComplex,
    InvariantViolation,
    NonPrimitive,
    ParseError,
    SchemaError,
    UnsupportedFunction,
)
from germmult.germ import (
    NotDifferentiable,
    PuiseuxCurve,
    complexify,
    derivative_at_zero,
    germ_dump,
    germ_load,
    hypersurface,
    is_isomorphism,
    map_load,
    map_parse,
    parametrization_valuation,
    verify_parametrization,
)
from germmult.mult import mult_puiseux
from germmult.polyring import poly_parse

QUARTIC = "y^4 - 2*x^3*y^2 - 4*x^5*y + x^6 - x^7"


def test_load_cusp_document():
    g = germ_load({"kind": "hypersurface", "field": "real", "vars": ["x", "y"], "f": "y^3 - x^2"})
    assert g.is_real and g.ambient_dim == 2
    assert dict(g.f.terms) == {(0, 3): 1, (2, 0): -1}


def test_load_line_json_text():
    g = germ_load(json.dumps({"kind": "hypersurface", "field": "real", "vars": ["x", "y"], "f": "y"}))
    assert g.f.ord() == 1


def test_load_example_42_curve():
    doc = {"kind": "puiseux", "field": "complex", "pairs": [[4, "t-power-base"], [6, 1], [7, 1]]}
    g = germ_load(doc)
    assert g.curve(Fraction(1, 2)) == (Fraction(1, 16), Fraction(1, 64) + Fraction(1, 128))
    assert mult_puiseux(g.curve) == 4


def test_dump_round_trip(tmp_path):
    doc = {
        "kind": "puiseux",
        "field": "complex",
        "pairs": [[4, "t-power-base"], [6, 1], [7, 1]],
        "implicit": QUARTIC,
        "name": "X",
    }
    g = germ_load(doc)
    path = tmp_path / "g.json"
    path.write_text(json.dumps(germ_dump(g)))
    assert germ_load(str(path)) == g


@pytest.mark.parametrize(
    "doc",
    [
        {"kind": "hypersurface", "field": "real", "vars": ["x", "y"]},
        {"kind": "surface", "field": "real", "vars": ["x", "y"], "f": "y"},
        {"kind": "hypersurface", "field": "real", "vars": ["x", "y"], "f": "y", "extra": 1},
        {"kind": "puiseux", "field": "complex", "pairs": [[6, 1], [4, "t-power-base"]]},
    ],
)
def test_schema_errors(doc):
    with pytest.raises(SchemaError):
        germ_load(doc)


@pytest.mark.parametrize(
    "text, names",
    [("y^2 - x^2 + 1", "xy"), ("(y - x^2)^2", "xy"), ("x^2*(y - x)^2", "xy")],
)
def test_invariant_violations(text, names):
    with pytest.raises(InvariantViolation):
        hypersurface(text, list(names))


@pytest.mark.parametrize("names", ["x", "xyzwv"])
def test_dimension_limits(names):
    with pytest.raises(ValueError):
        hypersurface(names[0], list(names))


def test_parse_errors():
    with pytest.raises(ParseError):
        poly_parse("y^", ["x", "y"])
    with pytest.raises(ParseError):
        poly_parse("q + 1", ["x", "y"])
    with pytest.raises(UnsupportedFunction):
        map_parse(["tan(x)", "y"], ["x", "y"])


def test_complexify():
    for text, names in [("y^3 - x^2", "xy"), ("z^3 - x^5*y - x*y^5", "xyz"), ("y", "xy")]:
        g = hypersurface(text, list(names))
        c = complexify(g)
        assert c.field == "complex" and c.f == g.f
        with pytest.raises(AlreadyComplex):
            complexify(c)


def test_map_parse_examples():
    m = map_parse(["x", "x^(2/3) - y"], ["x", "y"])
    assert m(np.array([8.0, 1.0])) == pytest.approx([8.0, 3.0])
    assert m(np.array([-8.0, 0.0])) == pytest.approx([-8.0, 4.0])
    s = map_parse(["x", "y", "z - (x^5*y + x*y^5)^(1/3)"], ["x", "y", "z"])
    assert s(np.array([1.0, 1.0, 2.0]))[2] == pytest.approx(2 - 2 ** (1 / 3))


def test_map_must_vanish():
    with pytest.raises(InvariantViolation):
        map_parse(["x + 1", "y"], ["x", "y"])


def test_map_load_declared_derivative():
    m = map_load({"vars": ["x", "y"], "components": ["x", "y"], "declared_derivative": [[1, 0], [0, 1]]})
    assert m.dim == 2
    with pytest.raises(InvariantViolation):
        map_load({"vars": ["x", "y"], "components": ["x", "y"], "declared_derivative": [[2, 0], [0, 1]]})


def test_derivative_identity():
    A = derivative_at_zero(map_parse(["x", "y"], ["x", "y"]))
    assert np.allclose(A, np.eye(2))


def test_derivative_surface_map():
    A = derivative_at_zero(map_parse(["x", "y", "z - (x^5*y + x*y^5)^(1/3)"], ["x", "y", "z"]))
    assert not isinstance(A, NotDifferentiable)
    assert np.max(np.abs(A - np.eye(3))) <= 1e-6


def test_derivative_fails_for_two_thirds_power():
    res = derivative_at_zero(map_parse(["x", "x^(2/3) - y"], ["x", "y"]))
    assert isinstance(res, NotDifferentiable)
    assert abs(res.witness[0]) > 0


def test_is_isomorphism():
    assert is_isomorphism(np.eye(3))
    assert not is_isomorphism(np.diag([1.0, 0.0]))
    assert is_isomorphism(np.array([[0.0, 1.0], [1.0, 0.0]]))
    chk = is_isomorphism(np.diag([1.0, 0.0]))
    assert chk.smallest_singular_value < 1e-8


def test_parametrization_residuals():
    c = PuiseuxCurve(Fraction(4), ((Fraction(6), Fraction(1)), (Fraction(7), Fraction(1))))
    f = poly_parse(QUARTIC, ["x", "y"])
    assert parametrization_valuation(c, f) is None
    assert verify_parametrization(c, f) == 0.0
    line = PuiseuxCurve(Fraction(1), ())
    assert verify_parametrization(line, poly_parse("y", ["x", "y"])) == 0.0
    cusp = PuiseuxCurve(Fraction(2), ((Fraction(3), Fraction(1)),), "real")
    assert verify_parametrization(cusp, poly_parse("y^2 - x^3", ["x", "y"])) == 0.0


def test_truncated_curve_with_zero_tail_is_exact():
    # (t^4, t^6 + t^9) satisfies the recorded quartic identically
    c = PuiseuxCurve(Fraction(4), ((Fraction(6), Fraction(1)), (Fraction(9), Fraction(1))))
    f = poly_parse("y^4 - 2*x^3*y^2 - 4*x^6*y + x^6 - x^9", ["x", "y"])
    assert verify_parametrization(c, f) == 0.0


def test_non_primitive():
    c = PuiseuxCurve(Fraction(2), ((Fraction(4), Fraction(1)),))
    with pytest.raises(NonPrimitive):
        mult_puiseux(c)
