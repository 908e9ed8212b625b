"""Multiplicity engines and their cross-check."""

from fractions import Fraction

import pytest

from germmult.cone import tangent_cone_hypersurface
from germmult.corpus import corpus, expected_multiplicity, named_germs
from germmult.errors import NonPrimitive, NotGeneric, NotSquareFree, Unstable
from germmult.germ import PuiseuxCurve, hypersurface
from germmult.mult import (
    StabilitySchedule,
    cross_check,
    frames_for,
    make_frame,
    mult_fiber_complex,
    mult_mod2_real,
    mult_order,
    mult_puiseux,
    mult_via_cone,
    real_count_in_window,
    stabilized,
)
from germmult.polyring import UniPoly, poly_parse

QUARTIC_X = "y^4 - 2*x^3*y^2 - 4*x^5*y + x^6 - x^7"
QUARTIC_XT = "y^4 - 2*x^3*y^2 - 4*x^6*y + x^6 - x^9"


def curve(a, *terms, field="complex"):
    return PuiseuxCurve(Fraction(a), tuple((Fraction(b), Fraction(c)) for b, c in terms), field)


# -- schedule -----------------------------------------------------------------


def test_schedule_defaults_and_overrides():
    s = StabilitySchedule()
    assert s.radii()[0] == Fraction(1, 8) and len(s.radii()) == 12
    o = StabilitySchedule.from_overrides("K=14,theta=1/8")
    assert o.K == 14 and o.theta == Fraction(1, 8)
    assert StabilitySchedule.from_overrides(None) == s
    with pytest.raises(ValueError):
        StabilitySchedule.from_overrides("kappa=2")
    with pytest.raises(ValueError):
        StabilitySchedule(K=2, R=3)


def test_stabilized():
    assert stabilized([5, 2, 2, 2], 3, "x") == 2
    with pytest.raises(Unstable):
        stabilized([2, 2, 3, 2], 3, "x")
    with pytest.raises(Unstable):
        stabilized([2, None, 2, 2], 3, "x")


# -- order and Puiseux ------------------------------------------------------------


def test_mult_order(cusp, line, surface):
    assert (mult_order(cusp), mult_order(line), mult_order(surface)) == (2, 1, 3)
    with pytest.raises(NotSquareFree):
        mult_order(poly_parse("(y - x^2)^2", "xy"))


def test_mult_puiseux():
    assert mult_puiseux(curve(4, (6, 1), (7, 1))) == 4
    assert mult_puiseux(curve(1)) == 1
    assert mult_puiseux(curve(4, (6, 1), (9, 1))) == 4
    with pytest.raises(NonPrimitive):
        mult_puiseux(curve(2, (4, 1)))


# -- fiber engines --------------------------------------------------------------------


def test_fiber_complex_examples(cusp, line):
    tc = tangent_cone_hypersurface(cusp)
    frame = make_frame(tc, (1, 0))
    assert mult_fiber_complex(cusp, frame).value == 2
    assert mult_fiber_complex(line).value == 1
    assert mult_fiber_complex(poly_parse(QUARTIC_X, "xy"), seed=3).value == 4


def test_non_generic_kernel(cusp):
    with pytest.raises(NotGeneric):
        make_frame(tangent_cone_hypersurface(cusp), (0, 1))


def test_real_parity_examples(cusp, line, surface):
    assert mult_mod2_real(line).value == 1
    assert mult_mod2_real(cusp).value == 0
    assert mult_mod2_real(surface).value == 1


def test_real_parity_rejects_complex_germ():
    with pytest.raises(ValueError):
        mult_mod2_real(hypersurface(QUARTIC_X, "xy", "complex"))


def test_real_count_in_window():
    t3_t = UniPoly([0, -1, 0, 1])
    assert real_count_in_window(t3_t, Fraction(2)) == 3
    assert real_count_in_window(t3_t, Fraction(1, 2)) == 1
    double = UniPoly([Fraction(-1, 4), 1]) ** 2 * UniPoly([1, 0, 1])
    assert real_count_in_window(double, Fraction(1)) is None
    assert real_count_in_window(double, Fraction(1, 8)) == 0
    # a root on the boundary is handled by nudging the window outward
    assert real_count_in_window(UniPoly([-1, 0, 1]), Fraction(1)) == 2


def test_frames_deterministic(cusp):
    a = frames_for(cusp.f, 3, seed=11)
    b = frames_for(cusp.f, 3, seed=11)
    assert [f.to_dict() for f in a] == [f.to_dict() for f in b]
    tc = tangent_cone_hypersurface(cusp)
    for fr in a:
        assert tc.initial(fr.v) != 0 and tc.initial(fr.u) != 0


# -- cone formula ---------------------------------------------------------------------


def test_cone_formula_cusp_23():
    res = mult_via_cone(hypersurface("y^2 - x^3", "xy"))
    assert res.value == 2
    assert [(c.alg_mult, c.reduced_degree, c.k) for c in res.table] == [(2, 1, 2)]


def test_cone_formula_surface(surface):
    res = mult_via_cone(surface)
    assert res.value == 3 and res.table[0].k == 3


def test_cone_formula_node():
    res = mult_via_cone(hypersurface("y^2 - x^2", "xy"))
    assert res.value == 2 and [c.k for c in res.table] == [1, 1]


# -- cross-check ---------------------------------------------------------------------


@pytest.mark.parametrize("name, parity", [("cusp", 0), ("surface-V", 1), ("line", 1)])
def test_cross_check_examples(name, parity):
    g = next(g for g in named_germs() if g.name == name)
    rep = cross_check(g, 3, seed=1)
    m = expected_multiplicity(name)
    assert rep.verdict == "OK", rep.diagnostics
    assert {k: v for k, v in rep.values.items() if k != "fiber_real_parity"} == {
        "order": m,
        "fiber_complex": m,
        "cone_formula": m,
    }
    assert rep.values["fiber_real_parity"] == parity


def test_cross_check_puiseux_only():
    from germmult.germ import GermSpec

    g = GermSpec("puiseux", "complex", ("x", "y"), curve=curve(4, (6, 1), (7, 1)), name="c")
    rep = cross_check(g)
    assert rep.values == {"puiseux": 4} and rep.verdict == "OK"


def test_cross_check_report_is_json_ready(cusp):
    import json

    d = cross_check(cusp, 2, seed=5).to_dict()
    assert json.loads(json.dumps(d)) == d


@pytest.mark.parametrize("g", corpus(), ids=lambda g: g.name)
def test_engine_agreement_corpus(g):
    f = g.defining_poly()
    m = mult_order(f)
    assert mult_fiber_complex(f, seed=7).value == m
    assert mult_via_cone(f, seed=7).value == m
    if g.is_real:
        assert mult_mod2_real(f, seed=7).value == m % 2

