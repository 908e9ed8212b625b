"""Tangent cones, Puiseux cone directions, link membership and genericity."""

from fractions import Fraction
from math import sqrt

import pytest
from hypothesis import given, strategies as st

from germmult.cone import (
    genericity_check,
    link_membership,
    tangent_cone_hypersurface,
    tangent_cone_puiseux,
)
from germmult.corpus import corpus
from germmult.errors import AmbiguousMembership, NotGeneric
from germmult.germ import PuiseuxCurve, hypersurface
from germmult.polyring import poly_parse, proportional

R2 = 1 / sqrt(2)


def test_cusp_cone(cusp):
    tc = tangent_cone_hypersurface(cusp)
    assert len(tc.components) == 1
    comp = tc.components[0]
    assert proportional(comp.factor, poly_parse("x", "xy"))
    assert comp.alg_mult == 2 and comp.reduced_degree == 1


def test_surface_cone(surface):
    tc = tangent_cone_hypersurface(surface)
    assert [(c.factor, c.alg_mult) for c in tc.components] == [(poly_parse("z", "xyz"), 3)]


def test_line_cone(line):
    tc = tangent_cone_hypersurface(line)
    assert [(c.factor, c.alg_mult) for c in tc.components] == [(poly_parse("y", "xy"), 1)]


def test_cone_to_dict(cusp):
    d = tangent_cone_hypersurface(cusp).to_dict(cusp.vars)
    assert d["components"] == [{"factor": "x", "alg_mult": 2, "reduced_degree": 1}]


def test_puiseux_cone_directions():
    c42 = PuiseuxCurve(Fraction(4), ((Fraction(6), Fraction(1)), (Fraction(7), Fraction(1))))
    assert [d.vector for d in tangent_cone_puiseux(c42)] == [(1.0, 0.0)]
    line = PuiseuxCurve(Fraction(1), (), "real")
    assert sorted(d.vector for d in tangent_cone_puiseux(line)) == [(-1.0, 0.0), (1.0, 0.0)]
    cusp = PuiseuxCurve(Fraction(2), ((Fraction(3), Fraction(1)),), "real")
    assert [d.vector for d in tangent_cone_puiseux(cusp)] == [(1.0, 0.0)]


def test_link_membership(cusp):
    tc = tangent_cone_hypersurface(cusp)
    assert link_membership(tc, (0.0, 1.0)) == 0
    assert link_membership(tc, (1.0, 0.0)) is None
    node = tangent_cone_hypersurface(hypersurface("y^2 - x^2", "xy"))
    idx = link_membership(node, (R2, R2))
    assert proportional(node.components[idx].factor, poly_parse("y - x", "xy"))


def test_membership_ambiguous_at_intersection():
    tc = tangent_cone_hypersurface(hypersurface("x*y*(x - y)", "xy"))
    # loose tolerance makes the three lines overlap near (1, 1)/sqrt 2
    with pytest.raises(AmbiguousMembership):
        link_membership(tc, (R2, R2), tol=1.0)


def test_membership_requires_unit_vector(cusp):
    with pytest.raises(ValueError):
        link_membership(tangent_cone_hypersurface(cusp), (0.0, 2.0))


def test_genericity(cusp, surface):
    tc = tangent_cone_hypersurface(cusp)
    with pytest.raises(NotGeneric):
        genericity_check(tc, (0, 1))
    assert genericity_check(tc, (1, 0)).value == -1
    assert genericity_check(tc, (1, 1)).value == -1
    assert genericity_check(tangent_cone_hypersurface(surface), (0, 0, 1)).value == 1


@pytest.mark.parametrize("g", corpus(), ids=lambda g: g.name)
def test_cone_reassembles(g):
    tc = tangent_cone_hypersurface(g)
    assert proportional(tc.reassembled(), tc.initial)


@given(st.integers(-5, 5), st.integers(-5, 5), st.integers(1, 4))
def test_links_of_lines_member(a, b, k):
    if a == 0 and b == 0:
        return
    # cone of (b x - a y)^k + higher terms contains the direction (a, b)
    f = hypersurface(f"(({b})*x - ({a})*y)*x^{k - 1} + y^{k + 2}", "xy") if k > 1 else None
    tc = tangent_cone_hypersurface(f or hypersurface(f"({b})*x - ({a})*y + y^3", "xy"))
    n = sqrt(a * a + b * b)
    assert link_membership(tc, (a / n, b / n)) is not None
