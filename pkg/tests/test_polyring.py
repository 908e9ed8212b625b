"""Exact polynomial kernel: parsing, forms, restriction, Sturm counts, roots, factoring."""

import cmath
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from germmult.errors import RootAtEndpoint, ZeroDirection, ZeroPolynomial
from germmult.polyring import (
    Poly,
    Root,
    UniPoly,
    complex_roots,
    count_in_disc,
    factor_homog,
    initial_form,
    is_squarefree,
    is_squarefree_poly,
    ord_,
    poly_parse,
    proportional,
    reassemble,
    restrict_line,
    squarefree_part,
    sturm_count,
)


def P(text, names="xy"):
    return poly_parse(text, list(names))


# -- examples ----------------------------------------------------------------


def test_parse_cusp_terms():
    f = P("y^3 - x^2")
    assert dict(f.terms) == {(0, 3): 1, (2, 0): -1}


def test_parse_zero():
    assert P("0").is_zero()


def test_parse_surface():
    f = P("z^3 - x^5*y - x*y^5", "xyz")
    assert len(f) == 3 and ord_(f) == 3


@pytest.mark.parametrize(
    "text, names, order",
    [
        ("y^3 - x^2", "xy", 2),
        ("z^3 - x^5*y - x*y^5", "xyz", 3),
        ("y^4 - 2*x^3*y^2 - 4*x^5*y + x^6 - x^7", "xy", 4),
    ],
)
def test_order(text, names, order):
    assert ord_(P(text, names)) == order


def test_order_of_zero_raises():
    with pytest.raises(ZeroPolynomial):
        ord_(Poly.zero(2))


def test_initial_forms():
    assert initial_form(P("y^3 - x^2")) == P("-x^2")
    assert initial_form(P("z^3 - x^5*y - x*y^5", "xyz")) == P("z^3", "xyz")
    h = P("x^2*y - y^3")
    assert initial_form(h) == h


def test_restrict_line_cusp_23():
    r = Fraction(1, 3)
    g = restrict_line(P("y^2 - x^3"), (r, 0), (0, 1))
    assert g == UniPoly([-(r**3), 0, 1])


def test_restrict_line_line():
    assert restrict_line(P("y"), (1, 0), (0, 1)) == UniPoly([0, 1])


def test_restrict_line_surface():
    a, b = Fraction(2, 5), Fraction(-3, 7)
    g = restrict_line(P("z^3 - x^5*y - x*y^5", "xyz"), (a, b, 0), (0, 0, 1))
    assert g == UniPoly([-(a**5 * b + a * b**5), 0, 0, 1])


def test_restrict_line_zero_direction():
    with pytest.raises(ZeroDirection):
        restrict_line(P("y"), (0, 0), (0, 0))


def test_squarefree_part_examples():
    t2 = UniPoly([0, 0, 1])
    assert squarefree_part(t2).monic() == UniPoly([0, 1])
    g = UniPoly([-1, 1]) ** 2 * UniPoly([2, 1])
    assert squarefree_part(g).monic() == UniPoly([-2, 1, 1])
    h = UniPoly([-Fraction(1, 64), 0, 1])
    assert is_squarefree(h) and squarefree_part(h).monic() == h


def test_sturm_examples():
    assert sturm_count(UniPoly([-1, 0, 1]), -2, 2) == 2
    assert sturm_count(UniPoly([1, 0, 1]), -2, 2) == 0
    assert sturm_count(UniPoly([0, -1, 0, 1]), Fraction(-1, 2), 2) == 2


def test_sturm_root_at_endpoint():
    with pytest.raises(RootAtEndpoint):
        sturm_count(UniPoly([-1, 0, 1]), -1, 2)


def test_complex_roots_closed_form():
    roots = complex_roots(UniPoly([-Fraction(1, 64), 0, 1]))
    assert sorted(r.center.real for r in roots) == pytest.approx([-0.125, 0.125], abs=1e-12)
    cubes = complex_roots(UniPoly([-1, 0, 0, 1]))
    for k in range(3):
        w = cmath.exp(2j * cmath.pi * k / 3)
        assert min(abs(r.center - w) for r in cubes) < 1e-12


def test_complex_roots_cluster_modulus():
    s = Fraction(1, 1024)
    roots = complex_roots(UniPoly([-(s**6), 0, 0, 0, 1]), tol=1e-9)
    assert len(roots) == 4
    for r in roots:
        assert abs(r.center) == pytest.approx(float(s) ** 1.5, rel=1e-9)


def test_complex_roots_multiplicity():
    roots = complex_roots(UniPoly([-1, 1]) ** 3)
    assert len(roots) == 1 and roots[0].multiplicity == 3


def test_count_in_disc():
    roots = complex_roots(UniPoly([-Fraction(1, 64), 0, 1]))
    assert count_in_disc(roots, 0.2) == 2
    assert count_in_disc(roots, 0.1) == 0
    assert count_in_disc([Root(0.125 + 0j, 1e-3)], 0.125) is None


@pytest.mark.parametrize(
    "text, expected",
    [
        ("x^2", [("x", 2)]),
        ("x^2 + y^2", [("x^2 + y^2", 1)]),
        ("y^2 - x^2", [("x + y", 1), ("-x + y", 1)]),
        ("9*x^4 - 3*x^3*y + x^2*y^2 - 8*x*y^3 + 4*y^4", [("3*x - 2*y", 2), ("x^2 + x*y + y^2", 1)]),
    ],
)
def test_factor_homog(text, expected):
    got = factor_homog(P(text))
    assert len(got) == len(expected)
    for want, k in expected:
        assert any(proportional(p, P(want)) and m == k for p, m in got)


def test_factor_three_variables():
    got = factor_homog(P("x^2*y + x*y^2", "xyz"))
    assert sorted(m for _, m in got) == [1, 1, 1]
    assert reassemble(got, 3) == P("x^2*y + x*y^2", "xyz")


def test_squarefree_poly():
    assert is_squarefree_poly(P("y^4 - 2*x^3*y^2 - 4*x^5*y + x^6 - x^7"))
    assert not is_squarefree_poly(P("(y - x^2)^2*x"))


# -- properties --------------------------------------------------------------

small = st.fractions(min_value=-3, max_value=3, max_denominator=7)
coeff = st.integers(min_value=-4, max_value=4)


@st.composite
def polys(draw, nvars=2, max_deg=4):
    exps = [(i, j) for i in range(max_deg + 1) for j in range(max_deg + 1 - i)]
    chosen = draw(st.lists(st.sampled_from(exps), min_size=1, max_size=5, unique=True))
    terms = {e: draw(coeff.filter(bool)) for e in chosen}
    return Poly(nvars, terms)


@given(polys(), st.tuples(small, small), st.tuples(small, small), small)
def test_restrict_line_is_evaluation(f, base, direction, t):
    if direction == (0, 0):
        return
    g = restrict_line(f, base, direction)
    point = [b + t * d for b, d in zip(base, direction)]
    assert g(t) == f(*point)


@given(polys(), polys())
def test_initial_form_multiplicative(f, g):
    if f.is_zero() or g.is_zero():
        return
    assert initial_form(f * g) == initial_form(f) * initial_form(g)


@given(polys())
def test_factor_reassembles(f):
    if f.is_zero():
        return
    h = initial_form(f)
    assert proportional(reassemble(factor_homog(h), 2), h)


@given(st.lists(st.integers(min_value=-6, max_value=6), min_size=1, max_size=4, unique=True))
def test_sturm_matches_complex_roots(rts):
    g = UniPoly([1])
    for r in rts:
        g = g * UniPoly([-Fraction(r, 2), 1])
    g = g * UniPoly([1, 0, 1])  # a pair of non-real roots
    real = sum(1 for r in complex_roots(g) if abs(r.center.imag) <= r.radius)
    assert sturm_count(g, Fraction(-41, 10), Fraction(41, 10)) == real == len(rts)


# fiber of a linear image of z^3 - x^5 y - x y^5 at s = 2^-14: three roots within
# 1e-10 of each other near 3.5e-5, which the double-precision start merges
CLUSTER_FIBER = [
    "4611686018427387175/162259276829213363391578010288128",
    "-12105675798371889603/4951760157141521099596496896",
    "42369865294301589513/604462909807314587353088",
    "-6178938688752292837/9223372036854775808",
    "-180855/2251799813685248",
    "68925/68719476736",
    "-29529/8388608",
]


def test_merged_cluster_is_recovered():
    g = UniPoly(Fraction(c) for c in CLUSTER_FIBER)
    roots = complex_roots(g, tol=1e-12)
    assert len(roots) == 6
    near = [r for r in roots if abs(r.center) < 1e-4]
    assert len(near) == 3
    assert sum(1 for r in near if abs(r.center.imag) > r.radius) == 2
    assert sturm_count(g, Fraction(-1, 10**4), Fraction(1, 10**4)) == 1


def test_separate_splits_equal_approximations():
    import mpmath

    from germmult.polyring.roots import _separate

    ctx = mpmath.mp.clone()
    ctx.dps = 40
    z = ctx.mpc(3, 0)
    out = _separate([z, z, ctx.mpc(1)], ctx)
    assert out[0] != out[1] and out[2] == ctx.mpc(1)
