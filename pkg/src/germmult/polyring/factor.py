"""Factorization of homogeneous forms over Q and exact square-free tests.

The irreducible factorization of the dehomogenized univariate polynomial is
delegated to sympy; dehomogenization, re-homogenization, multiplicities and
normalization happen here.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

import sympy

from ..errors import ZeroPolynomial
from .poly import HomogPoly, Poly
from .univariate import UniPoly


def normalize_factor(h: Poly) -> Poly:
    """Primitive integer multiple of h whose leading term (lex order) is positive."""
    if h.is_zero():
        raise ZeroPolynomial("cannot normalize the zero polynomial")
    den = lcm(*(c.denominator for c in h.terms.values()))
    ints = {e: int(c * den) for e, c in h.terms.items()}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
    lead = max(ints)
    if ints[lead] < 0:
        g = -g
    return Poly(h.nvars, {e: Fraction(v, g) for e, v in ints.items()})


def _to_sympy(f: Poly, gens):
    return sympy.Poly.from_dict(
        {e: sympy.Rational(c.numerator, c.denominator) for e, c in f.terms.items()},
        *gens,
        domain=sympy.QQ,
    )


def _from_sympy(p: "sympy.Poly", nvars: int) -> Poly:
    return Poly(
        nvars,
        {e: Fraction(int(c.p), int(c.q)) for e, c in p.as_dict().items()},
    )


def _gens(n: int):
    return sympy.symbols(f"w0:{n}")


def factor_univariate(g: UniPoly) -> tuple[Fraction, list[tuple[UniPoly, int]]]:
    """Irreducible factorization over Q: g = c * prod p_i^k_i with monic p_i."""
    if g.is_zero():
        raise ZeroPolynomial("factorization of the zero polynomial")
    t = sympy.Symbol("t")
    sp = sympy.Poly(
        [sympy.Rational(c.numerator, c.denominator) for c in reversed(g.coeffs)],
        t,
        domain=sympy.QQ,
    )
    c, facs = sp.factor_list()
    out = []
    for p, k in facs:
        cs = [Fraction(int(a.p), int(a.q)) for a in reversed(p.all_coeffs())]
        out.append((UniPoly(cs).monic(), int(k)))
    lead = g.lc
    for p, k in out:
        lead /= p.lc**k
    return lead, out


def factor_homog_bivariate(h: Poly) -> list[tuple[HomogPoly, int]]:
    """Irreducible factors over Q of a binary form, with multiplicities.

    The form h(x, y) of degree d is dehomogenized to u(c) = h(1, c); a
    degree drop d - deg u means x divides h that many times.  Factors of u are
    re-homogenized with x.  Factors are normalized (primitive, positive lead)
    and sorted, so the output is deterministic.
    """
    if h.is_zero():
        raise ZeroPolynomial("factorization of the zero polynomial")
    if h.nvars != 2:
        raise ValueError("binary forms only")
    if not h.is_homogeneous():
        raise ValueError("input must be homogeneous")
    d = h.degree()
    coeffs = [Fraction(0)] * (d + 1)
    for (i, j), c in h.terms.items():
        coeffs[j] = c
    u = UniPoly(coeffs)
    out: list[tuple[HomogPoly, int]] = []
    if d - u.degree > 0:
        out.append((HomogPoly(2, {(1, 0): 1}), d - u.degree))
    if u.degree > 0:
        _, facs = factor_univariate(u)
        for p, k in facs:
            e = p.degree
            terms = {(e - j, j): c for j, c in enumerate(p.coeffs) if c}
            out.append((HomogPoly.from_poly(normalize_factor(Poly(2, terms))), k))
    out.sort(key=lambda fk: (fk[0].degree(), sorted(fk[0].terms.items())))
    return out


def factor_homog(h: Poly) -> list[tuple[HomogPoly, int]]:
    """Irreducible factors over Q of a form in any number of variables."""
    if h.is_zero():
        raise ZeroPolynomial("factorization of the zero polynomial")
    if not h.is_homogeneous():
        raise ValueError("input must be homogeneous")
    if h.nvars == 2:
        return factor_homog_bivariate(h)
    gens = _gens(h.nvars)
    _, facs = _to_sympy(h, gens).factor_list()
    out = [
        (HomogPoly.from_poly(normalize_factor(_from_sympy(p, h.nvars))), int(k))
        for p, k in facs
        if p.total_degree() > 0
    ]
    out.sort(key=lambda fk: (fk[0].degree(), sorted(fk[0].terms.items())))
    return out


def is_squarefree_poly(f: Poly) -> bool:
    """Exact test that f has no repeated irreducible factor over Q."""
    if f.is_zero():
        raise ZeroPolynomial("square-free test of the zero polynomial")
    gens = _gens(f.nvars)
    _, facs = _to_sympy(f, gens).sqf_list()
    return all(k == 1 for p, k in facs if p.total_degree() > 0)


def reassemble(factors: list[tuple[Poly, int]], nvars: int) -> Poly:
    out = Poly.const(nvars, 1)
    for p, k in factors:
        out = out * p**k
    return out


def proportional(a: Poly, b: Poly) -> bool:
    """True when a = c * b for a nonzero rational c."""
    if a.is_zero() or b.is_zero():
        return a.is_zero() and b.is_zero()
    if set(a.terms) != set(b.terms):
        return False
    e0 = next(iter(a.terms))
    c = a.terms[e0] / b.terms[e0]
    return all(a.terms[e] == c * b.terms[e] for e in a.terms)
