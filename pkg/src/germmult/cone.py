"""Tangent cones of hypersurface and Puiseux germs, link membership and genericity.

For a square-free f the tangent cone C(V(f), 0) is taken to be V(in f), the
zero set of the initial form.  Its components are the irreducible factors of
in f over Q, each with its algebraic multiplicity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import sqrt
from typing import Sequence

from .errors import AmbiguousMembership, EmptyParametrization, NotGeneric, ZeroDirection
from .germ import GermSpec, PuiseuxCurve
from .polyring import HomogPoly, Poly, factor_homog, initial_form, reassemble

MEMBERSHIP_TOL = 1e-8


@dataclass(frozen=True)
class ConeComponent:
    factor: HomogPoly
    alg_mult: int

    @property
    def reduced_degree(self) -> int:
        return self.factor.degree()

    def unit_factor(self) -> list[tuple[tuple[int, ...], float]]:
        """Factor rescaled to unit coefficient norm, as (exponent, coefficient) pairs."""
        norm = sqrt(sum(float(c) ** 2 for c in self.factor.terms.values()))
        return [(e, float(c) / norm) for e, c in self.factor.terms.items()]


@dataclass(frozen=True)
class TangentCone:
    ambient_dim: int
    components: tuple[ConeComponent, ...]
    field: str
    initial: HomogPoly

    @property
    def degree(self) -> int:
        return self.initial.degree()

    def reassembled(self) -> Poly:
        return reassemble([(c.factor, c.alg_mult) for c in self.components], self.ambient_dim)

    def to_dict(self, names: Sequence[str] | None = None) -> dict:
        return {
            "ambient_dim": self.ambient_dim,
            "field": self.field,
            "initial_form": self.initial.to_str(names),
            "components": [
                {
                    "factor": c.factor.to_str(names),
                    "alg_mult": c.alg_mult,
                    "reduced_degree": c.reduced_degree,
                }
                for c in self.components
            ],
        }


@dataclass(frozen=True)
class ConeDirection:
    """A point of the link C(X, 0) ∩ S^(n-1).

    ``exact`` is a rational point on the cone component (not necessarily of
    unit norm) used by the exact counters; ``vector`` is its normalization.
    """

    vector: tuple[float, ...]
    component: int
    parity: int | None = None
    exact: tuple[Fraction, ...] | None = None


def tangent_cone_hypersurface(g: GermSpec | Poly) -> TangentCone:
    f = g if isinstance(g, Poly) else g.defining_poly()
    field = "complex" if isinstance(g, Poly) else g.field
    h = initial_form(f)
    comps = tuple(ConeComponent(p, k) for p, k in factor_homog(h))
    return TangentCone(f.nvars, comps, field, h)


def tangent_cone_puiseux(c: PuiseuxCurve) -> list[ConeDirection]:
    """Directions of the leading term of t -> (t^a, sum c_i t^b_i).

    A real curve has t ranging over R, so an even leading exponent gives one
    half-line only; a complex curve gives the whole complex line, reported by
    the real unit vector spanning it.
    """
    a, ys = c.integer_exponents()
    b, cb = ys[0] if ys else (None, None)
    if b is None or a < b:
        lead = (Fraction(1), Fraction(0))
        expo = a
    elif b < a:
        if isinstance(cb, tuple):
            lead = (Fraction(0), Fraction(1))
        else:
            lead = (Fraction(0), Fraction(1) if cb > 0 else Fraction(-1))
        expo = b
    else:
        if isinstance(cb, tuple):
            raise EmptyParametrization("complex slope: the cone is not a real line")
        lead = (Fraction(1), Fraction(cb))
        expo = a
    vec = _unit(lead)
    out = [ConeDirection(vec, 0, exact=lead)]
    if c.field == "real" and expo % 2 == 1:
        neg = tuple(-x for x in lead)
        out.append(ConeDirection(_unit(neg), 0, exact=neg))
    return out


def puiseux_cone_factor(c: PuiseuxCurve) -> HomogPoly:
    """Linear form whose zero set is the tangent line of the curve."""
    d = tangent_cone_puiseux(c)[0].exact
    return HomogPoly(2, {(1, 0): -d[1], (0, 1): d[0]})


def _unit(v: Sequence[Fraction]) -> tuple[float, ...]:
    s = sqrt(sum(float(x) ** 2 for x in v))
    return tuple(float(x) / s for x in v)


def _eval_float(terms, u: Sequence[float]) -> float:
    acc = 0.0
    for e, c in terms:
        t = c
        for x, k in zip(u, e):
            if k:
                t *= x**k
        acc += t
    return acc


def link_membership(tc: TangentCone, u: Sequence[float], tol: float = MEMBERSHIP_TOL) -> int | None:
    """Index of the cone component through the unit vector u, or None."""
    u = [float(x) for x in u]
    if len(u) != tc.ambient_dim:
        raise ValueError("dimension mismatch")
    if abs(sqrt(sum(x * x for x in u)) - 1) > 1e-12:
        raise ValueError("u must be a unit vector")
    hits = [i for i, c in enumerate(tc.components) if abs(_eval_float(c.unit_factor(), u)) <= tol]
    if len(hits) > 1:
        raise AmbiguousMembership(hits)
    return hits[0] if hits else None


@dataclass(frozen=True)
class GenericityCertificate:
    direction: tuple[Fraction, ...]
    value: Fraction


def genericity_check(tc: TangentCone, v: Sequence) -> GenericityCertificate:
    """Certificate that span(v) meets the cone only at 0: in(f)(v) != 0 exactly."""
    v = tuple(Fraction(x) for x in v)
    if all(x == 0 for x in v):
        raise ZeroDirection("kernel direction must be nonzero")
    val = tc.initial(v)
    if val == 0:
        raise NotGeneric(v, val)
    return GenericityCertificate(v, val)
