"""Sparse multivariate polynomials with exact rational coefficients.

A polynomial is a map from exponent tuples to nonzero ``Fraction`` values:

    y^3 - x^2  in (x, y)  ->  {(0, 3): 1, (2, 0): -1}

Values are immutable; every operation returns a new polynomial.
"""

from __future__ import annotations

from fractions import Fraction
from types import MappingProxyType
from typing import Mapping, Sequence

from ..errors import ZeroDirection, ZeroPolynomial
from .univariate import UniPoly

Exponent = tuple[int, ...]


def _frac(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class Poly:
    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exponent, object] | None = None):
        if nvars < 1:
            raise ValueError("nvars must be positive")
        clean: dict[Exponent, Fraction] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars:
                raise ValueError(f"exponent {exp} does not have length {nvars}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            c = _frac(c)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
        self.nvars = nvars
        self._terms = {e: c for e, c in clean.items() if c}
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls(nvars)

    @classmethod
    def const(cls, nvars: int, value) -> "Poly":
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def var(cls, nvars: int, idx: int) -> "Poly":
        exp = [0] * nvars
        exp[idx] = 1
        return cls(nvars, {tuple(exp): 1})

    # -- structure ----------------------------------------------------------

    @property
    def terms(self) -> Mapping[Exponent, Fraction]:
        return MappingProxyType(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def ord(self) -> int:
        """Minimum total degree over the terms (order of vanishing at 0)."""
        if not self._terms:
            raise ZeroPolynomial("order of the zero polynomial")
        return min(sum(e) for e in self._terms)

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly(self.nvars, {e: c for e, c in self._terms.items() if sum(e) == d})

    def homogeneous_parts(self) -> dict[int, "Poly"]:
        out: dict[int, dict] = {}
        for e, c in self._terms.items():
            out.setdefault(sum(e), {})[e] = c
        return {d: Poly(self.nvars, t) for d, t in sorted(out.items())}

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.nvars, Fraction(0))

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "Poly") -> None:
        if other.nvars != self.nvars:
            raise ValueError("polynomials live in different rings")

    def __add__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.const(self.nvars, other)
        self._check(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return Poly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.const(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = _frac(other)
            return Poly(self.nvars, {e: v * c for e, v in self._terms.items()})
        self._check(other)
        out: dict[Exponent, Fraction] = {}
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, Fraction(0)) + ca * cb
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power")
        out = Poly.const(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(self.nvars, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    # -- calculus and evaluation -------------------------------------------

    def diff(self, i: int) -> "Poly":
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return Poly(self.nvars, out)

    def gradient(self) -> list["Poly"]:
        return [self.diff(i) for i in range(self.nvars)]

    def __call__(self, *point):
        """Evaluate at a point; works for any coefficient ring supporting + and *."""
        if len(point) == 1 and isinstance(point[0], (tuple, list)):
            point = tuple(point[0])
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates")
        acc = 0
        for e, c in self._terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term = term * x**k
            acc = acc + term
        return acc

    def substitute_linear(self, rows: Sequence[Sequence], zero=0) -> dict[Exponent, object]:
        """Coefficients of f(M w) where variable i becomes sum_j rows[i][j] * w_j.

        Coefficients of ``rows`` may live in any commutative ring (Fraction,
        complex, mpmath.mpc); the result is a raw term dictionary in that ring.
        """
        if len(rows) != self.nvars:
            raise ValueError("one row per variable is required")
        m = len(rows[0])
        # powers[i][k] = (sum_j rows[i][j] w_j)^k as a term dict
        cache: dict[tuple[int, int], dict[Exponent, object]] = {}
        unit = (0,) * m

        def linear(i):
            out = {}
            for j, a in enumerate(rows[i]):
                if a != 0:
                    e = [0] * m
                    e[j] = 1
                    out[tuple(e)] = a
            return out

        def mul(p, q):
            out: dict[Exponent, object] = {}
            for ea, ca in p.items():
                for eb, cb in q.items():
                    e = tuple(x + y for x, y in zip(ea, eb))
                    out[e] = out.get(e, zero) + ca * cb
            return out

        def power(i, k):
            key = (i, k)
            if key not in cache:
                if k == 0:
                    cache[key] = {unit: 1}
                elif k == 1:
                    cache[key] = linear(i)
                else:
                    half = power(i, k // 2)
                    p = mul(half, half)
                    cache[key] = mul(p, linear(i)) if k % 2 else p
            return cache[key]

        result: dict[Exponent, object] = {}
        for e, c in self._terms.items():
            term: dict[Exponent, object] = {unit: c}
            for i, k in enumerate(e):
                if k:
                    term = mul(term, power(i, k))
            for ee, cc in term.items():
                result[ee] = result.get(ee, zero) + cc
        return result

    def compose_linear(self, rows: Sequence[Sequence]) -> "Poly":
        """Exact f(M w) for a rational matrix M given row by row."""
        rows = [[_frac(a) for a in r] for r in rows]
        return Poly(len(rows[0]), self.substitute_linear(rows, Fraction(0)))

    # -- display ------------------------------------------------------------

    def to_str(self, names: Sequence[str] | None = None) -> str:
        names = names or [f"x{i}" for i in range(self.nvars)]
        if not self._terms:
            return "0"
        pieces = []
        for e in sorted(self._terms, key=lambda e: (sum(e), tuple(-k for k in e))):
            c = self._terms[e]
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k
            )
            mag = abs(c)
            sign = "-" if c < 0 else "+"
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"Poly({self.to_str()!r}, nvars={self.nvars})"


class HomogPoly(Poly):
    """A polynomial whose terms all share one total degree."""

    __slots__ = ()

    def __init__(self, nvars: int, terms: Mapping[Exponent, object] | None = None):
        super().__init__(nvars, terms)
        if not self.is_homogeneous():
            raise ValueError("terms of a HomogPoly must share one total degree")

    @classmethod
    def from_poly(cls, f: Poly) -> "HomogPoly":
        return cls(f.nvars, f.terms)


def ord_(f: Poly) -> int:
    return f.ord()


def initial_form(f: Poly) -> HomogPoly:
    """Lowest-degree homogeneous part of f."""
    if f.is_zero():
        raise ZeroPolynomial("initial form of the zero polynomial")
    return HomogPoly.from_poly(f.homogeneous_part(f.ord()))


def restrict_line(f: Poly, base: Sequence, direction: Sequence) -> UniPoly:
    """Exact g(t) = f(base + t * direction)."""
    base = [_frac(b) for b in base]
    direction = [_frac(d) for d in direction]
    if len(base) != f.nvars or len(direction) != f.nvars:
        raise ValueError("base and direction must match the number of variables")
    if all(d == 0 for d in direction):
        raise ZeroDirection("line direction must be nonzero")
    rows = [[b, d] for b, d in zip(base, direction)]
    terms = f.substitute_linear(rows, Fraction(0))
    out: dict[int, Fraction] = {}
    for (i, j), c in terms.items():
        out[j] = out.get(j, Fraction(0)) + c
    deg = max(out, default=-1)
    return UniPoly(out.get(k, 0) for k in range(deg + 1))


def bivariate_slices(G: dict[Exponent, object]) -> dict[int, dict[int, object]]:
    """Group a two-variable term dict {(i, j): c} by the power j of the second variable."""
    out: dict[int, dict[int, object]] = {}
    for (i, j), c in G.items():
        out.setdefault(j, {})[i] = c
    return out


def specialize_first(G: dict[Exponent, object], s, zero=0) -> list:
    """Coefficient list (lowest first) in the second variable of G(s, t)."""
    if not G:
        return []
    deg = max(j for _, j in G)
    coeffs = [zero] * (deg + 1)
    for (i, j), c in G.items():
        coeffs[j] = coeffs[j] + c * s**i
    return coeffs

