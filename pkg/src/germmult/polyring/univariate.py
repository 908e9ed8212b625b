"""Exact univariate polynomials over Q: gcd, square-free parts, Sturm counting."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from ..errors import NotSquareFree, RootAtEndpoint, ZeroPolynomial


def _frac(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class UniPoly:
    """Polynomial in one variable with rational coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def monomial(cls, degree: int, coeff=1) -> "UniPoly":
        return cls([0] * degree + [coeff])

    # -- basic structure ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        if not self.coeffs:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __call__(self, t):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __eq__(self, other) -> bool:
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "UniPoly(0)"
        parts = [f"{c}*t^{i}" for i, c in enumerate(self.coeffs) if c]
        return "UniPoly(" + " + ".join(parts) + ")"

    # -- ring operations ----------------------------------------------------

    def __add__(self, other: "UniPoly") -> "UniPoly":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return UniPoly(
            (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
        )

    def __neg__(self) -> "UniPoly":
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            c = _frac(other)
            return UniPoly(x * c for x in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "UniPoly":
        out = UniPoly([1])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        inv = 1 / other.lc
        if len(rem) - 1 < db:
            return UniPoly(), self
        quo = [Fraction(0)] * (len(rem) - db)
        for k in range(len(rem) - 1, db - 1, -1):
            q = rem[k] * inv
            if q:
                quo[k - db] = q
                for j, c in enumerate(other.coeffs):
                    rem[k - db + j] -= q * c
        return UniPoly(quo), UniPoly(rem[:db])

    def __floordiv__(self, other: "UniPoly") -> "UniPoly":
        return self.divmod(other)[0]

    def __mod__(self, other: "UniPoly") -> "UniPoly":
        return self.divmod(other)[1]

    def derivative(self) -> "UniPoly":
        return UniPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        return self * (1 / self.lc)

    def primitive(self) -> "UniPoly":
        """Positive rational multiple with coprime integer coefficients."""
        if self.is_zero():
            return self
        den = lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = gcd(g, v)
        return UniPoly(Fraction(v, g) for v in ints)

    def scale_variable(self, lam) -> "UniPoly":
        """Return g(lam * t)."""
        lam = _frac(lam)
        p = Fraction(1)
        out = []
        for c in self.coeffs:
            out.append(c * p)
            p *= lam
        return UniPoly(out)


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd (zero if both inputs are zero)."""
    while not b.is_zero():
        a, b = b, (a % b).primitive()
    return a.monic()


def squarefree_part(g: UniPoly) -> UniPoly:
    """Product of the distinct irreducible factors of g, made monic."""
    if g.is_zero():
        raise ZeroPolynomial("square-free part of the zero polynomial")
    if g.degree <= 0:
        return UniPoly([1])
    d = poly_gcd(g, g.derivative())
    return (g // d).monic()


def is_squarefree(g: UniPoly) -> bool:
    return poly_gcd(g, g.derivative()).degree <= 0


def squarefree_decomposition(g: UniPoly) -> list[tuple[UniPoly, int]]:
    """Yun's algorithm: monic pairwise coprime (a_i, i) with g ~ prod a_i^i."""
    if g.is_zero():
        raise ZeroPolynomial("square-free decomposition of the zero polynomial")
    out: list[tuple[UniPoly, int]] = []
    if g.degree <= 0:
        return out
    dg = g.derivative()
    a0 = poly_gcd(g, dg)
    b = g // a0
    c = dg // a0
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        if a.degree > 0:
            out.append((a, i))
        b = b // a
        c = d // a
        d = c - b.derivative()
        i += 1
    return out


def cauchy_bound(g: UniPoly) -> Fraction:
    """Rational R with every complex root of g satisfying |z| < R."""
    if g.is_zero():
        raise ZeroPolynomial("root bound of the zero polynomial")
    lc = abs(g.lc)
    if g.degree <= 0:
        return Fraction(1)
    return 1 + max(abs(c) / lc for c in g.coeffs[:-1])


# -- Sturm sequences ---------------------------------------------------------


def sturm_sequence(g: UniPoly) -> list[UniPoly]:
    """Sturm chain of g; every member is rescaled by a positive constant only."""
    seq = [g.primitive(), g.derivative().primitive()]
    while not seq[-1].is_zero():
        r = seq[-2] % seq[-1]
        seq.append((-r).primitive())
    seq.pop()
    return seq


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _variations(seq: Sequence[UniPoly], x: Fraction) -> int:
    signs = [s for s in (_sign(p(x)) for p in seq) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(g: UniPoly, lo, hi, *, seq: Sequence[UniPoly] | None = None) -> int:
    """Exact number of distinct real roots of a square-free g in the open interval (lo, hi)."""
    if g.is_zero():
        raise ZeroPolynomial("Sturm count of the zero polynomial")
    lo, hi = _frac(lo), _frac(hi)
    if not lo < hi:
        raise ValueError("need lo < hi")
    if seq is None:
        if not is_squarefree(g):
            raise NotSquareFree("Sturm counting needs a square-free polynomial")
        seq = sturm_sequence(g)
    for x in (lo, hi):
        if g(x) == 0:
            raise RootAtEndpoint(x)
    return _variations(seq, lo) - _variations(seq, hi)


def real_root_intervals(
    g: UniPoly, lo=None, hi=None, width=Fraction(1, 2**40)
) -> list[tuple[Fraction, Fraction]]:
    """Isolate the real roots of a square-free g in (lo, hi).

    Returns sorted pairs (a, b) with b - a <= width; either a == b is an exact
    root or the open interval (a, b) holds exactly one simple root and g
    changes sign across it.
    """
    if g.is_zero():
        raise ZeroPolynomial("root isolation of the zero polynomial")
    if not is_squarefree(g):
        raise NotSquareFree("root isolation needs a square-free polynomial")
    if g.degree <= 0:
        return []
    bound = cauchy_bound(g)
    lo = -bound if lo is None else _frac(lo)
    hi = bound if hi is None else _frac(hi)
    width = _frac(width)
    seq = sturm_sequence(g)
    out: list[tuple[Fraction, Fraction]] = []

    def nudge(x: Fraction, span: Fraction) -> Fraction:
        k = 8
        while g(x) == 0:
            x += span / 2**k
            k += 1
        return x

    lo = nudge(lo, hi - lo)
    hi = nudge(hi, -(hi - lo))
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        n = _variations(seq, a) - _variations(seq, b)
        if n == 0:
            continue
        if n == 1:
            out.append(_refine(g, a, b, width))
            continue
        mid = (a + b) / 2
        if g(mid) == 0:
            out.append((mid, mid))
            eps = (b - a) / 4
            while True:
                left, right = mid - eps, mid + eps
                if g(left) != 0 and g(right) != 0 and (
                    _variations(seq, left) - _variations(seq, right)
                ) == 1:
                    break
                eps /= 2
            stack.append((a, left))
            stack.append((right, b))
        else:
            stack.append((a, mid))
            stack.append((mid, b))
    out.sort()
    return out


def _refine(g: UniPoly, a: Fraction, b: Fraction, width: Fraction) -> tuple[Fraction, Fraction]:
    sa = _sign(g(a))
    while b - a > width:
        m = (a + b) / 2
        sm = _sign(g(m))
        if sm == 0:
            return m, m
        if sm == sa:
            a = m
        else:
            b = m
    return a, b
