"""Certified complex root isolation for univariate polynomials.

Roots are approximated with the Aberth-Ehrlich iteration in double precision
(starting points from the Newton polygon, so widely spread root moduli are
handled), polished by Newton steps in mpmath, and certified with Smith's
inclusion theorem: the discs |z - z_i| <= n |W_i|, W_i the Weierstrass
correction, contain every root, and a connected union of k discs holds
exactly k roots.  Returned discs are pairwise disjoint, so each holds exactly
one root.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

from ..errors import NonConvergence, ZeroPolynomial
from .univariate import UniPoly, squarefree_decomposition

_SIGMA = 0.7


@dataclass(frozen=True)
class Root:
    center: complex
    radius: float
    multiplicity: int = 1


def _to_mp(c, ctx):
    if isinstance(c, Fraction):
        return ctx.mpc(ctx.mpf(c.numerator) / c.denominator)
    return ctx.mpc(c)


def _newton_polygon_guesses(logs: list[float | None]) -> list[complex]:
    """Starting points on circles whose radii come from the upper Newton polygon."""
    pts = [(i, v) for i, v in enumerate(logs) if v is not None]
    hull: list[tuple[int, float]] = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    n = pts[-1][0]
    out: list[complex] = []
    for (i, yi), (j, yj) in zip(hull, hull[1:]):
        k = j - i
        r = math.exp((yi - yj) / k)
        for q in range(k):
            ang = 2 * math.pi * q / k + 2 * math.pi * i / n + _SIGMA
            out.append(r * cmath.exp(1j * ang))
    return out


def _aberth(coeffs: list[complex], guesses: list[complex], maxiter: int) -> list[complex]:
    n = len(coeffs) - 1
    z = list(guesses)
    done = [False] * n
    rev = coeffs[::-1]
    for _ in range(maxiter):
        if all(done):
            break
        for i in range(n):
            if done[i]:
                continue
            zi = z[i]
            p = 0j
            dp = 0j
            for c in rev:
                dp = dp * zi + p
                p = p * zi + c
            if p == 0:
                done[i] = True
                continue
            ratio = p / dp if dp != 0 else complex(1e300)
            s = 0j
            for j in range(n):
                if j != i:
                    d = zi - z[j]
                    if d != 0:
                        s += 1 / d
            denom = 1 - ratio * s
            w = ratio / denom if denom != 0 else ratio
            if not (math.isfinite(w.real) and math.isfinite(w.imag)):
                w = 0j
            z[i] = zi - w
            if abs(w) <= 1e-15 * abs(z[i]):
                done[i] = True
    return z


def _mp_eval(cs, z):
    p = 0
    dp = 0
    for c in reversed(cs):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _isolate(cs_mp: list, tol: float, ctx, maxiter: int) -> list[tuple[complex, float]]:
    """Roots of a square-free polynomial with mp coefficients (lowest first)."""
    cs = list(cs_mp)
    while cs and cs[-1] == 0:
        cs.pop()
    if not cs:
        raise ZeroPolynomial("roots of the zero polynomial")
    out: list[tuple[complex, float]] = []
    if len(cs) > 1 and cs[0] == 0:
        out.append((0j, 0.0))
        cs = cs[1:]
    n = len(cs) - 1
    if n == 0:
        return out
    if n == 1:
        z = -cs[0] / cs[1]
        zc = complex(z)
        out.append((zc, float(abs(ctx.mpc(zc) - z)) * 1.01))
        return out

    logs = [None if c == 0 else float(ctx.log(abs(c))) for c in cs]
    guesses = _newton_polygon_guesses(logs)
    # rescale t = lam * tau so double precision sees moderate coefficients
    mods = sorted(abs(g) for g in guesses)
    lam = 2.0 ** round(math.log2(mods[len(mods) // 2]))
    scaled = [c * ctx.mpf(lam) ** i for i, c in enumerate(cs)]
    top = max(abs(c) for c in scaled)
    dcoeffs = [complex(c / top) for c in scaled]
    z = _aberth(dcoeffs, [g / lam for g in guesses], maxiter)
    zs = [ctx.mpc(zz) * lam for zz in z]

    for attempt in range(4):
        # Newton polish in working precision
        for _ in range(4 + 2 * attempt):
            nz = []
            for zi in zs:
                p, dp = _mp_eval(cs, zi)
                nz.append(zi - p / dp if dp != 0 else zi)
            zs = nz
        certified = _certify(cs, zs, ctx)
        if certified is not None and all(r <= tol * max(1.0, abs(z)) for z, r in certified):
            return out + certified
        # fall back to full-precision Aberth sweeps; the Aberth correction never
        # separates equal approximations, so split those first
        zs = _separate(zs, ctx)
        for _ in range(20):
            nz = []
            for i, zi in enumerate(zs):
                p, dp = _mp_eval(cs, zi)
                if p == 0:
                    nz.append(zi)
                    continue
                ratio = p / dp
                s = sum(1 / (zi - zj) for j, zj in enumerate(zs) if j != i and zi != zj)
                nz.append(zi - ratio / (1 - ratio * s))
            zs = nz
    raise NonConvergence(f"could not certify roots of a degree-{n} polynomial to tol={tol}")


def _separate(zs: list, ctx) -> list:
    """Move approximations that (nearly) coincide apart by a small relative offset."""
    out = list(zs)
    tiny = ctx.mpf(10) ** (-ctx.dps // 2)
    for i in range(1, len(out)):
        for j in range(i):
            scale = max(abs(out[i]), abs(out[j]), tiny)
            if abs(out[i] - out[j]) <= tiny * scale:
                out[i] = out[i] + scale * ctx.mpf(10) ** -8 * ctx.expjpi(ctx.mpf(2 * i + 1) / (2 * len(out)))
                break
    return out


def _certify(cs, zs, ctx) -> list[tuple[complex, float]] | None:
    n = len(zs)
    lc = cs[-1]
    radii = []
    for i, zi in enumerate(zs):
        p, _ = _mp_eval(cs, zi)
        den = lc
        for j, zj in enumerate(zs):
            if j != i:
                den *= zi - zj
        if den == 0:
            return None
        radii.append(n * abs(p / den))
    for i in range(n):
        for j in range(i + 1, n):
            if abs(zs[i] - zs[j]) <= radii[i] + radii[j]:
                return None
    out = []
    for zi, ri in zip(zs, radii):
        zc = complex(zi)
        # widen by the rounding of the double center and a working-precision guard
        slack = abs(ctx.mpc(zc) - zi) + abs(zi) * ctx.mpf(10) ** (-ctx.dps + 5)
        out.append((zc, float(ri + slack) * (1 + 1e-12) + 5e-324))
    # the widened discs must still be disjoint
    for i in range(n):
        for j in range(i + 1, n):
            if abs(out[i][0] - out[j][0]) <= out[i][1] + out[j][1]:
                return None
    return out


def complex_roots(g, tol: float = 1e-12, *, dps: int = 40, maxiter: int = 500) -> list[Root]:
    """All complex roots of g with certified inclusion discs of radius <= tol * max(1, |z|).

    Centers are double-precision numbers, so for roots of modulus above 1 the
    bound is relative.

    ``g`` is either an exact ``UniPoly`` (its distinct roots are returned with
    multiplicities from a square-free decomposition) or a coefficient sequence,
    lowest degree first, in any numeric type mpmath accepts; the latter must be
    square-free.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    ctx = mpmath.mp.clone() if hasattr(mpmath.mp, "clone") else mpmath.MPContext()
    ctx.dps = dps
    if isinstance(g, UniPoly):
        if g.is_zero():
            raise ZeroPolynomial("roots of the zero polynomial")
        roots: list[Root] = []
        for factor, mult in squarefree_decomposition(g):
            cs = [_to_mp(c, ctx) for c in factor.coeffs]
            roots += [Root(z, r, mult) for z, r in _isolate(cs, tol, ctx, maxiter)]
        for i, a in enumerate(roots):
            for b in roots[i + 1 :]:
                if abs(a.center - b.center) <= a.radius + b.radius:
                    raise NonConvergence("roots of distinct square-free factors not separated")
    else:
        cs = [_to_mp(c, ctx) for c in g]
        roots = [Root(z, r, 1) for z, r in _isolate(cs, tol, ctx, maxiter)]
    roots.sort(key=lambda r: (round(r.center.real, 12), round(r.center.imag, 12)))
    return roots


def count_in_disc(roots: Sequence[Root], radius: float, center: complex = 0j) -> int | None:
    """Roots (with multiplicity) inside |z - center| <= radius; None if a disc straddles it."""
    total = 0
    for r in roots:
        d = abs(r.center - center)
        if d + r.radius <= radius:
            total += r.multiplicity
        elif d - r.radius <= radius:
            return None
    return total
