"""Rational geometry on spheres: exact orthonormal frames and circle probes.

The map tau -> ((1 - tau^2) a + 2 tau b) / (1 + tau^2) traces the great
circle through a and b; for rational tau and rational orthonormal a, b the
point is an exact rational unit vector.  Substituting it into a form of degree
d and clearing (1 + tau^2)^d gives an exact univariate polynomial whose real
roots are the circle's crossings with the form's zero set (tau = infinity is
the point -a).
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .polyring import Poly, UniPoly

Vector = tuple[Fraction, ...]


def quaternion_rotation(w: int, x: int, y: int, z: int) -> list[list[Fraction]]:
    """Rational rotation matrix of the quaternion (w, x, y, z) (not all zero)."""
    n = w * w + x * x + y * y + z * z
    if n == 0:
        raise ValueError("zero quaternion")
    m = [
        [w * w + x * x - y * y - z * z, 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), w * w - x * x + y * y - z * z, 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), w * w - x * x - y * y + z * z],
    ]
    return [[Fraction(v, n) for v in row] for row in m]


def plane_rotation(p: int, q: int) -> list[list[Fraction]]:
    """Rational rotation of the plane by the angle of (p^2 - q^2, 2pq)."""
    n = p * p + q * q
    c, s = Fraction(p * p - q * q, n), Fraction(2 * p * q, n)
    return [[c, -s], [s, c]]


def random_orthonormal_pair(n: int, rng: random.Random, size: int = 9) -> tuple[Vector, Vector]:
    """Two rational orthonormal vectors spanning a random plane of R^n (n = 2 or 3)."""
    if n == 2:
        p, q = rng.randint(1, size), rng.randint(0, size)
        m = plane_rotation(p, q)
    elif n == 3:
        while True:
            quat = [rng.randint(-size, size) for _ in range(4)]
            if any(quat):
                break
        m = quaternion_rotation(*quat)
    else:
        raise ValueError("probe circles are implemented for n = 2 and 3")
    a = tuple(m[i][0] for i in range(n))
    b = tuple(m[i][1] for i in range(n))
    return a, b


def circle_point(a: Sequence, b: Sequence, tau: Fraction) -> Vector:
    d = 1 + tau * tau
    return tuple(((1 - tau * tau) * ai + 2 * tau * bi) / d for ai, bi in zip(a, b))


def circle_restriction(f: Poly, a: Sequence, b: Sequence, radius: Fraction = Fraction(1)) -> UniPoly:
    """Numerator N(tau) of f(radius * circle_point(a, b, tau)) after clearing (1 + tau^2)^deg f.

    Each homogeneous part f_k contributes radius^k f_k((1 - tau^2) a + 2 tau b) (1 + tau^2)^(D - k),
    so N vanishes exactly where the circle meets V(f) (away from tau = infinity).
    """
    D = f.degree()
    one_plus = UniPoly([1, 0, 1])
    total = UniPoly([])
    for k, fk in f.homogeneous_parts().items():
        rows = [[ai, 2 * bi, -ai] for ai, bi in zip(a, b)]
        # f_k(a + tau (2b) + tau^2 (-a)) as a polynomial in the powers of (1, tau, tau^2)
        terms = fk.substitute_linear(rows, Fraction(0))
        coeffs: dict[int, Fraction] = {}
        for (i, j, l), c in terms.items():
            coeffs[j + 2 * l] = coeffs.get(j + 2 * l, Fraction(0)) + c
        deg = max(coeffs, default=-1)
        piece = UniPoly(coeffs.get(e, 0) for e in range(deg + 1))
        total = total + piece * (one_plus ** (D - k)) * UniPoly([Fraction(radius) ** k])
    return total


def approx_vector(v: Sequence[Fraction]) -> tuple[float, ...]:
    return tuple(float(c) for c in v)


def normalize(v: Sequence[float]) -> tuple[float, ...]:
    s = sum(float(c) ** 2 for c in v) ** 0.5
    return tuple(float(c) / s for c in v)
