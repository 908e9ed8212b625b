"""The test corpus of square-free germs and random changes of coordinates."""

from __future__ import annotations

import random
from fractions import Fraction

from .germ import GermSpec, hypersurface, validate_germ
from .errors import InvariantViolation
from .polyring import Poly

# name, f, variables, field, multiplicity (closed form: order of f)
NAMED = [
    ("line", "y", "xy", "real", 1),
    ("cusp", "y^3 - x^2", "xy", "real", 2),
    ("cusp-23", "y^2 - x^3", "xy", "real", 2),
    ("tacnode", "y^2 - x^4", "xy", "real", 2),
    ("circle-point", "x^2 + y^2", "xy", "real", 2),
    ("node", "y^2 - x^2", "xy", "real", 2),
    ("node-2", "y^2 - 2*x^2", "xy", "real", 2),
    ("e6", "y^3 - x^4", "xy", "real", 3),
    ("d4", "x^2*y - y^3", "xy", "real", 3),
    ("smooth-tilted", "x - 2*y + x*y^2", "xy", "real", 1),
    ("example-4.2-X", "y^4 - 2*x^3*y^2 - 4*x^5*y + x^6 - x^7", "xy", "complex", 4),
    ("example-4.2-Xt", "y^4 - 2*x^3*y^2 - 4*x^6*y + x^6 - x^9", "xy", "complex", 4),
    ("example-4.2-X-real", "y^4 - 2*x^3*y^2 - 4*x^5*y + x^6 - x^7", "xy", "real", 4),
    ("surface-V", "z^3 - x^5*y - x*y^5", "xyz", "real", 3),
    ("plane", "z", "xyz", "real", 1),
    ("light-cone", "x^2 + y^2 - z^2", "xyz", "real", 2),
    ("whitney-umbrella", "x^2 - y^2*z", "xyz", "real", 2),
    ("a2-surface", "z^2 - x^3 - y^3", "xyz", "real", 2),
    ("elliptic-cone-point", "x^2 + y^2 + z^2", "xyz", "real", 2),
    ("cubic-cone", "z^3 - x^2*y - x*y^2 + z*x*y", "xyz", "real", 3),
]


def named_germs() -> list[GermSpec]:
    return [hypersurface(f, list(v), field, name) for name, f, v, field, _ in NAMED]


def expected_multiplicity(name: str) -> int:
    return next(m for n, _, _, _, m in NAMED if n == name)


def random_sparse_quartic(rng: random.Random, nvars: int = 2, terms: int = 4) -> Poly:
    """Sparse polynomial with small integer coefficients, order >= 2, degree <= 4."""
    monos = [e for e in _exponents(nvars, 4) if 2 <= sum(e) <= 4]
    while True:
        chosen = rng.sample(monos, terms)
        f = Poly(nvars, {e: rng.choice([-3, -2, -1, 1, 2, 3]) for e in chosen})
        try:
            g = GermSpec("hypersurface", "real", tuple("xyzw"[:nvars]), f=f)
            validate_germ(g)
        except InvariantViolation:
            continue
        return f


def _exponents(n: int, d: int):
    if n == 1:
        for k in range(d + 1):
            yield (k,)
        return
    for k in range(d + 1):
        for rest in _exponents(n - 1, d - k):
            yield (k,) + rest


def random_quartics(count: int = 6, seed: int = 2024) -> list[GermSpec]:
    rng = random.Random(seed)
    out = []
    for i in range(count):
        f = random_sparse_quartic(rng, 2 if i % 3 else 3)
        names = tuple("xyz"[: f.nvars])
        out.append(GermSpec("hypersurface", "real", names, f=f, name=f"random-quartic-{i}"))
    return out


def corpus(seed: int = 2024) -> list[GermSpec]:
    """Named germs plus seeded random sparse quartics (all square-free, all real-tagged but two)."""
    return named_germs() + random_quartics(6, seed)


def random_invertible(rng: random.Random, n: int, size: int = 3) -> list[list[Fraction]]:
    while True:
        A = [[Fraction(rng.randint(-size, size)) for _ in range(n)] for _ in range(n)]
        if _inverse(A) is not None:
            return A


def _inverse(A: list[list[Fraction]]) -> list[list[Fraction]] | None:
    n = len(A)
    m = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        p = m[c][c]
        m[c] = [x / p for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                fac = m[r][c]
                m[r] = [a - fac * b for a, b in zip(m[r], m[c])]
    return [row[n:] for row in m]


def inverse(A: list[list[Fraction]]) -> list[list[Fraction]]:
    inv = _inverse(A)
    if inv is None:
        raise ValueError("singular matrix")
    return inv


def pushforward(f: Poly, A: list[list[Fraction]]) -> Poly:
    """Defining polynomial of A(V(f)), namely f o A^{-1}."""
    return f.compose_linear(inverse(A))
