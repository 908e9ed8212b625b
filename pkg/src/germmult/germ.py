"""Germ specifications, mapping germs and their derivative at the origin.

A germ is either a hypersurface V(f) with f an exact polynomial, or a plane
curve given by a truncated Puiseux parametrization t -> (t^a, sum c_i t^b_i).
Mapping germs are closed-form expressions evaluated in floating point; their
derivative at 0 is decided by a published finite-difference schedule.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field, replace
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from math import gcd, lcm
from pathlib import Path
from typing import Callable, Literal, Sequence

import jsonschema
import mpmath
import numpy as np

from .errors import (
    AlreadyComplex,
    EmptyParametrization,
    InvariantViolation,
    NonPrimitive,
    SchemaError,
)
from .expr import Node, check_map_node, evaluate, parse, poly_parse
from .polyring import Poly, is_squarefree_poly

Field = Literal["real", "complex"]
Coefficient = Fraction | tuple[Fraction, Fraction]

DEFAULT_STEPS = tuple(10.0**-k for k in range(2, 9))


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files("germmult.data").joinpath(name).read_text(encoding="utf-8")
    return json.loads(text)


def _rational(v) -> Fraction:
    return Fraction(v) if not isinstance(v, str) else Fraction(v.strip())


def _rational_text(q: Fraction) -> int | str:
    return q.numerator if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# -- Puiseux curves ------------------------------------------------------------


@dataclass(frozen=True)
class PuiseuxCurve:
    """t -> (t^x_exponent, sum_i c_i t^(b_i)), truncated after ``truncation_order``."""

    x_exponent: Fraction
    y_terms: tuple[tuple[Fraction, Coefficient], ...]
    field: Field = "complex"
    truncation_order: int | None = None
    remainder: str | None = None

    def __post_init__(self):
        if self.x_exponent < 1:
            raise InvariantViolation("first exponent must be at least 1")
        exps = [b for b, _ in self.y_terms]
        if any(b <= 0 for b in exps):
            raise InvariantViolation("Puiseux exponents must be positive")
        if any(b2 <= b1 for b1, b2 in zip(exps, exps[1:])):
            raise InvariantViolation("Puiseux exponents must be strictly increasing")
        if self.field == "real" and any(isinstance(c, tuple) for _, c in self.y_terms):
            raise InvariantViolation("a real curve needs rational coefficients")

    def nonzero_terms(self) -> list[tuple[Fraction, Coefficient]]:
        return [(b, c) for b, c in self.y_terms if _coeff_nonzero(c)]

    def scale(self) -> int:
        """Smallest L making every exponent an integer after t -> t^L."""
        return lcm(self.x_exponent.denominator, *(b.denominator for b, _ in self.y_terms))

    def integer_exponents(self) -> tuple[int, list[tuple[int, Coefficient]]]:
        L = self.scale()
        return int(self.x_exponent * L), [(int(b * L), c) for b, c in self.nonzero_terms()]

    def __call__(self, t) -> tuple:
        """Point of the curve at parameter t (after the integer rescaling)."""
        a, ys = self.integer_exponents()
        y = 0
        for b, c in ys:
            y = y + _coeff_value(c) * t**b
        return t**a, y


def _coeff_nonzero(c: Coefficient) -> bool:
    return any(c) if isinstance(c, tuple) else c != 0


def _coeff_value(c: Coefficient):
    if isinstance(c, tuple):
        return complex(float(c[0]), float(c[1]))
    return float(c)


# -- germ specs ------------------------------------------------------------------


@dataclass(frozen=True)
class GermSpec:
    kind: Literal["hypersurface", "puiseux"]
    field: Field
    vars: tuple[str, ...]
    f: Poly | None = None
    curve: PuiseuxCurve | None = None
    implicit: Poly | None = None
    name: str = ""

    @property
    def ambient_dim(self) -> int:
        return len(self.vars)

    @property
    def is_real(self) -> bool:
        return self.field == "real"

    def defining_poly(self) -> Poly:
        """f for a hypersurface, or the recorded implicit equation of a curve."""
        if self.f is not None:
            return self.f
        if self.implicit is not None:
            return self.implicit
        raise ValueError(f"germ {self.name or '?'} has no implicit equation")


def hypersurface(text: str, variables: Sequence[str], field: Field = "real", name: str = "") -> GermSpec:
    """Parse and validate a hypersurface germ V(f)."""
    f = poly_parse(text, variables)
    g = GermSpec("hypersurface", field, tuple(variables), f=f, name=name)
    validate_germ(g)
    return g


def validate_germ(g: GermSpec) -> None:
    if g.field not in ("real", "complex"):
        raise InvariantViolation(f"unknown field {g.field!r}")
    if g.kind == "hypersurface":
        f = g.f
        if f is None or f.is_zero():
            raise InvariantViolation("defining polynomial must be nonzero")
        if not 2 <= f.nvars <= 4 or f.nvars != len(g.vars):
            raise InvariantViolation("ambient dimension must match the variables (2..4)")
        if f.constant_term() != 0:
            raise InvariantViolation("f(0) must vanish: the germ must contain the origin")
        if not is_squarefree_poly(f):
            raise InvariantViolation("defining polynomial is not square-free")
    elif g.kind == "puiseux":
        if g.curve is None:
            raise InvariantViolation("Puiseux germ without a parametrization")
        if len(g.vars) != 2:
            raise InvariantViolation("Puiseux curves live in the plane")
        if not g.curve.nonzero_terms() and g.curve.y_terms:
            pass
    else:
        raise InvariantViolation(f"unknown germ kind {g.kind!r}")


def germ_load(document) -> GermSpec:
    """Validate a germ-spec document (dict, JSON text or path) and build the germ."""
    doc = _read_document(document)
    try:
        jsonschema.validate(doc, load_schema("germ.schema.json"))
    except jsonschema.ValidationError as exc:
        raise SchemaError(exc.message) from exc
    name = doc.get("name", "")
    if doc["kind"] == "hypersurface":
        try:
            f = poly_parse(doc["f"], doc["vars"])
        except ValueError as exc:
            raise SchemaError(str(exc)) from exc
        g = GermSpec("hypersurface", doc["field"], tuple(doc["vars"]), f=f, name=name)
    else:
        pairs = doc["pairs"]
        if pairs[0][1] != "t-power-base":
            raise SchemaError('the first pair must be [a, "t-power-base"] giving x = t^a')
        y_terms = []
        for exp, c in pairs[1:]:
            if c == "t-power-base":
                raise SchemaError('"t-power-base" may only appear in the first pair')
            coeff = (
                (_rational(c[0]), _rational(c[1])) if isinstance(c, list) else _rational(c)
            )
            y_terms.append((_rational(exp), coeff))
        variables = tuple(doc.get("vars", ("x", "y")))
        curve = PuiseuxCurve(
            _rational(pairs[0][0]),
            tuple(y_terms),
            doc["field"],
            doc.get("truncation_order"),
            doc.get("remainder"),
        )
        implicit = poly_parse(doc["implicit"], variables) if "implicit" in doc else None
        g = GermSpec("puiseux", doc["field"], variables, curve=curve, implicit=implicit, name=name)
    validate_germ(g)
    return g


def germ_dump(g: GermSpec) -> dict:
    doc: dict = {"schema_version": 1}
    if g.name:
        doc["name"] = g.name
    doc["kind"] = g.kind
    doc["field"] = g.field
    doc["vars"] = list(g.vars)
    if g.kind == "hypersurface":
        doc["f"] = g.f.to_str(g.vars)
    else:
        c = g.curve
        pairs = [[_rational_text(c.x_exponent), "t-power-base"]]
        for b, coeff in c.y_terms:
            val = (
                [_rational_text(coeff[0]), _rational_text(coeff[1])]
                if isinstance(coeff, tuple)
                else _rational_text(coeff)
            )
            pairs.append([_rational_text(b), val])
        doc["pairs"] = pairs
        if c.truncation_order is not None:
            doc["truncation_order"] = c.truncation_order
        if c.remainder:
            doc["remainder"] = c.remainder
        if g.implicit is not None:
            doc["implicit"] = g.implicit.to_str(g.vars)
    return doc


def _read_document(document) -> dict:
    if isinstance(document, dict):
        return document
    if isinstance(document, Path) or (isinstance(document, str) and not document.lstrip().startswith("{")):
        document = Path(document).read_text(encoding="utf-8")
    try:
        return json.loads(document)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from exc


def complexify(g: GermSpec) -> GermSpec:
    """Same defining data read over C; the conjugation symmetry is automatic."""
    if g.field == "complex":
        raise AlreadyComplex(f"germ {g.name or '?'} is already complex")
    curve = replace(g.curve, field="complex") if g.curve is not None else None
    return replace(g, field="complex", curve=curve)


# -- mapping germs -----------------------------------------------------------------


@dataclass(frozen=True)
class MapGerm:
    """phi: (R^N, 0) -> (R^N, 0), or (C^n, 0) -> (C^n, 0) read as a map of R^2n."""

    texts: tuple[str, ...]
    vars: tuple[str, ...]
    field: Field = "real"
    nodes: tuple[Node, ...] = dc_field(default=(), repr=False, compare=False)
    declared_derivative: tuple[tuple[float, ...], ...] | None = None

    @property
    def dim(self) -> int:
        return len(self.vars) * (2 if self.field == "complex" else 1)

    def __call__(self, point) -> np.ndarray:
        point = [float(p) for p in point]
        if self.field == "complex":
            env = {v: complex(point[2 * i], point[2 * i + 1]) for i, v in enumerate(self.vars)}
        else:
            env = dict(zip(self.vars, point))
        vals = [evaluate(n, env) for n in self.nodes]
        if self.field == "complex":
            out = []
            for v in vals:
                v = complex(v)
                out += [v.real, v.imag]
            return np.array(out)
        return np.array([complex(v).real if isinstance(v, complex) else float(v) for v in vals])


@dataclass(frozen=True)
class CallableMap:
    """A mapping germ given by Python code (used for piecewise constructions)."""

    dim: int
    fn: Callable[[np.ndarray], np.ndarray] = dc_field(repr=False)
    label: str = ""

    def __call__(self, point) -> np.ndarray:
        return np.asarray(self.fn(np.asarray(point, dtype=float)), dtype=float)


def map_parse(
    texts: Sequence[str],
    variables: Sequence[str],
    field: Field = "real",
    declared_derivative=None,
) -> MapGerm:
    texts = tuple(texts)
    variables = tuple(variables)
    if len(texts) != len(variables):
        raise InvariantViolation("a mapping germ has one component per variable")
    nodes = tuple(parse(t) for t in texts)
    for n in nodes:
        check_map_node(n, variables)
    dd = None if declared_derivative is None else tuple(tuple(float(v) for v in row) for row in declared_derivative)
    m = MapGerm(texts, variables, field, nodes, dd)
    if np.max(np.abs(m(np.zeros(m.dim)))) != 0:
        raise InvariantViolation("every component must vanish at the origin")
    if dd is not None:
        A = derivative_at_zero(m)
        if isinstance(A, NotDifferentiable) or np.max(np.abs(A - np.array(dd))) > 1e-6:
            raise InvariantViolation("declared derivative is not confirmed by the difference quotients")
    return m


def map_load(document) -> MapGerm:
    doc = _read_document(document)
    try:
        jsonschema.validate(doc, load_schema("map.schema.json"))
    except jsonschema.ValidationError as exc:
        raise SchemaError(exc.message) from exc
    return map_parse(doc["components"], doc["vars"], doc.get("field", "real"), doc.get("declared_derivative"))


@dataclass(frozen=True)
class NotDifferentiable:
    """Outcome of a failed derivative test: the direction whose error did not decay."""

    witness: tuple[float, ...]
    errors: tuple[float, ...]
    reason: str = ""


def _unit_directions(n: int, count: int, seed: int) -> list[np.ndarray]:
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        v = rng.normal(size=n)
        out.append(v / np.linalg.norm(v))
    return out


def derivative_at_zero(
    m,
    schedule: Sequence[float] = DEFAULT_STEPS,
    *,
    n_random: int | None = None,
    seed: int = 0,
    max_ratio: float = 0.3,
    floor: float = 1e-7,
):
    """Numerical derivative of a mapping germ at 0, or ``NotDifferentiable``.

    The candidate matrix A comes from central differences along the coordinate
    axes at the finest step.  For each step h the error

        e(h) = max_d  max(|phi(+-h d) - A (+-h d)| / h,  |central quotient(d) - A d|)

    is taken over the axes and ``n_random`` (default max(3, N)) seeded random
    unit directions.  With E(h) the running maximum of e over the steps at or
    below h, phi is declared differentiable when each of the last three ratios
    E(h_{k+1}) / E(h_k) is at most ``max_ratio`` or E(h_{k+1}) is below
    ``floor * (1 + |A|)`` (rounding level at the finest steps).
    """
    steps = [float(h) for h in schedule]
    if len(steps) < 4 or any(b >= a for a, b in zip(steps, steps[1:])) or steps[-1] <= 0:
        raise ValueError("schedule must be a decreasing sequence of at least 4 positive steps")
    n = m.dim
    eye = np.eye(n)
    dirs = [eye[i] for i in range(n)] + _unit_directions(n, n_random or max(3, n), seed)
    h_min = steps[-1]
    A = np.column_stack([(m(h_min * e) - m(-h_min * e)) / (2 * h_min) for e in eye])
    errors = []
    worst = []
    for h in steps:
        best, arg = -1.0, None
        for d in dirs:
            plus, minus = m(h * d), m(-h * d)
            central = (plus - minus) / (2 * h)
            e = max(
                np.linalg.norm(plus - A @ (h * d)) / h,
                np.linalg.norm(minus + A @ (h * d)) / h,
                np.linalg.norm(central - A @ d),
            )
            if e > best:
                best, arg = e, d
        errors.append(best)
        worst.append(arg)
    envelope = [max(errors[k:]) for k in range(len(errors))]
    tiny = floor * (1 + np.linalg.norm(A))
    ok = all(
        envelope[k + 1] <= tiny or envelope[k + 1] <= max_ratio * envelope[k]
        for k in range(len(steps) - 4, len(steps) - 1)
    )
    if ok:
        return A
    k_bad = int(np.argmax(errors[len(steps) - 4:])) + len(steps) - 4
    return NotDifferentiable(
        tuple(float(x) for x in worst[k_bad]),
        tuple(float(e) for e in errors),
        "difference-quotient error does not decay along the schedule",
    )


@dataclass(frozen=True)
class IsoCheck:
    is_isomorphism: bool
    smallest_singular_value: float
    condition: float

    def __bool__(self) -> bool:
        return self.is_isomorphism


def is_isomorphism(A, tol: float = 1e-8) -> IsoCheck:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("square matrix expected")
    s = np.linalg.svd(A, compute_uv=False)
    smin, smax = float(s[-1]), float(s[0])
    cond = float("inf") if smin == 0 else smax / smin
    return IsoCheck(smin > tol, smin, cond)


# -- Puiseux consistency ------------------------------------------------------------


def _compose_exact(c: PuiseuxCurve, f: Poly) -> Poly | None:
    """f(Phi(t)) as an exact polynomial in t, when all data are rational."""
    if any(isinstance(coeff, tuple) for _, coeff in c.y_terms):
        return None
    a, ys = c.integer_exponents()
    x = Poly(2, {(a, 0): 1})
    y = Poly(2, {(b, 0): coeff for b, coeff in ys})
    out = Poly.zero(2)
    for (i, j), coeff in f.terms.items():
        out = out + (x**i) * (y**j) * coeff
    return out


def parametrization_valuation(c: PuiseuxCurve, f: Poly) -> int | None:
    """Order in t of f(Phi(t)); None when it vanishes identically."""
    comp = _compose_exact(c, f)
    if comp is None:
        raise ValueError("exact composition needs rational coefficients")
    if comp.is_zero():
        return None
    return comp.ord()


def verify_parametrization(c: PuiseuxCurve, f: Poly, orders: Sequence[float] = (1e-1, 1e-2, 1e-3)) -> float:
    """max over sampled t of |f(Phi(t))| / |Phi(t)|^ord(f); exactly 0.0 for an exact parametrization."""
    if f.nvars != 2:
        raise ValueError("Puiseux curves pair with plane polynomials")
    comp = _compose_exact(c, f)
    if comp is not None and comp.is_zero():
        return 0.0
    m = f.ord()
    ctx = mpmath.mp.clone() if hasattr(mpmath.mp, "clone") else mpmath.MPContext()
    ctx.dps = 50
    a, ys = c.integer_exponents()
    worst = 0.0
    for rho in orders:
        if c.field == "real":
            samples = [ctx.mpf(rho), -ctx.mpf(rho)]
        else:
            samples = [ctx.mpf(rho) * ctx.expjpi(ctx.mpf(2 * k) / 8) for k in range(8)]
        for t in samples:
            x = t**a
            y = 0
            for b, coeff in ys:
                cv = ctx.mpc(ctx.mpf(coeff[0]), ctx.mpf(coeff[1])) if isinstance(coeff, tuple) else ctx.mpf(coeff)
                y += cv * t**b
            val = 0
            for (i, j), q in f.terms.items():
                val += ctx.mpf(q.numerator) / q.denominator * x**i * y**j
            norm = ctx.sqrt(abs(x) ** 2 + abs(y) ** 2)
            worst = max(worst, float(abs(val) / norm**m))
    return worst


def curve_gcd(c: PuiseuxCurve) -> int:
    a, ys = c.integer_exponents()
    g = a
    for b, _ in ys:
        g = gcd(g, b)
    return g


def check_primitive(c: PuiseuxCurve) -> None:
    if not c.y_terms and c.x_exponent is None:
        raise EmptyParametrization("no terms")
    g = curve_gcd(c)
    if g > 1:
        raise NonPrimitive(g)
