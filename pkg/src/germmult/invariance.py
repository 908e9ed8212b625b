"""Theorem harness: the worked examples, hypothesis checks and verdicts.

An instance bundles germs X, Y and a mapping germ phi with phi(X) = Y, tagged
with the statement it illustrates:

* ``T3.1``: phi has a derivative at 0 that is an isomorphism, so
  m(X) = m(Y) mod 2;
* ``C3.5``: phi and its inverse have a derivative at 0 (same conclusion);
* ``T4.1``: complex germs, derivative at 0 an R-linear isomorphism, so
  m(X, 0) = m(Y, 0);
* ``NegativeExample``: a hypothesis of T3.1 fails and so may the conclusion.

Verdicts follow one table: hypotheses fail -> HYPOTHESIS_FAILED_AS_EXPECTED;
hypotheses hold and invariants agree -> CONSISTENT; hypotheses hold and
invariants differ -> VIOLATION (an artifact bug, since the theorems are proved).
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

import numpy as np

from .blowup import strict_transform_sample
from .corpus import pushforward, random_invertible
from .errors import EmptyIntersection, GermMultError, Unstable
from .germ import (
    CallableMap,
    GermSpec,
    MapGerm,
    NotDifferentiable,
    PuiseuxCurve,
    check_primitive,
    derivative_at_zero,
    germ_dump,
    hypersurface,
    is_isomorphism,
    map_parse,
)
from .mult import (
    StabilitySchedule,
    cross_check,
    frames_for,
    mult_fiber_complex,
    mult_mod2_real,
    mult_order,
    mult_via_cone,
)
from .polyring import Poly, poly_parse

CONSISTENT = "CONSISTENT"
HYPOTHESIS_FAILED = "HYPOTHESIS_FAILED_AS_EXPECTED"
VIOLATION = "VIOLATION"
CLAIMS = ("T3.1", "C3.5", "T4.1", "NegativeExample")
SOUNDNESS_TOL = 1e-6


@dataclass(frozen=True)
class Expectation:
    verdict: str
    invariant: str  # "parity" or "m"
    values: tuple[int, int]
    failed_hypothesis: str | None = None


@dataclass(frozen=True)
class TheoremInstance:
    id: str
    X: GermSpec
    Y: GermSpec
    map: MapGerm | CallableMap
    claimed_theorem: str
    expected: Expectation
    notes: str = ""
    inverse: MapGerm | None = None
    map_description: tuple[str, ...] = ()

    def __post_init__(self):
        if self.claimed_theorem not in CLAIMS:
            raise ValueError(f"unknown theorem tag {self.claimed_theorem!r}")
        if self.claimed_theorem == "T4.1" and (self.X.field, self.Y.field) != ("complex", "complex"):
            raise ValueError("T4.1 instances need complex germs")
        if self.X.ambient_dim != self.Y.ambient_dim:
            raise ValueError("X and Y must live in the same ambient space")

    def to_dict(self) -> dict:
        m = self.map
        texts = list(m.texts) if isinstance(m, MapGerm) else list(self.map_description)
        out = {
            "id": self.id,
            "claimed_theorem": self.claimed_theorem,
            "X": germ_dump(self.X),
            "Y": germ_dump(self.Y),
            "map": {"components": texts, "field": getattr(m, "field", "complex")},
            "expected": {
                "verdict": self.expected.verdict,
                "invariant": self.expected.invariant,
                "values": list(self.expected.values),
                "failed_hypothesis": self.expected.failed_hypothesis,
            },
            "notes": self.notes,
        }
        if self.inverse is not None:
            out["inverse"] = {"components": list(self.inverse.texts), "field": self.inverse.field}
        return out


# -- the worked examples --------------------------------------------------------------------

SINE = "ifzero({s}, 0, {s} + 2*{s}^2*sin(1/{s}))"
X42 = "y^4 - 2*x^3*y^2 - 4*x^5*y + x^6 - x^7"
XT42 = "y^4 - 2*x^3*y^2 - 4*x^6*y + x^6 - x^9"


def _curve_germ(name: str, exps: Sequence[int], implicit: str, truncation=None, remainder=None) -> GermSpec:
    curve = PuiseuxCurve(
        Fraction(exps[0]),
        tuple((Fraction(b), Fraction(1)) for b in exps[1:]),
        "complex",
        truncation,
        remainder,
    )
    return GermSpec("puiseux", "complex", ("x", "y"), curve=curve, implicit=poly_parse(implicit, "xy"), name=name)


def example_42_map() -> CallableMap:
    """phi(Phi(t)) = Phi~(t) on X, (x, f(Re y) + i f(Im y)) elsewhere, f(s) = s + 2 s^2 sin(1/s).

    A point is on X when one of the four fourth roots t of x gives
    |t^6 + t^7 - y| <= 1e-12 |(x, y)|.
    """
    off = map_parse(["x", SINE.format(s="re(y)") + " + I*" + SINE.format(s="im(y)")], ["x", "y"], "complex")

    def fn(p: np.ndarray) -> np.ndarray:
        x, y = complex(p[0], p[1]), complex(p[2], p[3])
        size = math.hypot(abs(x), abs(y))
        if size == 0:
            return np.zeros(4)
        root = cmath.exp(cmath.log(x) / 4) if x != 0 else 0j
        for k in range(4):
            t = root * 1j**k
            if abs(t**6 + t**7 - y) <= 1e-12 * size:
                u, v = t**4, t**6 + t**9
                return np.array([u.real, u.imag, v.real, v.imag])
        return off(p)

    return CallableMap(4, fn, "example-4.2 piecewise map")


def paper_examples() -> dict[str, TheoremInstance]:
    """The five worked examples, keyed by instance id."""
    line = hypersurface("y", "xy", "real", "line")
    cusp = hypersurface("y^3 - x^2", "xy", "real", "cusp")
    surface = hypersurface("z^3 - x^5*y - x*y^5", "xyz", "real", "surface-V")
    plane = hypersurface("z", "xyz", "real", "plane")
    X = _curve_germ("X", [4, 6, 7], X42)
    Xt = _curve_germ("X~", [4, 6, 9], XT42, 9, "phi(t) with ord > 9, taken as 0")
    instances = [
        TheoremInstance(
            "paper:example-1.2",
            line,
            cusp,
            map_parse(["x", "x^(2/3) - y"], "xy"),
            "NegativeExample",
            Expectation(HYPOTHESIS_FAILED, "parity", (1, 0), "differentiable"),
            "homeomorphism with phi(X) = Y, not differentiable at 0; parities differ",
        ),
        TheoremInstance(
            "paper:cusp-flattening",
            cusp,
            line,
            map_parse(["x", "y^3 - x^2"], "xy"),
            "NegativeExample",
            Expectation(HYPOTHESIS_FAILED, "m", (2, 1), "isomorphism"),
            "differentiable homeomorphism whose derivative diag(1, 0) is not an isomorphism",
        ),
        TheoremInstance(
            "paper:cube-root-surface",
            surface,
            plane,
            map_parse(["x", "y", "z - (x^5*y + x*y^5)^(1/3)"], "xyz"),
            "C3.5",
            Expectation(CONSISTENT, "parity", (1, 1)),
            "phi and its inverse have derivative id at 0; m = 3 and 1 agree mod 2 only",
            inverse=map_parse(["x", "y", "z + (x^5*y + x*y^5)^(1/3)"], "xyz"),
        ),
        TheoremInstance(
            "paper:sine-graph",
            line,
            line,
            map_parse(["x", SINE.format(s="y")], "xy"),
            "T3.1",
            Expectation(CONSISTENT, "parity", (1, 1)),
            "derivative id at 0; the inverse has no derivative at 0 (stated, not checked)",
        ),
        TheoremInstance(
            "paper:example-4.2",
            X,
            Xt,
            example_42_map(),
            "T4.1",
            Expectation(CONSISTENT, "m", (4, 4)),
            "X and X~ have different Puiseux pairs yet equal multiplicity; "
            "phi is piecewise: Phi(t) -> Phi~(t) on X, off-curve formula elsewhere",
            map_description=(
                "Phi(t) -> Phi~(t) for (x, y) = (t^4, t^6 + t^7)",
                "x",
                SINE.format(s="re(y)") + " + I*" + SINE.format(s="im(y)"),
            ),
        ),
    ]
    return {inst.id: inst for inst in instances}


# -- verdicts --------------------------------------------------------------------------------


@dataclass
class Verdict:
    instance: str
    claimed_theorem: str
    hypotheses: dict
    invariants: dict
    compared: str
    invariants_agree: bool
    soundness: dict
    conclusion: str
    failed_hypothesis: str | None = None
    matches_expectation: bool = True
    notes: str = ""

    def to_dict(self) -> dict:
        return {
            "instance": self.instance,
            "claimed_theorem": self.claimed_theorem,
            "hypotheses": self.hypotheses,
            "invariants": self.invariants,
            "compared": self.compared,
            "invariants_agree": self.invariants_agree,
            "soundness": self.soundness,
            "conclusion": self.conclusion,
            "failed_hypothesis": self.failed_hypothesis,
            "matches_expectation": self.matches_expectation,
            "notes": self.notes,
        }


def _rounded(A) -> list[list[float]]:
    return [[round(float(x), 9) + 0.0 for x in row] for row in np.asarray(A)]


def _derivative_report(m) -> dict:
    A = derivative_at_zero(m)
    if isinstance(A, NotDifferentiable):
        return {"differentiable": False, "witness": [round(x, 9) for x in A.witness]}
    iso = is_isomorphism(A)
    return {
        "differentiable": True,
        "derivative": _rounded(A),
        "isomorphism": iso.is_isomorphism,
        "smallest_singular_value": float(f"{iso.smallest_singular_value:.6g}"),
        "condition": float(f"{iso.condition:.6g}") if math.isfinite(iso.condition) else None,
    }


def germ_invariants(g: GermSpec, sched: StabilitySchedule | None = None, *, seed: int = 0) -> dict:
    """m (and the real parity for real germs) from the cross-checked engines; Unstable if they conflict."""
    report = cross_check(g, 2, sched, seed=seed)
    if report.verdict != "OK":
        raise Unstable(f"engines disagree on {g.name}: {report.diagnostics}")
    vals = report.values
    m = vals.get("fiber_complex", vals.get("puiseux"))
    out = {"m": m}
    if g.is_real:
        out["parity"] = vals["fiber_real_parity"]
    return out


def _eval_complex(f: Poly, point: Sequence[complex]) -> complex:
    acc = 0j
    for e, c in f.terms.items():
        t = complex(float(c))
        for x, k in zip(point, e):
            if k:
                t *= x**k
        acc += t
    return acc


def sample_points(g: GermSpec, *, seed: int = 0) -> list[np.ndarray]:
    """Points of X near 0 as real coordinate vectors (interleaved re/im for complex germs)."""
    if g.curve is not None:
        out = []
        for rho in (0.25, 0.125, 0.0625):
            for k in range(8):
                t = rho * cmath.exp(2j * math.pi * (k + 0.5) / 8)
                x, y = g.curve(t)
                x, y = complex(x), complex(y)
                out.append(np.array([x.real, x.imag, y.real, y.imag]))
        return out
    if g.field == "complex":
        return _complex_points(g.defining_poly(), seed)
    radii = [Fraction(1, 2**k) for k in range(4, 11, 2)]
    try:
        cloud = strict_transform_sample(g, radii, per_radius=4, seed=seed)
    except EmptyIntersection:
        return []
    return [r * np.array(u) for u, r, _ in cloud.samples]


def _complex_points(f: Poly, seed: int) -> list[np.ndarray]:
    """Fiber points s*u + t*v of V(f) for complex s on small circles, t the ord(f) nearest roots."""
    frame = frames_for(f, 1, seed)[0]
    rows = [[a, b] for a, b in zip(frame.u, frame.v)]
    terms = f.substitute_linear(rows, Fraction(0))
    deg = max(j for _, j in terms)
    m = f.ord()
    u = np.array([float(x) for x in frame.u])
    v = np.array([float(x) for x in frame.v])
    out = []
    for rho in (0.25, 0.125, 0.0625):
        for k in range(4):
            s = rho * cmath.exp(2j * math.pi * (k + 0.5) / 4)
            cs = [0j] * (deg + 1)
            for (i, j), c in terms.items():
                cs[j] += float(c) * s**i
            for t in sorted(np.roots(cs[::-1]), key=abs)[:m]:
                z = s * u + t * v
                out.append(np.column_stack([z.real, z.imag]).ravel())
    return out


def soundness_check(inst: TheoremInstance, *, seed: int = 0) -> dict:
    """max |f_Y(phi(x))| / |phi(x)|^ord f_Y over sampled x in X (a tube test, not a proof)."""
    fY = inst.Y.defining_poly()
    d = fY.ord()
    worst = 0.0
    pts = sample_points(inst.X, seed=seed)
    for p in pts:
        q = inst.map(p)
        if inst.Y.field == "complex":
            z = [complex(q[2 * i], q[2 * i + 1]) for i in range(len(q) // 2)]
        else:
            z = [complex(v) for v in q]
        size = float(np.linalg.norm(q))
        if size == 0:
            continue
        worst = max(worst, abs(_eval_complex(fY, z)) / size**d)
    out = {"samples": len(pts), "max_residual": float(f"{worst:.3g}"), "passed": worst <= SOUNDNESS_TOL}
    if inst.claimed_theorem == "T4.1" and inst.X.curve is not None:
        # phi(Phi(t)) - Phi(t) = o(|Phi(t)|), as Dphi_0 = id demands along X
        ratios = []
        for rho in (1e-1, 1e-2, 1e-3):
            t = rho * cmath.exp(0.7j)
            x, y = inst.X.curve(t)
            p = np.array([complex(x).real, complex(x).imag, complex(y).real, complex(y).imag])
            ratios.append(float(np.linalg.norm(inst.map(p) - p) / np.linalg.norm(p)))
        out["curve_displacement_ratios"] = [float(f"{r:.3g}") for r in ratios]
        out["passed"] = out["passed"] and ratios[-1] < ratios[0]
    return out


def verify_instance(inst: TheoremInstance, sched: StabilitySchedule | None = None, *, seed: int = 0) -> Verdict:
    """Check the hypotheses on phi, compute the invariants of X and Y, apply the decision table."""
    hyp = _derivative_report(inst.map)
    failed = None
    if not hyp["differentiable"]:
        failed = "differentiable"
    elif not hyp["isomorphism"]:
        failed = "isomorphism"
    if inst.claimed_theorem == "C3.5" and inst.inverse is not None:
        inv = _derivative_report(inst.inverse)
        hyp["inverse_differentiable"] = inv["differentiable"]
        if not inv["differentiable"] and failed is None:
            failed = "inverse differentiable"
    compared = "m" if inst.claimed_theorem == "T4.1" else "parity"
    invX = germ_invariants(inst.X, sched, seed=seed)
    invY = germ_invariants(inst.Y, sched, seed=seed)
    agree = invX[compared] == invY[compared]
    if failed is not None:
        conclusion = HYPOTHESIS_FAILED
    else:
        conclusion = CONSISTENT if agree else VIOLATION
    exp = inst.expected
    matches = (
        conclusion == exp.verdict
        and (invX[exp.invariant], invY[exp.invariant]) == tuple(exp.values)
        and failed == exp.failed_hypothesis
    )
    return Verdict(
        inst.id,
        inst.claimed_theorem,
        hyp,
        {"X": invX, "Y": invY},
        compared,
        agree,
        soundness_check(inst, seed=seed),
        conclusion,
        failed,
        matches,
        inst.notes,
    )


# -- linear invariance ---------------------------------------------------------------------


def linear_instances(germs: Sequence[GermSpec], seed: int = 0) -> list[TheoremInstance]:
    """One instance per germ: X, its image under a random rational linear isomorphism A, and A.

    The hypotheses hold by construction, so any disagreement of the invariants
    is a VIOLATION.  Complex germs are claimed under T4.1, real ones under T3.1.
    """
    rng = random.Random(seed)
    out = []
    for g in germs:
        n = g.ambient_dim
        A = random_invertible(rng, n)
        texts = ["+".join(f"({A[i][j]})*{g.vars[j]}" for j in range(n)) for i in range(n)]
        Y = GermSpec("hypersurface", g.field, g.vars, f=pushforward(g.defining_poly(), A), name=f"{g.name}-image")
        claim = "T4.1" if g.field == "complex" else "T3.1"
        m = g.defining_poly().ord()
        expected = Expectation(CONSISTENT, "m", (m, m)) if claim == "T4.1" else Expectation(CONSISTENT, "parity", (m % 2,) * 2)
        out.append(
            TheoremInstance(
                f"linear:{g.name}",
                g,
                Y,
                map_parse(texts, g.vars, g.field),
                claim,
                expected,
                notes="random rational linear change of coordinates",
            )
        )
    return out


@dataclass
class LinearInvarianceReport:
    germ: str
    base: dict
    trials: list = field(default_factory=list)
    mismatches: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> dict:
        return {"germ": self.germ, "base": self.base, "trials": self.trials, "mismatches": self.mismatches}


def engine_values(f: Poly, real: bool, sched: StabilitySchedule | None = None, *, seed: int = 0) -> dict:
    """order, fiber_complex, cone_formula (and fiber_real_parity) of V(f); errors are recorded as values."""
    sched = sched or StabilitySchedule()
    out: dict = {}

    def run(tag, fn):
        try:
            out[tag] = fn()
        except GermMultError as exc:
            out[tag] = type(exc).__name__

    frame = frames_for(f, 1, seed, sched=sched)[0]
    run("order", lambda: mult_order(f))
    run("fiber_complex", lambda: mult_fiber_complex(f, frame, sched).value)
    run("cone_formula", lambda: mult_via_cone(f, sched, seed=seed).value)
    if real:
        run("fiber_real_parity", lambda: mult_mod2_real(f, frame, sched).value)
    return out


def linear_invariance_suite(
    g: GermSpec, trials: int = 5, seed: int = 0, sched: StabilitySchedule | None = None
) -> LinearInvarianceReport:
    """Every engine on f and on f o A^(-1) for ``trials`` random rational invertible A."""
    f = g.defining_poly()
    rng = random.Random(seed)
    base = engine_values(f, g.is_real, sched, seed=seed)
    report = LinearInvarianceReport(g.name, base)
    for i in range(trials):
        A = random_invertible(rng, f.nvars)
        vals = engine_values(pushforward(f, A), g.is_real, sched, seed=seed + i + 1)
        entry = {"A": [[str(x) for x in row] for row in A], "values": vals}
        report.trials.append(entry)
        if vals != base:
            report.mismatches.append(entry)
    return report


# -- Puiseux pairs -------------------------------------------------------------------------


@dataclass(frozen=True)
class PuiseuxPairNote:
    pairs: tuple[tuple[tuple[int, int], ...], tuple[tuple[int, int], ...]]
    differ: bool

    def to_dict(self) -> dict:
        return {"pairs": [[list(p) for p in ps] for ps in self.pairs], "differ": self.differ}


def characteristic_pairs(c: PuiseuxCurve) -> tuple[tuple[int, int], ...]:
    """Characteristic exponents b / n as reduced (numerator, denominator) pairs.

    With x = t^n, an exponent b of y is characteristic when the gcd of n and
    the earlier exponents does not divide it; the scan stops once that gcd is 1.
    """
    check_primitive(c)
    n, ys = c.integer_exponents()
    if ys and ys[0][0] < n:
        raise ValueError("x = t^n must carry the multiplicity (n <= first y exponent)")
    e, out = n, []
    for b, _ in ys:
        if e == 1:
            break
        if b % e:
            q = Fraction(b, n)
            out.append((q.numerator, q.denominator))
            e = gcd(e, b)
    return tuple(out)


def puiseux_pair_note(c1: PuiseuxCurve, c2: PuiseuxCurve) -> PuiseuxPairNote:
    p1, p2 = characteristic_pairs(c1), characteristic_pairs(c2)
    return PuiseuxPairNote((p1, p2), p1 != p2)
