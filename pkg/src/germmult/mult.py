"""Multiplicity engines and their cross-check.

Every engine answers the same question, m(X, 0) or m(X) mod 2, by a different
route:

* ``mult_order``: the order of vanishing of a square-free f;
* ``mult_fiber_complex``: the number of points of a generic projection fiber
  near the origin, counted with certified complex root isolation;
* ``mult_mod2_real``: the parity of the real points of the same fiber,
  counted exactly with Sturm sequences;
* ``mult_puiseux``: the smallest exponent of a primitive parametrization;
* ``mult_via_cone``: the component formula m = sum_j k(X_j) m(X_j) over the
  irreducible components of the tangent cone.

"For all small enough s" is replaced by a geometric schedule of radii whose
last R counts must agree.
"""

from __future__ import annotations

import math
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from .cone import GenericityCertificate, TangentCone, genericity_check, tangent_cone_hypersurface
from .errors import (
    GermMultError,
    NotGeneric,
    NotSquareFree,
    RootAtEndpoint,
    Unstable,
)
from .germ import GermSpec, PuiseuxCurve, check_primitive
from .polyring import (
    HomogPoly,
    Poly,
    UniPoly,
    complex_roots,
    is_squarefree_poly,
    restrict_line,
    specialize_first,
    poly_gcd,
    sturm_count,
    sturm_sequence,
)

MP_DPS = 60


@dataclass(frozen=True)
class StabilitySchedule:
    """Radii s0 * rho^k, k < K; counts use the window |t| <= theta * s (fiber) or eta * r (cone)."""

    s0: Fraction = Fraction(1, 8)
    rho: Fraction = Fraction(1, 2)
    K: int = 12
    theta: Fraction = Fraction(1, 4)
    R: int = 3
    eta: Fraction = Fraction(1, 4)

    def __post_init__(self):
        for name in ("s0", "rho", "theta", "eta"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if not self.K >= self.R >= 3:
            raise ValueError("schedule needs K >= R >= 3")
        if not 0 < self.theta <= 1 or not 0 < self.eta <= 1:
            raise ValueError("theta and eta must lie in (0, 1]")
        if not 0 < self.rho < 1 or self.s0 <= 0:
            raise ValueError("need s0 > 0 and 0 < rho < 1")

    def radii(self) -> list[Fraction]:
        return [self.s0 * self.rho**k for k in range(self.K)]

    @classmethod
    def from_overrides(cls, text: str | None) -> "StabilitySchedule":
        """Parse ``"K=14,theta=1/8"``; unknown keys raise ValueError."""
        if not text:
            return cls()
        kw: dict = {}
        for item in text.split(","):
            key, _, val = item.partition("=")
            key = key.strip()
            if key not in ("s0", "rho", "K", "theta", "R", "eta") or not val:
                raise ValueError(f"bad schedule override {item!r}")
            kw[key] = int(val) if key in ("K", "R") else Fraction(val.strip())
        return cls(**kw)

    def to_dict(self) -> dict:
        return {k: str(v) for k, v in asdict(self).items()}


def stabilized(counts: Sequence[int | None], R: int, what: str) -> int:
    tail = list(counts[-R:])
    if None in tail or len(set(tail)) != 1:
        raise Unstable(f"{what}: no agreement over the last {R} radii", counts)
    return tail[0]


# -- frames ---------------------------------------------------------------------


@dataclass(frozen=True)
class ProjectionFrame:
    """Kernel line L = span(v), a complement basis, and the base point u of the fibers."""

    v: tuple[Fraction, ...]
    basis: tuple[tuple[Fraction, ...], ...]
    u: tuple[Fraction, ...]
    certificate: GenericityCertificate

    def to_dict(self) -> dict:
        return {
            "v": [str(x) for x in self.v],
            "basis": [[str(x) for x in b] for b in self.basis],
            "u": [str(x) for x in self.u],
        }


def _det(rows: list[list[Fraction]]) -> Fraction:
    m = [list(map(Fraction, r)) for r in rows]
    n = len(m)
    det = Fraction(1)
    for i in range(n):
        piv = next((r for r in range(i, n) if m[r][i] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != i:
            m[i], m[piv] = m[piv], m[i]
            det = -det
        det *= m[i][i]
        for r in range(i + 1, n):
            fac = m[r][i] / m[i][i]
            for c in range(i, n):
                m[r][c] -= fac * m[i][c]
    return det


def make_frame(tc: TangentCone, v: Sequence, basis: Sequence[Sequence] | None = None, u=None) -> ProjectionFrame:
    cert = genericity_check(tc, v)
    n = tc.ambient_dim
    v = cert.direction
    if basis is None:
        basis = _complement(v)
    basis = tuple(tuple(Fraction(x) for x in b) for b in basis)
    if len(basis) != n - 1 or _det([list(v), *map(list, basis)]) == 0:
        raise ValueError("basis must complete v to a basis")
    if u is None:
        u = tuple(sum((b[i] for b in basis), Fraction(0)) for i in range(n))
    u = _unit_max(tuple(Fraction(x) for x in u))
    if _rank([list(v), list(u)]) < 2:
        raise ValueError("u and v must be independent")
    return ProjectionFrame(_unit_max(v), basis, u, genericity_check(tc, _unit_max(v)))


def _unit_max(w):
    """w scaled to max-norm 1 (stays rational for rational w)."""
    if _is_exact(w):
        return tuple(x / max(abs(y) for y in w) for x in w)
    m = max(abs(y) for y in w)
    return tuple(x / m for x in w)


def _complement(v: tuple[Fraction, ...]) -> tuple[tuple[Fraction, ...], ...]:
    """Standard basis vectors completing v to a basis."""
    n = len(v)
    out: list[tuple[Fraction, ...]] = []
    for i in range(n):
        e = tuple(Fraction(int(i == j)) for j in range(n))
        if _rank([list(v), *map(list, out), list(e)]) == len(out) + 2:
            out.append(e)
        if len(out) == n - 1:
            break
    return tuple(out)


def _rank(rows: list[list[Fraction]]) -> int:
    m = [list(map(Fraction, r)) for r in rows]
    rank, cols = 0, len(m[0])
    for c in range(cols):
        piv = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c] != 0:
                fac = m[r][c] / m[rank][c]
                m[r] = [a - fac * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def random_frame(tc: TangentCone, rng: random.Random, size: int = 9) -> ProjectionFrame:
    """Random small-integer kernel v and base point u, both off the cone, and a complement basis."""
    n = tc.ambient_dim
    for _ in range(1000):
        v = [rng.randint(-size, size) for _ in range(n)]
        if not any(v):
            continue
        try:
            genericity_check(tc, v)
        except NotGeneric:
            continue
        basis = [[rng.randint(-size, size) for _ in range(n)] for _ in range(n - 1)]
        if _det([v, *basis]) == 0:
            continue
        coeffs = [rng.choice([c for c in range(-size, size + 1) if c]) for _ in range(n - 1)]
        u = [sum(c * b[i] for c, b in zip(coeffs, basis)) for i in range(n)]
        if tc.initial(u) == 0:
            # a base point on the cone gives fiber roots o(s); keep u generic too
            continue
        return make_frame(tc, v, basis, u)
    raise NotGeneric(tuple(v), 0)


def frame_scales(f: Poly, frame: ProjectionFrame) -> tuple[float, float]:
    """(near, far): near fiber roots are ~ near * s, the others stay beyond ~ far as s -> 0.

    ``near`` is the largest root modulus of in(f)(u + c v); ``far`` the smallest
    nonzero root modulus of f(t v), which the fiber's remaining roots approach.
    """
    m = f.ord()
    h = restrict_line(f.homogeneous_part(m), frame.u, frame.v)
    near = max((abs(r.center) + r.radius for r in complex_roots(h, tol=1e-9)), default=0.0)
    line = restrict_line(f, [0] * f.nvars, frame.v)
    rest = UniPoly(line.coeffs[m:])
    far = min((abs(r.center) for r in complex_roots(rest, tol=1e-9)), default=float("inf"))
    return near, far


def frames_for(
    f, count: int, seed: int, candidates: int = 12, sched: StabilitySchedule | None = None
) -> list[ProjectionFrame]:
    """``count`` generic frames, each the best conditioned (largest far/near) of ``candidates``.

    Candidates whose fiber at the smallest radius has a repeated root (base
    point on the branch locus) are skipped.
    """
    f = _as_poly(f)
    sched = sched or StabilitySchedule()
    tc = tangent_cone_hypersurface(f)
    rng = random.Random(seed)
    s_min = sched.radii()[-1]
    out = []
    while len(out) < count:
        best, best_score = None, -1.0
        for _ in range(candidates):
            fr = random_frame(tc, rng)
            g = _fiber_polys(f, fr, [s_min])[0]
            if poly_gcd(g, g.derivative()).degree > 0:
                continue
            near, far = frame_scales(f, fr)
            score = far / max(near, 1e-3)
            if score > best_score:
                best, best_score = fr, score
        if best is not None:
            out.append(best)
    return out


# -- fiber engines -----------------------------------------------------------------


@dataclass(frozen=True)
class FiberCertificate:
    method: str
    value: int
    radii: tuple[Fraction, ...]
    counts: tuple[int | None, ...]
    window: Fraction
    frame: ProjectionFrame | None = None

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "value": self.value,
            "radii": [str(r) for r in self.radii],
            "counts": list(self.counts),
            "window": str(self.window),
            "frame": self.frame.to_dict() if self.frame else None,
        }


def _as_poly(g) -> Poly:
    if isinstance(g, Poly):
        return g
    return g.defining_poly()


def fiber_window(f: Poly, frame: ProjectionFrame, sched: StabilitySchedule) -> Fraction:
    """kappa such that the fiber's near roots, and only those, satisfy |t| <= kappa * s.

    With u and v off the cone the m near roots are t = s (c + o(1)), c a root of
    in(f)(u + c v), while the other roots tend to the nonzero roots of f(t v).
    kappa is the geometric mean of the two scales at the smallest radius (far
    scale capped at 1), never below twice the near scale or theta.
    """
    near, far = frame_scales(f, frame)
    s_min = float(sched.radii()[-1])
    lo = max(float(sched.theta), near)
    kappa = max(2 * near, math.sqrt(lo * min(far, 1.0) / s_min), float(sched.theta))
    return Fraction(math.ceil(kappa * 64), 64)


def _fiber_polys(f: Poly, frame: ProjectionFrame, radii: Sequence[Fraction]) -> list[UniPoly]:
    G = f.substitute_linear([[ui, vi] for ui, vi in zip(frame.u, frame.v)], Fraction(0))
    out = []
    for s in radii:
        g = UniPoly(specialize_first(G, s, Fraction(0)))
        if g.is_zero():
            raise NotGeneric(frame.v, 0)
        out.append(g)
    return out


def _count_distinct_in_disc(roots, radius: float) -> int | None:
    total = 0
    for r in roots:
        d = abs(r.center)
        if d + r.radius <= radius:
            total += 1
        elif d - r.radius <= radius:
            return None
    return total


def mult_fiber_complex(
    g,
    frame: ProjectionFrame | None = None,
    sched: StabilitySchedule | None = None,
    *,
    seed: int = 0,
) -> FiberCertificate:
    """Sheet number of a generic projection: points of the fiber over s*u near 0."""
    f = _as_poly(g)
    sched = sched or StabilitySchedule()
    if frame is None:
        frame = frames_for(f, 1, seed)[0]
    kappa = fiber_window(f, frame, sched)
    radii = sched.radii()
    counts: list[int | None] = []
    for s, gs in zip(radii, _fiber_polys(f, frame, radii)):
        rad = float(kappa * s)
        roots = complex_roots(gs, tol=min(1e-12, 1e-6 * rad))
        if any(r.multiplicity > 1 and abs(r.center) <= rad + r.radius for r in roots):
            counts.append(None)  # s * u lies on the branch locus
            continue
        counts.append(_count_distinct_in_disc(roots, rad))
    value = stabilized(counts, sched.R, "complex fiber count")
    return FiberCertificate("fiber_complex", value, tuple(radii), tuple(counts), kappa, frame)


def real_count_in_window(g: UniPoly, half_width: Fraction) -> int | None:
    """Distinct real roots of g in (-w, w); None when a real root in the window is multiple.

    One Sturm chain serves both questions: its last member is gcd(g, g'), and
    variation counts of the chain of a non-square-free g still count distinct
    roots away from the endpoints.
    """
    seq = sturm_sequence(g)
    repeated = seq[-1]
    rep_seq = sturm_sequence(repeated) if repeated.degree > 0 else None
    w = half_width
    for k in range(64):
        try:
            if rep_seq is not None and sturm_count(repeated, -w, w, seq=rep_seq) > 0:
                return None
            return sturm_count(g, -w, w, seq=seq)
        except RootAtEndpoint:
            w = half_width * (1 + Fraction(k + 1, 2**20))
    raise RootAtEndpoint(w)


def mult_mod2_real(
    g,
    frame: ProjectionFrame | None = None,
    sched: StabilitySchedule | None = None,
    *,
    seed: int = 0,
) -> FiberCertificate:
    """Parity of the real fiber points near 0; exact (Sturm) at every radius."""
    f = _as_poly(g)
    if isinstance(g, GermSpec) and not g.is_real:
        raise ValueError("real parity needs a real germ")
    sched = sched or StabilitySchedule()
    if frame is None:
        frame = frames_for(f, 1, seed)[0]
    kappa = fiber_window(f, frame, sched)
    radii = sched.radii()
    counts = [real_count_in_window(gs, kappa * s) for s, gs in zip(radii, _fiber_polys(f, frame, radii))]
    value = stabilized(counts, sched.R, "real fiber count")
    return FiberCertificate("fiber_real_parity", value % 2, tuple(radii), tuple(counts), kappa, frame)


# -- order and Puiseux -------------------------------------------------------------------


def mult_order(g) -> int:
    f = _as_poly(g)
    if not is_squarefree_poly(f):
        raise NotSquareFree("the order equals the multiplicity only for square-free f")
    return f.ord()


def mult_puiseux(c: PuiseuxCurve) -> int:
    """Smallest exponent of a primitive parametrization (integer exponents after t -> t^L)."""
    check_primitive(c)
    a, ys = c.integer_exponents()
    return min([a] + [b for b, _ in ys[:1]])


# -- tangent-cone component formula ----------------------------------------------------


@dataclass(frozen=True)
class ComponentCount:
    factor: str
    alg_mult: int
    reduced_degree: int
    k: int
    counts: tuple[int | None, ...]
    window: float
    point: tuple[complex, ...]


@dataclass(frozen=True)
class ConeFormulaResult:
    value: int
    table: tuple[ComponentCount, ...]

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "components": [
                {
                    "factor": c.factor,
                    "alg_mult": c.alg_mult,
                    "reduced_degree": c.reduced_degree,
                    "k": c.k,
                    "counts": list(c.counts),
                }
                for c in self.table
            ],
        }


def _mpc(x):
    if isinstance(x, Fraction):
        return mpmath.mpc(mpmath.mpf(x.numerator) / x.denominator)
    return mpmath.mpc(x)


def component_point(h: HomogPoly, rng: random.Random, size: int = 40) -> tuple:
    """A point of V(h) (complex if necessary): a root of h on a random line a + tau b."""
    n = h.nvars
    while True:
        a = [Fraction(rng.randint(-size, size)) for _ in range(n)]
        b = [Fraction(rng.randint(-size, size)) for _ in range(n)]
        if not any(b) or h(b) == 0:
            continue
        H = restrict_line(h, a, b)
        if H.degree != h.degree():
            continue
        if H.degree == 1:
            tau = -H.coeffs[0] / H.coeffs[1]
            p = tuple(ai + tau * bi for ai, bi in zip(a, b))
            if any(p):
                return _unit_max(p)
            continue
        cs = [_mpc(c) for c in reversed(H.coeffs)]
        roots = mpmath.polyroots(cs, maxsteps=200, extraprec=2 * MP_DPS * 4)
        roots = sorted(roots, key=lambda z: (float(mpmath.im(z)) < 0, float(abs(z))))
        tau = roots[0]
        return _unit_max(tuple(_mpc(ai) + tau * _mpc(bi) for ai, bi in zip(a, b)))


def _is_exact(p) -> bool:
    return all(isinstance(x, Fraction) for x in p)


def transversal(h: HomogPoly, p, rng: random.Random) -> tuple:
    """conj(grad h(p)) plus a small rational perturbation (so grad h(p) . nu != 0)."""
    grad = [d(p) for d in h.gradient()]
    if _is_exact(p):
        scale = max(abs(x) for x in grad) or Fraction(1)
        nu = tuple(x + scale * Fraction(rng.randint(-8, 8), 64) for x in grad)
        if sum(a * b for a, b in zip(grad, nu)) == 0 or not any(nu):
            return transversal(h, p, rng)
        return _unit_max(nu)
    scale = max(float(abs(x)) for x in grad) or 1.0
    nu = tuple(mpmath.conj(x) + scale * mpmath.mpf(rng.randint(-8, 8)) / 64 for x in grad)
    return _unit_max(nu)


def _line_coeffs(f: Poly, p, nu, zero) -> dict:
    return f.substitute_linear([[pi, ni] for pi, ni in zip(p, nu)], zero)


def component_window(initial: Poly, p, nu, alg_mult: int, eta: Fraction, tol: float | None = None) -> float:
    """min(eta, half the distance from 0 to the other roots of in(f)(p + c nu)).

    The coefficients of c^0 .. c^(alg_mult - 1) must vanish up to ``tol``
    relative to the largest one (p is on the component up to rounding).
    """
    exact = _is_exact(p) and _is_exact(nu)
    zero = Fraction(0) if exact else mpmath.mpc(0)
    G = _line_coeffs(initial, p, nu, zero)
    coeffs = [_mpc(c) for c in specialize_first(G, 1, zero)]
    big = max(abs(c) for c in coeffs)
    low = coeffs[:alg_mult]
    cut = big * (mpmath.mpf(10) ** (-MP_DPS // 2) if tol is None else mpmath.mpf(tol))
    if any(abs(c) > cut for c in low) or abs(coeffs[alg_mult]) == 0:
        raise NotGeneric(tuple(complex(x) for x in p), 0)
    rest = coeffs[alg_mult:]
    while rest and rest[-1] == 0:
        rest.pop()
    if len(rest) <= 1:
        return float(eta)
    roots = mpmath.polyroots([_mpc(c) for c in reversed(rest)], maxsteps=200, extraprec=400)
    nearest = min(float(abs(z)) for z in roots)
    return min(float(eta), nearest / 2)


def kx_count_complex(f: Poly, p, nu, window: float, radii: Sequence[Fraction], R: int) -> tuple[int, list]:
    """Stabilized number of complex roots of f(r p + t nu) with |t| <= window * r."""
    exact = _is_exact(p) and _is_exact(nu)
    counts: list[int | None] = []
    if exact:
        G = _line_coeffs(f, p, nu, Fraction(0))
        for r in radii:
            g = UniPoly(specialize_first(G, r, Fraction(0)))
            rad = window * float(r)
            counts.append(_count_distinct_in_disc(complex_roots(g, tol=1e-3 * rad), rad))
    else:
        with mpmath.workdps(MP_DPS):
            G = _line_coeffs(f, p, nu, mpmath.mpc(0))
            for r in radii:
                cs = specialize_first(G, mpmath.mpf(r.numerator) / r.denominator, mpmath.mpc(0))
                while cs and cs[-1] == 0:
                    cs.pop()
                rad = window * float(r)
                roots = complex_roots(cs, tol=1e-3 * rad, dps=MP_DPS)
                counts.append(_count_distinct_in_disc(roots, rad))
    return stabilized(counts, R, "cone component count"), counts


def _component_k(f, tc, comp, sched, radii, rng, attempts: int = 8) -> ComponentCount:
    """k at two independent generic points of the component; they must agree."""
    found: list[ComponentCount] = []
    last: GermMultError | None = None
    for _ in range(attempts):
        try:
            p = component_point(comp.factor, rng)
            others = [c.factor for c in tc.components if c is not comp]
            if any(abs(_mpc(o(p))) < mpmath.mpf(10) ** -20 for o in others):
                raise NotGeneric(tuple(complex(x) for x in p), 0)
            nu = transversal(comp.factor, p, rng)
            window = component_window(tc.initial, p, nu, comp.alg_mult, sched.eta)
            k, counts = kx_count_complex(f, p, nu, window, radii, sched.R)
        except (NotGeneric, Unstable) as exc:
            last = exc
            continue
        cc = ComponentCount(
            comp.factor.to_str(),
            comp.alg_mult,
            comp.reduced_degree,
            k,
            tuple(counts),
            window,
            tuple(complex(x) for x in p),
        )
        if found and found[-1].k == k:
            return found[-1]
        found.append(cc)
    if last is None:
        last = Unstable(f"component {comp.factor.to_str()}: k differs between sample points", [c.k for c in found])
    raise last


def mult_via_cone(g, sched: StabilitySchedule | None = None, *, seed: int = 0) -> ConeFormulaResult:
    """m = sum over cone components of k(X_j) * reduced degree (X_j)."""
    f = _as_poly(g)
    sched = sched or StabilitySchedule()
    tc = tangent_cone_hypersurface(f)
    rng = random.Random(seed)
    radii = sched.radii()
    table = []
    with mpmath.workdps(MP_DPS):
        for comp in tc.components:
            table.append(_component_k(f, tc, comp, sched, radii, rng))
    return ConeFormulaResult(sum(c.k * c.reduced_degree for c in table), tuple(table))


# -- cross-check -------------------------------------------------------------------------


@dataclass
class MultReport:
    name: str
    field: str
    values: dict = field(default_factory=dict)
    per_frame: list = field(default_factory=list)
    verdict: str = "OK"
    diagnostics: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "field": self.field,
            "values": dict(sorted(self.values.items())),
            "per_frame": self.per_frame,
            "verdict": self.verdict,
            "diagnostics": self.diagnostics,
        }


def cross_check(
    g: GermSpec,
    frames: int | Sequence[ProjectionFrame] = 3,
    sched: StabilitySchedule | None = None,
    *,
    seed: int = 0,
) -> MultReport:
    """Run every applicable engine; OK iff the complex values agree and the parity matches."""
    sched = sched or StabilitySchedule()
    report = MultReport(g.name, g.field)
    complex_values: dict[str, int] = {}

    def attempt(tag, fn):
        try:
            return fn()
        except GermMultError as exc:
            report.diagnostics.append(f"{tag}: {type(exc).__name__}: {exc}")
            return None

    if g.kind == "puiseux":
        m = attempt("puiseux", lambda: mult_puiseux(g.curve))
        if m is not None:
            complex_values["puiseux"] = m
        if g.implicit is None:
            report.values.update(complex_values)
            return report
    f = g.defining_poly()
    frame_list = frames_for(f, frames, seed) if isinstance(frames, int) else list(frames)

    m = attempt("order", lambda: mult_order(f))
    if m is not None:
        complex_values["order"] = m
    fiber_vals = []
    parities = []
    for i, fr in enumerate(frame_list):
        entry = {"frame": i, **fr.to_dict()}
        cert = attempt(f"fiber_complex[{i}]", lambda: mult_fiber_complex(f, fr, sched))
        if cert is not None:
            entry["fiber_complex"] = cert.value
            entry["complex_counts"] = list(cert.counts)
            fiber_vals.append(cert.value)
        if g.is_real:
            pc = attempt(f"fiber_real_parity[{i}]", lambda: mult_mod2_real(f, fr, sched))
            if pc is not None:
                entry["fiber_real_parity"] = pc.value
                entry["real_counts"] = list(pc.counts)
                parities.append(pc.value)
        report.per_frame.append(entry)
    if fiber_vals:
        if len(set(fiber_vals)) > 1:
            report.verdict = "CONFLICT"
            report.diagnostics.append(f"fiber counts differ across frames: {fiber_vals}")
        complex_values["fiber_complex"] = fiber_vals[0]
    cone = attempt("cone_formula", lambda: mult_via_cone(f, sched, seed=seed))
    if cone is not None:
        complex_values["cone_formula"] = cone.value
    report.values.update(complex_values)
    if len(set(complex_values.values())) > 1:
        report.verdict = "CONFLICT"
        report.diagnostics.append(f"complex multiplicities disagree: {complex_values}")
    if parities:
        if len(set(parities)) > 1:
            report.verdict = "CONFLICT"
            report.diagnostics.append(f"real parities differ across frames: {parities}")
        report.values["fiber_real_parity"] = parities[0]
        if complex_values and parities[0] != next(iter(complex_values.values())) % 2:
            report.verdict = "CONFLICT"
            report.diagnostics.append("real parity does not match m mod 2")
    if not complex_values:
        report.verdict = "CONFLICT"
        report.diagnostics.append("no engine produced a value")
    return report
