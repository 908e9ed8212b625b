"""Spherical blow-up: strict transform samples, k_X at link directions, the odd part.

The blow-up beta(u, r) = r u separates the directions at the origin.  A
direction p of the real link C_X = C(X, 0) ∩ S^(n-1) lifts to the boundary
point (p, 0) of the strict transform X', and k_X(p) is the number of local
sheets of X' there.  Each sheet is a graph over the cone near p, so k_X(p) is
read off as the number of real roots t of f(r p + t nu) with |t| <= eta r for
small r, nu a transversal to the cone at p.  Counts are exact (Sturm) and
stabilized over the radii of a ``StabilitySchedule``.

The odd part C_X' collects the directions with odd k_X, and m_pi(C_X') counts
odd directions in the fibers of u -> pi(u) / |pi(u)|.
"""

from __future__ import annotations

import csv
import io
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cone import ConeDirection, TangentCone, tangent_cone_hypersurface
from .errors import (
    ComponentSplitSuspected,
    Disagreement,
    EmptyIntersection,
    NonGenericFiber,
    NotGeneric,
    ScreenFailed,
    Unstable,
)
from .germ import GermSpec
from .mult import ProjectionFrame, StabilitySchedule, component_window, real_count_in_window, stabilized
from .polyring import (
    HomogPoly,
    Poly,
    UniPoly,
    is_squarefree,
    poly_gcd,
    real_root_intervals,
    restrict_line,
    squarefree_part,
)
from .sphere import circle_point, circle_restriction, normalize, random_orthonormal_pair

SNAP = Fraction(1, 2**80)
ON_CONE_TOL = 1e-18  # relative size of in(f) terms that must vanish at a snapped link point
SEPARATION = 1e-6
LINK_SAMPLES = 64


def _poly(g) -> Poly:
    return g if isinstance(g, Poly) else g.defining_poly()


def _max_scale(v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    m = max(abs(x) for x in v)
    return tuple(x / m for x in v)


def _dyadic(v: Sequence[Fraction], bits: int) -> tuple[Fraction, ...]:
    """Round to the grid 2^-bits after max-norm scaling (keeps Sturm chains small)."""
    scale = 2**bits
    v = _max_scale(v)
    if all(x.denominator <= scale for x in v):
        return v
    return tuple(Fraction(round(x * scale), scale) for x in v)


def _real_roots(g: UniPoly, lo=None, hi=None, width: Fraction = SNAP) -> list[Fraction]:
    """Rational approximations (width ``width``) of the distinct real roots of g."""
    if g.degree <= 0:
        return []
    sf = squarefree_part(g)
    if sf.degree == 1:
        t = -sf.coeffs[0] / sf.coeffs[1]
        inside = (lo is None or t > lo) and (hi is None or t < hi)
        return [t] if inside else []
    return [(a + b) / 2 for a, b in real_root_intervals(sf, lo, hi, width)]


# -- link directions --------------------------------------------------------------------


def link_directions_plane(h: HomogPoly) -> list[tuple[Fraction, ...]]:
    """Rational points (max-norm 1) on both rays of every real line of V(h) in R^2."""
    lines = []
    if h((Fraction(0), Fraction(1))) == 0:
        lines.append((Fraction(0), Fraction(1)))
    dehom = restrict_line(h, (1, 0), (0, 1))  # h(1, s)
    lines += [_dyadic((Fraction(1), s), 80) for s in _real_roots(dehom)]
    out = []
    for p in lines:
        out += [p, tuple(-x for x in p)]
    return sorted(out)


def link_points_circle(h: HomogPoly, a, b) -> list[tuple[Fraction, ...]]:
    """Points of the great circle through a, b (orthonormal) on V(h)."""
    N = circle_restriction(h, a, b)
    pts = [_dyadic(circle_point(a, b, tau), 80) for tau in _real_roots(N)]
    if h(tuple(-x for x in a)) == 0:
        pts.append(tuple(-x for x in a))
    return pts


def link_samples_space(h: HomogPoly, count: int, rng: random.Random, max_circles: int = 200) -> list[tuple[Fraction, ...]]:
    """About ``count`` points of the real link V(h) ∩ S^2 cut out by random great circles."""
    pts: list[tuple[Fraction, ...]] = []
    for _ in range(max_circles):
        a, b = random_orthonormal_pair(3, rng)
        pts += link_points_circle(h, a, b)
        if len(pts) >= count:
            break
    return pts[:count]


def _on_other_component(tc: TangentCone, idx: int, p, tol: float = 1e-9) -> bool:
    for j, c in enumerate(tc.components):
        if j == idx:
            continue
        norm = math.sqrt(sum(float(x) ** 2 for x in c.factor.terms.values()))
        if abs(float(c.factor(p))) <= tol * norm:
            return True
    return False


def _direction(p, component: int, parity=None) -> ConeDirection:
    return ConeDirection(normalize([float(x) for x in p]), component, parity, tuple(p))


# -- k_X at a direction -------------------------------------------------------------------


def cone_normal(tc: TangentCone, component: int, p) -> tuple[Fraction, ...]:
    """Gradient of the cone factor at p, scaled to max-norm 1; NotGeneric if it vanishes."""
    grad = [d(p) for d in tc.components[component].factor.gradient()]
    if not any(grad):
        raise NotGeneric(tuple(float(x) for x in p), 0)
    return _dyadic(grad, 16)


def _window(tc: TangentCone, component: int, p, nu, eta: Fraction) -> Fraction:
    w = component_window(tc.initial, p, nu, tc.components[component].alg_mult, eta, ON_CONE_TOL)
    return Fraction(w).limit_denominator(2**20) if w < float(eta) else Fraction(eta)


def _fiber(f: Poly, p, nu, r: Fraction) -> UniPoly:
    return restrict_line(f, [r * x for x in p], nu)


def root_pattern(f: Poly, p, nu, r: Fraction, window: Fraction) -> tuple[int, ...] | None:
    """Signs of the real roots t in [-w r, w r] of f(r p + t nu), or None when they are not separated."""
    g = _fiber(f, p, nu, r)
    if real_count_in_window(g, window * r) is None:
        return None
    w = window * r
    roots = [t for t in _real_roots(g, -w, w, width=w * Fraction(1, 2**40)) if abs(t) <= w]
    if any(b - a < SEPARATION * r for a, b in zip(roots, roots[1:])):
        return None
    return tuple((t > 0) - (t < 0) for t in roots)


@dataclass(frozen=True)
class ScreenResult:
    passed: bool
    patterns: tuple
    radii: tuple[Fraction, ...]


def simple_point_screen(
    g, p: ConeDirection, r: Fraction, eta: Fraction | None = None, rho: Fraction = Fraction(1, 2)
) -> ScreenResult:
    """Same transversal root pattern at r, r rho, r rho^2, with separated roots."""
    f = _poly(g)
    tc = tangent_cone_hypersurface(f)
    eta = StabilitySchedule().eta if eta is None else eta
    x = p.exact or tuple(Fraction(c) for c in p.vector)
    nu = cone_normal(tc, p.component, x)
    window = _window(tc, p.component, x, nu, eta)
    radii = (r, r * rho, r * rho * rho)
    patterns = tuple(root_pattern(f, x, nu, s, window) for s in radii)
    ok = patterns[0] is not None and len(set(patterns)) == 1
    return ScreenResult(ok, patterns, radii)


@dataclass(frozen=True)
class KxCertificate:
    k: int
    counts: tuple[int | None, ...]
    window: Fraction
    direction: ConeDirection
    local_check: str
    local_k: int

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "counts": list(self.counts),
            "window": str(self.window),
            "direction": [round(x, 12) for x in self.direction.vector],
            "component": self.direction.component,
            "local_check": self.local_check,
            "local_k": self.local_k,
        }


def _k_count(f, tc, component, p, nu, sched) -> tuple[int, tuple, Fraction]:
    window = _window(tc, component, p, nu, sched.eta)
    counts = [real_count_in_window(_fiber(f, p, nu, r), window * r) for r in sched.radii()]
    return stabilized(counts, sched.R, "k_X count"), tuple(counts), window


def _slide(tc: TangentCone, component: int, p, delta: Fraction):
    """Move p by delta along the link (tangent = grad x p) and snap back onto the cone."""
    h = tc.components[component].factor
    grad = cone_normal(tc, component, p)
    tangent = (
        grad[1] * p[2] - grad[2] * p[1],
        grad[2] * p[0] - grad[0] * p[2],
        grad[0] * p[1] - grad[1] * p[0],
    )
    scale = max(abs(x) for x in tangent)
    if scale == 0:
        raise NotGeneric(tuple(float(x) for x in p), 0)
    q = tuple(x + delta * t / scale for x, t in zip(p, tangent))
    cs = _real_roots(restrict_line(h, q, grad), -Fraction(1, 4), Fraction(1, 4))
    if not cs:
        raise NotGeneric(tuple(float(x) for x in q), 0)
    c = min(cs, key=abs)
    return _dyadic(tuple(x + c * gx for x, gx in zip(q, grad)), 80)


def kx_at_direction(g, p: ConeDirection, sched: StabilitySchedule | None = None, *, seed: int = 0) -> KxCertificate:
    """k_X(p): stabilized exact count of the sheets of X' through (p, 0).

    The local-constancy check recomputes k at a nearby point of the same link
    component (n = 3) or, when the component is a single direction (n = 2),
    along an independently perturbed transversal.
    """
    f = _poly(g)
    sched = sched or StabilitySchedule()
    tc = tangent_cone_hypersurface(f)
    x = p.exact or tuple(Fraction(c) for c in p.vector)
    radii = sched.radii()
    screen = simple_point_screen(f, p, radii[-3], sched.eta, sched.rho)
    if not screen.passed:
        raise ScreenFailed(f"transversal root pattern changes near {p.vector}: {screen.patterns}")
    nu = cone_normal(tc, p.component, x)
    k, counts, window = _k_count(f, tc, p.component, x, nu, sched)
    rng = random.Random(seed)
    if f.nvars == 2:
        nu2 = _max_scale(tuple(c + Fraction(rng.randint(-8, 8), 64) for c in nu))
        local_k = _k_count(f, tc, p.component, x, nu2, sched)[0]
        how = "transversal perturbed"
    else:
        how = "slid along the link"
        local_k = None
        for delta in (Fraction(1, 256), Fraction(1, 4096), Fraction(1, 65536)):
            q = _slide(tc, p.component, x, delta * (1 if rng.random() < 0.5 else -1))
            try:
                local_k = _k_count(f, tc, p.component, q, cone_normal(tc, p.component, q), sched)[0]
            except Unstable:
                continue
            if local_k == k:
                break
    if local_k != k:
        raise Unstable(f"k_X not locally constant at {p.vector}: {k} vs {local_k}", counts)
    return KxCertificate(k, counts, window, p, how, local_k)


# -- the odd part ----------------------------------------------------------------------------


@dataclass(frozen=True)
class OddComponent:
    component: int
    factor: str
    parity: str  # "odd" | "even" | "empty"
    k_values: tuple[int, ...]
    witnesses: tuple[ConeDirection, ...]
    skipped: int = 0


@dataclass(frozen=True)
class OddPart:
    ambient_dim: int
    components: tuple[OddComponent, ...]
    directions: tuple[ConeDirection, ...]  # n = 2: every link direction with its k parity

    def odd_directions(self) -> list[ConeDirection]:
        return [d for d in self.directions if d.parity == 1]

    def tag(self, component: int) -> str:
        return self.components[component].parity

    def to_dict(self) -> dict:
        return {
            "ambient_dim": self.ambient_dim,
            "components": [
                {
                    "component": c.component,
                    "factor": c.factor,
                    "parity": c.parity,
                    "k_values": sorted(set(c.k_values)),
                    "witnesses": len(c.witnesses),
                    "skipped": c.skipped,
                }
                for c in self.components
            ],
            "directions": [
                {"vector": [round(x, 12) for x in d.vector], "component": d.component, "parity": d.parity}
                for d in self.directions
            ],
        }


def odd_part(g, sched: StabilitySchedule | None = None, *, seed: int = 0, samples: int = LINK_SAMPLES) -> OddPart:
    """C_X': link directions grouped by cone component with the parity of k_X.

    A direction with k = 0 carries no germ points nearby (one-sided real
    branches) and is absent from the simple boundary; it is recorded as even.
    In R^3 the parity of a component is decided by ``samples`` link points and
    must be unanimous.
    """
    f = _poly(g)
    sched = sched or StabilitySchedule()
    tc = tangent_cone_hypersurface(f)
    names = g.vars if isinstance(g, GermSpec) else None
    rng = random.Random(seed)
    n = f.nvars
    if n not in (2, 3):
        raise ValueError("the blow-up is implemented for n = 2 and 3")
    comps, dirs = [], []
    for idx, comp in enumerate(tc.components):
        if n == 2:
            pts = link_directions_plane(comp.factor)
        else:
            pts = link_samples_space(comp.factor, samples, rng)
        ks, wits, skipped = [], [], 0
        for p in pts:
            if _on_other_component(tc, idx, p):
                skipped += 1
                continue
            d = _direction(p, idx)
            try:
                cert = kx_at_direction(f, d, sched, seed=rng.randrange(2**32))
            except (ScreenFailed, Unstable, NotGeneric):
                skipped += 1
                if n == 2:
                    dirs.append(d)
                continue
            d = _direction(p, idx, cert.k % 2)
            ks.append(cert.k)
            wits.append(d)
            if n == 2:
                dirs.append(d)
        parities = {k % 2 for k in ks}
        if len(parities) > 1:
            raise ComponentSplitSuspected(idx, [(w.vector, k) for w, k in zip(wits, ks)])
        parity = "empty" if not ks else ("odd" if parities == {1} else "even")
        comps.append(OddComponent(idx, comp.factor.to_str(names), parity, tuple(ks), tuple(wits), skipped))
    dirs.sort(key=lambda d: (d.component, d.vector))
    return OddPart(n, tuple(comps), tuple(dirs))


# -- m_pi(C_X') -------------------------------------------------------------------------------


def _coords(frame: ProjectionFrame, u) -> list[Fraction]:
    """Coordinates of u in the basis (b_1, ..., b_d, v) (exact Cramer solve)."""
    from .corpus import inverse

    cols = list(frame.basis) + [frame.v]
    n = len(cols)
    M = [[cols[j][i] for j in range(n)] for i in range(n)]
    inv = inverse(M)
    return [sum(inv[i][j] * Fraction(u[j]) for j in range(n)) for i in range(n)]


@dataclass(frozen=True)
class OddMultResult:
    value: int
    fibers: tuple[dict, ...]

    def to_dict(self) -> dict:
        return {"value": self.value, "fibers": list(self.fibers)}


def odd_mult(
    g,
    frame: ProjectionFrame,
    sched: StabilitySchedule | None = None,
    *,
    seed: int = 0,
    part: OddPart | None = None,
    fibers: int = 3,
) -> OddMultResult:
    """Parity of #(pi'^(-1)(y) ∩ C_X') for generic y, pi'(u) = pi(u) / |pi(u)|.

    n = 2: y = +1 and y = -1 both count odd directions on their side of L.
    n = 3: the fiber over y is the open half great circle through w_y = y_1 b_1 + y_2 b_2
    from -v to v; its crossings with the link are the real roots tau of
    h_j(w_y + tau v).  Every fiber must give the same parity.
    """
    f = _poly(g)
    sched = sched or StabilitySchedule()
    tc = tangent_cone_hypersurface(f)
    part = part or odd_part(f, sched, seed=seed)
    rng = random.Random(seed)
    results = []
    if f.nvars == 2:
        for y in (1, -1):
            hits = [d for d in part.odd_directions() if (_coords(frame, d.exact)[0] > 0) == (y > 0)]
            results.append({"y": [y], "crossings": len(hits), "parity": len(hits) % 2})
    else:
        for _ in range(fibers):
            q = Fraction(rng.randint(-64, 64), rng.randint(1, 64))
            y = ((1 - q * q) / (1 + q * q), 2 * q / (1 + q * q))
            w = tuple(y[0] * a + y[1] * b for a, b in zip(*frame.basis))
            results.append(_fiber_crossings(f, tc, part, frame, w, y, sched, rng))
    parities = {r["parity"] for r in results}
    if len(parities) != 1:
        raise Disagreement(f"fibers of pi' disagree: {results}")
    return OddMultResult(parities.pop(), tuple(results))


def _fiber_crossings(f, tc, part, frame, w, y, sched, rng) -> dict:
    polys = [restrict_line(c.factor, w, frame.v) for c in tc.components]
    for j, H in enumerate(polys):
        if not is_squarefree(H):
            raise NonGenericFiber(f"fiber over {y} is tangent to cone component {j}")
        for H2 in polys[j + 1 :]:
            if poly_gcd(H, H2).degree > 0:
                raise NonGenericFiber(f"fiber over {y} passes through two cone components")
    count, per = 0, []
    for j, H in enumerate(polys):
        tag = part.tag(j)
        for tau in _real_roots(H):
            if tag in ("odd", "even"):
                odd = tag == "odd"
            else:
                p = _dyadic(tuple(a + tau * b for a, b in zip(w, frame.v)), 80)
                try:
                    cert = kx_at_direction(f, _direction(p, j), sched, seed=rng.randrange(2**32))
                except (ScreenFailed, Unstable, NotGeneric) as exc:
                    raise NonGenericFiber(f"crossing of component {j} is not a simple point: {exc}")
                odd = cert.k % 2 == 1
            per.append({"component": j, "odd": odd})
            count += odd
    return {"y": [str(c) for c in y], "crossings": len(per), "odd_crossings": count, "parity": count % 2}


# -- strict transform samples ----------------------------------------------------------------


@dataclass
class BlowupCloud:
    """Samples (u, r, tag) of beta^(-1)(X \\ {0}) with u on the unit sphere."""

    germ: str
    ambient_dim: int
    samples: list[tuple[tuple[float, ...], float, str]] = field(default_factory=list)
    empty_radii: list[float] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for r in self.empty_radii:
            buf.write(f"# EmptyIntersection at r={r!r}\n")
        w.writerow([f"u{i + 1}" for i in range(self.ambient_dim)] + ["r", "tag"])
        for u, r, tag in self.samples:
            w.writerow([f"{x:.15g}" for x in u] + [f"{r:.15g}", tag])
        return buf.getvalue()

    def directions_at(self, r: float) -> list[tuple[float, ...]]:
        return [u for u, rr, _ in self.samples if rr == r]


def _sphere_hits(f: Poly, r: Fraction, a, b, tag: str) -> list[tuple[tuple[float, ...], float, str]]:
    N = circle_restriction(f, a, b, r)
    out = []
    if N.is_zero():
        raise NotGeneric(tuple(float(x) for x in a), 0)
    for tau in _real_roots(N, width=Fraction(1, 2**60)):
        out.append((normalize([float(x) for x in circle_point(a, b, tau)]), float(r), tag))
    if f(tuple(-r * x for x in a)) == 0:
        out.append((tuple(-float(x) + 0.0 for x in a), float(r), tag))
    return out


def strict_transform_sample(
    g: GermSpec, radii: Sequence[Fraction] | None = None, per_radius: int = 8, *, seed: int = 0
) -> BlowupCloud:
    """Directions x / |x| of the points x of X on spheres |x| = r.

    n = 2: the whole circle of radius r is solved exactly.  n = 3: ``per_radius``
    random great circles of the sphere.  Curves are sampled from their
    parametrization at t = +-r (t = r only for complex data, which is not sampled
    over R).  A radius with no real points is recorded, not fatal.
    """
    radii = list(radii) if radii is not None else StabilitySchedule().radii()
    rng = random.Random(seed)
    if g.kind == "puiseux" and g.implicit is None:
        cloud = BlowupCloud(g.name, 2)
        for r in radii:
            for sgn in (1, -1):
                x, y = g.curve(float(r) * sgn)
                if isinstance(y, complex):
                    if y.imag != 0:
                        continue
                    y = y.real
                norm = math.hypot(x, y)
                cloud.samples.append(((x / norm, y / norm), norm, f"curve:{'+' if sgn > 0 else '-'}"))
        return cloud
    f = _poly(g)
    n = f.nvars
    if n not in (2, 3):
        raise ValueError("the blow-up is implemented for n = 2 and 3")
    cloud = BlowupCloud(g.name, n)
    frames = (
        [((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))]
        if n == 2
        else [random_orthonormal_pair(3, rng) for _ in range(per_radius)]
    )
    for r in radii:
        hits = []
        for i, (a, b) in enumerate(frames):
            hits += _sphere_hits(f, Fraction(r), a, b, "circle" if n == 2 else f"probe:{i}")
        if not hits:
            cloud.empty_radii.append(float(r))
        cloud.samples += sorted(hits, key=lambda s: (s[2], s[0]))
    if len(cloud.empty_radii) == len(radii):
        raise EmptyIntersection(f"{g.name or 'germ'}: no real points on any sampled sphere")
    return cloud


def link_distance(tc: TangentCone, u: Sequence[float]) -> float:
    """|in f(u)| for in f scaled to unit coefficient norm; 0 exactly on the cone."""
    h = tc.initial
    norm = math.sqrt(sum(float(c) ** 2 for c in h.terms.values()))
    acc = 0.0
    for e, c in h.terms.items():
        t = float(c)
        for x, k in zip(u, e):
            t *= x**k
        acc += t
    return abs(acc) / norm
