"""Exact model of the Niemytzki (tangent-disc) plane.

Points live in the closed upper half-plane.  A basic neighbourhood
``K(p, r)`` is the open disc of radius ``r`` around ``p`` clipped to the
half-plane when ``p`` is off the axis, and the open disc of radius ``r``
tangent to the axis at ``p`` together with ``p`` itself when ``p`` is on the
axis.  In both cases the *effective centre* is a point with positive height,
which is what makes most predicates reduce to one squared-distance test.

Regular closed inputs are finite unions of :class:`ClosedKBall`; the
Niemytzki closure of a K-ball is the Euclidean closed disc clipped to the
half-plane (every axis point on or inside the disc is a limit of disc
points in the tangent-disc topology).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import mpq

from ._seq import FactReport, least_index
from .errors import DomainError, PrecisionError, PreconditionError, ScenarioError
from .exact import (
    ONE,
    ZERO,
    Interval,
    Q,
    Rational,
    RootExpr,
    enclose,
    floor_q,
    radical_product,
    sign_of,
    sqrt_bounds,
    sqrt_lower,
    sqrt_upper,
)


@dataclass(frozen=True)
class NPoint:
    x: Rational
    y: Rational

    def __post_init__(self):
        x, y = Q(self.x), Q(self.y)
        if y < 0:
            raise DomainError(f"point ({x}, {y}) lies below the axis")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def on_axis(self):
        return self.y == 0

    def __iter__(self):
        yield self.x
        yield self.y


def npoint(x, y=None):
    if y is None:
        if isinstance(x, NPoint):
            return x
        x, y = x
    return NPoint(x, y)


@dataclass(frozen=True)
class _Ball:
    anchor: NPoint
    radius: Rational
    center: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        anchor = npoint(self.anchor)
        r = Q(self.radius)
        if r <= 0:
            raise DomainError("radius must be positive")
        object.__setattr__(self, "anchor", anchor)
        object.__setattr__(self, "radius", r)
        if anchor.y == 0:
            c = (anchor.x, r)
        else:
            c = (anchor.x, anchor.y)
        object.__setattr__(self, "center", c)

    @property
    def tangent(self):
        return self.anchor.y == 0

    def bbox(self):
        cx, cy = self.center
        r = self.radius
        return (cx - r, max(ZERO, cy - r), cx + r, cy + r)


class KBall(_Ball):
    """Basic open neighbourhood K(anchor, radius)."""


class ClosedKBall(_Ball):
    """Niemytzki closure of K(anchor, radius): closed disc clipped to y >= 0."""

    def contains(self, q):
        return closed_contains(self, q)


def kball(anchor, alpha):
    return KBall(npoint(anchor), Q(alpha))


def closed_kball(anchor, alpha):
    return ClosedKBall(npoint(anchor), Q(alpha))


def closure(b):
    return ClosedKBall(b.anchor, b.radius)


def _d2(ax, ay, bx, by):
    dx = ax - bx
    dy = ay - by
    return dx * dx + dy * dy


def kball_contains(b, q):
    q = npoint(q)
    if q.y < 0:
        return False
    cx, cy = b.center
    if b.tangent and q.x == b.anchor.x and q.y == 0:
        return True
    return _d2(q.x, q.y, cx, cy) < b.radius * b.radius


def closed_contains(c, q):
    q = npoint(q)
    cx, cy = c.center
    return _d2(q.x, q.y, cx, cy) <= c.radius * c.radius


def discs_meet_in_halfplane(c1, r1, closed1, c2, r2, closed2):
    """Does disc1 ∩ disc2 ∩ {y >= 0} have a point?

    Each disc is open or closed per its flag.  Decided from the topmost point
    of the lens: its height is rational or a surd, and only the sign matters.
    """
    x1, y1 = c1
    x2, y2 = c2
    dx, dy = x2 - x1, y2 - y1
    D = dx * dx + dy * dy
    s = r1 + r2
    if D > s * s:
        return False
    if D == s * s:
        if not (closed1 and closed2):
            return False
        # single touching point; sqrt(D) == s is rational
        return y1 + dy * r1 / s >= 0
    top1 = y1 + r1
    e1 = _d2(x1, top1, x2, y2) - r2 * r2
    if e1 <= 0:
        top, in1, in2 = top1, closed1, e1 < 0 or closed2
    else:
        top2 = y2 + r2
        e2 = _d2(x2, top2, x1, y1) - r1 * r1
        if e2 <= 0:
            top, in1, in2 = top2, e2 < 0 or closed1, closed2
        else:
            # circles cross properly; take the upper crossing point
            t = (D + r1 * r1 - r2 * r2) / (2 * D)
            k = 4 * D * r1 * r1 - (D + r1 * r1 - r2 * r2) ** 2
            y_up = RootExpr(y1 + t * dy, abs(dx) / (2 * D), k)
            s_up = sign_of(y_up)
            if s_up != 0:
                return s_up > 0
            return closed1 and closed2
    if top > 0:
        return True
    if top < 0:
        return False
    return in1 and in2


def open_meets_closed(b, c):
    """K-ball ``b`` (open) against closed ball ``c``."""
    if b.tangent and closed_contains(c, b.anchor):
        return True
    return discs_meet_in_halfplane(b.center, b.radius, False, c.center, c.radius, True)


def open_meets_open(b1, b2):
    if b1.tangent and kball_contains(b2, b1.anchor):
        return True
    if b2.tangent and kball_contains(b1, b2.anchor):
        return True
    return discs_meet_in_halfplane(b1.center, b1.radius, False, b2.center, b2.radius, False)


def closed_meets_closed(c1, c2):
    return discs_meet_in_halfplane(c1.center, c1.radius, True, c2.center, c2.radius, True)


def in_union(gens, q):
    q = npoint(q)
    return any(closed_contains(g, q) for g in gens)


def validate_pair(F, G):
    """Reject empty sides, foreign generators and overlapping sides."""
    F, G = tuple(F), tuple(G)
    if not F or not G:
        raise ScenarioError("both F and G need at least one generator")
    for g in F + G:
        if not isinstance(g, ClosedKBall):
            raise ScenarioError(f"expected ClosedKBall generators, got {type(g).__name__}")
    for f in F:
        for g in G:
            if closed_meets_closed(f, g):
                raise ScenarioError(f"F and G intersect ({f} meets {g})")
    return F, G


def _check_alpha(alpha):
    alpha = Q(alpha)
    if alpha <= 0:
        raise DomainError("alpha must be positive")
    return alpha


def f_alpha_member(F, G, alpha, p):
    """p ∈ F_α, i.e. p ∈ F and K(p, α) misses G."""
    F, G = validate_pair(F, G)
    alpha = _check_alpha(alpha)
    p = npoint(p)
    if not in_union(F, p):
        raise PreconditionError(f"{p} is not in F")
    b = kball(p, alpha)
    return not any(open_meets_closed(b, g) for g in G)


@dataclass(frozen=True)
class NFilteredSet:
    """F_α as F minus open forbidden discs.

    A point p ∈ F with p.y > 0 belongs iff p avoids every forbidden disc; an
    axis point (x, 0) belongs iff its lift (x, α) avoids them.  Forbidden
    disc j is centred at the effective centre of G generator j with radius
    α + r_j: since both effective centres sit strictly above the axis, the
    open ball meets the closed one exactly when the centres are that close.
    """

    F: tuple
    G: tuple
    alpha: Rational
    forbidden: tuple  # ((cx, cy), R)

    def contains(self, p):
        p = npoint(p)
        if not in_union(self.F, p):
            return False
        cy = p.y if p.y > 0 else self.alpha
        for (fx, fy), R in self.forbidden:
            if _d2(p.x, cy, fx, fy) < R * R:
                return False
        return True

    def bbox(self):
        boxes = [f.bbox() for f in self.F]
        return (min(b[0] for b in boxes), min(b[1] for b in boxes),
                max(b[2] for b in boxes), max(b[3] for b in boxes))

    @property
    def off_axis_forbidden(self):
        return self.forbidden

    @property
    def axis_forbidden(self):
        # applied to the lifted point (x, alpha)
        return self.forbidden


def f_alpha_region(F, G, alpha):
    F, G = validate_pair(F, G)
    alpha = _check_alpha(alpha)
    forbidden = tuple((g.center, alpha + g.radius) for g in G)
    return NFilteredSet(F, G, alpha, forbidden)


def stage_index(F, G, p, limit):
    """Least n <= limit with p ∈ F_{1/n}, else None (p must lie in F)."""
    F, G = validate_pair(F, G)
    p = npoint(p)
    if not in_union(F, p):
        raise PreconditionError(f"{p} is not in F")
    for n in range(1, limit + 1):
        b = kball(p, mpq(1, n))
        if not any(open_meets_closed(b, g) for g in G):
            return n
    return None


# -- axis footprints and horizontal segments ---------------------------------

def axis_chord(c):
    """Exact axis chord of a closed ball as (lo, hi) surds, or None."""
    cx, cy = c.center
    w2 = c.radius * c.radius - cy * cy
    if w2 < 0:
        return None
    return RootExpr(cx, -1, w2), RootExpr(cx, 1, w2)


def axis_domain(gens):
    """Rational outer bounds of every generator's axis chord."""
    out = []
    for c in gens:
        cx, cy = c.center
        w2 = c.radius * c.radius - cy * cy
        if w2 < 0:
            continue
        w = sqrt_upper(w2)
        out.append((cx - w, cx + w))
    return out


def seg_min_d2(s0, s1, h, cx, cy):
    """Least squared distance from (cx, cy) to the segment [s0, s1] × {h}."""
    if cx < s0:
        dx = s0 - cx
    elif cx > s1:
        dx = cx - s1
    else:
        dx = ZERO
    dy = h - cy
    return dx * dx + dy * dy


def seg_in_disc(s0, s1, h, cx, cy, R):
    """Whole segment strictly inside the open disc (convexity: endpoints)."""
    R2 = R * R
    return _d2(s0, h, cx, cy) < R2 and _d2(s1, h, cx, cy) < R2


def _axis_cells(domains, depth, classify):
    """Bisect axis intervals; ``classify(s0, s1, level)`` returns
    'drop', 'keep' (resolved) or 'split'.  Returns False when a cell still
    needs splitting at the depth limit."""
    stack = [(lo, hi, 0) for lo, hi in domains]
    while stack:
        s0, s1, level = stack.pop()
        verdict = classify(s0, s1, level)
        if verdict != "split":
            continue
        if level + 1 >= depth or s0 == s1:
            return False
        mid = (s0 + s1) / 2
        stack.append((mid, s1, level + 1))
        stack.append((s0, mid, level + 1))
    return True


def _misses_axis_of(gens, s0, s1):
    for c in gens:
        cx, cy = c.center
        if seg_min_d2(s0, s1, ZERO, cx, cy) <= c.radius * c.radius:
            return False
    return True


def _lift_forbidden(region, s0, s1):
    a = region.alpha
    return any(seg_in_disc(s0, s1, a, fx, fy, R) for (fx, fy), R in region.forbidden)


def euclid_closure_gap(F, G, alpha, precision):
    """Rational δ > 0 with dist(Euclidean closure of F_α, G) >= δ, or None.

    Off-axis members of F_α lie outside every forbidden disc, hence at
    distance >= α from G.  Axis members are bounded by bisecting F's axis
    footprint; ``precision`` is the bisection depth budget.
    """
    F, G = validate_pair(F, G)
    alpha = _check_alpha(alpha)
    precision = int(precision)
    if precision < 1:
        return None
    region = f_alpha_region(F, G, alpha)
    best = [alpha]

    def classify(s0, s1, level):
        if _misses_axis_of(F, s0, s1) or _lift_forbidden(region, s0, s1):
            return "drop"
        lb = None
        for g in G:
            gx, gy = g.center
            d = sqrt_lower(seg_min_d2(s0, s1, ZERO, gx, gy)) - g.radius
            lb = d if lb is None else min(lb, d)
        if lb > 0 and (lb >= s1 - s0 or level + 1 >= precision or s0 == s1):
            best[0] = min(best[0], lb)
            return "keep"
        return "split"

    if not _axis_cells(axis_domain(F), precision, classify):
        return None
    return best[0]


# -- separating radius -------------------------------------------------------

@dataclass(frozen=True)
class GammaCertificate:
    """Witness data for a radius γ around a point of G.

    ``interior``: γ = α(1-ε)/2 and the axis members of F_α were certified
    irrelevant for this point.  ``boundary``: the tangent-disc construction;
    surds are expressed relative to a tangency point at abscissa
    ``anchor_x`` (the geometry is translation invariant along the axis).
    """

    case: str
    alpha: Rational
    epsilon: Rational
    gamma: Rational
    beta: Rational | None = None
    delta: Rational | None = None
    anchor_x: Rational = ZERO
    a_point: tuple | None = None
    c_point: tuple | None = None
    line: tuple | None = None
    ac_gap_lower_bound: Rational | None = None
    c_upper: Rational | None = None

    def verify(self):
        """Re-check every stated inequality with exact sign computations."""
        a, e, g = self.alpha, self.epsilon, self.gamma
        checks = {"gamma_positive": g > 0, "epsilon_range": 0 < e < 1}
        if self.case == "interior":
            checks["interior_bound"] = 2 * g <= a - e * a
            return checks
        x = self.anchor_x
        beta = self.beta
        ea = e * a
        (ax, ay), (cx, cy) = self.a_point, self.c_point
        dax, dcx = ax - x, cx - x
        A, B, C = self.line
        checks["beta_positive"] = beta > 0
        checks["beta_below_eps_alpha"] = beta < ea
        checks["beta_below_gap"] = self.delta is not None and beta < self.delta
        checks["a_on_small_circle"] = sign_of(dax.square() + ay.square() - beta * beta) == 0
        checks["a_on_tangent_circle"] = sign_of(dax.square() + (ay - a).square() - a * a) == 0
        checks["c_on_eps_circle"] = sign_of(dcx.square() + (cy - ea).square() - ea * ea) == 0
        checks["line_through_center"] = sign_of(A * x + B * ea + C) == 0
        checks["line_through_a"] = sign_of(A * ax + B * ay + C) == 0
        # (c - x, d - εα) parallel to (a - x, b - εα); the cross term mixes radicals
        dcy = cy - ea
        try:
            cross = dcx * (ay - ea) - radical_product(dcy.b, dcy.d, dax.b, dax.d)
            checks["c_on_line"] = dcy.a == 0 and sign_of(cross) == 0
        except DomainError:
            checks["c_on_line"] = False
        checks["same_side"] = sign_of(dax) > 0 and sign_of(dcx) > 0
        lb, cu = self.ac_gap_lower_bound, self.c_upper
        checks["c_below_upper"] = sign_of(cu - cx) >= 0
        checks["a_minus_c_bound"] = sign_of(ax - (lb + cu)) >= 0
        checks["two_gamma_below_gap"] = 2 * g < lb
        return checks

    @property
    def ok(self):
        return all(self.verify().values())


def _axis_members_clear(F, G, alpha, epsilon, pq, gamma, depth):
    """True when no axis member (s, 0) of F_α has K((s,0), εα) meeting K(pq, γ)."""
    region = f_alpha_region(F, G, alpha)
    ea = epsilon * alpha
    if pq.y > 0:
        ex, ey = pq.x, pq.y
    else:
        ex, ey = pq.x, gamma
    need = (ea + gamma) ** 2

    def classify(s0, s1, level):
        if _misses_axis_of(F, s0, s1) or _lift_forbidden(region, s0, s1):
            return "drop"
        if seg_min_d2(s0, s1, ea, ex, ey) >= need and (
                pq.y == 0 or seg_min_d2(s0, s1, ZERO, pq.x, pq.y) >= gamma * gamma):
            return "drop"
        return "split"

    return _axis_cells(axis_domain(F), depth, classify)


def lemma3_gamma(F, G, alpha, epsilon, pq, precision=1 << 64, depth=24, case=None):
    """Radius γ > 0 such that K(p, εα) ∩ K(pq, γ) = ∅ for every p ∈ F_α.

    Returns ``(gamma, GammaCertificate)``.  ``precision`` caps the
    denominators of enclosures (and of γ); ``depth`` bounds the axis
    bisections.  ``case`` forces "boundary" (the tangent-disc construction,
    valid for every point of G) or "interior"; by default the interior bound
    is used whenever the axis members of F_α are certified far from pq.
    """
    F, G = validate_pair(F, G)
    alpha = _check_alpha(alpha)
    epsilon = Q(epsilon)
    if not 0 < epsilon < 1:
        raise DomainError("epsilon must satisfy 0 < epsilon < 1")
    pq = npoint(pq)
    if not in_union(G, pq):
        raise PreconditionError(f"{pq} is not in G")
    ea = epsilon * alpha
    g_int = (alpha - ea) / 2
    if case not in (None, "interior", "boundary"):
        raise DomainError(f"unknown case {case!r}")
    if case == "interior" or (
            case is None and _axis_members_clear(F, G, alpha, epsilon, pq, g_int, depth)):
        return g_int, GammaCertificate("interior", alpha, epsilon, g_int)

    delta = euclid_closure_gap(F, G, alpha, depth)
    if delta is None:
        raise PrecisionError("could not bound dist(F_alpha, G); raise depth")
    beta = min(delta, ea) / 2
    x = ZERO
    b = beta * beta / (2 * alpha)
    D1 = beta * beta - b * b
    L2 = beta * beta * (1 - epsilon) + ea * ea
    a_pt = (RootExpr(x, ONE, D1), RootExpr(b))
    c_pt = (RootExpr(x, ea, D1 / L2), RootExpr(ea, ea * (b - ea), 1 / L2))
    # E: (b - εα)(u - x) - sqrt(D1)(v - εα) = 0
    A = RootExpr(b - ea)
    B = RootExpr(ZERO, -ONE, D1)
    C = RootExpr(-(b - ea) * x, ea, D1)
    P = 2
    while P <= precision:
        ia = enclose(a_pt[0], P)
        ic = enclose(c_pt[0], P)
        lb = ia.lo - ic.hi
        if lb > 0:
            gamma = mpq(floor_q(lb * P / 2), P)
            if 2 * gamma >= lb:
                gamma -= mpq(1, P)
            if gamma > 0:
                cert = GammaCertificate(
                    "boundary", alpha, epsilon, gamma, beta=beta, delta=delta,
                    anchor_x=x, a_point=a_pt, c_point=c_pt, line=(A, B, C),
                    ac_gap_lower_bound=lb, c_upper=ic.hi)
                return gamma, cert
        P *= 2
    raise PrecisionError("enclosures too wide to separate a from c; raise precision")


# -- sequence convergence ----------------------------------------------------

def fact1_check(x, sequence, alpha, samples, max_index=1 << 62):
    """For each sample of K(x, α/2) minus x, the least k with sample ∈ K(x_k, α).

    ``sequence`` is a list of points (1-based indices) or a callable k ->
    point describing a convergent family.
    """
    x = npoint(x)
    alpha = _check_alpha(alpha)
    half = kball(x, alpha / 2)
    checked = []
    for z in samples:
        z = npoint(z)
        if z == x or not kball_contains(half, z):
            raise PreconditionError(f"sample {z} is not in K(x, alpha/2) minus x")
        checked.append(z)

    def term(k):
        return npoint(sequence(k))

    seq = term if callable(sequence) else [npoint(p) for p in sequence]
    witnesses = []
    for z in checked:
        witnesses.append(least_index(lambda p: kball_contains(kball(p, alpha), z),
                                     seq, max_index))
    return FactReport(witnesses)
