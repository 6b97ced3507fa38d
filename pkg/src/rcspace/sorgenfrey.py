"""Exact model of the d-dimensional Sorgenfrey product.

Base boxes P(x, n) constrain the first ``min(n, d)`` coordinates to
``[x_k, x_k + 1/n)`` and leave the rest free.  Every set handled here is a
finite union of boxes whose sides are intervals with open/closed ends, so
all questions reduce to comparisons of rationals.

Internally a box is a tuple of sides ``(lo, lo_closed, hi, hi_closed)``;
``None`` as an endpoint means unbounded.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from ._seq import FactReport, least_index
from .errors import CertificateError, DomainError, PreconditionError, ScenarioError
from .exact import Q, Rational, floor_q, ceil_q

FREE = (None, False, None, False)


class SPoint(tuple):
    """A point of S^d: a tuple of rationals."""

    def __new__(cls, coords):
        t = tuple(Q(c) for c in coords)
        if not t:
            raise DomainError("a point needs at least one coordinate")
        return super().__new__(cls, t)

    @property
    def d(self):
        return len(self)


def spoint(coords):
    return coords if isinstance(coords, SPoint) else SPoint(coords)


@dataclass(frozen=True)
class PBox:
    anchor: SPoint
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError("n must be a positive integer")
        object.__setattr__(self, "anchor", spoint(self.anchor))
        object.__setattr__(self, "n", int(self.n))

    @property
    def d(self):
        return self.anchor.d

    @property
    def constrained(self):
        return min(self.n, self.d)

    def sides(self):
        w = mpq(1, self.n)
        c = self.constrained
        return tuple((a, True, a + w, False) if k < c else FREE
                     for k, a in enumerate(self.anchor))

    def closed_sides(self):
        return tuple(_close(s) for s in self.sides())


@dataclass(frozen=True)
class GenBox:
    """Clopen generator box ∏ [lower_k, lower_k + widths_k)."""

    lower: SPoint
    widths: tuple

    def __post_init__(self):
        lower = spoint(self.lower)
        widths = tuple(Q(w) for w in self.widths)
        if len(widths) != lower.d:
            raise DomainError("widths and lower corner differ in dimension")
        if any(w <= 0 for w in widths):
            raise DomainError("box widths must be positive")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "widths", widths)

    @property
    def d(self):
        return self.lower.d

    def sides(self):
        return tuple((l, True, l + w, False) for l, w in zip(self.lower, self.widths))

    def closed_sides(self):
        return tuple((l, True, l + w, True) for l, w in zip(self.lower, self.widths))

    def contains(self, q):
        return box_contains(self.sides(), q)

    def bbox(self):
        return tuple(self.lower), tuple(l + w for l, w in zip(self.lower, self.widths))


def pbox(x, n):
    return PBox(spoint(x), n)


def genbox(lower, widths):
    return GenBox(spoint(lower), tuple(widths))


# -- side / box algebra ------------------------------------------------------

def _close(side):
    lo, _, hi, _ = side
    return (lo, lo is not None, hi, hi is not None)


def side_nonempty(side):
    lo, lc, hi, hc = side
    if lo is None or hi is None:
        return True
    return lo < hi or (lo == hi and lc and hc)


def side_contains(side, v):
    lo, lc, hi, hc = side
    if lo is not None and (v < lo or (v == lo and not lc)):
        return False
    if hi is not None and (v > hi or (v == hi and not hc)):
        return False
    return True


def _side_meet(a, b):
    alo, alc, ahi, ahc = a
    blo, blc, bhi, bhc = b
    if alo is None:
        lo, lc = blo, blc
    elif blo is None or alo > blo:
        lo, lc = alo, alc
    elif blo > alo:
        lo, lc = blo, blc
    else:
        lo, lc = alo, alc and blc
    if ahi is None:
        hi, hc = bhi, bhc
    elif bhi is None or ahi < bhi:
        hi, hc = ahi, ahc
    elif bhi < ahi:
        hi, hc = bhi, bhc
    else:
        hi, hc = ahi, ahc and bhc
    return (lo, lc, hi, hc)


def box_meet(a, b):
    return tuple(_side_meet(s, t) for s, t in zip(a, b))


def box_nonempty(box):
    return all(side_nonempty(s) for s in box)


def box_contains(box, q):
    return all(side_contains(s, v) for s, v in zip(box, q))


def box_subtract(a, b):
    """a minus b as a list of disjoint nonempty boxes."""
    if not box_nonempty(box_meet(a, b)):
        return [a] if box_nonempty(a) else []
    out = []
    rest = list(a)
    for k, (s, t) in enumerate(zip(a, b)):
        blo, blc, bhi, bhc = t
        if blo is not None:
            below = _side_meet(s, (None, False, blo, not blc))
            if side_nonempty(below):
                piece = list(rest)
                piece[k] = below
                out.append(tuple(piece))
        if bhi is not None:
            above = _side_meet(s, (bhi, not bhc, None, False))
            if side_nonempty(above):
                piece = list(rest)
                piece[k] = above
                out.append(tuple(piece))
        rest[k] = _side_meet(s, t)
    return out


def box_subset(a, b):
    """Is box a contained in box b (a nonempty)?"""
    for s, t in zip(a, b):
        slo, slc, shi, shc = s
        tlo, tlc, thi, thc = t
        if tlo is not None:
            if slo is None or slo < tlo or (slo == tlo and slc and not tlc):
                return False
        if thi is not None:
            if shi is None or shi > thi or (shi == thi and shc and not thc):
                return False
    return True


def side_point(side):
    lo, lc, hi, hc = side
    if lo is None and hi is None:
        return mpq(0)
    if lo is None:
        return hi if hc else hi - 1
    if hi is None:
        return lo if lc else lo + 1
    if lo == hi:
        return lo
    return (lo + hi) / 2


def box_point(box):
    return SPoint(side_point(s) for s in box)


def _sides_of(b):
    if isinstance(b, (PBox, GenBox)):
        return b.sides()
    return tuple(b)


def boxes_meet(a, b):
    """Half-open overlap test: per coordinate l < l' + w' and l' < l + w."""
    sa, sb = _sides_of(a), _sides_of(b)
    if len(sa) != len(sb):
        raise DomainError("dimension mismatch")
    return box_nonempty(box_meet(sa, sb))


def pbox_contains(b, q):
    q = spoint(q)
    if q.d != b.d:
        raise DomainError("dimension mismatch")
    return box_contains(b.sides(), q)


# -- F_{G,n} -----------------------------------------------------------------

def validate_pair(F, G):
    F, G = tuple(F), tuple(G)
    if not F or not G:
        raise ScenarioError("both F and G need at least one generator")
    for g in F + G:
        if not isinstance(g, GenBox):
            raise ScenarioError(f"expected GenBox generators, got {type(g).__name__}")
    d = F[0].d
    if any(g.d != d for g in F + G):
        raise ScenarioError("generators differ in dimension")
    for f in F:
        for g in G:
            if boxes_meet(f, g):
                raise ScenarioError(f"F and G intersect ({f} meets {g})")
    return F, G


def in_union(gens, q):
    q = spoint(q)
    return any(g.contains(q) for g in gens)


def _check_n(n):
    if int(n) != n or n < 1:
        raise DomainError("n must be a positive integer")
    return int(n)


def f_gn_member(F, G, n, x):
    F, G = validate_pair(F, G)
    n = _check_n(n)
    x = spoint(x)
    if x.d != F[0].d:
        raise DomainError("dimension mismatch")
    if not in_union(F, x):
        raise PreconditionError(f"{x} is not in F")
    probe = pbox(x, n)
    return not any(boxes_meet(probe, g) for g in G)


@dataclass(frozen=True)
class SFilteredSet:
    """F_{G,n}: F minus the open boxes of anchors whose P(., n) reaches G."""

    F: tuple
    G: tuple
    n: int
    forbidden: tuple

    @property
    def d(self):
        return self.F[0].d

    def contains(self, x):
        x = spoint(x)
        if not in_union(self.F, x):
            return False
        return not any(box_contains(b, x) for b in self.forbidden)

    def pieces(self, closed=False):
        """Exact decomposition into boxes; ``closed`` uses closed F boxes."""
        out = []
        for f in self.F:
            parts = [f.closed_sides() if closed else f.sides()]
            for b in self.forbidden:
                parts = [p for part in parts for p in box_subtract(part, b)]
            out.extend(parts)
        return out

    def bbox(self):
        lows = [f.bbox()[0] for f in self.F]
        highs = [f.bbox()[1] for f in self.F]
        d = self.d
        return (tuple(min(l[k] for l in lows) for k in range(d)),
                tuple(max(h[k] for h in highs) for k in range(d)))


def forbidden_box(g, n):
    c = min(n, g.d)
    w = mpq(1, n)
    return tuple((l - w, False, l + s, False) if k < c else FREE
                 for k, (l, s) in enumerate(zip(g.lower, g.widths)))


def f_gn_region(F, G, n):
    F, G = validate_pair(F, G)
    n = _check_n(n)
    return SFilteredSet(F, G, n, tuple(forbidden_box(g, n) for g in G))


def stage_index(F, G, x, limit):
    """Least n <= limit with P(x, n) ∩ G = ∅, else None."""
    F, G = validate_pair(F, G)
    x = spoint(x)
    if not in_union(F, x):
        raise PreconditionError(f"{x} is not in F")
    for n in range(1, limit + 1):
        probe = pbox(x, n)
        if not any(boxes_meet(probe, g) for g in G):
            return n
    return None


# -- separating index --------------------------------------------------------

@dataclass(frozen=True)
class Lemma6Certificate:
    x: SPoint
    p: SPoint
    i: int
    m: int
    n: int
    host: int
    host_box: GenBox

    def verify(self):
        d = self.x.d
        c = min(2 * self.n, d)
        inner = pbox(self.p, self.i).sides()
        outer = box_meet(self.host_box.sides(), pbox(self.x, 2 * self.n).sides())
        return {
            "i_at_least_2n": self.i >= 2 * self.n,
            "p_above_x": all(self.x[k] < self.p[k] for k in range(c)),
            "inner_box_in_G_and_probe": box_subset(inner, outer),
            "m_gap": all(mpq(1, self.m) < self.p[k] - self.x[k] for k in range(c)),
        }

    @property
    def ok(self):
        return all(self.verify().values())


def lemma6_m(F, G, n, x):
    """Integer m with P(x, m) ∩ P(y, 2n) = ∅ for every y ∈ F_{G,n}.

    Returns ``(m, Lemma6Certificate)``; x must lie in G.
    """
    F, G = validate_pair(F, G)
    n = _check_n(n)
    x = spoint(x)
    if x.d != F[0].d:
        raise DomainError("dimension mismatch")
    hosts = [j for j, g in enumerate(G) if g.contains(x)]
    if not hosts:
        raise PreconditionError(f"{x} is not in G")
    host = hosts[0]
    g = G[host]
    overlap = box_meet(g.sides(), pbox(x, 2 * n).sides())
    if not box_nonempty(overlap):
        raise CertificateError("G generator does not meet P(x, 2n)")  # x witnesses it
    d = x.d
    p = SPoint((lo + hi) / 2 for lo, _, hi, _ in overlap)
    i = max(2 * n, d, max(ceil_q(2 / (hi - lo)) for lo, _, hi, _ in overlap))
    while not box_subset(pbox(p, i).sides(), overlap):
        i += 1
    c = min(2 * n, d)
    gap = min(p[k] - x[k] for k in range(c))
    m = floor_q(1 / gap) + 1
    cert = Lemma6Certificate(x, p, i, m, n, host, g)
    return m, cert


# -- sequence convergence ----------------------------------------------------

def factsf1_check(x, sequence, n, samples, max_index=1 << 62):
    """Per sample of the Euclidean interior of P(x, n): least k with sample ∈ P(x_k, n)."""
    x = spoint(x)
    n = _check_n(n)
    c = min(n, x.d)
    w = mpq(1, n)
    checked = []
    for z in samples:
        z = spoint(z)
        if z.d != x.d:
            raise DomainError("dimension mismatch")
        if not all(x[k] < z[k] < x[k] + w for k in range(c)):
            raise PreconditionError(f"sample {z} is not interior to P(x, n)")
        checked.append(z)
    seq = (lambda k: spoint(sequence(k))) if callable(sequence) else [spoint(p) for p in sequence]
    witnesses = []
    for z in checked:
        witnesses.append(least_index(lambda p: box_contains(pbox(p, n).sides(), z),
                                     seq, max_index))
    return FactReport(witnesses)
