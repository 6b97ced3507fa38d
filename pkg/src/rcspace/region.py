"""Symbolic regions, the separation driver and certified membership.

Expressions are small immutable trees:

``Generator``            a single ball or box
``FilteredBallUnion``    ⋃{K(x, ρ) : x ∈ F_α} or ⋃{P(x, 2n) : x ∈ F_{G,n}}
``Union``                finite union
``Difference``           open part minus a closed outer approximation
``ClosureOuter``         a closed set containing the closure of its child

Only closed outer approximations are ever subtracted, so the open parts stay
open and every Out verdict stays sound.  :func:`member` answers IN / OUT
with an exact witness or exclusion, or UNKNOWN when the Niemytzki
subdivision budget runs out.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

from gmpy2 import mpq

from . import _search
from . import niemytzki as nz
from . import sorgenfrey as sf
from .errors import DomainError, ScenarioError
from .exact import HALF, Q, sqrt_lower, sqrt_upper

NIEMYTZKI = "niemytzki"
SORGENFREY = "sorgenfrey"


class Status(enum.Enum):
    IN = "in"
    OUT = "out"
    UNKNOWN = "unknown"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Verdict:
    status: Status
    witness: object = None
    stage: int | None = None
    depth: int = 0

    def __bool__(self):
        raise TypeError("a Verdict is three-valued; compare its status instead")


def space_of(item):
    if isinstance(item, (nz.KBall, nz.ClosedKBall, nz.NFilteredSet)):
        return NIEMYTZKI
    if isinstance(item, (sf.PBox, sf.GenBox, sf.SFilteredSet)):
        return SORGENFREY
    raise DomainError(f"no space for {type(item).__name__}")


# -- expression nodes ------------------------------------------------------------
# eq=False: nodes are compared by identity, which keys the evaluation cache;
# use describe() for structural comparison.

@dataclass(frozen=True, eq=False)
class Generator:
    item: object

    @property
    def space(self):
        return space_of(self.item)

    def describe(self):
        return ("gen", self.item)


@dataclass(frozen=True, eq=False)
class FilteredBallUnion:
    space: str
    fset: object
    param: object  # ball radius ρ (Niemytzki) or box index 2n (Sorgenfrey)

    def describe(self):
        return ("balls", self.space, self.fset, self.param)

    @cached_property
    def open_pieces(self):
        return self.fset.pieces()

    @cached_property
    def closed_pieces(self):
        return self.fset.pieces(closed=True)


@dataclass(frozen=True, eq=False)
class Union:
    children: tuple

    def describe(self):
        return ("union",) + tuple(c.describe() for c in self.children)


@dataclass(frozen=True, eq=False)
class Difference:
    open: object
    closed_outer: object
    stage: int | None = None

    def __post_init__(self):
        if not _is_closed_node(self.closed_outer):
            raise DomainError("Difference must subtract a closed outer approximation")

    def describe(self):
        return ("diff", self.stage, self.open.describe(), self.closed_outer.describe())


@dataclass(frozen=True, eq=False)
class ClosureOuter:
    child: object

    def describe(self):
        return ("closure", self.child.describe())


def _is_closed_node(e):
    if isinstance(e, ClosureOuter):
        return True
    if isinstance(e, Union):
        return all(_is_closed_node(c) for c in e.children)
    if isinstance(e, Generator):
        return isinstance(e.item, (nz.ClosedKBall, sf.GenBox))
    return False


def is_open_by_construction(e):
    """Structural openness check for expressions produced by :func:`separate`."""
    if isinstance(e, FilteredBallUnion):
        return True
    if isinstance(e, Generator):
        return isinstance(e.item, (nz.KBall, sf.PBox, sf.GenBox))
    if isinstance(e, Union):
        return all(is_open_by_construction(c) for c in e.children)
    if isinstance(e, Difference):
        return is_open_by_construction(e.open) and _is_closed_node(e.closed_outer)
    return False


def union_of(gens):
    gens = tuple(gens)
    if len(gens) == 1:
        return Generator(gens[0])
    return Union(tuple(Generator(g) for g in gens))


# -- regular closedness ------------------------------------------------------------

def _generators(e):
    if isinstance(e, Generator):
        return [e.item]
    if isinstance(e, Union):
        out = []
        for c in e.children:
            out.extend(_generators(c))
        return out
    raise DomainError(f"regular_closure needs a union of generators, got {type(e).__name__}")


def regular_closure(e):
    """cl(int(e)) for a finite union of closed balls or clopen boxes.

    Each generator is the closure of its own interior, and a finite union of
    such sets is again one, so the expression is returned unchanged;
    :func:`cl_int_member` checks this pointwise by an independent route.
    """
    gens = _generators(e)
    if not all(isinstance(g, (nz.ClosedKBall, sf.GenBox)) for g in gens):
        raise DomainError("regular_closure supports ClosedKBall and GenBox generators")
    return e


def is_regular_closed_input(gens):
    gens = tuple(gens)
    if not gens:
        return False
    if all(isinstance(g, nz.ClosedKBall) for g in gens):
        return True
    if all(isinstance(g, sf.GenBox) for g in gens):
        return len({g.d for g in gens}) == 1
    return False


_SCALES = (mpq(1), mpq(1, 16), mpq(1, 256), mpq(1, 1 << 12), mpq(1, 1 << 20))


def cl_int_member(gens, q, scales=_SCALES):
    """Decide q ∈ cl(int(⋃ gens)) through neighbourhood witnesses.

    Inside: for each scale δ, exhibit a point of K(q, δ) (or P(q, n)) that is
    an interior point of the union.  Outside: exhibit one neighbourhood of q
    disjoint from the union.
    """
    gens = tuple(gens)
    if all(isinstance(g, nz.ClosedKBall) for g in gens):
        return _cl_int_niemytzki(gens, nz.npoint(q), scales)
    return _cl_int_sorgenfrey(gens, sf.spoint(q), scales)


def _cl_int_niemytzki(gens, q, scales):
    host = next((g for g in gens if nz.closed_contains(g, q)), None)
    if host is None:
        gap = None
        for g in gens:
            cx, cy = g.center
            D = (q.x - cx) ** 2 + (q.y - cy) ** 2
            scale = 1 << 40
            while True:
                lb = sqrt_lower(D, scale) - g.radius
                if lb > 0:
                    break
                scale <<= 8
            gap = lb if gap is None else min(gap, lb)
        nbhd = nz.kball(q, gap / 4)
        if any(nz.open_meets_closed(nbhd, g) for g in gens):
            raise AssertionError("exclusion neighbourhood meets the union")
        return False
    cx, cy = host.center
    vx, vy = cx - q.x, cy - q.y
    D = vx * vx + vy * vy
    for delta in scales:
        if D == 0:
            w = (q.x, q.y)
        else:
            if q.y == 0:
                t = min(mpq(1), delta * vy / D)
            else:
                t = min(mpq(1), delta / (2 * sqrt_upper(D)))
            w = (q.x + t * vx, q.y + t * vy)
        interior = w[1] > 0 and (w[0] - cx) ** 2 + (w[1] - cy) ** 2 < host.radius ** 2
        if not (interior and nz.kball_contains(nz.kball(q, delta), w)):
            return False
    return True


def _cl_int_sorgenfrey(gens, q, scales):
    hosts = [g for g in gens if g.contains(q)]
    if not hosts:
        n = 1
        while any(sf.boxes_meet(sf.pbox(q, n), g) for g in gens):
            n += 1
            if n > 1 << 20:
                raise AssertionError("no separating neighbourhood found")
        return False
    g = hosts[0]
    # q is interior: some P(q, n0) sits inside the host box
    n0 = max(g.d, max(sf.ceil_q(1 / (l + w - v)) for l, w, v in zip(g.lower, g.widths, q)))
    if not sf.box_subset(sf.pbox(q, n0).sides(), g.sides()):
        return False
    for delta in scales:
        n = max(1, sf.ceil_q(1 / delta))
        if not sf.box_contains(sf.pbox(q, n).sides(), q):
            return False
    return True


# -- separation ---------------------------------------------------------------------

def _validate(space, F, G):
    if space == NIEMYTZKI:
        return nz.validate_pair(F, G)
    if space == SORGENFREY:
        return sf.validate_pair(F, G)
    raise DomainError(f"unknown space {space!r}")


def _check_eps(epsilon):
    epsilon = Q(epsilon)
    if not 0 < epsilon < 1:
        raise DomainError("epsilon must satisfy 0 < epsilon < 1")
    return epsilon


def build_wn(space, F, G, epsilon, n):
    """Stage-n open set on the F side (swap F and G for the V side)."""
    if int(n) != n or n < 1:
        raise DomainError("n must be a positive integer")
    n = int(n)
    epsilon = _check_eps(epsilon)
    F, G = _validate(space, F, G)
    if space == NIEMYTZKI:
        return FilteredBallUnion(NIEMYTZKI, nz.f_alpha_region(F, G, mpq(1, n)), epsilon / n)
    return FilteredBallUnion(SORGENFREY, sf.f_gn_region(F, G, n), 2 * n)


def closure_outer(e):
    if isinstance(e, (FilteredBallUnion, Generator)):
        return ClosureOuter(e)
    if isinstance(e, ClosureOuter):
        return e
    if isinstance(e, Union):
        return Union(tuple(closure_outer(c) for c in e.children))
    raise DomainError(f"closure_outer does not support {type(e).__name__}")


def engelking(Ws, Vs, N):
    """⋃_{n<=N} W_n minus (cl V_1 ∪ … ∪ cl V_n), and the mirror image."""
    if int(N) != N or N < 1:
        raise DomainError("N must be a positive integer")
    N = int(N)
    if len(Ws) < N or len(Vs) < N:
        raise DomainError("need at least N stages on each side")
    cW = [closure_outer(w) for w in Ws[:N]]
    cV = [closure_outer(v) for v in Vs[:N]]
    uF = Union(tuple(Difference(Ws[n], Union(tuple(cV[:n + 1])), stage=n + 1)
                     for n in range(N)))
    uG = Union(tuple(Difference(Vs[n], Union(tuple(cW[:n + 1])), stage=n + 1)
                     for n in range(N)))
    return uF, uG


@dataclass(frozen=True)
class SeparationResult:
    space: str
    F: tuple
    G: tuple
    uF: Union
    uG: Union
    stages: int
    epsilon: object
    W: tuple
    V: tuple

    def component(self, side, n):
        """The stage-n piece W_n minus closures (side 'F') or its mirror."""
        u = self.uF if side == "F" else self.uG
        return u.children[n - 1]


def separate(space, F, G, epsilon=HALF, N=8):
    F, G = _validate(space, F, G)
    epsilon = _check_eps(epsilon)
    if int(N) != N or N < 1:
        raise DomainError("N must be a positive integer")
    N = int(N)
    Ws = tuple(build_wn(space, F, G, epsilon, n) for n in range(1, N + 1))
    Vs = tuple(build_wn(space, G, F, epsilon, n) for n in range(1, N + 1))
    uF, uG = engelking(Ws, Vs, N)
    return SeparationResult(space, F, G, uF, uG, N, epsilon, Ws, Vs)


# -- membership ---------------------------------------------------------------------

class _Evaluator:
    def __init__(self, q, space):
        self.q = q
        self.space = space
        self.cache = {}
        self.depth = 0

    def run(self, e, budget):
        passes = sorted({min(budget, 3), min(budget, 8), budget})
        result = None
        for depth in passes:
            result = self.eval(e, depth)
            if result[0] != Status.UNKNOWN:
                break
        return result

    def eval(self, e, depth):
        if isinstance(e, Union):
            unknown = False
            for c in e.children:
                st, w, stage = self.eval(c, depth)
                if st == Status.IN:
                    return st, w, stage
                if st == Status.UNKNOWN:
                    unknown = True
            return (Status.UNKNOWN if unknown else Status.OUT), None, None
        if isinstance(e, Difference):
            a = self.eval(e.open, depth)
            if a[0] == Status.OUT:
                return Status.OUT, None, None
            c = self.eval(e.closed_outer, depth)
            if c[0] == Status.IN:
                return Status.OUT, None, None
            if a[0] == Status.IN and c[0] == Status.OUT:
                return Status.IN, a[1], e.stage
            return Status.UNKNOWN, None, None
        return self.leaf(e, depth)

    def leaf(self, e, depth):
        key = id(e)
        hit = self.cache.get(key)
        if hit is not None and (hit[0] != Status.UNKNOWN or hit[3] >= depth):
            return hit[:3]
        res = self._leaf(e, depth)
        self.cache[key] = res + (depth,)
        return res

    def _leaf(self, e, depth):
        q = self.q
        if isinstance(e, Generator):
            return _status(_generator_contains(e.item, q)), None, None
        if isinstance(e, ClosureOuter):
            child = e.child
            if isinstance(child, Generator):
                return _status(_generator_closure_contains(child.item, q)), None, None
            if isinstance(child, FilteredBallUnion):
                return self._balls(child, depth, closed=True)
            raise DomainError(f"cannot evaluate closure of {type(child).__name__}")
        if isinstance(e, FilteredBallUnion):
            return self._balls(e, depth, closed=False)
        raise DomainError(f"cannot evaluate {type(e).__name__}")

    def _balls(self, e, depth, closed):
        if e.space == SORGENFREY:
            return _box_union_member(e, self.q, closed)
        q = (self.q.x, self.q.y)
        st1, w1, d1 = _search.off_axis(q, e.fset, e.param, closed, depth)
        self.depth = max(self.depth, d1)
        if st1 == _search.IN:
            return Status.IN, nz.NPoint(*w1), None
        st2, w2, d2 = _search.axis(q, e.fset, e.param, closed, depth)
        self.depth = max(self.depth, d2)
        if st2 == _search.IN:
            return Status.IN, nz.NPoint(*w2), None
        if st1 == _search.OUT and st2 == _search.OUT:
            return Status.OUT, None, None
        return Status.UNKNOWN, None, None


def _status(flag):
    return Status.IN if flag else Status.OUT


def _generator_contains(item, q):
    if isinstance(item, nz.KBall):
        return nz.kball_contains(item, q)
    if isinstance(item, nz.ClosedKBall):
        return nz.closed_contains(item, q)
    if isinstance(item, sf.PBox):
        return sf.pbox_contains(item, q)
    if isinstance(item, sf.GenBox):
        return item.contains(q)
    raise DomainError(f"unsupported generator {type(item).__name__}")


def _generator_closure_contains(item, q):
    if isinstance(item, (nz.KBall, nz.ClosedKBall)):
        return nz.closed_contains(nz.closure(item), q)
    if isinstance(item, sf.PBox):
        return sf.box_contains(item.closed_sides(), q)
    if isinstance(item, sf.GenBox):
        return item.contains(q)
    raise DomainError(f"unsupported generator {type(item).__name__}")


def _box_union_member(e, q, closed):
    m = e.param
    w = mpq(1, m)
    c = min(m, len(q))
    # anchors x with q ∈ P(x, m): x_k ∈ (q_k - 1/m, q_k] on constrained k;
    # closed hull: x_k ∈ [q_k - 1/m, q_k]
    window = tuple((v - w, closed, v, True) if k < c else sf.FREE for k, v in enumerate(q))
    pieces = e.closed_pieces if closed else e.open_pieces
    for piece in pieces:
        meet = sf.box_meet(piece, window)
        if sf.box_nonempty(meet):
            return Status.IN, sf.box_point(meet), None
    return Status.OUT, None, None


def _space_of_expr(e):
    if isinstance(e, Generator):
        return e.space
    if isinstance(e, FilteredBallUnion):
        return e.space
    if isinstance(e, ClosureOuter):
        return _space_of_expr(e.child)
    if isinstance(e, Difference):
        return _space_of_expr(e.open)
    if isinstance(e, Union):
        return _space_of_expr(e.children[0]) if e.children else None
    raise DomainError(f"not a region expression: {type(e).__name__}")


def member(e, q, budget=16):
    """Three-valued membership of q in e with a subdivision depth budget."""
    space = _space_of_expr(e)
    if space is None:
        return Verdict(Status.OUT)
    if space == NIEMYTZKI:
        if isinstance(q, sf.SPoint):
            raise DomainError("Sorgenfrey point queried against a Niemytzki region")
        q = nz.npoint(q)
    else:
        if isinstance(q, nz.NPoint):
            raise DomainError("Niemytzki point queried against a Sorgenfrey region")
        q = sf.spoint(q)
    budget = int(budget)
    if budget < 0:
        raise DomainError("budget must be non-negative")
    ev = _Evaluator(q, space)
    st, w, stage = ev.run(e, budget)
    return Verdict(st, w, stage, ev.depth)


def memberships(e, q, budget=16):
    """Like :func:`member` but shares one cache across several expressions.

    ``e`` is a sequence of expressions over the same space; returns a list of
    verdicts in the same order.
    """
    exprs = list(e)
    if not exprs:
        return []
    space = _space_of_expr(exprs[0])
    q = nz.npoint(q) if space == NIEMYTZKI else sf.spoint(q)
    ev = _Evaluator(q, space)
    out = []
    for x in exprs:
        before = ev.depth
        ev.depth = 0
        st, w, stage = ev.run(x, budget)
        out.append(Verdict(st, w, stage, ev.depth))
        ev.depth = max(before, ev.depth)
    return out
