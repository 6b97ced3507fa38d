"""Exact scalar kernel.

Rationals are ``gmpy2.mpq`` values (arbitrary precision, always reduced).
Quadratic surds ``a + b*sqrt(d)`` are :class:`RootExpr`; their signs are
decided by squaring case analysis, never by extracting the root.  When a
numeric value is really needed, :func:`enclose` produces a rational
:class:`Interval` of guaranteed width.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import gmpy2
from gmpy2 import mpq, mpz

from .errors import DomainError

Rational = type(mpq(0))

ZERO = mpq(0)
ONE = mpq(1)
HALF = mpq(1, 2)

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def Q(value, denominator=None):
    """Coerce ``value`` (int, str ``"p/q"``, Fraction, mpq) to an mpq."""
    if denominator is not None:
        if denominator == 0:
            raise DomainError("zero denominator")
        return mpq(value, denominator)
    if isinstance(value, Rational):
        return value
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, float):
        raise DomainError("floats are not accepted; pass an exact rational")
    return mpq(value)


def parse_rational(text):
    """Parse ``"p/q"`` or ``"p"`` with an optional sign; decimal integers only."""
    s = text.strip()
    if not _RATIONAL_RE.match(s):
        raise DomainError(f"malformed rational {text!r}")
    if "/" in s:
        num, den = s.split("/")
        if int(den) == 0:
            raise DomainError(f"zero denominator in {text!r}")
        return mpq(int(num), int(den))
    return mpq(int(s))


def format_rational(r):
    """Canonical text form, the inverse of :func:`parse_rational`."""
    r = mpq(r)
    if r.denominator == 1:
        return str(r.numerator)
    return f"{r.numerator}/{r.denominator}"


def sgn(r):
    return (r > 0) - (r < 0)


def floor_q(r):
    """Largest integer <= r, as a Python int."""
    r = mpq(r)
    return int(gmpy2.f_div(r.numerator, r.denominator))


def ceil_q(r):
    r = mpq(r)
    return int(gmpy2.c_div(r.numerator, r.denominator))


def is_rational_square(r):
    r = mpq(r)
    return r >= 0 and gmpy2.is_square(r.numerator) and gmpy2.is_square(r.denominator)


def sqrt_bounds(r, scale):
    """Return rationals ``lo <= sqrt(r) <= hi`` with ``hi - lo <= 1/scale``.

    ``scale`` is rounded up to a power of two so that successive calls with
    growing scales give nested intervals.
    """
    r = mpq(r)
    if r < 0:
        raise DomainError("square root of a negative rational")
    if is_rational_square(r):
        root = mpq(gmpy2.isqrt(r.numerator), gmpy2.isqrt(r.denominator))
        return root, root
    k = max(1, int(mpz(ceil_q(mpq(scale)))).bit_length())
    big = mpz(1) << k
    # floor(sqrt(r) * 2^k) == isqrt(floor(r * 4^k))
    n = gmpy2.isqrt(gmpy2.f_div(r.numerator * big * big, r.denominator))
    return mpq(n, big), mpq(n + 1, big)


def sqrt_lower(r, scale=1 << 40):
    return sqrt_bounds(r, scale)[0]


def sqrt_upper(r, scale=1 << 40):
    return sqrt_bounds(r, scale)[1]


@dataclass(frozen=True)
class Interval:
    """Closed rational interval ``[lo, hi]``.

    Arithmetic is exact on the endpoints, hence trivially outward; use
    :meth:`round_out` to cap denominators without losing containment.
    """

    lo: Rational
    hi: Rational

    def __post_init__(self):
        lo, hi = Q(self.lo), Q(self.hi)
        if lo > hi:
            raise DomainError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, r):
        return cls(r, r)

    @property
    def width(self):
        return self.hi - self.lo

    def contains(self, r):
        return self.lo <= r <= self.hi

    def __add__(self, other):
        other = _as_interval(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-_as_interval(other))

    def __rsub__(self, other):
        return _as_interval(other) - self

    def __mul__(self, other):
        other = _as_interval(other)
        products = (self.lo * other.lo, self.lo * other.hi,
                    self.hi * other.lo, self.hi * other.hi)
        return Interval(min(products), max(products))

    __rmul__ = __mul__

    def round_out(self, denominator):
        """Widen to endpoints with the given denominator."""
        d = int(denominator)
        if d < 1:
            raise DomainError("denominator must be positive")
        return Interval(mpq(floor_q(self.lo * d), d), mpq(ceil_q(self.hi * d), d))

    def sign(self):
        """+1/-1 when the interval excludes zero on that side, else None."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        return None


def _as_interval(x):
    if isinstance(x, Interval):
        return x
    return Interval.point(Q(x))


@dataclass(frozen=True)
class RootExpr:
    """The real number ``a + b*sqrt(d)`` with rational a, b and d >= 0."""

    a: Rational
    b: Rational = ZERO
    d: Rational = ZERO

    def __post_init__(self):
        object.__setattr__(self, "a", Q(self.a))
        object.__setattr__(self, "b", Q(self.b))
        object.__setattr__(self, "d", Q(self.d))

    @classmethod
    def sqrt(cls, d):
        return cls(ZERO, ONE, d)

    def __add__(self, other):
        (a1, b1), (a2, b2), d = _common(self, other)
        return RootExpr(a1 + a2, b1 + b2, d)

    __radd__ = __add__

    def __neg__(self):
        return RootExpr(-self.a, -self.b, self.d)

    def __sub__(self, other):
        (a1, b1), (a2, b2), d = _common(self, other)
        return RootExpr(a1 - a2, b1 - b2, d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        (a1, b1), (a2, b2), d = _common(self, other)
        return RootExpr(a1 * a2 + b1 * b2 * d, a1 * b2 + b1 * a2, d)

    __rmul__ = __mul__

    def square(self):
        return self * self

    def sign(self):
        return sign_of(self)

    def __repr__(self):
        if self.b == 0 or self.d == 0:
            return f"RootExpr({format_rational(self.a)})"
        return (f"RootExpr({format_rational(self.a)} + "
                f"{format_rational(self.b)}*sqrt({format_rational(self.d)}))")


def _common(x, y):
    if not isinstance(y, RootExpr):
        y = RootExpr(Q(y))
    if x.b == 0 or x.d == 0:
        d = y.d
    elif y.b == 0 or y.d == 0 or y.d == x.d:
        d = x.d
    else:
        raise DomainError("cannot combine surds with different radicands")
    return (x.a, x.b), (y.a, y.b), d


def radical_product(b1, d1, b2, d2):
    """``(b1*sqrt(d1)) * (b2*sqrt(d2))`` as a single surd ``b1*b2*sqrt(d1*d2)``."""
    if d1 < 0 or d2 < 0:
        raise DomainError("negative radicand")
    return RootExpr(ZERO, Q(b1) * Q(b2), Q(d1) * Q(d2))


def sign_of(e):
    """Exact sign (-1, 0, +1) of ``a + b*sqrt(d)``."""
    if not isinstance(e, RootExpr):
        return sgn(Q(e))
    a, b, d = e.a, e.b, e.d
    if d < 0:
        raise DomainError("RootExpr radicand must be non-negative")
    sb = sgn(b) if d > 0 else 0
    sa = sgn(a)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: the larger magnitude wins
    lhs, rhs = a * a, b * b * d
    if lhs > rhs:
        return sa
    if lhs < rhs:
        return sb
    return 0


def compare(e1, e2):
    """Sign of ``e1 - e2`` for surds sharing a radicand (or rationals)."""
    if isinstance(e1, RootExpr):
        return sign_of(e1 - e2)
    if isinstance(e2, RootExpr):
        return -sign_of(e2 - e1)
    return sgn(Q(e1) - Q(e2))


def enclose(e, precision):
    """Rational interval of width <= 1/precision containing ``e``.

    Exact (degenerate) when the radicand is a rational square.  Larger
    precision yields nested intervals.
    """
    if not isinstance(e, RootExpr):
        return Interval.point(Q(e))
    if e.d < 0:
        raise DomainError("RootExpr radicand must be non-negative")
    precision = int(precision)
    if precision < 1:
        raise DomainError("precision must be a positive integer")
    if e.b == 0 or e.d == 0:
        return Interval.point(e.a)
    lo, hi = sqrt_bounds(e.d, abs(e.b) * precision)
    return e.a + Interval(lo, hi) * e.b
