"""Seeded samplers and the property suites.

Every random choice comes from ``random.Random(f"{seed}/{stream}/{i}")``, so
sample ``i`` of a stream does not depend on how many draws earlier samples
consumed.  Coordinates are rationals with denominators bounded by
``DENOMINATOR`` (before boundary snapping), and every sample is rechecked
with the exact region predicate before it is used.
"""

from __future__ import annotations

import io
import csv
import random
import time
from collections import Counter
from dataclasses import dataclass, field

from gmpy2 import mpq

from . import niemytzki as nz
from . import region as rg
from . import sorgenfrey as sf
from .errors import DomainError, SamplingError
from .exact import ZERO, Q, ceil_q, floor_q, format_rational
from .region import Status
from .scenario import NIEMYTZKI, SORGENFREY, Scenario

DENOMINATOR = 1 << 16
STAGE_LIMIT = 64


# -- regions for sampling ----------------------------------------------------

@dataclass(frozen=True)
class Rect:
    """Closed axis-aligned rectangle (Niemytzki: clipped to y >= 0)."""

    lo: tuple
    hi: tuple
    space: str = NIEMYTZKI

    def contains(self, q):
        return all(a <= v <= b for a, v, b in zip(self.lo, q, self.hi))


@dataclass(frozen=True)
class Minus:
    """Points of ``base`` outside ``removed`` (both sampling regions)."""

    base: object
    removed: object


@dataclass(frozen=True)
class Boundary:
    """Points of ``base``, drawn mostly from the boundaries of its pieces."""

    base: object


def _atoms(region):
    """(kind, data) proposals covering the region."""
    if isinstance(region, (nz.ClosedKBall, nz.KBall)):
        return [("disc", region)]
    if isinstance(region, sf.GenBox):
        return [("box", region)]
    if isinstance(region, Rect):
        return [("rect", region)]
    if isinstance(region, (nz.NFilteredSet, sf.SFilteredSet)):
        return _atoms(region.F)
    if isinstance(region, (Minus, Boundary)):
        return _atoms(region.base)
    if isinstance(region, (list, tuple)):
        out = []
        for r in region:
            out.extend(_atoms(r))
        return out
    raise DomainError(f"cannot sample from {type(region).__name__}")


def _contains(region, q):
    if isinstance(region, nz.ClosedKBall):
        return nz.closed_contains(region, q)
    if isinstance(region, nz.KBall):
        return nz.kball_contains(region, q)
    if isinstance(region, (sf.GenBox, Rect, nz.NFilteredSet, sf.SFilteredSet)):
        return region.contains(q)
    if isinstance(region, Minus):
        return _contains(region.base, q) and not _contains(region.removed, q)
    if isinstance(region, Boundary):
        return _contains(region.base, q)
    return any(_contains(r, q) for r in region)


def _space(atoms):
    kind, data = atoms[0]
    if kind == "disc":
        return NIEMYTZKI
    if kind == "box":
        return SORGENFREY
    return data.space


def _grid(rng, lo, hi, D=DENOMINATOR):
    a, b = ceil_q(lo * D), floor_q(hi * D)
    if a <= b:
        return mpq(rng.randint(a, b), D)
    return lo + (hi - lo) * mpq(rng.randint(0, D), D)


def _circle_point(rng, cx, cy, r, D=DENOMINATOR):
    # rational parametrisation of the unit circle
    t = mpq(rng.randint(-D, D), D)
    u, v = (1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)
    if rng.random() < 0.5:
        u = -u
    return cx + r * u, cy + r * v


def _propose(rng, atom, bias):
    kind, g = atom
    if kind == "disc":
        cx, cy = g.center
        r = g.radius
        roll = rng.random()
        if roll < bias / 2:
            return _circle_point(rng, cx, cy, r)
        if roll < bias and cy <= r:
            # axis point under the disc; a tangent disc has only its anchor
            if cy == r:
                return cx, ZERO
            return _grid(rng, cx - r, cx + r), ZERO
        if roll < bias * 3 / 2:
            # just inside the rim
            px, py = _circle_point(rng, cx, cy, r)
            s = 1 - mpq(1, 1 << rng.randint(2, 16))
            return cx + s * (px - cx), max(ZERO, cy + s * (py - cy))
        x0, y0, x1, y1 = g.bbox()
        return _grid(rng, x0, x1), _grid(rng, y0, y1)
    if kind == "box":
        lo = tuple(g.lower)
        hi = tuple(l + w for l, w in zip(g.lower, g.widths))
    else:
        lo, hi = g.lo, g.hi
    q = [_grid(rng, a, b) for a, b in zip(lo, hi)]
    if rng.random() < bias:
        k = rng.randrange(len(q))
        roll = rng.random()
        if roll < 1 / 3:
            q[k] = lo[k]
        elif roll < 2 / 3:
            q[k] = hi[k] - (hi[k] - lo[k]) * mpq(1, 1 << rng.randint(4, 20))
        else:
            q[k] = hi[k]
    return tuple(q)


def sample_points(region, count, seed, stream="points", bias=0.25, max_tries=2000):
    """``count`` exact rational points of ``region``, reproducible from ``seed``.

    ``region`` is a generator, a list of generators (their union), a filtered
    set, a :class:`Rect`, or a :class:`Minus` / :class:`Boundary` wrapper.
    ``bias`` is the share of proposals placed on or next to piece boundaries.
    """
    if count < 1:
        raise DomainError("count must be at least 1")
    if isinstance(region, Boundary):
        bias = 0.9
    atoms = _atoms(region)
    if not atoms:
        raise SamplingError("region has no pieces")
    space = _space(atoms)
    make = nz.NPoint if space == NIEMYTZKI else sf.spoint
    out = []
    for i in range(count):
        rng = random.Random(f"{seed}/{stream}/{i}")
        for _ in range(max_tries):
            atom = atoms[rng.randrange(len(atoms))]
            q = _propose(rng, atom, bias)
            if space == NIEMYTZKI:
                if q[1] < 0:
                    continue
                q = nz.NPoint(*q)
            else:
                q = sf.spoint(q)
            if _contains(region, q):
                out.append(q)
                break
        else:
            raise SamplingError(f"no point of the region found after {max_tries} tries")
    return out


# -- reports -----------------------------------------------------------------

@dataclass
class Check:
    passed: int = 0
    failed: int = 0
    unknown: int = 0

    def add(self, ok):
        """Record True (pass), False (fail) or None (unknown)."""
        if ok is None:
            self.unknown += 1
        elif ok:
            self.passed += 1
        else:
            self.failed += 1

    def __iadd__(self, other):
        self.passed += other.passed
        self.failed += other.failed
        self.unknown += other.unknown
        return self


@dataclass
class SuiteReport:
    name: str
    seed: object
    space: str = ""
    checks: dict = field(default_factory=dict)
    header: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    histogram: Counter = field(default_factory=Counter)
    verdicts: int = 0
    unknown: int = 0
    wall_clock: float = 0.0
    notes: list = field(default_factory=list)

    def check(self, name):
        return self.checks.setdefault(name, Check())

    @property
    def failures(self):
        return sum(c.failed for c in self.checks.values())

    @property
    def unknown_rate(self):
        return self.unknown / self.verdicts if self.verdicts else 0.0

    def csv_text(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header)
        w.writerows(self.rows)
        return buf.getvalue()

    def summary(self):
        lines = [f"{self.name}: seed={self.seed} failures={self.failures}"
                 f" unknown={self.unknown}/{self.verdicts} ({100 * self.unknown_rate:.2f}%)"
                 f" wall={self.wall_clock:.2f}s"]
        for name, c in self.checks.items():
            lines.append(f"  {name:<24} pass={c.passed} fail={c.failed} unknown={c.unknown}")
        if self.histogram:
            hist = " ".join(f"{k}:{v}" for k, v in sorted(self.histogram.items(), key=_hkey))
            lines.append(f"  histogram {hist}")
        lines.extend("  note: " + n for n in self.notes)
        return "\n".join(lines)


def _hkey(item):
    k = item[0]
    return (0, k, "") if isinstance(k, int) else (1, 0, str(k))


def merge_reports(name, reports):
    out = SuiteReport(name, seed=None)
    for r in reports:
        for k, c in r.checks.items():
            out.check(k).__iadd__(c)
        out.verdicts += r.verdicts
        out.unknown += r.unknown
        out.wall_clock += r.wall_clock
        out.histogram.update(r.histogram)
    return out


# -- convergence suites ------------------------------------------------------

@dataclass(frozen=True)
class FactConfig:
    space: str = NIEMYTZKI
    trials: int = 1000
    samples: int = 100
    seed: int = 0
    alpha: object = None      # fixed α for the tangent disc suite, random per trial when None
    n: int | None = None      # fixed n for the Sorgenfrey suite
    dims: tuple = (1, 2, 3)


def _rand_q(rng, lo, hi, D=1 << 8):
    return lo + (hi - lo) * mpq(rng.randint(0, D), D)


def _bucket(k):
    if k is None:
        return "none"
    return 1 << (k - 1).bit_length() if k > 1 else 1


def _fact1_trial(rng, config, t):
    alpha = Q(config.alpha) if config.alpha is not None else _rand_q(rng, mpq(1, 16), mpq(2))
    x0 = _rand_q(rng, mpq(-4), mpq(4))
    y0 = ZERO if rng.random() < 0.5 else _rand_q(rng, mpq(1, 256), mpq(4))
    x = nz.NPoint(x0, y0)
    if rng.random() < 0.1:
        vx = vy = ZERO
    else:
        vx = _rand_q(rng, mpq(-2), mpq(2))
        vy = max(_rand_q(rng, mpq(-2), mpq(2)), -y0)
    seq = lambda k: (x0 + vx / k, y0 + vy / k)
    half = nz.kball(x, alpha / 2)
    cx, cy = half.center
    r = half.radius
    samples = []
    i = 0
    while len(samples) < config.samples:
        srng = random.Random(f"{config.seed}/fact1/{t}/{i}")
        i += 1
        if srng.random() < 0.3:
            px, py = _circle_point(srng, cx, cy, r)
            s = 1 - mpq(1, 1 << srng.randint(1, 20))
            z = (cx + s * (px - cx), cy + s * (py - cy))
        else:
            z = (_grid(srng, cx - r, cx + r), _grid(srng, max(ZERO, cy - r), cy + r))
        if z[1] < 0:
            continue
        z = nz.NPoint(*z)
        if z != x and nz.kball_contains(half, z):
            samples.append(z)
    return nz.fact1_check(x, seq, alpha, samples)


def _sf1_trial(rng, config, t):
    d = config.dims[rng.randrange(len(config.dims))]
    n = config.n if config.n is not None else rng.randint(1, 4)
    x = tuple(_rand_q(rng, mpq(-4), mpq(4)) for _ in range(d))
    if rng.random() < 0.1:
        v = (ZERO,) * d
    else:
        v = tuple(_rand_q(rng, mpq(-2), mpq(2)) for _ in range(d))
    seq = lambda k: tuple(a + b / k for a, b in zip(x, v))
    c = min(n, d)
    w = mpq(1, n)
    samples = []
    D = DENOMINATOR
    for i in range(config.samples):
        srng = random.Random(f"{config.seed}/sf1/{t}/{i}")
        z = []
        for k in range(d):
            if k < c:
                if srng.random() < 0.2:
                    j = srng.choice((1, D - 1))
                else:
                    j = srng.randint(1, D - 1)
                z.append(x[k] + w * mpq(j, D))
            else:
                z.append(_rand_q(srng, mpq(-8), mpq(8)))
        samples.append(tuple(z))
    return sf.factsf1_check(x, seq, n, samples)


def run_fact_suites(config):
    """Convergence suite over random sequences: tangent discs or Sorgenfrey boxes by ``config.space``."""
    if config.trials < 1 or config.samples < 1:
        raise DomainError("trials and samples must be at least 1")
    if config.alpha is not None and Q(config.alpha) <= 0:
        raise DomainError("alpha must be positive")
    if config.n is not None and (int(config.n) != config.n or config.n < 1):
        raise DomainError("n must be a positive integer")
    label = "fact1" if config.space == NIEMYTZKI else "factsf1"
    trial = _fact1_trial if config.space == NIEMYTZKI else _sf1_trial
    report = SuiteReport(label, config.seed, config.space)
    report.header = ["trial", "sample", "witness_index"]
    chk = report.check(label)
    start = time.perf_counter()
    for t in range(config.trials):
        rng = random.Random(f"{config.seed}/{label}/{t}")
        rep = trial(rng, config, t)
        for i, k in enumerate(rep.witnesses):
            chk.add(k is not None)
            report.histogram[_bucket(k)] += 1
            report.rows.append([t, i, "" if k is None else k])
    report.wall_clock = time.perf_counter() - start
    return report


# -- separation suite --------------------------------------------------------

def _coords(q):
    return list(q) if isinstance(q, sf.SPoint) else [q.x, q.y]


def _ambient(s):
    if s.space == NIEMYTZKI:
        boxes = [g.bbox() for g in s.F + s.G]
        lo = (min(b[0] for b in boxes) - mpq(1, 2), ZERO)
        hi = (max(b[2] for b in boxes) + mpq(1, 2), max(b[3] for b in boxes) + mpq(1, 2))
        return Rect(lo, hi, NIEMYTZKI)
    lows = [g.bbox()[0] for g in s.F + s.G]
    highs = [g.bbox()[1] for g in s.F + s.G]
    lo = tuple(min(l[k] for l in lows) - mpq(1, 2) for k in range(s.d))
    hi = tuple(max(h[k] for h in highs) + mpq(1, 2) for k in range(s.d))
    return Rect(lo, hi, SORGENFREY)


def _stage(s, side, q):
    A, B = (s.F, s.G) if side == "F" else (s.G, s.F)
    if s.space == NIEMYTZKI:
        return nz.stage_index(A, B, q, STAGE_LIMIT)
    return sf.stage_index(A, B, q, STAGE_LIMIT)


def _witness_ok(result, side, verdict, q):
    comp = result.component(side, verdict.stage)
    w_n = comp.open
    w = verdict.witness
    if not w_n.fset.contains(w):
        return False
    if result.space == NIEMYTZKI:
        return nz.kball_contains(nz.kball(w, w_n.param), q)
    return sf.pbox_contains(sf.pbox(w, w_n.param), q)


def scenario_samples(s, count=None, seed=None):
    """(side, point) pairs: a third each from F, G and the ambient box."""
    count = s.samples if count is None else count
    seed = s.seed if seed is None else seed
    k = max(1, count // 3)
    out = [("F", q) for q in sample_points(s.F, k, seed, "F")]
    out += [("G", q) for q in sample_points(s.G, k, seed, "G")]
    rest = count - 2 * k
    if rest > 0:
        out += [("ambient", q) for q in sample_points(_ambient(s), rest, seed, "ambient")]
    return out


def classify_samples(s, result, samples, report, budget=None):
    """Evaluate uF and uG on every sample; fill CSV rows and membership checks."""
    budget = s.budget if budget is None else budget
    N = result.stages
    both = report.check("disjoint")
    wit = report.check("witness")
    for sid, (side, q) in enumerate(samples):
        vf, vg = rg.memberships([result.uF, result.uG], q, budget)
        report.verdicts += 2
        report.unknown += (vf.status == Status.UNKNOWN) + (vg.status == Status.UNKNOWN)
        both.add(not (vf.status == Status.IN and vg.status == Status.IN))
        for sd, v in (("F", vf), ("G", vg)):
            if v.status == Status.IN:
                wit.add(_witness_ok(result, sd, v, q))
        stage = ""
        if side in ("F", "G"):
            n = _stage(s, side, q)
            stage = "" if n is None else n
            report.histogram[n if n is not None else f">{STAGE_LIMIT}"] += 1
            own, other = (vf, vg) if side == "F" else (vg, vf)
            report.check("not_in_opposite").add(other.status != Status.IN)
            if n is not None and n <= N:
                cov = report.check("coverage")
                if own.status == Status.UNKNOWN:
                    cov.add(None)
                else:
                    cov.add(own.status == Status.IN)
        depth = max(vf.depth, vg.depth)
        report.rows.append([sid] + [format_rational(c) for c in _coords(q)]
                           + [side, str(vf.status), str(vg.status), stage, depth])


def _lemma_checks_niemytzki(s, report, pairs):
    F, G = s.F, s.G
    chk2 = report.check("lemma2_gap")
    chk3 = report.check("lemma3_gamma")
    alpha = region = None
    for cand in (mpq(1, 2), mpq(1, 8), mpq(1, 32), mpq(1, 128)):
        region = nz.f_alpha_region(F, G, cand)
        try:
            fa = sample_points(region, pairs, s.seed, "falpha")
        except Exception:
            continue
        alpha = cand
        break
    if alpha is None:
        report.notes.append("F_alpha empty for every probe alpha; lemma checks skipped")
        return
    delta = nz.euclid_closure_gap(F, G, alpha, 24)
    if delta is None:
        chk2.add(None)
    else:
        gb = sample_points(Boundary(G), pairs, s.seed, "gboundary")
        d2 = delta * delta
        for p, g in zip(fa, gb):
            chk2.add(delta > 0 and (p.x - g.x) ** 2 + (p.y - g.y) ** 2 >= d2)
    gs = sample_points(G, max(1, pairs // 20), s.seed, "lemma3")
    ea = s.epsilon * alpha
    for pq in gs:
        gamma, cert = nz.lemma3_gamma(F, G, alpha, s.epsilon, pq)
        if not cert.ok or gamma <= 0:
            chk3.add(False)
            continue
        probe = nz.kball(pq, gamma)
        for p in fa[:50]:
            chk3.add(not nz.open_meets_open(nz.kball(p, ea), probe))


def _lemma_checks_sorgenfrey(s, report, pairs):
    F, G = s.F, s.G
    chk = report.check("lemma6")
    for n in range(1, s.stages + 1):
        try:
            ys = sample_points(sf.f_gn_region(F, G, n), pairs, s.seed, f"fgn{n}")
        except Exception:
            continue
        xs = sample_points(G, max(1, pairs // 20), s.seed, f"lemma6/{n}")
        for x in xs:
            m, cert = sf.lemma6_m(F, G, n, x)
            if not cert.ok:
                chk.add(False)
                continue
            px = sf.pbox(x, m)
            for y in ys[:50]:
                chk.add(not sf.boxes_meet(sf.pbox(y, 2 * n), px))
        return
    report.notes.append("F_{G,n} empty for every n <= stages; index certificate check skipped")


def run_separation_suite(s, samples=None, seed=None, pairs=200, budget=None):
    """Separate F and G, then check the separation contract on samples."""
    if not isinstance(s, Scenario):
        raise DomainError("run_separation_suite needs a Scenario")
    seed = s.seed if seed is None else seed
    start = time.perf_counter()
    report = SuiteReport(s.name or "scenario", seed, s.space)
    coord_cols = ["x", "y"] if s.space == NIEMYTZKI else [f"x{k}" for k in range(s.d)]
    report.header = (["sample_id"] + coord_cols
                     + ["side", "verdict_uF", "verdict_uG", "stage_n", "depth_used"])
    result = rg.separate(s.space, s.F, s.G, s.epsilon, s.stages)
    pts = scenario_samples(s, samples, seed)
    classify_samples(s, result, pts, report, budget)
    if s.space == NIEMYTZKI:
        _lemma_checks_niemytzki(s, report, pairs)
    else:
        _lemma_checks_sorgenfrey(s, report, pairs)
    report.wall_clock = time.perf_counter() - start
    return report
