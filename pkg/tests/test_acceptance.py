"""Acceptance criteria 1-9, one printed PASS/FAIL line each.

Run under pytest (``pytest -v tests/test_acceptance.py``) or directly as a
script.  Every expected value comes from an exact predicate recheck or an
independently constructed oracle; no tolerance is applied to failure counts.
"""

import random
import sys
import time

import pytest
from gmpy2 import mpq

from rcspace import niemytzki as nz
from rcspace import region as rg
from rcspace import sorgenfrey as sf
from rcspace.errors import SamplingError
from rcspace.harness import (Boundary, FactConfig, Rect, run_fact_suites,
                             run_separation_suite, sample_points, scenario_samples)
from rcspace.region import Status
from rcspace.scenario import load_corpus

NCORPUS = load_corpus("niemytzki")
SCORPUS = load_corpus("sorgenfrey")


def emit(n, ok, detail, capsys=None):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)
    sys.stdout.flush()
    assert ok, line


# -- 1 -----------------------------------------------------------------------

def _random_union(rng, space):
    k = rng.randint(1, 4)
    if space == "niemytzki":
        return [nz.closed_kball((mpq(rng.randint(-16, 16), 4),
                                 mpq(rng.choice((0, rng.randint(1, 12))), 4)),
                                mpq(rng.randint(1, 12), 4)) for _ in range(k)]
    d = rng.randint(1, 3)
    return [sf.genbox([mpq(rng.randint(-8, 8), 4) for _ in range(d)],
                      [mpq(rng.randint(1, 8), 4) for _ in range(d)]) for _ in range(k)]


def criterion1():
    start = time.perf_counter()
    bad = total = 0
    for space in ("niemytzki", "sorgenfrey"):
        for i in range(500):
            rng = random.Random(f"acc1/{space}/{i}")
            gens = _random_union(rng, space)
            expr = rg.regular_closure(rg.union_of(gens))
            if space == "niemytzki":
                amb = Rect((-6, 0), (6, 6))
            else:
                d = gens[0].d
                amb = Rect((-3,) * d, (3,) * d, "sorgenfrey")
            pts = sample_points(gens, 100, i, "bnd", bias=0.6) + sample_points(amb, 100, i, "amb")
            for q in pts:
                total += 1
                mod = nz if space == "niemytzki" else sf
                truth = mod.in_union(gens, q)
                # both the neighbourhood-witness test and the expression evaluator
                bad += rg.cl_int_member(gens, q) != truth
                bad += (rg.member(expr, q).status == Status.IN) != truth
    wall = time.perf_counter() - start
    return bad == 0 and wall < 30, f"{total} points, {bad} discrepancies, {wall:.1f}s (< 30s)"


# -- 2, 3 ----------------------------------------------------------------------

def criterion2():
    rep = run_fact_suites(FactConfig("niemytzki", trials=1000, samples=100, seed=2024))
    c = rep.check("fact1")
    ok = c.failed == 0 and c.passed == 100000 and rep.wall_clock < 60
    return ok, (f"{c.passed} samples, {c.failed} violations, all witness indices finite="
                f"{c.failed == 0}, {rep.wall_clock:.1f}s (< 60s)")


def criterion3():
    rep = run_fact_suites(FactConfig("sorgenfrey", trials=1000, samples=100, seed=2024,
                                     dims=(1, 2, 3)))
    c = rep.check("factsf1")
    ok = c.failed == 0 and c.passed == 100000 and rep.wall_clock < 30
    return ok, f"{c.passed} samples, {c.failed} violations, {rep.wall_clock:.1f}s (< 30s)"


# -- 4 -----------------------------------------------------------------------

def criterion4():
    bad = pairs = empty = 0
    nonpos = []
    for s in NCORPUS:
        for alpha in (mpq(1), mpq(1, 2), mpq(1, 8)):
            delta = nz.euclid_closure_gap(s.F, s.G, alpha, 24)
            if delta is None or delta <= 0:
                nonpos.append((s.name, alpha))
                continue
            try:
                fa = sample_points(nz.f_alpha_region(s.F, s.G, alpha), 100, s.seed, "l2f")
            except SamplingError:
                empty += 1
                continue
            gb = sample_points(Boundary(s.G), 100, s.seed, "l2g")
            d2 = delta * delta
            for p in fa:
                for g in gb:
                    pairs += 1
                    bad += (p.x - g.x) ** 2 + (p.y - g.y) ** 2 < d2
    ok = not nonpos and bad == 0
    return ok, (f"{len(NCORPUS)} scenarios x 3 alphas, delta>0 everywhere={not nonpos}, "
                f"{pairs} pairs, {bad} violations, {empty} empty F_alpha")


# -- 5 -----------------------------------------------------------------------

def _alpha_with_members(s):
    for alpha in (mpq(1, 2), mpq(1, 8), mpq(1, 32)):
        try:
            return alpha, sample_points(nz.f_alpha_region(s.F, s.G, alpha), 1000, s.seed, "l3f")
        except SamplingError:
            continue
    raise SamplingError(f"{s.name}: F_alpha empty")


def criterion5():
    start = time.perf_counter()
    bad = checks = certs = axis_pts = 0
    for s in NCORPUS:
        alpha, fa = _alpha_with_members(s)
        gs = sample_points(s.G, 50, s.seed, "l3g", bias=0.5)
        axis_pts += sum(g.on_axis for g in gs)
        for eps in (mpq(1, 4), mpq(1, 2), mpq(3, 4)):
            ea = eps * alpha
            for pq in gs:
                gamma, cert = nz.lemma3_gamma(s.F, s.G, alpha, eps, pq)
                g_bd, cert_bd = nz.lemma3_gamma(s.F, s.G, alpha, eps, pq, case="boundary")
                certs += 2
                if not (gamma > 0 and cert.ok and g_bd > 0 and cert_bd.ok):
                    bad += 1
                    continue
                # the boundary radius never exceeds the automatic one, so checking
                # the larger ball covers both
                probe = nz.kball(pq, max(gamma, g_bd))
                for p in fa:
                    checks += 1
                    bad += nz.open_meets_open(nz.kball(p, ea), probe)
    wall = time.perf_counter() - start
    ok = bad == 0 and axis_pts > 0 and wall < 300
    return ok, (f"{certs} certificates, {checks} ball pairs, {bad} violations, "
                f"{axis_pts} on-axis G points, {wall:.1f}s (< 300s)")


# -- 6 -----------------------------------------------------------------------

def _stage_component_in(s, res, side, q, n, budget):
    return rg.member(res.component(side, n), q, budget).status == Status.IN


def criterion6():
    both = cover_fail = cover_unknown = own_out = stage_miss = unknown = verdicts = 0
    for s in NCORPUS:
        rep = run_separation_suite(s, pairs=50)
        res = rg.separate(s.space, s.F, s.G, s.epsilon, 8)
        both += rep.check("disjoint").failed
        cover_fail += rep.check("coverage").failed
        cover_unknown += rep.check("coverage").unknown
        unknown += rep.unknown
        verdicts += rep.verdicts
        for row, (side, q) in zip(rep.rows, scenario_samples(s)):
            if side == "ambient" or row[-2] == "" or row[-2] > 8:
                continue
            own = row[4] if side == "F" else row[5]
            own_out += own == "out"
            stage_miss += not _stage_component_in(s, res, side, q, row[-2], s.budget)
    rate = unknown / verdicts
    ok = (both == 0 and cover_fail == 0 and cover_unknown == 0 and own_out == 0
          and stage_miss == 0 and rate <= 0.05)
    return ok, (f"{verdicts} verdicts, both-In={both}, coverage failures={cover_fail}, "
                f"coverage unknown={cover_unknown}, own-side Out={own_out}, "
                f"stage-component misses={stage_miss}, unknown rate={100 * rate:.2f}% (<= 5%)")


# -- 7 -----------------------------------------------------------------------

def criterion7():
    start = time.perf_counter()
    names = {"d1_adjacent", "d1_interleaved", "d2_adjacent", "d2_checkerboard", "d3_corner",
             "d3_coord2", "d5_coord4", "d5_far", "corollary"}
    chosen = [s for s in SCORPUS if s.name in names]
    both = unknown = miss = l6bad = l6pairs = covered = 0
    dims = set()
    for s in chosen:
        dims.add(s.d)
        res = rg.separate(s.space, s.F, s.G, s.epsilon, s.stages)
        for side, q in scenario_samples(s):
            vf, vg = rg.member(res.uF, q), rg.member(res.uG, q)
            unknown += (vf.status == Status.UNKNOWN) + (vg.status == Status.UNKNOWN)
            both += vf.status == Status.IN and vg.status == Status.IN
            if side == "ambient":
                continue
            A, B = (s.F, s.G) if side == "F" else (s.G, s.F)
            n = sf.stage_index(A, B, q, s.stages)
            if n is None:
                continue
            covered += 1
            own = vf if side == "F" else vg
            miss += own.status != Status.IN
            miss += rg.member(res.component(side, n), q).status != Status.IN
        # index certificates: 20 points x of G against 50 points y of F_{G,n}
        for n in range(1, s.stages + 1):
            try:
                ys = sample_points(sf.f_gn_region(s.F, s.G, n), 50, s.seed, f"l6y{n}")
            except SamplingError:
                continue
            for x in sample_points(s.G, 20, s.seed, f"l6x{n}"):
                m, cert = sf.lemma6_m(s.F, s.G, n, x)
                l6bad += not cert.ok
                px = sf.pbox(x, m)
                for y in ys:
                    l6pairs += 1
                    l6bad += sf.boxes_meet(sf.pbox(y, 2 * n), px)
            break
    wall = time.perf_counter() - start
    ok = (unknown == 0 and both == 0 and miss == 0 and l6bad == 0 and dims >= {1, 2, 3, 5}
          and l6pairs >= 1000 * len(chosen) and wall < 60)
    return ok, (f"{len(chosen)} scenarios (d={sorted(dims)}), unknown={unknown}, both-In={both}, "
                f"{covered} staged samples with {miss} misses, lemma6 {l6pairs} pairs "
                f"{l6bad} violations, {wall:.1f}s (< 60s)")


# -- 8 -----------------------------------------------------------------------

def criterion8():
    mismatch = compared = 0
    csv_same = True
    for s in NCORPUS + SCORPUS:
        fwd = rg.separate(s.space, s.F, s.G, s.epsilon, s.stages)
        rev = rg.separate(s.space, s.G, s.F, s.epsilon, s.stages)
        for _, q in scenario_samples(s, 60):
            compared += 1
            a = rg.member(fwd.uF, q, s.budget).status
            b = rg.member(rev.uG, q, s.budget).status
            mismatch += a != b
        one = run_separation_suite(s, samples=60, pairs=20).csv_text()
        two = run_separation_suite(s, samples=60, pairs=20).csv_text()
        csv_same &= one == two
    ok = mismatch == 0 and csv_same
    return ok, f"{compared} swapped queries, {mismatch} mismatches, CSV byte-identical={csv_same}"


# -- 9 -----------------------------------------------------------------------

def criterion9():
    queries = []
    per = 1000 // len(NCORPUS) + 1
    for s in NCORPUS:
        res = rg.separate(s.space, s.F, s.G, s.epsilon, s.stages)
        # half of the queries hug generator rims, where subdivision matters
        pts = scenario_samples(s, per // 2) + [
            ("rim", q) for q in sample_points(Boundary(s.F + s.G), per - per // 2, s.seed, "rim")]
        queries += [(res, q) for _, q in pts]
    queries = queries[:1000]
    flips = 0
    unknown = {4: 0, 8: 0, 16: 0}
    for res, q in queries:
        seen = set()
        for depth in (4, 8, 16):
            for e in (res.uF, res.uG):
                st = rg.member(e, q, depth).status
                if st == Status.UNKNOWN:
                    unknown[depth] += 1
                seen.add((id(e), st))
        for e in (res.uF, res.uG):
            if (id(e), Status.IN) in seen and (id(e), Status.OUT) in seen:
                flips += 1
    ok = len(queries) == 1000 and flips == 0 and unknown[4] >= unknown[8] >= unknown[16]
    return ok, (f"{len(queries)} queries, {flips} In/Out flips, unknown by depth "
                f"4/8/16 = {unknown[4]}/{unknown[8]}/{unknown[16]}")


CRITERIA = [criterion1, criterion2, criterion3, criterion4, criterion5,
            criterion6, criterion7, criterion8, criterion9]


@pytest.mark.parametrize("n", range(1, 10))
def test_acceptance(n, capsys):
    ok, detail = CRITERIA[n - 1]()
    emit(n, ok, detail, capsys)


if __name__ == "__main__":
    failed = 0
    for n, fn in enumerate(CRITERIA, start=1):
        ok, detail = fn()
        print(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}", flush=True)
        failed += not ok
    sys.exit(1 if failed else 0)
