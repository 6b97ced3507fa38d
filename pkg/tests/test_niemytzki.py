import random

import pytest
from gmpy2 import mpq

from rcspace import niemytzki as nz
from rcspace.errors import DomainError, PreconditionError, ScenarioError
from rcspace.harness import Boundary, sample_points

F0 = [nz.closed_kball((0, 0), 1)]
G0 = [nz.closed_kball((4, 0), 1)]


def test_kball_examples():
    b = nz.kball((0, 0), 1)
    assert b.center == (0, 1) and b.radius == 1 and nz.kball_contains(b, (0, 0))
    assert nz.kball((0, 2), 1).center == (0, 2)
    with pytest.raises(DomainError):
        nz.kball((0, -1), 1)
    with pytest.raises(DomainError):
        nz.kball((0, 0), 0)


def test_kball_contains_examples():
    b = nz.kball((0, 0), 1)
    assert nz.kball_contains(b, (0, 1))
    assert not nz.kball_contains(b, (1, 0))
    assert not nz.kball_contains(nz.kball((0, 2), 1), (0, 3))


def test_tangent_ball_excludes_other_axis_points():
    # a tangent ball meets the axis only at its anchor
    b = nz.kball((0, 0), 1)
    for x in (mpq(1, 1000), mpq(-1, 7), mpq(1, 2)):
        assert not nz.kball_contains(b, (x, 0))


def test_closure_keeps_tangency_points():
    assert nz.closed_contains(nz.closure(nz.kball((0, 0), 1)), (0, 0))
    # off-axis disc whose closed disc touches the axis at (3, 0)
    assert nz.closed_contains(nz.closure(nz.kball((3, 1), 1)), (3, 0))
    assert not nz.kball_contains(nz.kball((3, 1), 1), (3, 0))


@pytest.mark.parametrize("other,expected", [((3, 1), False), ((1, 1), True), ((2, 1), False)])
def test_open_meets_closed_examples(other, expected):
    b = nz.kball((0, 1), 1)
    assert nz.open_meets_closed(b, nz.closure(nz.kball(other, 1))) is expected


def _rand_ball(rng, cls):
    x = mpq(rng.randint(-24, 24), 8)
    y = mpq(0) if rng.random() < 0.3 else mpq(rng.randint(1, 24), 8)
    r = mpq(rng.randint(1, 24), 8)
    return cls(nz.npoint(x, y), r)


def _grid_hit(b, c, steps=24):
    x0, y0, x1, y1 = b.bbox()
    for i in range(steps + 1):
        for j in range(steps + 1):
            p = (x0 + (x1 - x0) * mpq(i, steps), y0 + (y1 - y0) * mpq(j, steps))
            if nz.kball_contains(b, p) and nz.closed_contains(c, p):
                return True
    # axis points are thin: probe them separately
    for i in range(4 * steps + 1):
        p = (x0 + (x1 - x0) * mpq(i, 4 * steps), mpq(0))
        if nz.kball_contains(b, p) and nz.closed_contains(c, p):
            return True
    return False


def test_open_meets_closed_against_grid_and_euclid_oracles():
    rng = random.Random(5)
    euclid_cases = 0
    for _ in range(1500):
        b = _rand_ball(rng, nz.KBall)
        c = _rand_ball(rng, nz.ClosedKBall)
        got = nz.open_meets_closed(b, c)
        if _grid_hit(b, c, 12):
            assert got, (b, c)
        (x1, y1), (x2, y2) = b.center, c.center
        if y1 > b.radius and y2 > c.radius:
            euclid_cases += 1
            d2 = (x1 - x2) ** 2 + (y1 - y2) ** 2
            assert got == (d2 < (b.radius + c.radius) ** 2)
    assert euclid_cases > 100


def test_f_alpha_member_examples():
    assert nz.f_alpha_member(F0, G0, 1, (0, 0))
    # α = 6: centres (0,6) and (4,1), dist² = 41 < 49 so the discs meet
    assert not nz.f_alpha_member(F0, G0, 6, (0, 0))
    with pytest.raises(PreconditionError):
        nz.f_alpha_member(F0, G0, 1, (9, 9))


def test_f_alpha_region_examples():
    region = nz.f_alpha_region(F0, G0, 1)
    assert region.forbidden == (((4, 1), 2),)
    assert region.contains((0, 1))
    with pytest.raises(DomainError):
        nz.f_alpha_region(F0, G0, 0)
    with pytest.raises(ScenarioError):
        nz.f_alpha_region(F0, [], 1)
    with pytest.raises(ScenarioError):
        nz.f_alpha_region(F0, F0, 1)


SCENES = [
    (F0, G0),
    ([nz.closed_kball((0, mpq(1, 2)), 1)], [nz.closed_kball((3, mpq(1, 2)), 1)]),
    ([nz.closed_kball((0, 0), 1), nz.closed_kball((4, 0), 1)],
     [nz.closed_kball((2, mpq(1, 2)), mpq(1, 2))]),
]


@pytest.mark.parametrize("F,G", SCENES)
def test_region_agrees_with_member_and_is_monotone(F, G):
    pts = sample_points(F, 400, 3, "agree")
    alphas = [mpq(1, 8), mpq(1, 2), mpq(1), mpq(2)]
    for a in alphas:
        region = nz.f_alpha_region(F, G, a)
        for p in pts:
            assert region.contains(p) == nz.f_alpha_member(F, G, a, p)
    for p in pts:
        flags = [nz.f_alpha_member(F, G, a, p) for a in alphas]
        # membership at a larger α implies membership at every smaller α
        assert flags == sorted(flags, reverse=True)


def test_gap_far_scenario_matches_grid_lower_bound():
    delta = nz.euclid_closure_gap(F0, G0, 1, 24)
    assert delta is not None and delta >= 1
    fa = sample_points(nz.f_alpha_region(F0, G0, 1), 300, 1, "fa")
    gb = sample_points(Boundary(G0), 300, 1, "gb")
    for p, g in zip(fa, gb):
        assert (p.x - g.x) ** 2 + (p.y - g.y) ** 2 >= delta * delta


def test_gap_stress_scenario():
    F = [nz.closed_kball((0, 1), 1)]
    G = [nz.closed_kball((mpq(2001, 1000), 1), 1)]
    delta = nz.euclid_closure_gap(F, G, mpq(1, 2000), 24)
    assert delta is not None and 0 < delta <= mpq(1, 1000)


def test_gap_zero_precision_is_unknown():
    assert nz.euclid_closure_gap(F0, G0, 1, 0) is None


def test_gamma_interior_example():
    gamma, cert = nz.lemma3_gamma(F0, G0, 1, mpq(1, 2), (4, 1))
    assert gamma == mpq(1, 4) and cert.case == "interior" and cert.ok


def test_gamma_boundary_certificate_and_disjointness():
    gamma, cert = nz.lemma3_gamma(F0, G0, 1, mpq(1, 2), (4, 0), case="boundary")
    assert gamma > 0 and cert.case == "boundary"
    assert all(cert.verify().values())
    probe = nz.kball((4, 0), gamma)
    for p in sample_points(nz.f_alpha_region(F0, G0, 1), 300, 2, "gamma"):
        assert not nz.open_meets_open(nz.kball(p, mpq(1, 2)), probe)
        assert not nz.open_meets_closed(nz.kball(p, mpq(1, 2)), nz.closure(probe))


def test_gamma_boundary_below_interior():
    g_int, _ = nz.lemma3_gamma(F0, G0, 1, mpq(1, 2), (4, 0), case="interior")
    g_bd, _ = nz.lemma3_gamma(F0, G0, 1, mpq(1, 2), (4, 0), case="boundary")
    assert g_bd < g_int


def test_gamma_errors():
    with pytest.raises(DomainError):
        nz.lemma3_gamma(F0, G0, 1, 1, (4, 0))
    with pytest.raises(PreconditionError):
        nz.lemma3_gamma(F0, G0, 1, mpq(1, 2), (0, 0))


def test_fact1_examples():
    rep = nz.fact1_check((0, 0), lambda k: (mpq(1, k), 0), 1, [(0, mpq(1, 2))])
    assert rep.witnesses == [2] and rep.violations == 0
    rep = nz.fact1_check((0, 2), [(0, 2)] * 3, 1, [(0, mpq(9, 4))])
    assert rep.witnesses == [1]
    # (0, 5/2) is exactly α/2 from x: on the rim, so outside the open ball
    with pytest.raises(PreconditionError):
        nz.fact1_check((0, 2), [(0, 2)] * 3, 1, [(0, mpq(5, 2))])
    with pytest.raises(PreconditionError):
        nz.fact1_check((0, 0), lambda k: (mpq(1, k), 0), 1, [(0, 0)])


def test_fact1_gallop_matches_linear_scan():
    rng = random.Random(9)
    for _ in range(40):
        x = (mpq(rng.randint(-8, 8), 4), mpq(0))
        v = (mpq(rng.randint(-8, 8), 4), mpq(rng.randint(0, 8), 4))
        seq = lambda k: (x[0] + v[0] / k, x[1] + v[1] / k)
        half = nz.kball(x, mpq(1, 2))
        z = (x[0] + mpq(rng.randint(-40, 40), 200), mpq(rng.randint(1, 99), 100))
        if nz.npoint(z) == nz.npoint(x) or not nz.kball_contains(half, z):
            continue
        lazy = nz.fact1_check(x, seq, 1, [z]).witnesses[0]
        eager = nz.fact1_check(x, [seq(k) for k in range(1, 5001)], 1, [z]).witnesses[0]
        assert lazy == eager
