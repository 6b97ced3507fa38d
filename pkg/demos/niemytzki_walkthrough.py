"""Separate two disjoint regular closed sets in the tangent disc plane.

Loads a shipped scenario, builds the staged open sets uF and uG, then
queries a handful of points by hand.  Run with ``python demos/niemytzki_walkthrough.py``.
"""

from gmpy2 import mpq

from rcspace import niemytzki as nz
from rcspace.exact import format_rational as fr
from rcspace import region as rg
from rcspace.harness import run_separation_suite
from rcspace.scenario import corpus_dir, load_scenario


def main():
    s = load_scenario(corpus_dir() / "axis_tangents.nsc")
    print(f"scenario {s.name}, epsilon {fr(s.epsilon)}, {s.stages} stages")
    for label, gens in (("F", s.F), ("G", s.G)):
        for b in gens:
            print(f"  {label}: closed ball at ({fr(b.anchor.x)}, {fr(b.anchor.y)}) radius {fr(b.radius)}")

    res = rg.separate(s.space, s.F, s.G, s.epsilon, N=s.stages)
    print(f"\nuF is a union of {len(res.uF.children)} staged differences W_n minus earlier closures")

    # the tangency anchors are the interesting points: each is only reached
    # through discs sitting above it
    probes = [(0, 0), (mpq(21, 10), 0), (1, mpq(1, 2)), (mpq(21, 20), 0), (mpq(21, 20), 1)]
    print(f"\n{'point':>16}  uF       uG       stage")
    for p in probes:
        q = nz.npoint(p)
        vf, vg = rg.member(res.uF, q), rg.member(res.uG, q)
        n = nz.stage_index(s.F, s.G, q, s.stages) if nz.in_union(s.F, q) else None
        print(f"{'(' + fr(q.x) + ', ' + fr(q.y) + ')':>16}  {str(vf.status):8} {str(vg.status):8} {n}")

    rep = run_separation_suite(s, samples=300)
    print("\n" + rep.summary())


if __name__ == "__main__":
    main()
