"""Two L-shaped half-open sets in the Sorgenfrey plane, separated exactly.

Every membership query here is decided by box algebra, so no verdict is
ever unknown.
"""

from gmpy2 import mpq

from rcspace import region as rg
from rcspace import sorgenfrey as sf
from rcspace.exact import format_rational as fr
from rcspace.scenario import corpus_dir, load_scenario


def main():
    s = load_scenario(corpus_dir() / "corollary.ssc")
    res = rg.separate(s.space, s.F, s.G, s.epsilon, N=s.stages)
    for label, gens in (("F", s.F), ("G", s.G)):
        for b in gens:
            sides = " x ".join(f"[{fr(lo)}, {fr(lo + w)})" for lo, w in zip(b.lower, b.widths))
            print(f"{label}: {sides}")
    print()

    # walk along the diagonal through the corner where F and G touch
    for k in range(-2, 10):
        t = mpq(k, 4)
        q = sf.spoint((t, t))
        vf, vg = rg.member(res.uF, q), rg.member(res.uG, q)
        side = "F" if sf.in_union(s.F, q) else "G" if sf.in_union(s.G, q) else "-"
        print(f"({fr(t)}, {fr(t)}) in {side}: uF {vf.status}, uG {vg.status} (stage {vf.stage or vg.stage})")

    # the separating radius for a point of G at its first useful stage
    x = sf.spoint((1, 1))
    m, cert = sf.lemma6_m(s.F, s.G, 1, x)
    print(f"\nP((1, 1), {m}) misses every P(y, 2) with y in F_G,1; certificate ok = {cert.ok}")


if __name__ == "__main__":
    main()
