"""Inspect the radius certificate for a point of G sitting on the axis.

For points of G on the axis the interior bound may fail, and a tangent disc
construction with surd coordinates supplies the radius instead.  Each stated
inequality is rechecked with exact sign computations.
"""

from gmpy2 import mpq

from rcspace import niemytzki as nz
from rcspace.scenario import corpus_dir, load_scenario


def main():
    s = load_scenario(corpus_dir() / "axis_tangents.nsc")
    alpha, eps = mpq(1, 2), mpq(1, 2)
    for p in [(mpq(21, 10), 0), (mpq(21, 10), 1)]:
        for case in (None, "boundary"):
            gamma, cert = nz.lemma3_gamma(s.F, s.G, alpha, eps, p, case=case)
            print(f"point {p[0]},{p[1]}  case={cert.case:9} gamma={gamma}")
            for name, ok in cert.verify().items():
                print(f"    {name:22} {'ok' if ok else 'FAILED'}")
    delta = nz.euclid_closure_gap(s.F, s.G, alpha, 24)
    print(f"\nlower bound on the Euclidean gap between F_alpha and G: {delta}")


if __name__ == "__main__":
    main()
