"""Batch command line front end.

Exit codes: 0 all checks passed, 1 some check failed, 2 usage or parse
error, 3 the Niemytzki Unknown rate exceeded the allowed share.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from gmpy2 import mpq

from . import niemytzki as nz
from . import sorgenfrey as sf
from .errors import PrecisionError, RcSpaceError
from .exact import format_rational, parse_rational
from .harness import (Boundary, FactConfig, merge_reports, run_fact_suites,
                      run_separation_suite, sample_points)
from .scenario import NIEMYTZKI, corpus_dir, load_scenario

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNKNOWN = 0, 1, 2, 3
UNKNOWN_LIMIT = 0.05


def _point(text):
    try:
        return tuple(parse_rational(t) for t in text.split(","))
    except RcSpaceError:
        raise argparse.ArgumentTypeError(f"bad point {text!r}; use p/q,p/q,...") from None


def _rational(text):
    try:
        return parse_rational(text)
    except RcSpaceError:
        raise argparse.ArgumentTypeError(f"bad rational {text!r}") from None


def _resolve(path):
    p = Path(path)
    if p.exists():
        return p
    for alt in (corpus_dir() / p.name, corpus_dir() / f"{p.name}.nsc",
                corpus_dir() / f"{p.name}.ssc"):
        if alt.exists():
            return alt
    raise FileNotFoundError(f"no scenario file {path}")


def _scenario(args):
    s = load_scenario(_resolve(args.scenario))
    changes = {}
    for key in ("stages", "samples", "seed"):
        v = getattr(args, key, None)
        if v is not None:
            changes[key] = v
    if getattr(args, "depth", None) is not None:
        changes["budget"] = args.depth
    return replace(s, **changes) if changes else s


# -- SVG view ----------------------------------------------------------------

_COLORS = {("in", "out"): "#1f5fbf", ("out", "in"): "#c0392b", ("in", "in"): "#000000",
           ("out", "out"): "#9a9a9a"}


def render_svg(s, report, width=640, height=480, pad=24):
    """Flat scatter of sample verdicts over the generator outlines."""
    rows = report.rows
    pts = [(float(parse_rational(r[1])),
            float(parse_rational(r[2])) if s.d > 1 or s.space == NIEMYTZKI else 0.0)
           for r in rows]
    shapes = []
    for side, gens in (("F", s.F), ("G", s.G)):
        for g in gens:
            if s.space == NIEMYTZKI:
                cx, cy = g.center
                shapes.append((side, "circle", float(cx), float(cy), float(g.radius)))
            else:
                lo = list(g.lower) + [mpq(0)]
                w = list(g.widths) + [mpq(1)]
                shapes.append((side, "rect", float(lo[0]), float(lo[1]), float(w[0]), float(w[1])))
    xs = [p[0] for p in pts] + [0.0]
    ys = [p[1] for p in pts] + [0.0]
    for sh in shapes:
        if sh[1] == "circle":
            xs += [sh[2] - sh[4], sh[2] + sh[4]]
            ys += [sh[3] - sh[4], sh[3] + sh[4]]
        else:
            xs += [sh[2], sh[2] + sh[4]]
            ys += [sh[3], sh[3] + sh[5]]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    scale = min((width - 2 * pad) / ((x1 - x0) or 1), (height - 2 * pad) / ((y1 - y0) or 1))

    def X(v):
        return pad + (v - x0) * scale

    def Y(v):
        return height - pad - (v - y0) * scale

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
           f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
           f'<rect width="{width}" height="{height}" fill="white"/>']
    if s.space == NIEMYTZKI:
        out.append(f'<line x1="0" y1="{Y(0):.2f}" x2="{width}" y2="{Y(0):.2f}" stroke="#444"/>')
    for sh in shapes:
        color = "#1f5fbf" if sh[0] == "F" else "#c0392b"
        if sh[1] == "circle":
            out.append(f'<circle cx="{X(sh[2]):.2f}" cy="{Y(sh[3]):.2f}" r="{sh[4] * scale:.2f}" '
                       f'fill="none" stroke="{color}"/>')
        else:
            out.append(f'<rect x="{X(sh[2]):.2f}" y="{Y(sh[3] + sh[5]):.2f}" '
                       f'width="{sh[4] * scale:.2f}" height="{sh[5] * scale:.2f}" '
                       f'fill="none" stroke="{color}"/>')
    i_f = report.header.index("verdict_uF")
    for (px, py), r in zip(pts, rows):
        color = _COLORS.get((r[i_f], r[i_f + 1]), "#e69500")
        out.append(f'<circle cx="{X(px):.2f}" cy="{Y(py):.2f}" r="2" fill="{color}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


# -- commands ----------------------------------------------------------------

def _write_outputs(args, s, report):
    if args.out is None and not args.svg:
        return
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    name = s.name or "scenario"
    if args.out is not None:
        (out / f"{name}.csv").write_text(report.csv_text(), encoding="utf-8")
    if args.svg:
        (out / f"{name}.svg").write_text(render_svg(s, report), encoding="utf-8")


def _verdict_code(report, space):
    if report.failures:
        return EXIT_FAIL
    if space == NIEMYTZKI and report.unknown_rate > UNKNOWN_LIMIT:
        return EXIT_UNKNOWN
    return EXIT_OK


def cmd_fact(args, space):
    cfg = FactConfig(space=space, trials=args.trials, samples=args.samples, seed=args.seed)
    report = run_fact_suites(cfg)
    print(report.summary())
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{report.name}.csv").write_text(report.csv_text(), encoding="utf-8")
    return EXIT_FAIL if report.failures else EXIT_OK


def cmd_gap(args):
    s = _scenario(args)
    if s.space != NIEMYTZKI:
        raise RcSpaceError("gap applies to Niemytzki scenarios")
    alphas = [args.alpha] if args.alpha is not None else [mpq(1), mpq(1, 2), mpq(1, 8)]
    code = EXIT_OK
    for a in alphas:
        delta = nz.euclid_closure_gap(s.F, s.G, a, args.depth or 24)
        if delta is None:
            print(f"alpha={format_rational(a)} delta=unknown")
            code = max(code, EXIT_UNKNOWN)
            continue
        try:
            fa = sample_points(nz.f_alpha_region(s.F, s.G, a), args.samples or 200, s.seed, "gap")
        except RcSpaceError:
            print(f"alpha={format_rational(a)} delta={format_rational(delta)} (F_alpha empty)")
            continue
        gb = sample_points(Boundary(s.G), len(fa), s.seed, "gapG")
        bad = sum((p.x - g.x) ** 2 + (p.y - g.y) ** 2 < delta * delta for p, g in zip(fa, gb))
        print(f"alpha={format_rational(a)} delta={format_rational(delta)} "
              f"pairs={len(fa)} violations={bad}")
        if bad:
            code = EXIT_FAIL
    return code


def cmd_gamma(args):
    s = _scenario(args)
    if s.space != NIEMYTZKI:
        raise RcSpaceError("gamma applies to Niemytzki scenarios")
    alpha = args.alpha if args.alpha is not None else mpq(1)
    eps = args.epsilon if args.epsilon is not None else s.epsilon
    pts = [args.point] if args.point else sample_points(s.G, 5, s.seed, "gamma")
    code = EXIT_OK
    for pq in pts:
        gamma, cert = nz.lemma3_gamma(s.F, s.G, alpha, eps, pq, case=args.case)
        pq = nz.npoint(pq)
        print(f"point=({format_rational(pq.x)}, {format_rational(pq.y)}) "
              f"gamma={format_rational(gamma)} case={cert.case}")
        for name in ("alpha", "epsilon", "beta", "delta", "anchor_x", "a_point", "c_point",
                     "line", "ac_gap_lower_bound", "c_upper"):
            v = getattr(cert, name)
            if v is not None:
                print(f"  {name} = {format_rational(v) if isinstance(v, type(mpq(0))) else v}")
        checks = cert.verify()
        for k, ok in checks.items():
            print(f"  check {k}: {'pass' if ok else 'FAIL'}")
        if not all(checks.values()):
            code = EXIT_FAIL
    return code


def cmd_lemma6(args):
    s = _scenario(args)
    if s.space == NIEMYTZKI:
        raise RcSpaceError("lemma6 applies to Sorgenfrey scenarios")
    pts = [args.point] if args.point else sample_points(s.G, 5, s.seed, "lemma6")
    code = EXIT_OK
    for x in pts:
        m, cert = sf.lemma6_m(s.F, s.G, args.n, x)
        print(f"x=({', '.join(format_rational(v) for v in cert.x)}) n={args.n} m={m} "
              f"p=({', '.join(format_rational(v) for v in cert.p)}) i={cert.i}")
        checks = cert.verify()
        for k, ok in checks.items():
            print(f"  check {k}: {'pass' if ok else 'FAIL'}")
        if not all(checks.values()):
            code = EXIT_FAIL
    return code


def cmd_separate(args):
    s = _scenario(args)
    report = run_separation_suite(s)
    print(report.summary())
    _write_outputs(args, s, report)
    return _verdict_code(report, s.space)


def cmd_suite(args):
    root = Path(args.scenario_dir) if args.scenario_dir else corpus_dir()
    files = sorted(p for p in root.iterdir() if p.suffix in (".nsc", ".ssc"))
    if not files:
        raise RcSpaceError(f"no scenario files in {root}")
    reports = {NIEMYTZKI: [], "sorgenfrey": []}
    for path in files:
        args.scenario = str(path)
        s = _scenario(args)
        report = run_separation_suite(s)
        print(report.summary())
        _write_outputs(args, s, report)
        reports[s.space].append(report)
    code = EXIT_OK
    for space, reps in reports.items():
        if not reps:
            continue
        total = merge_reports(f"total {space}", reps)
        print(total.summary())
        code = max(code, _verdict_code(total, space))
    return code


def build_parser():
    p = argparse.ArgumentParser(prog="rcspace", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, scenario=True):
        if scenario:
            sp.add_argument("--scenario", required=True, help="scenario file (or corpus name)")
        sp.add_argument("--samples", type=int, help="override the scenario sample count")
        sp.add_argument("--seed", type=int, help="override the scenario seed")
        sp.add_argument("--depth", type=int, help="subdivision budget per membership query")
        sp.add_argument("--stages", type=int, help="number of construction stages N")
        sp.add_argument("--out", help="directory for CSV output")
        sp.add_argument("--svg", action="store_true", help="also write an SVG picture")

    for name, what in (("check-fact1", "tangent disc sequences"),
                       ("check-sf1", "Sorgenfrey sequences")):
        sp = sub.add_parser(name, help=f"randomized convergence check for {what}")
        sp.add_argument("--trials", type=int, default=1000)
        sp.add_argument("--samples", type=int, default=100, help="points per trial")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", help="directory for CSV output")
    sp = sub.add_parser("gap", help="lower bound on dist(F_alpha, G)")
    common(sp)
    sp.add_argument("--alpha", type=_rational, help="default: 1, 1/2 and 1/8")
    sp = sub.add_parser("gamma", help="certified radius around a point of G")
    common(sp)
    sp.add_argument("--point", type=_point, help="x,y (rationals)")
    sp.add_argument("--alpha", type=_rational)
    sp.add_argument("--epsilon", type=_rational)
    sp.add_argument("--case", choices=("interior", "boundary"))
    sp = sub.add_parser("lemma6", help="separating index m for a point of G")
    common(sp)
    sp.add_argument("--point", type=_point, help="x1,...,xd (rationals)")
    sp.add_argument("--n", type=int, default=1)
    sp = sub.add_parser("separate", help="build uF, uG and classify samples")
    common(sp)
    sp = sub.add_parser("suite", help="separate every scenario in a directory")
    common(sp, scenario=False)
    sp.add_argument("--scenario-dir", help="default: the shipped corpus")
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "check-fact1":
            return cmd_fact(args, NIEMYTZKI)
        if args.command == "check-sf1":
            return cmd_fact(args, "sorgenfrey")
        return {"gap": cmd_gap, "gamma": cmd_gamma, "lemma6": cmd_lemma6,
                "separate": cmd_separate, "suite": cmd_suite}[args.command](args)
    except PrecisionError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_UNKNOWN
    except (RcSpaceError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
