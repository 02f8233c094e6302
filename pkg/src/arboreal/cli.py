"""Command-line front end.

Exit codes: 0 success, 1 domain error (bad curve, point off the curve, a
failed reproduction check), 2 an Unknown result under the factoring budget,
64 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from .arith import FactorBudget, FactorCache, InexactClassError

EXIT_OK, EXIT_DOMAIN, EXIT_UNKNOWN, EXIT_USAGE = 0, 1, 2, 64
CACHE_ENV = "ARBOREAL_CACHE"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# --- output -----------------------------------------------------------------


def _rows_to_csv(rows):
    if not rows:
        return ""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: (json.dumps(v) if isinstance(v, (list, dict)) else v) for k, v in row.items()})
    return buf.getvalue()


def emit(obj, fmt, text=None, out=None):
    """Write ``obj`` as JSON, CSV (lists of flat dicts or a single dict) or text."""
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(obj, indent=2) + "\n")
    elif fmt == "csv":
        rows = obj if isinstance(obj, list) else [{"key": k, "value": v} for k, v in obj.items()]
        out.write(_rows_to_csv([r if isinstance(r, dict) else {"value": r} for r in rows]))
    else:
        out.write((text if text is not None else json.dumps(obj)) + "\n")


def _point_row(P):
    return {"x": None, "y": None, "branch": P.branch} if P.is_infinity else {"x": str(P.x), "y": str(P.y)}


def _points_text(points):
    return "\n".join(str(P) for P in points) if points else "(none)"


# --- shared plumbing ------------------------------------------------------------


def _budget(args):
    return FactorBudget(args.trial_bound, args.rho_iterations)


def _cache_path(args):
    return args.cache or os.environ.get(CACHE_ENV) or None


def _load_cache(args):
    path = _cache_path(args)
    return FactorCache.load(path) if path else FactorCache()


def _save_cache(args, cache):
    path = _cache_path(args)
    if path and len(cache):
        cache.dump(path)


def _curve(text):
    from .curves import NAMED, parse_curve

    if text in NAMED:
        return NAMED[text]
    return parse_curve(text)


def _point(text):
    from .curves import parse_point

    return parse_point(text)


def _range(text):
    try:
        lo, hi = (int(v) for v in text.split(":"))
    except ValueError as exc:
        raise UsageError(f"expected LO:HI, got {text!r}") from exc
    if lo > hi:
        raise UsageError(f"empty range {text!r}")
    return lo, hi


# --- commands -------------------------------------------------------------------


def cmd_orbit(args):
    from .dynamics import QuadMap, critical_orbit

    orbit = critical_orbit(QuadMap(args.gamma, args.c), args.depth)
    rows = [{"n": i, "value": str(v)} for i, v in enumerate(orbit, 1)]
    emit(rows if args.format == "csv" else [str(v) for v in orbit], args.format, " ".join(str(v) for v in orbit))
    return EXIT_OK


def cmd_galois(args):
    from .dynamics import QuadMap
    from .galois import UNKNOWN, small_iterate

    cache = _load_cache(args)
    res = small_iterate(QuadMap(args.gamma, args.c), args.depth, _budget(args), cache)
    _save_cache(args, cache)
    trail = [cert.to_json() for cert in res.trail]
    lines = [f"level {c['level']}: {c['status']}" + (f" witness {c['witness']} sqrt {c['sqrt']}" if c["witness"] or c["sqrt"] else "") for c in trail]
    lines.append(f"small iterate at level {args.depth}: {res.small} ({res.semantics})")
    obj = {"small": res.small, "semantics": res.semantics, "trail": trail}
    emit(trail if args.format == "csv" else obj, args.format, "\n".join(lines))
    return EXIT_UNKNOWN if any(c.status == UNKNOWN for c in res.trail) else EXIT_OK


def cmd_scan(args):
    from .param import records_to_csv, scan

    lo, hi = _range(args.integers)
    cache = _load_cache(args)
    hits, unknown = scan(args.gamma, lo, hi, args.depth, args.threads, _budget(args), cache)
    _save_cache(args, cache)
    records = hits + unknown
    records.sort(key=lambda r: r.c)
    if args.format == "csv":
        sys.stdout.write(records_to_csv(records))
    elif args.format == "json":
        emit([r.to_json() for r in records], "json")
    else:
        text = json.dumps([str(r.c) if r.c.denominator != 1 else int(r.c) for r in hits])
        if unknown:
            text += "\nunknown: " + json.dumps([str(r.c) for r in unknown])
        emit(None, "text", text)
    return EXIT_UNKNOWN if unknown else EXIT_OK


def cmd_curve_points(args):
    from .curves import count_points_mod_p, quadratic_twist, rational_point_search

    M = _curve(args.curve)
    if args.twist is not None:
        M = quadratic_twist(M, args.twist)
    if args.mod_p is not None:
        n = count_points_mod_p(M, args.mod_p)
        emit({"p": args.mod_p, "count": n}, args.format, str(n))
        return EXIT_OK
    pts = rational_point_search(M, args.height, workers=args.threads)
    emit([_point_row(P) for P in pts], args.format, _points_text(pts))
    return EXIT_OK


def cmd_integral_points(args):
    from .curves import Weierstrass, integral_points_via_generator

    W = _curve(args.curve)
    if not isinstance(W, Weierstrass):
        raise ValueError("integral-points needs a Weierstrass curve")
    pts = integral_points_via_generator(W, _point(args.gen), args.max_mult)
    emit([_point_row(P) for P in pts], args.format, _points_text(pts))
    return EXIT_OK


def cmd_map_chain(args):
    from .curves import CHAINS, apply_map_chain, invert_map_chain

    # accept the full key "E2 -> E" or just its source label "E2"
    by_source = {key.split(" -> ")[0]: key for key in CHAINS}
    key = args.chain if args.chain in CHAINS else by_source.get(args.chain)
    if key is None:
        raise ValueError(f"unknown chain {args.chain!r}; known: {', '.join(sorted(CHAINS))}")
    chain = CHAINS[key]
    P = _point(args.point)
    if args.inverse:
        pts = invert_map_chain(chain, P)
    else:
        Q = apply_map_chain(chain, P)
        pts = [] if Q is None else [Q]
    emit([_point_row(Q) for Q in pts], args.format, _points_text(pts))
    return EXIT_OK


def cmd_padic_verify(args):
    from .padic import chabauty_report, root_multiplicity_at_zero, strassmann_zero_bound

    rep = chabauty_report(prec=args.prec)

    def poly(cs):
        return [int(v) for v in cs[:6]]

    obj = {
        "modulus": f"3^{args.prec}",
        "z_3P0": list(rep["z"].coeffs),
        "log_z": list(rep["log_z"].coeffs),
        "z_n": [list(e.coeffs) for e in rep["z_n"][:6]],
        "phi": [poly(p) for p in rep["phi"]],
        "strassmann_phi2": strassmann_zero_bound(rep["phi"][2], 3, args.prec),
        "cases": {
            name: {
                "phi2": poly(ph[2]),
                "strassmann": strassmann_zero_bound(ph[2], 3, args.prec),
                "order_at_0": root_multiplicity_at_zero(ph[2], 3, args.prec),
            }
            for name, ph in rep["cases"].items()
        },
    }
    lines = [f"{k}: {v}" for k, v in obj.items()]
    emit(obj, args.format, "\n".join(lines))
    return EXIT_OK


def cmd_bound_reduce(args):
    from .analytic import PUBLISHED_CONSTANTS, multiplier_bound_pipeline

    C = args.scaling_c if args.scaling_c is not None else PUBLISHED_CONSTANTS["C"]
    N0 = args.n0 if args.n0 is not None else PUBLISHED_CONSTANTS["N0"]
    ctx, psi, red = multiplier_bound_pipeline(args.precision, C, N0)
    obj = {
        "omega1": str(+ctx.omega)[:30],
        "psi": str(psi)[:30],
        "C": str(C),
        "N0": str(N0),
        "shortest_sq": str(red.shortest_sq),
        "lower_bound": str(red.lower_bound)[:20],
        "N1": red.N1,
    }
    emit(obj, args.format, "\n".join(f"{k}: {v}" for k, v in obj.items()))
    return EXIT_OK


def cmd_surface(args):
    from .param import surface_fiber, surface_report

    if args.gamma is not None:
        fib = surface_fiber(args.gamma)
        obj = {"gamma": str(fib.gamma), "a2": str(fib.a2), "a4": str(fib.a4), "a6": str(fib.a6)}
    else:
        obj = surface_report().to_json()
    emit(obj, args.format, "\n".join(f"{k}: {v}" for k, v in obj.items()))
    return EXIT_OK


def cmd_reproduce(args):
    from .reproduce import SUITES, format_table, run_suite

    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    results = run_suite(args.suite, threads=args.threads)
    if args.format == "text":
        emit(None, "text", format_table(results))
    elif args.format == "csv":
        emit([{"criterion": r.number, "passed": r.passed, "seconds": round(r.seconds, 3), "title": r.title} for r in results], "csv")
    else:
        emit([r.to_json() for r in results], "json")
    return EXIT_OK if all(r.passed for r in results) else EXIT_DOMAIN


# --- parser -----------------------------------------------------------------------


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--threads", type=int, default=1, help="worker processes for scans and searches")
    common.add_argument("--cache", help=f"factor cache file (default: ${CACHE_ENV}, else none)")
    common.add_argument("--trial-bound", type=int, default=FactorBudget.trial_bound)
    common.add_argument("--rho-iterations", type=int, default=FactorBudget.rho_iterations)

    p = _Parser(prog="arboreal", description="Small iterates of quadratic polynomials and the curves behind them.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    sp = add("orbit", cmd_orbit, "critical orbit f(gamma), ..., f^n(gamma)")
    sp.add_argument("--gamma", type=Fraction, default=Fraction(0))
    sp.add_argument("--c", type=Fraction, required=True)
    sp.add_argument("--depth", type=int, default=3)

    sp = add("galois", cmd_galois, "level certificates and the small-iterate test")
    sp.add_argument("--gamma", type=Fraction, default=Fraction(0))
    sp.add_argument("--c", type=Fraction, required=True)
    sp.add_argument("--depth", type=int, default=3)

    sp = add("scan", cmd_scan, "integers c with a small iterate at the given depth")
    sp.add_argument("--gamma", type=Fraction, default=Fraction(0))
    sp.add_argument("--integers", required=True, metavar="LO:HI")
    sp.add_argument("--depth", type=int, default=3)

    sp = add("curve-points", cmd_curve_points, "rational point search, or a count over F_p")
    sp.add_argument("--curve", required=True, help="equation such as 'y^2=x^3-x+1' or a named curve")
    sp.add_argument("--height", type=int, default=100)
    sp.add_argument("--mod-p", type=int)
    sp.add_argument("--twist", type=int)

    sp = add("integral-points", cmd_integral_points, "integral points among multiples of a generator")
    sp.add_argument("--curve", required=True)
    sp.add_argument("--gen", required=True, metavar="(X,Y)")
    sp.add_argument("--max-mult", type=int, default=40)

    sp = add("map-chain", cmd_map_chain, "push a point through a named rational map chain")
    sp.add_argument("--chain", required=True)
    sp.add_argument("--point", required=True)
    sp.add_argument("--inverse", action="store_true")

    sp = add("padic-verify", cmd_padic_verify, "the 3-adic expansions and Strassmann bounds")
    sp.add_argument("--prec", type=int, default=4)

    sp = add("bound-reduce", cmd_bound_reduce, "elliptic logarithm and lattice reduction of the multiplier bound")
    sp.add_argument("--precision", type=int, default=80, help="decimal digits")
    sp.add_argument("--scaling-c", type=int)
    sp.add_argument("--n0", type=int)

    sp = add("surface", cmd_surface, "coefficients of the gamma-surface fibre, or the section report")
    sp.add_argument("--gamma", type=Fraction)

    sp = add("reproduce", cmd_reproduce, "run a named reproduction suite")
    sp.add_argument("suite", help="theorem3, corollary-integers, lemma2-padic, corollary-bound, gamma1-proposition, example1-twists, surface-report or all")
    return p


# options whose values may start with "-" (ranges, fractions, points)
_SIGNED_OPTIONS = ("--integers", "--c", "--gamma", "--gen", "--point", "--twist")


def _glue_signed(argv):
    """Turn "--c -2/3" into "--c=-2/3" so argparse does not read the value as a flag."""
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in _SIGNED_OPTIONS and i + 1 < len(argv) and argv[i + 1].startswith("-") and not argv[i + 1].startswith("--"):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


def run(argv=None):
    parser = build_parser()
    argv = _glue_signed(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
        if args.threads < 1:
            raise UsageError("--threads must be >= 1")
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except InexactClassError as exc:
        print(f"unknown: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def main():
    sys.exit(run())


if __name__ == "__main__":  # pragma: no cover
    main()
