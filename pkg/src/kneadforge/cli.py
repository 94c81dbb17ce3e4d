"""Command-line front end: ``kneadforge <subcommand> ...``.

Exit status is 0 on success, 1 on a domain error (a JSON description goes to
stderr) and 2 on a usage error.  Every output is a pure function of the
arguments.

Lambda values are written as ``p/q``, a decimal, or ``root:c0,c1,...,cn:lo:hi``
(the unique root of ``c0 + c1*lam + ... + cn*lam^n`` in ``[lo, hi]``).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .algebra import AlgebraicNumber, IntPoly, as_fraction, format_rational, isolate_real_roots
from .bifurcation import BIMODAL, derive_bifurcation_eq, eq11_residual, interval_chart, w_bound_check
from .exceptional import (
    classify_turning_point,
    codim1_analyze,
    cascade_search,
    extract_factor,
    hyperbolic_approx_obstruction,
    nonrigidity_scan,
    records_to_csv,
    renormalization_check,
)
from .io import SCHEMA, lambda_to_json, map_from_json, orbit_to_csv, sig6, value_to_json
from .itinerary import Itinerary, is_compatible, itinerary_of, realization_interval
from .plot import plot_svg
from .pwl import BimodalMap, CombData, Symbol, entropy, feasibility, validate_space


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# Argument parsing helpers
# ---------------------------------------------------------------------------


def parse_lambda(text: str) -> AlgebraicNumber:
    text = text.strip()
    if text.startswith("root:"):
        try:
            _, coeffs, lo, hi = text.split(":")
            poly = IntPoly(tuple(int(c) for c in coeffs.split(",")))
            return AlgebraicNumber(poly, as_fraction(lo), as_fraction(hi))
        except ValueError as e:
            raise argparse.ArgumentTypeError(f"bad algebraic lambda {text!r}: {e}") from None
    try:
        return AlgebraicNumber.from_rational(as_fraction(text))
    except (ValueError, ZeroDivisionError, TypeError):
        raise argparse.ArgumentTypeError(f"bad lambda {text!r}") from None


def parse_rational(text: str) -> Fraction:
    try:
        return as_fraction(text.strip())
    except (ValueError, ZeroDivisionError, TypeError):
        raise argparse.ArgumentTypeError(f"bad rational {text!r}") from None


def parse_itinerary(text: str) -> Itinerary:
    try:
        return Itinerary.parse(text)
    except (ValueError, KeyError) as e:
        raise argparse.ArgumentTypeError(f"bad itinerary {text!r}: {e}") from None


def _map_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lam", type=parse_lambda, help="slope lambda of the bimodal map")
    p.add_argument("--b", type=parse_rational, help="offset b of the bimodal middle branch")
    p.add_argument("--map", help="map descriptor as JSON text or @file")


def _read_json(text: str):
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            text = fh.read()
    return json.loads(text)


def _load_map(args):
    if args.map:
        return map_from_json(_read_json(args.map))
    if args.lam is None or args.b is None:
        raise UsageError("give --lam and --b, or --map")
    return BimodalMap(args.lam, args.b)


def _chart(args):
    if getattr(args, "chart", "bimodal") == "bimodal":
        return BIMODAL
    return interval_chart(args.l, args.s)


def _start(text: str):
    t = text.strip()
    if t.startswith("c"):
        return Symbol.parse(t)
    return parse_rational(t)


def _emit(args, payload) -> None:
    if isinstance(payload, (dict, list)):
        if isinstance(payload, dict) and "schema" not in payload:
            payload = {"schema": SCHEMA, **payload}
        text = json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    else:
        text = payload
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_validate(args):
    comb = CombData.from_json(json.loads(args.comb)) if args.comb else CombData.bimodal()
    rep = validate_space(comb)
    return {"comb": comb.to_json(), **rep.to_json()}


def cmd_feasible(args):
    if args.map:
        data = _read_json(args.map)
        if "comb" in data:
            from .io import lambda_from_json, value_from_json
            alpha = lambda_from_json(data["lambda"])
            comb = CombData.from_json(data["comb"])
            rep = feasibility(comb, alpha, [value_from_json(v, alpha) for v in data["breakpoints"]],
                              [[value_from_json(v, alpha) for v in row] for row in data["offsets"]],
                              data.get("strict_eps"))
            return {"feasible": rep.feasible, "collided": rep.collided,
                    "violations": [str(v) for v in rep.violations]}
    m = _load_map(args)
    viol = m.violations()
    return {"map": m.descriptor(), "feasible": not viol, "violations": [str(v) for v in viol],
            "b_range": [value_to_json(-m.b_bound()), value_to_json(m.b_bound())],
            "entropy": sig6(entropy(m)) if not viol else None}


def cmd_orbit(args):
    m = _load_map(args)
    pts = m.orbit(m.turning_point(args.x.index) if isinstance(args.x, Symbol) else args.x, args.n)
    if args.format == "csv":
        return orbit_to_csv(pts)
    return {"map": m.descriptor(), "orbit": [
        {"step": p.step, "value": value_to_json(p.value), "approx": sig6(p.value), "symbol": str(p.symbol)}
        for p in pts]}


def cmd_itinerary(args):
    if args.compatible:
        a, b = args.compatible
        return {"tilde": str(a), "itinerary": str(b), "compatible": is_compatible(a, b)}
    if args.realize is not None:
        if args.lam is None:
            raise UsageError("--realize needs --lam")
        ri = realization_interval(args.realize, args.lam)
        return {"itinerary": str(args.realize), "lambda": lambda_to_json(args.lam),
                "interval": None if ri is None else ri.to_json(),
                "approx": None if ri is None else str(ri)}
    m = _load_map(args)
    it = itinerary_of(m, args.x, args.n, stop_at_turning=args.until_turning)
    return {"map": m.descriptor(), "itinerary": str(it), "symbols": it.to_json()}


def cmd_bifeq(args):
    eq = derive_bifurcation_eq(args.itinerary, _chart(args))
    out = eq.to_json()
    out["text"] = str(eq)
    red = eq.reduced_form()
    out["reduced_Q"] = red.to_json()["Q"]
    out["reduced_text"] = str(red)
    if args.lam is not None:
        out["kind_at_lambda"] = eq.kind(args.lam)
    return out


def cmd_factor(args):
    F = extract_factor(args.base, args.extended, _chart(args))
    roots = isolate_real_roots(F, (Fraction(1), Fraction(3)))
    return {"base": str(args.base), "extended": str(args.extended), "factor": str(F),
            "roots_in_(1,3)": [sig6(r) for r in roots]}


def cmd_cascade(args):
    recs = cascade_search(args.base, args.max_blocks, tuple(args.window), args.alphabet or None,
                          _chart(args), args.jobs)
    if args.format == "csv":
        return records_to_csv(recs)
    if args.realized_only:
        recs = [r for r in recs if r.realized]
    return {"base": str(args.base), "records": [r.to_json() for r in recs]}


def cmd_codim1(args):
    rep = codim1_analyze(args.itineraries, args.lam, _chart(args))
    return rep.to_json()


def cmd_classify(args):
    m = _load_map(args)
    return {"map": m.descriptor(),
            "turning_points": [classify_turning_point(m, i, args.horizon).to_json() for i in range(1, m.l + 1)],
            "obstruction": hyperbolic_approx_obstruction(m, args.horizon).to_json()}


def cmd_renorm(args):
    m = _load_map(args)
    return {"map": m.descriptor(), **renormalization_check(m, args.center, args.period).to_json()}


def cmd_scan(args):
    if args.b_grid:
        grid = [parse_rational(x) for x in args.b_grid.split(",")]
    else:
        lo, hi, k = args.b_range
        lo, hi, k = parse_rational(lo), parse_rational(hi), int(k)
        grid = [lo + (hi - lo) * Fraction(j, k - 1) for j in range(k)] if k > 1 else [lo]
    return nonrigidity_scan(args.lam, grid, args.horizon).to_json()


def cmd_plot(args):
    m = _load_map(args)
    if not m.feasible:
        raise ValueError("map is not feasible")
    pts = args.points or ["c1", "c2"]
    return plot_svg(m, pts, args.n, args.style, args.title or "")


# ---------------------------------------------------------------------------
# Reproductions of the worked examples
# ---------------------------------------------------------------------------

LAMBDA_E = "root:-1,0,-1,0,1:1:2"
LAMBDA_OCTIC = "root:-1,0,0,0,-1,0,0,0,1:1:2"


def _realized(records):
    out = []
    for r in records:
        for lam, ri in r.realizations:
            out.append({"extended": str(r.extended), "factor": str(r.factor), "lambda": sig6(lam),
                        "lambda_enclosure": [format_rational(x) for x in lam.refine(Fraction(1, 10 ** 12)).tight_interval()],
                        "b_interval": [sig6(ri.lo), sig6(ri.hi)], "open": [ri.lo_open, ri.hi_open]})
    return out


def _rep_lambda_e():
    recs = cascade_search("c1 J2 c1", 2, (1, 2))
    return {"base": "c1 J2 c1", "realized": _realized(recs)}


def _rep_octic():
    base = Itinerary.parse("c1 J1 J0 J2 c1").time_reversed()
    recs = cascade_search(base, 2, (1, 2))
    return {"base": str(base), "equation": str(derive_bifurcation_eq(base)), "realized": _realized(recs)}


def _rep_period_two():
    eq = derive_bifurcation_eq("c1 J2 c1")
    return {"itinerary": "c1 J2 c1", "equation": str(eq), "reduced": str(eq.reduced_form())}


def _rep_factors():
    pairs = [("c1 J2 c1", "c1 J2 J0 J2 c1"), ("c1 J2 c1", "c1 J2 J1 J2 c1"),
             ("c1 J2 c1", "c1 J2 J1 J2 J0 J2 c1"),
             (str(Itinerary.parse("c1 J1 J0 J2 c1").time_reversed()),
              str(Itinerary.parse("c1 J1 J0 J2 J1 J1 J0 J2 J0 J1 J0 J2 c1").time_reversed()))]
    return {"factors": [{"base": a, "extended": b, "factor": str(extract_factor(a, b))} for a, b in pairs]}


def _rep_period_n():
    return {"equations": [{"n": n, "equation": str(derive_bifurcation_eq(
        Itinerary.parse("c1 " + "J2 " * (n - 1) + "c1")))} for n in range(2, 11)]}


def _rep_mirror():
    lam = parse_lambda(LAMBDA_E)
    m = BimodalMap(lam, 0)
    I1 = itinerary_of(m, Symbol.parse("c1"), 6)
    I2 = itinerary_of(m, Symbol.parse("c2"), 6)
    r1 = realization_interval(I1, lam)
    r2 = realization_interval(I2, lam)
    residual = eq11_residual(derive_bifurcation_eq(I1), derive_bifurcation_eq(I2))
    return {"c1": str(I1), "c2": str(I2), "c1_b_interval": str(r1), "c2_b_interval": str(r2),
            "residual_vanishes_at_lambda_e": lam.sign_of(residual) == 0}


def _rep_renormalization():
    lam = parse_lambda(LAMBDA_E)
    m = BimodalMap(lam, 0)
    out = {}
    for i in (1, 2):
        r = renormalization_check(m, i, 2)
        out[f"R{i}"] = {"interval": [sig6(x) for x in r.interval], "holds": r.holds}
    return out


def _rep_nonrigidity():
    lam = parse_lambda(LAMBDA_E)
    grid = [Fraction(-11, 100) + Fraction(22, 100) * Fraction(j, 20) for j in range(21)]
    rep = nonrigidity_scan(lam, grid)
    return {"constant_c1": rep.constant(1), "constant_c2": rep.constant(2),
            "c1": [str(I) for I in rep.distinct(1)], "c2": [str(I) for I in rep.distinct(2)]}


def _rep_above_log2():
    out = []
    for base in ("c1 J2 c1", "c1 J1 c1", "c1 J2 J2 c1"):
        recs = cascade_search(base, 3, (2, 3))
        out.append({"base": base, "candidates": len(recs), "realized": sum(r.realized for r in recs)})
    return {"window": ["2", "3"], "searches": out}


def _rep_eq11():
    e1 = derive_bifurcation_eq("c1 J2 c1")
    e2 = derive_bifurcation_eq("c2 J0 c2")
    return {"eq1": str(e1), "eq2": str(e2), "residual": str(eq11_residual(e1, e2))}


def _rep_w_bound():
    return {"bimodal_2.5": w_bound_check(["J0", "J1", "J2"], Fraction(5, 2), 100).to_json(),
            "period6_1.2": w_bound_check(["J2", "J1", "J2", "J0", "J2"], Fraction(6, 5), 100).to_json()}


def _rep_codim1():
    rep = codim1_analyze(["c1 J2 c1"], 2)
    return {"curve": str(rep.curve[0]), "det": str(rep.det), "b_at_2": value_to_json(rep.at()[0]),
            "window": [format_rational(x) for x in rep.validity_window] if rep.validity_window else None}


REPRODUCTIONS = {
    "lambda-e": (_rep_lambda_e, "exceptional isentrope from the period-two cascade"),
    "octic-cascade": (_rep_octic, "exceptional isentrope with factor lam^8 - lam^4 - 1"),
    "period-two-equation": (_rep_period_two, "equation of c1 J2 c1 and its reduced form"),
    "factors": (_rep_factors, "common factors of cascade extensions"),
    "period-n-family": (_rep_period_n, "equations of c1 J2^(n-1) c1 for n = 2..10"),
    "mirror-pair": (_rep_mirror, "both period-6 itineraries at lambda_e and their b-ranges"),
    "renormalization": (_rep_renormalization, "period-two renormalization intervals at lambda_e, b = 0"),
    "nonrigidity": (_rep_nonrigidity, "constant itineraries over b in [-0.11, 0.11] at lambda_e"),
    "above-log2": (_rep_above_log2, "no realized bimodal cascades for lambda in (2, 3)"),
    "eq11-residual": (_rep_eq11, "compatibility residual of the period-two pair"),
    "w-bound": (_rep_w_bound, "w-recursion invariant region"),
    "codim1-period-two": (_rep_codim1, "solution curve of the period-two equation"),
}


def cmd_reproduce(args):
    if args.id == "list":
        return {"ids": {k: v[1] for k, v in REPRODUCTIONS.items()}}
    if args.id not in REPRODUCTIONS:
        raise UsageError(f"unknown example id {args.id!r}; try 'list'")
    fn, desc = REPRODUCTIONS[args.id]
    return {"id": args.id, "description": desc, **fn()}


# ---------------------------------------------------------------------------
# Parser and entry point
# ---------------------------------------------------------------------------


def _chart_args(p):
    p.add_argument("--chart", choices=["bimodal", "interval"], default="bimodal")
    p.add_argument("--l", type=int, default=2, help="turning points of the interval chart")
    p.add_argument("--s", type=int, choices=[-1, 1], default=1, help="sign of the first slope")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kneadforge", description=__doc__.split("\n\n")[0],
                                 formatter_class=argparse.RawDescriptionHelpFormatter,
                                 epilog="Lambda syntax: p/q, a decimal, or root:c0,...,cn:lo:hi")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("validate", help="flags of a combinatorial signature")
    p.add_argument("--comb", help='JSON such as {"N":1,"sigma":[1],"l":[2],"s":[1]}')
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("feasible", help="check the constraints of a map")
    _map_args(p)
    p.set_defaults(func=cmd_feasible)

    p = sub.add_parser("orbit", help="orbit of a point")
    _map_args(p)
    p.add_argument("--x", type=_start, required=True, help="start value or turning symbol (c1, c2)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("itinerary", help="itinerary of a point, compatibility or realization interval")
    _map_args(p)
    p.add_argument("--x", type=_start, help="start value or turning symbol")
    p.add_argument("--n", type=int, default=12)
    p.add_argument("--until-turning", action="store_true", help="stop at the first turning-point hit")
    p.add_argument("--compatible", nargs=2, type=parse_itinerary, metavar=("TILDE", "I"))
    p.add_argument("--realize", type=parse_itinerary, metavar="I", help="exact b-range realising I at --lam")
    p.set_defaults(func=cmd_itinerary)

    p = sub.add_parser("bifeq", help="bifurcation equation of an itinerary")
    p.add_argument("itinerary", type=parse_itinerary)
    p.add_argument("--lam", type=parse_lambda, help="also classify at this lambda")
    _chart_args(p)
    p.set_defaults(func=cmd_bifeq)

    p = sub.add_parser("factor", help="common factor of a compatible itinerary pair")
    p.add_argument("base", type=parse_itinerary)
    p.add_argument("extended", type=parse_itinerary)
    _chart_args(p)
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("cascade", help="search cascade extensions for exceptional itineraries")
    p.add_argument("base", type=parse_itinerary)
    p.add_argument("--max-blocks", type=int, default=2)
    p.add_argument("--window", nargs=2, type=parse_rational, default=[Fraction(1), Fraction(3)])
    p.add_argument("--alphabet", nargs="*", type=Symbol.parse)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--realized-only", action="store_true")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    _chart_args(p)
    p.set_defaults(func=cmd_cascade)

    p = sub.add_parser("codim1", help="solution curve of l-1 controlled itineraries")
    p.add_argument("itineraries", nargs="+", type=parse_itinerary)
    p.add_argument("--lam", type=parse_lambda, required=True)
    _chart_args(p)
    p.set_defaults(func=cmd_codim1)

    p = sub.add_parser("classify", help="classify turning points and test the obstruction predicate")
    _map_args(p)
    p.add_argument("--horizon", type=int, default=200)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("renorm", help="renormalization interval around a turning point")
    _map_args(p)
    p.add_argument("--center", type=int, default=1)
    p.add_argument("--period", type=int, default=2)
    p.set_defaults(func=cmd_renorm)

    p = sub.add_parser("scan", help="itineraries of both turning points across b")
    p.add_argument("--lam", type=parse_lambda, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--b-grid", help="comma-separated rationals")
    g.add_argument("--b-range", nargs=3, metavar=("LO", "HI", "COUNT"))
    p.add_argument("--horizon", type=int, default=64)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("reproduce", help="rerun a worked example ('list' shows the ids)")
    p.add_argument("id")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("plot", help="SVG picture of turning-point orbits")
    _map_args(p)
    p.add_argument("--points", nargs="*", help="turning symbols or values (default: c1 c2)")
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--style", choices=["cobweb", "orbit-bars"], default="cobweb")
    p.add_argument("--title")
    p.set_defaults(func=cmd_plot)

    for name, sp in sub.choices.items():
        sp.add_argument("--out", help="write output to this file instead of stdout")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        payload = args.func(args)
    except UsageError as e:
        ap.print_usage(sys.stderr)
        sys.stderr.write(f"kneadforge: error: {e}\n")
        return 2
    except (ValueError, ArithmeticError, IndexError) as e:
        sys.stderr.write(json.dumps({"schema": SCHEMA, "error": type(e).__name__, "message": str(e)}) + "\n")
        return 1
    _emit(args, payload)
    return 0


if __name__ == "__main__":
    sys.exit(main())
