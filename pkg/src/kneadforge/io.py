"""JSON and CSV forms shared by the library and the command line."""

from __future__ import annotations

import csv
import io
from fractions import Fraction

from .algebra import (
    AlgebraicNumber,
    AlgValue,
    IntPoly,
    RatFunc,
    algebraic_from_json,
    algebraic_to_json,
    as_fraction,
    format_rational,
    poly_from_json,
    poly_to_json,
)

SCHEMA = "kneadforge/1"


def sig6(x) -> str:
    """Six significant digits, the precision used for printed constants."""
    return f"{float(x):.6g}"


def lambda_to_json(alpha: AlgebraicNumber):
    r = alpha.exact_rational()
    if r is not None:
        return format_rational(r)
    return algebraic_to_json(alpha)


def lambda_from_json(data) -> AlgebraicNumber:
    return algebraic_from_json(data)


def value_to_json(v: AlgValue, eps=Fraction(1, 10 ** 15)):
    """Rational values become "p/q" strings; irrational ones carry their exact
    ratio of polynomials in lambda plus an enclosure and a 6-digit midpoint."""
    r = v.exact_rational()
    if r is not None:
        return format_rational(r)
    lo, hi = v.enclosure(eps)
    return {"num": poly_to_json(v.num), "den": poly_to_json(v.den),
            "enclosure": [format_rational(lo), format_rational(hi)],
            "approx": sig6((lo + hi) / 2)}


def value_from_json(data, alpha: AlgebraicNumber) -> AlgValue:
    if isinstance(data, dict):
        return AlgValue(poly_from_json(data["num"]), poly_from_json(data["den"]), alpha)
    return AlgValue.const(as_fraction(str(data)), alpha)


def ratfunc_to_json(r: RatFunc) -> dict:
    return {"num": poly_to_json(r.num), "den": poly_to_json(r.den)}


def ratfunc_from_json(data) -> RatFunc:
    return RatFunc(poly_from_json(data["num"]), poly_from_json(data["den"]))


def polys_to_json(ps) -> list[list[str]]:
    return [poly_to_json(p) for p in ps]


def polys_from_json(data) -> tuple[IntPoly, ...]:
    return tuple(poly_from_json(p) for p in data)


def map_from_json(data: dict):
    """Build a map from a descriptor; ``{lambda, b}`` is the bimodal shorthand."""
    from .pwl import BimodalMap, CombData, PLMap

    alpha = lambda_from_json(data["lambda"])
    if "comb" not in data:
        return BimodalMap(alpha, value_from_json(data["b"], alpha))
    comb = CombData.from_json(data["comb"])
    bps = [value_from_json(v, alpha) for v in data["breakpoints"]]
    offs = [[value_from_json(v, alpha) for v in row] for row in data["offsets"]]
    return PLMap.create(comb, alpha, bps, offs, data.get("strict_eps"))


def orbit_to_csv(points, eps=Fraction(1, 10 ** 12)) -> str:
    """CSV with columns step, value-enclosure-lo, value-enclosure-hi, symbol."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["step", "lo", "hi", "symbol"])
    for p in points:
        lo, hi = p.enclosure(eps)
        w.writerow([p.step, f"{float(lo):.12g}", f"{float(hi):.12g}", str(p.symbol)])
    return buf.getvalue()
