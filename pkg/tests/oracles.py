"""Independent reference computations used by the tests.

Nothing here goes through the w-recursion or the exact sign machinery of the
library: orbits are expanded with sympy from the branch formulas, roots come
from sympy, and floating simulations use mpmath at high precision.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache

import mpmath
import sympy as sp

LAM, B = sp.symbols("lam b")


def sym_turning(i):
    return (B - 1) / (2 * LAM) if i == 1 else (B + 1) / (2 * LAM)


def sym_branch(j, x):
    return {0: LAM * x + 1, 1: -LAM * x + B, 2: LAM * x - 1}[j]


def sym_return_equation(tokens):
    """``(coef, const)`` with ``coef * b = const`` from expanding the branch
    formulas along a bifurcation itinerary given as tokens like ``"c1"``."""
    i0, i1 = int(tokens[0][1:]), int(tokens[-1][1:])
    x = sym_branch(1, sym_turning(i0))  # q(c^i) from the middle branch formula
    for t in tokens[1:-1]:
        x = sym_branch(int(t[1:]), x)
    expr = sp.expand((x - sym_turning(i1)) * 2 * LAM)
    coef = sp.expand(expr.coeff(B, 1))
    const = sp.expand(-expr.coeff(B, 0))
    return sp.Poly(coef, LAM), sp.Poly(const, LAM)


def sym_poly(intpoly):
    return sp.Poly(sum(int(c) * LAM ** k for k, c in enumerate(intpoly.coeffs)), LAM)


def sympy_real_roots(coeffs, lo, hi):
    p = sp.Poly(sum(int(c) * LAM ** k for k, c in enumerate(coeffs)), LAM)
    return sorted(float(r) for r in sp.real_roots(p) if lo < r < hi)


def mp_itinerary(lam, b, start, n, dps=60, tol=None):
    """Itinerary tokens by high-precision floating iteration (hits detected by tolerance)."""
    with mpmath.workdps(dps):
        lam = mpmath.mpf(lam.numerator) / lam.denominator if isinstance(lam, Fraction) else mpmath.mpf(lam)
        b = mpmath.mpf(b.numerator) / b.denominator if isinstance(b, Fraction) else mpmath.mpf(b)
        tol = tol or mpmath.mpf(10) ** (-dps // 2)
        c1, c2 = (b - 1) / (2 * lam), (b + 1) / (2 * lam)
        x = c1 if start == "c1" else c2 if start == "c2" else mpmath.mpf(start)
        out = []
        for k in range(n + 1):
            if abs(x - c1) < tol:
                out.append("c1")
                x = (b + 1) / 2
            elif abs(x - c2) < tol:
                out.append("c2")
                x = (b - 1) / 2
            elif x < c1:
                out.append("J0")
                x = lam * x + 1
            elif x < c2:
                out.append("J1")
                x = -lam * x + b
            else:
                out.append("J2")
                x = lam * x - 1
        return out


def solve_b(tokens, lam: Fraction):
    coef, const = sym_return_equation(tokens)
    c = coef.eval(sp.Rational(lam.numerator, lam.denominator))
    if c == 0:
        return None
    v = const.eval(sp.Rational(lam.numerator, lam.denominator)) / c
    return Fraction(int(v.p), int(v.q))


@lru_cache(maxsize=None)
def periodic_corpus(size=100, seed=20240601, horizon=14):
    """Periodic turning-point itineraries with a rational map realising each.

    Random feasible rational maps are iterated in floating point; every
    prefix of a turning-point orbit closed back at the same turning point is
    a candidate, its offset is solved from the sympy expansion, and the
    candidate is kept when the library's exact itinerary at that offset is
    exactly the candidate.
    """
    from kneadforge import BimodalMap, itinerary_of, Symbol

    rng = random.Random(seed)
    out, seen = [], set()
    while len(out) < size:
        q = rng.randint(2, 12)
        lam = Fraction(rng.randint(q + 1, 3 * q), q)
        bound = (3 - lam) / (lam - 1)
        b = Fraction(rng.randint(-1000, 1000), 1000) * bound
        start = rng.choice(["c1", "c2"])
        toks = mp_itinerary(lam, b, start, horizon, dps=30)
        laps = []
        for t in toks[1:]:
            if t.startswith("c"):
                break
            laps.append(t)
        for k in range(1, len(laps) + 1):
            cand = [start, *laps[:k - 1], start] if k > 1 else [start, start]
            if k == 1:
                continue
            key = (" ".join(cand), lam)
            if key in seen:
                continue
            seen.add(key)
            bs = solve_b(cand, lam)
            if bs is None or abs(bs) > bound:
                continue
            m = BimodalMap(lam, bs)
            if not m.feasible or not m.simple:
                continue
            got = itinerary_of(m, Symbol.parse(start), len(cand) - 1)
            if [str(s) for s in got.symbols] == cand:
                out.append((" ".join(cand), lam, bs))
                if len(out) >= size:
                    break
    return tuple(out)
