"""Ordinary and exceptional turning points, exceptional cascades, codimension-one
hyperbolic maps and renormalization intervals."""

from __future__ import annotations

import csv
import io
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import (
    AlgebraicNumber,
    AlgValue,
    IntPoly,
    NotDivisible,
    RatFunc,
    as_algebraic,
    divide_exact,
    isolate_real_roots,
    sign_at,
)
from .bifurcation import BIMODAL, BifurcationEq, Chart, chart_of, derive_bifurcation_eq
from .itinerary import (
    Itinerary,
    RealizationInterval,
    first_return,
    is_compatible,
    itinerary_of,
    realization_interval,
)
from .pwl import BimodalMap, PLMap, Symbol, J, c


class FactorMismatch(ArithmeticError):
    pass


class SingularAtLambda(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Classification:
    kind: str  # "Ordinary", "Exceptional", "NotControlled", "InfeasibleCase3"
    turning: int
    horizon: int
    itinerary: Itinerary | None = None
    equation: BifurcationEq | None = None

    def __str__(self) -> str:
        if self.kind == "NotControlled":
            return f"NotControlled({self.horizon})"
        return self.kind

    def to_json(self) -> dict:
        return {"kind": self.kind, "turning": self.turning, "horizon": self.horizon,
                "itinerary": None if self.itinerary is None else self.itinerary.to_json(),
                "equation": None if self.equation is None else self.equation.to_json()}


def classify_turning_point(m, i: int, horizon: int) -> Classification:
    """Classify ``c^i`` by its bifurcation equation at the map's own lambda.

    The itinerary runs from ``c^i`` to its first hit of a turning point; no hit
    within ``horizon`` steps gives ``NotControlled``.
    """
    it = first_return(m, i, horizon)
    if it is None:
        return Classification("NotControlled", i, horizon)
    eq = derive_bifurcation_eq(it, chart_of(m))
    kind = {"ordinary": "Ordinary", "exceptional": "Exceptional", "case3": "InfeasibleCase3"}[eq.kind(m.alpha)]
    return Classification(kind, i, horizon, it, eq)


# ---------------------------------------------------------------------------
# Factor extraction and cascades
# ---------------------------------------------------------------------------


def extract_factor(base, extended, chart: Chart = BIMODAL) -> IntPoly:
    """The polynomial ``F`` with ``Q^{extended}_j = F * Q^{base}_j`` for every ``j``."""
    base, extended = Itinerary.of(base), Itinerary.of(extended)
    pb = base.periodic() if base.is_periodic_turning else base
    if not is_compatible(pb, extended.expand(len(extended))):
        raise NotDivisible(f"{base} is not compatible with {extended}")
    qb = derive_bifurcation_eq(base, chart).Q
    qe = derive_bifurcation_eq(extended, chart).Q
    factor = None
    for j, (a, b) in enumerate(zip(qe, qb)):
        if b.is_zero():
            if not a.is_zero():
                raise NotDivisible(f"Q_{j} of the base vanishes but not that of the extension")
            continue
        f = divide_exact(a, b)
        if (f * b).lc * a.lc < 0:
            f = -f
        if f * b != a:
            raise NotDivisible(f"Q_{j}: quotient is not integral")
        if factor is None:
            factor = f
        elif f != factor:
            raise FactorMismatch(f"Q_{j} gives {f}, earlier components gave {factor}")
    if factor is None:
        raise NotDivisible("base equation is identically zero")
    return factor


@dataclass(frozen=True, eq=False)
class ExceptionalRecord:
    base: Itinerary
    extended: Itinerary
    factor: IntPoly
    roots_in_window: tuple[AlgebraicNumber, ...]
    realizations: tuple[tuple[AlgebraicNumber, RealizationInterval], ...]
    unrealized: tuple[AlgebraicNumber, ...] = ()

    @property
    def realized(self) -> bool:
        return bool(self.realizations)

    def to_json(self) -> dict:
        from .io import SCHEMA, lambda_to_json, sig6
        from .algebra import poly_to_json
        return {
            "schema": SCHEMA,
            "base": self.base.to_json(),
            "extended": self.extended.to_json(),
            "factor": poly_to_json(self.factor),
            "factor_text": str(self.factor),
            "roots_in_window": [lambda_to_json(r) for r in self.roots_in_window],
            "realizations": [{"lambda": lambda_to_json(r), "lambda_approx": sig6(r), "b": ri.to_json(),
                              "b_approx": [sig6(ri.lo), sig6(ri.hi)]} for r, ri in self.realizations],
            "unrealized": [lambda_to_json(r) for r in self.unrealized],
        }

    def csv_rows(self) -> list[list[str]]:
        from .io import sig6
        from .algebra import format_rational
        rows = []
        for r in self.roots_in_window:
            lo, hi = r.tight_interval()
            ri = next((x for a, x in self.realizations if a is r), None)
            rows.append([str(self.extended), str(self.factor.degree), format_rational(lo), format_rational(hi),
                         "" if ri is None else sig6(ri.lo), "" if ri is None else sig6(ri.hi)])
        if not rows:
            rows.append([str(self.extended), str(self.factor.degree), "", "", "", ""])
        return rows


def records_to_csv(records: Sequence[ExceptionalRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["itinerary", "factor_degree", "root_lo", "root_hi", "b_lo", "b_hi"])
    for rec in records:
        w.writerows(rec.csv_rows())
    return buf.getvalue()


def cascade_candidates(base, max_blocks: int, alphabet: Sequence[Symbol] | None = None) -> list[Itinerary]:
    """Itineraries ``c B j_1 B j_2 ... j_k B c`` for ``1 <= k <= max_blocks``.

    ``B`` is the lap block of ``base``; the inserted laps ``j`` are taken from
    ``alphabet`` (default: the two laps adjacent to the base turning point).
    Ordered by length, then lexicographically by the inserted laps.
    """
    base = Itinerary.of(base)
    if not base.is_periodic_turning:
        raise ValueError(f"{base} is not a periodic turning-point itinerary")
    turn = base[0]
    block = base.symbols[1:-1]
    if alphabet is None:
        alphabet = (J(turn.index - 1), J(turn.index))
    alphabet = sorted({Symbol.parse(str(a)) for a in alphabet}, key=lambda s: s.index)
    out = []
    for k in range(1, max_blocks + 1):
        for js in itertools.product(alphabet, repeat=k):
            syms = [turn, *block]
            for j in js:
                syms += [j, *block]
            syms.append(turn)
            out.append(Itinerary(tuple(syms)))
    return out


def _examine(args) -> ExceptionalRecord:
    base, ext, window, chart = args
    F = extract_factor(base, ext, chart)
    roots = tuple(isolate_real_roots(F, window)) if F.degree > 0 else ()
    realized, unrealized = [], []
    for r in roots:
        ri = realization_interval(ext, r) if chart == BIMODAL else None
        if ri is None:
            unrealized.append(r)
        else:
            realized.append((r, ri))
    return ExceptionalRecord(base, ext, F, roots, tuple(realized), tuple(unrealized))


def cascade_search(base, max_blocks: int, lambda_window=(1, 3), alphabet=None,
                   chart: Chart = BIMODAL, jobs: int = 1) -> list[ExceptionalRecord]:
    """Build cascade extensions of ``base`` and certify which yield exceptional itineraries.

    Every candidate produces a record: its common factor ``F``, the roots of
    ``F`` in the open ``lambda_window`` and, for each root, the exact set of
    ``b`` realising the extension (roots without one are listed as unrealized).
    """
    base = Itinerary.of(base)
    window = (Fraction(lambda_window[0]), Fraction(lambda_window[1]))
    work = [(base, ext, window, chart) for ext in cascade_candidates(base, max_blocks, alphabet)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_examine, work))
    return [_examine(w) for w in work]


# ---------------------------------------------------------------------------
# Codimension-one analysis
# ---------------------------------------------------------------------------


def _det(M: list[list[IntPoly]]) -> IntPoly:
    n = len(M)
    if n == 0:
        return IntPoly.const(1)
    if n == 1:
        return M[0][0]
    total = IntPoly()
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * _det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


@dataclass(frozen=True, eq=False)
class Codim1Report:
    controlled_itineraries: tuple[Itinerary, ...]
    lam: AlgebraicNumber
    matrix: tuple[tuple[IntPoly, ...], ...]
    det: IntPoly
    det_at_lambda: int
    curve: tuple[RatFunc, ...]
    validity_window: tuple[Fraction, Fraction] | None
    chart: Chart = BIMODAL

    def at(self, lam=None) -> tuple[AlgValue, ...]:
        alpha = self.lam if lam is None else as_algebraic(lam)
        return tuple(r(alpha) for r in self.curve)

    def to_json(self) -> dict:
        from .io import SCHEMA, lambda_to_json, polys_to_json, ratfunc_to_json, value_to_json
        from .algebra import format_rational
        return {
            "schema": SCHEMA,
            "controlled_itineraries": [I.to_json() for I in self.controlled_itineraries],
            "lambda": lambda_to_json(self.lam),
            "matrix": [polys_to_json(row) for row in self.matrix],
            "det": polys_to_json([self.det])[0],
            "det_at_lambda": self.det_at_lambda,
            "curve": [ratfunc_to_json(r) for r in self.curve],
            "curve_at_lambda": [value_to_json(v) for v in self.at()],
            "validity_window": None if self.validity_window is None
            else [format_rational(x) for x in self.validity_window],
            "window_certification": "verified-at-samples",
        }


def _realizes_on_curve(itins, chart: Chart, lam: Fraction, curve) -> bool:
    try:
        vals = [r(lam) for r in curve]
    except ZeroDivisionError:
        return False
    if chart == BIMODAL:
        return all((ri := realization_interval(I, lam)) is not None and ri.contains(vals[0]) for I in itins)
    from .pwl import CombData
    from .algebra import AlgValue as AV
    alpha = as_algebraic(lam)
    offsets = [AV.of(chart.b0, alpha), *(AV.of(v, alpha) for v in vals), AV.of(chart.bl, alpha)]
    try:
        m = PLMap.create(CombData.single(chart.l, chart.s), lam, [0, 1], [offsets])
    except ValueError:
        return False
    if not m.simple:
        return False
    for I in itins:
        got = itinerary_of(m, I[0], len(I) - 1)
        if got.symbols != I.symbols:
            return False
    return True


def _separate(r: AlgebraicNumber, alpha: AlgebraicNumber) -> tuple[bool, Fraction]:
    """Whether root ``r`` lies below ``alpha`` plus a rational strictly between them."""
    eps = Fraction(1, 2 ** 8)
    while True:
        a, b = r._bisect_to(eps)
        lo, hi = alpha._bisect_to(eps)
        if b < lo:
            return True, b
        if hi < a:
            return False, a
        eps /= 2 ** 8


def _validity_window(itins, chart, det, alpha, curve, samples: int = 32):
    lo, hi = Fraction(1), Fraction(3) if chart == BIMODAL else Fraction(8)
    for r in isolate_real_roots(det, (lo, hi)):
        below, q = _separate(r, alpha)
        if below:
            lo = max(lo, q)
        else:
            hi = min(hi, q)
    if chart == BIMODAL:
        vals = [r(alpha) for r in curve]
        for I in itins:
            ri = realization_interval(I, alpha)
            if ri is None or not ri.contains(vals[0]):
                return None
    grid = [lo + (hi - lo) * Fraction(k, samples) for k in range(1, samples)]
    L = AlgValue.lam(alpha)
    below = [k for k, g in enumerate(grid) if AlgValue.const(g, alpha) < L]
    if not below or below[-1] + 1 >= len(grid):
        return None
    ok = [_realizes_on_curve(itins, chart, g, curve) for g in grid]
    a, b = below[-1], below[-1] + 1
    if not (ok[a] and ok[b]):
        return None
    while a > 0 and ok[a - 1]:
        a -= 1
    while b + 1 < len(grid) and ok[b + 1]:
        b += 1
    return grid[a], grid[b]


def codim1_analyze(controlled, lam, chart: Chart = BIMODAL, samples: int = 32) -> Codim1Report:
    """Solve the bifurcation equations of ``l - 1`` controlled turning points for the free offsets.

    The solution ``b^i = R_i(lam)`` comes from Cramer's rule over ``Z[lam]``.
    The validity window is the sub-interval around ``lam`` free of roots of the
    determinant on which the curve realises every itinerary at all sampled
    rational points; it is an under-approximation.
    """
    itins = tuple(Itinerary.of(I) for I in controlled)
    n = chart.l - 1
    if len(itins) != n:
        raise ValueError(f"need exactly {n} controlled itineraries for l = {chart.l}, got {len(itins)}")
    starts = [I[0] for I in itins]
    if len(set(starts)) != len(starts):
        raise ValueError("controlled itineraries must start at distinct turning points")
    alpha = as_algebraic(lam)
    eqs = [derive_bifurcation_eq(I, chart) for I in itins]
    M = [list(e.Q[1:]) for e in eqs]
    rhs = [e.Q[0] for e in eqs]
    det = _det(M)
    s = sign_at(det, alpha) if not det.is_zero() else 0
    if s == 0:
        raise SingularAtLambda(f"determinant {det} vanishes at lambda = {alpha}")
    curve = []
    for i in range(n):
        Mi = [row[:i] + [r] + row[i + 1:] for row, r in zip(M, rhs)]
        curve.append(RatFunc(_det(Mi), det))
    window = _validity_window(itins, chart, det, alpha, curve, samples)
    return Codim1Report(itins, alpha, tuple(tuple(r) for r in M), det, s, tuple(curve), window, chart)


# ---------------------------------------------------------------------------
# Obstruction to hyperbolic approximation
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ObstructionResult:
    status: str  # "Obstructed" or "NotDetermined"
    reason: str
    report: Codim1Report | None = None
    free_turning: int | None = None
    witness: Itinerary | None = None

    def __str__(self) -> str:
        return self.status

    def to_json(self) -> dict:
        return {"status": self.status, "reason": self.reason,
                "codim1": None if self.report is None else self.report.to_json(),
                "free_turning": self.free_turning,
                "non_return_witness": None if self.witness is None else self.witness.to_json()}


def turning_chain(m, i: int, horizon: int) -> tuple[list[Itinerary], bool]:
    """Follow ``c^i`` from turning hit to turning hit.

    Returns the successive bifurcation itineraries and whether the chain closes
    into a cycle of turning points (so ``c^i`` is controlled) with every hop
    found within ``horizon`` steps.
    """
    seen, chain = [i], []
    cur = i
    while True:
        it = first_return(m, cur, horizon)
        if it is None:
            return chain, False
        chain.append(it)
        nxt = it[-1].index
        if nxt in seen:
            return chain, True
        seen.append(nxt)
        cur = nxt


def hyperbolic_approx_obstruction(m, horizon: int) -> ObstructionResult:
    """Certify that ``m`` is ordinary codimension-one hyperbolic, or say nothing.

    Obstructed requires exactly one turning point without a turning hit within
    ``horizon`` steps, every other turning point controlled, and a nonzero
    bifurcation determinant at the map's lambda.
    """
    l = m.l
    controlled, free = [], []
    witness = None
    for i in range(1, l + 1):
        chain, closed = turning_chain(m, i, horizon)
        if closed:
            controlled.append(chain[0])
        elif not chain:
            free.append(i)
            witness = itinerary_of(m, c(i), horizon)
        else:
            return ObstructionResult("NotDetermined", f"c{i} reaches a turning point but its chain does not close within the horizon")
    if len(free) != 1:
        return ObstructionResult("NotDetermined", f"{len(free)} turning points without a turning hit; need exactly one")
    try:
        rep = codim1_analyze(controlled, m.alpha, chart_of(m))
    except SingularAtLambda as e:
        return ObstructionResult("NotDetermined", f"controlled turning points are not ordinary: {e}")
    return ObstructionResult("Obstructed", "ordinary codimension-one hyperbolic", rep, free[0], witness)


# ---------------------------------------------------------------------------
# Renormalization
# ---------------------------------------------------------------------------


def image_interval(m, lo: AlgValue, hi: AlgValue) -> tuple[AlgValue, AlgValue]:
    """Exact image of ``[lo, hi]``: extremes over the endpoints and interior turning points."""
    pts = [lo, hi] + [cp for cp in m.turning_points() if lo < cp < hi]
    vals = [m.evaluate(p) for p in pts]
    return min(vals), max(vals)


@dataclass(frozen=True, eq=False)
class RenormalizationResult:
    interval: tuple[AlgValue, AlgValue]
    holds: bool
    contains_center: bool
    image: tuple[AlgValue, AlgValue]
    period: int
    center: int

    def to_json(self) -> dict:
        from .io import value_to_json
        return {"interval": [value_to_json(x) for x in self.interval], "holds": self.holds,
                "contains_center": self.contains_center,
                "image": [value_to_json(x) for x in self.image], "period": self.period, "center": self.center}


def renormalization_check(m, center: int, period: int) -> RenormalizationResult:
    """Take ``R`` spanned by ``q^{2p}(c)`` and ``q^p(c)`` and test ``c in R`` and ``q^p(R) in R``."""
    cpt = m.turning_point(center)
    pts = m.orbit(cpt, 2 * period)
    a, b = pts[period].value, pts[2 * period].value
    lo, hi = (a, b) if a <= b else (b, a)
    ilo, ihi = lo, hi
    for _ in range(period):
        ilo, ihi = image_interval(m, ilo, ihi)
    inside = lo <= cpt <= hi
    holds = inside and lo <= ilo and ihi <= hi
    return RenormalizationResult((lo, hi), holds, inside, (ilo, ihi), period, center)


# ---------------------------------------------------------------------------
# Non-rigidity scan
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ScanReport:
    lam: AlgebraicNumber
    b_grid: tuple[Fraction, ...]
    itineraries: tuple[tuple[Itinerary, ...], ...]  # per b, per turning point
    horizon: int

    def distinct(self, i: int) -> list[Itinerary]:
        out = []
        for row in self.itineraries:
            if all(row[i - 1].symbols != o.symbols for o in out):
                out.append(row[i - 1])
        return out

    def constant(self, i: int) -> bool:
        return len(self.distinct(i)) == 1

    @property
    def all_constant(self) -> bool:
        return all(self.constant(i) for i in range(1, len(self.itineraries[0]) + 1))

    def to_json(self) -> dict:
        from .io import SCHEMA, lambda_to_json
        from .algebra import format_rational
        return {"schema": SCHEMA, "lambda": lambda_to_json(self.lam), "horizon": self.horizon,
                "rows": [{"b": format_rational(b), "itineraries": [str(I) for I in row]}
                         for b, row in zip(self.b_grid, self.itineraries)],
                "constant": [self.constant(i) for i in range(1, len(self.itineraries[0]) + 1)]}


def nonrigidity_scan(lam, b_grid, horizon: int = 64) -> ScanReport:
    """Itineraries of both turning points (up to the first turning hit) across a grid of ``b``."""
    alpha = as_algebraic(lam)
    grid = tuple(Fraction(b) if not isinstance(b, float) else Fraction(str(b)) for b in b_grid)
    rows = []
    for b in grid:
        m = BimodalMap(alpha, b)
        rows.append(tuple(itinerary_of(m, c(i), horizon, stop_at_turning=True) for i in (1, 2)))
    return ScanReport(alpha, grid, tuple(rows), horizon)
