"""Bifurcation equations of turning-point itineraries.

A bifurcation itinerary ``c^{i0} J^{i_1} ... J^{i_{n-1}} c^{i1}`` forces
``q^n(c^{i0}) = c^{i1}``.  Along the itinerary every iterate is a linear form
``sum_i w^i_k b^i`` in the branch offsets with coefficients in ``Z[lam]/2``,
given by

    w^i_1     = (delta^{i-1}_{i0} + delta^i_{i0}) / 2
    w^i_{k+1} = (-1)^{i_k} s lam w^i_k + delta^i_{i_k}

so the return condition is one linear equation in the free offsets
``b^1 .. b^{l-1}`` with polynomial coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import (
    AlgebraicNumber,
    AlgValue,
    DyadicPoly,
    IntPoly,
    as_algebraic,
    poly_gcd,
    divide_exact,
    sign_at,
)
from .itinerary import Itinerary
from .pwl import Symbol


class BadItinerary(ValueError):
    pass


@dataclass(frozen=True)
class Chart:
    """Coordinates in which orbits are expanded.

    ``b0`` and ``bl`` are the offsets of the outer branches fixed by the
    boundary conditions, as polynomials in lambda.
    """

    name: str
    l: int
    s: int
    b0: IntPoly
    bl: IntPoly

    def fixed_offset(self, i: int) -> IntPoly | None:
        if i == 0:
            return self.b0
        if i == self.l:
            return self.bl
        return None

    def to_json(self) -> dict:
        return {"name": self.name, "l": self.l, "s": self.s}

    @classmethod
    def from_json(cls, data) -> "Chart":
        if isinstance(data, str) or data.get("name") == "bimodal":
            return BIMODAL
        return interval_chart(int(data["l"]), int(data["s"]))


BIMODAL = Chart("bimodal", 2, 1, IntPoly.const(1), IntPoly.const(-1))


def interval_chart(l: int, s: int = 1) -> Chart:
    """The chart on ``[0, 1]`` with ``l`` turning points and first slope sign ``s``.

    ``q(0)`` and ``q(1)`` must be boundary points: the first branch gives
    ``b^0 = 0`` (increasing) or ``1`` (decreasing), the last branch gives
    ``b^l = 1 - lam`` (increasing) or ``lam`` (decreasing).
    """
    if l < 1 or s not in (1, -1):
        raise ValueError("need l >= 1 and s = +-1")
    lam = IntPoly.lam()
    b0 = IntPoly.const(0 if s == 1 else 1)
    bl = (1 - lam) if (-1) ** l * s == 1 else lam
    return Chart(f"interval(l={l},s={s:+d})", l, s, b0, bl)


def chart_of(m) -> Chart:
    from .pwl import BimodalMap
    if isinstance(m, BimodalMap):
        return BIMODAL
    return interval_chart(m.l, m.s)


@dataclass(frozen=True)
class LinearFormOrbit:
    """``steps[k-1][i] = w^i_k``: the iterate ``q^k(c^{i0})`` as a form in the offsets."""

    chart: Chart
    itinerary: Itinerary
    steps: tuple[tuple[DyadicPoly, ...], ...]

    def w(self, k: int) -> tuple[DyadicPoly, ...]:
        return self.steps[k - 1]

    def bimodal_form(self, k: int) -> tuple[DyadicPoly, DyadicPoly]:
        """``(coefficient of b, constant)`` of step ``k`` in the bimodal chart."""
        if self.chart != BIMODAL:
            raise ValueError("bimodal_form needs the bimodal chart")
        w0, w1, w2 = self.steps[k - 1]
        return w1, w0 - w2

    def value(self, k: int, lam, free: Sequence) -> AlgValue:
        """Evaluate step ``k`` at ``lam`` with free offsets ``b^1 .. b^{l-1}``."""
        alpha = as_algebraic(lam)
        offs = [AlgValue.of(self.chart.b0, alpha), *(AlgValue.of(x, alpha) for x in free),
                AlgValue.of(self.chart.bl, alpha)]
        total = AlgValue.const(0, alpha)
        for wi, bi in zip(self.steps[k - 1], offs):
            total = total + AlgValue.of(wi, alpha) * bi
        return total


def _check_symbols(chart: Chart, I: Itinerary) -> None:
    for s in I:
        hi = chart.l
        lo = 1 if s.is_turning else 0
        if not lo <= s.index <= hi:
            raise BadItinerary(f"symbol {s} is outside the alphabet of the {chart.name} chart")


def symbolic_orbit(chart: Chart, I) -> LinearFormOrbit:
    """Linear forms of the iterates of ``I[0]`` along the laps listed in ``I``.

    Steps ``1 .. len(I)`` are produced when the last symbol is a lap; when it
    is a turning point (the return) the forms stop at that step.
    """
    I = Itinerary.of(I)
    if not I or not I[0].is_turning:
        raise BadItinerary("an itinerary for a symbolic orbit starts at a turning point")
    _check_symbols(chart, I)
    for k, s in enumerate(I.symbols[1:-1], start=1):
        if s.is_turning:
            raise BadItinerary(f"turning symbol {s} at step {k} before the end")
    l, s = chart.l, chart.s
    i0 = I[0].index
    w = [DyadicPoly() for _ in range(l + 1)]
    w[i0 - 1] = w[i0 - 1] + DyadicPoly.half()
    w[i0] = w[i0] + DyadicPoly.half()
    steps = [tuple(w)]
    tail = I.symbols[1:]
    for sym in tail:
        if sym.is_turning:
            break
        j = sym.index
        w = [wi.times_lambda((-1) ** j * s) for wi in w]
        w[j] = w[j] + 1
        steps.append(tuple(w))
    return LinearFormOrbit(chart, I, tuple(steps))


@dataclass(frozen=True, eq=False)
class BifurcationEq:
    """``sum_{i=1}^{l-1} Q[i](lam) b^i = Q[0](lam)``.

    ``Q`` holds integer polynomials equal to ``2**cleared_pow2`` times the
    dyadic polynomials of the return equation written as ``lam * q^n(c) =
    lam * c^{i1}``.  Signs are normalised so the first nonzero ``Q[i]``
    with ``i >= 1`` has positive leading coefficient.
    """

    itinerary: Itinerary
    chart: Chart
    Q: tuple[IntPoly, ...]
    reduced: bool = False
    cleared_pow2: int = 1
    common_factor: IntPoly = field(default_factory=lambda: IntPoly.const(1))

    @property
    def Q0(self) -> IntPoly:
        return self.Q[0]

    @property
    def Q1(self) -> IntPoly:
        return self.Q[1]

    def dyadic(self) -> tuple[DyadicPoly, ...]:
        return tuple(DyadicPoly(q, self.cleared_pow2) for q in self.Q)

    def gcd(self) -> IntPoly:
        g = IntPoly()
        for q in self.Q:
            g = poly_gcd(g, q) if not g.is_zero() else q.primitive()
        return g if not g.is_zero() else IntPoly.const(1)

    def reduced_form(self) -> "BifurcationEq":
        """Divide out the common polynomial factor of all ``Q[i]``."""
        g = self.gcd()
        if g.degree <= 0:
            return BifurcationEq(self.itinerary, self.chart, self.Q, True, self.cleared_pow2, self.common_factor)
        Q = tuple(divide_exact_signed(q, g) for q in self.Q)
        return BifurcationEq(self.itinerary, self.chart, Q, True, self.cleared_pow2, self.common_factor * g)

    def degree(self) -> int:
        return max(q.degree for q in self.Q)

    def signs_at(self, lam) -> tuple[int, ...]:
        alpha = as_algebraic(lam)
        return tuple(sign_at(q, alpha) for q in self.Q)

    def kind(self, lam) -> str:
        """``"ordinary"``, ``"exceptional"`` or ``"case3"`` at ``lam``.

        Ordinary: some ``Q[i]``, ``i >= 1``, is nonzero.  Exceptional: every
        ``Q[i]`` vanishes.  Case 3: only ``Q[0]`` survives, so no offsets solve it.
        """
        sg = self.signs_at(lam)
        if any(sg[1:]):
            return "ordinary"
        return "exceptional" if sg[0] == 0 else "case3"

    def solve(self, lam) -> AlgValue:
        """The unique ``b`` for a single free offset; requires ``Q[1](lam) != 0``."""
        if len(self.Q) != 2:
            raise ValueError("solve handles a single free offset; use codim1_analyze otherwise")
        alpha = as_algebraic(lam)
        if sign_at(self.Q[1], alpha) == 0:
            raise ZeroDivisionError("Q1 vanishes at this lambda")
        return AlgValue(self.Q[0], self.Q[1], alpha)

    def residual(self, lam, free: Sequence) -> AlgValue:
        alpha = as_algebraic(lam)
        total = -AlgValue.of(self.Q[0], alpha)
        for q, b in zip(self.Q[1:], free):
            total = total + AlgValue.of(q, alpha) * AlgValue.of(b, alpha)
        return total

    def __str__(self) -> str:
        lhs = " + ".join(f"({q})·b{i}" if self.chart.l > 2 else f"({q})·b"
                         for i, q in enumerate(self.Q[1:], start=1))
        return f"{lhs} = {self.Q[0]}"

    def to_json(self) -> dict:
        from .io import SCHEMA, polys_to_json
        return {"schema": SCHEMA, "itinerary": self.itinerary.to_json(), "chart": self.chart.to_json(),
                "Q": polys_to_json(self.Q), "reduced": self.reduced, "cleared_pow2": self.cleared_pow2}


def divide_exact_signed(num: IntPoly, den: IntPoly) -> IntPoly:
    """Exact quotient keeping the sign relation ``num = q * den``."""
    if num.is_zero():
        return num
    q = divide_exact(num, den)
    if (q * den).lc * num.lc < 0:
        q = -q
    return q


def _return_polys(orbit: LinearFormOrbit, target: Symbol) -> list[IntPoly]:
    """``P_i`` with ``sum_i P_i b^i = 0`` equivalent to ``q^n(c) = c^{i1}``."""
    chart = orbit.chart
    w = orbit.steps[-1]
    i1 = target.index
    sgn = (-1) ** i1 * chart.s
    P = []
    for i in range(chart.l + 1):
        p = w[i].times_lambda().cleared(1)
        delta = (1 if i == i1 - 1 else 0) - (1 if i == i1 else 0)
        P.append(p - sgn * delta)
    return P


def derive_bifurcation_eq(I, chart: Chart = BIMODAL) -> BifurcationEq:
    """Bifurcation equation of a bifurcation itinerary ``c^{i0} J ... J c^{i1}``."""
    I = Itinerary.of(I)
    if not I.is_bifurcation:
        raise BadItinerary(f"{I} does not start and end at turning points with laps in between")
    orbit = symbolic_orbit(chart, I)
    P = _return_polys(orbit, I[-1])
    Q = [IntPoly()] + P[1:chart.l]
    Q[0] = -(P[0] * chart.b0 + P[chart.l] * chart.bl)
    lead = next((q for q in Q[1:] if not q.is_zero()), Q[0])
    if not lead.is_zero() and lead.lc < 0:
        Q = [-q for q in Q]
    return BifurcationEq(I, chart, tuple(Q))


# ---------------------------------------------------------------------------
# Coefficient laws of the bimodal equations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StructureReport:
    passed: bool
    kind: str
    failure: str | None = None
    notes: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {"passed": self.passed, "kind": self.kind, "failure": self.failure, "notes": list(self.notes)}


def coefficient_structure_check(eq: BifurcationEq, kind: str | None = None) -> StructureReport:
    """Check the integer-coefficient laws of a raw bimodal equation ``Q1 b = Q0``.

    ``kind`` is ``"c1-periodic"`` (laws ``-alpha_n = beta_n = 1`` and
    ``alpha_0 = beta_0 = +-1``) or ``"c2-case"`` (``alpha_n = beta_n = 1``,
    ``alpha_0, beta_0 = +-1`` independently), where ``alpha`` are the
    coefficients of ``Q0`` and ``beta`` those of ``Q1``.  In both cases every
    middle index has ``alpha_i, beta_i in {-2, 0, 2}`` with ``|alpha_i| +
    |beta_i| = 2``.
    """
    if eq.chart != BIMODAL:
        return StructureReport(False, kind or "?", "coefficient laws are stated for the bimodal chart")
    if eq.reduced:
        return StructureReport(False, kind or "?", "coefficient laws apply to the unreduced equation")
    if kind is None:
        kind = "c1-periodic" if eq.itinerary[0].index == 1 else "c2-case"
    alpha, beta = eq.Q[0], eq.Q[1]
    n = max(alpha.degree, beta.degree)
    notes = []

    def fail(msg):
        return StructureReport(False, kind, msg, tuple(notes))

    if kind == "c1-periodic":
        if not (-alpha[n] == beta[n] == 1):
            return fail(f"-alpha_n = beta_n = 1 (alpha_n={alpha[n]}, beta_n={beta[n]})")
        if alpha[0] not in (1, -1) or beta[0] not in (1, -1):
            return fail(f"alpha_0, beta_0 in {{-1, 1}} (alpha_0={alpha[0]}, beta_0={beta[0]})")
        if alpha[0] != beta[0]:
            notes.append(f"joint sign alpha_0 = beta_0 not met (alpha_0={alpha[0]}, beta_0={beta[0]})")
    elif kind == "c2-case":
        if not (alpha[n] == beta[n] == 1):
            return fail(f"alpha_n = beta_n = 1 (alpha_n={alpha[n]}, beta_n={beta[n]})")
        if alpha[0] not in (1, -1) or beta[0] not in (1, -1):
            return fail(f"alpha_0, beta_0 in {{-1, 1}} (alpha_0={alpha[0]}, beta_0={beta[0]})")
    else:
        raise ValueError(f"unknown kind {kind!r}")
    for i in range(1, n):
        a, b = alpha[i], beta[i]
        if a not in (-2, 0, 2) or b not in (-2, 0, 2):
            return fail(f"alpha_{i}, beta_{i} in {{-2, 0, 2}} (got {a}, {b})")
        if abs(a) + abs(b) != 2:
            return fail(f"|alpha_{i}| + |beta_{i}| = 2 (got {a}, {b})")
    return StructureReport(True, kind, None, tuple(notes))


# ---------------------------------------------------------------------------
# Bound on the w-recursion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WBoundReport:
    ok: bool
    region: str
    checked: int
    failure: tuple[int, int, float] | None = None  # (k, offset index, value)

    def to_json(self) -> dict:
        return {"ok": self.ok, "region": self.region, "checked": self.checked,
                "failure": None if self.failure is None else list(self.failure)}


def _lam_number(lam):
    alpha = as_algebraic(lam)
    r = alpha.exact_rational()
    return (r if r is not None else AlgValue.lam(alpha)), alpha


def w_bound_check(symbols, lam, k_max: int, chart: Chart = BIMODAL, i0: int = 1,
                  region: str | None = None) -> WBoundReport:
    """Run the w-recursion along lap ``symbols`` (repeated cyclically) and test
    that each tracked coefficient stays in its invariant region for ``2 <= k <= k_max``.

    Regions: ``"half"`` is ``|w| > 1/2`` on ``w^{i}``, ``i in {i0-1, i0}``
    among the free offsets; ``"bimodal"`` is ``(-inf, 0) U (1/2, inf)`` for
    ``s = +1`` and ``(-inf, -1/(lam-1)) U (1/2, inf)`` for ``s = -1``, on the
    single free offset of a two-turning-point chart.  By default ``"bimodal"``
    is used when ``l = 2`` and ``"half"`` otherwise.
    """
    syms = [Symbol.parse(str(x)) if not isinstance(x, Symbol) else x for x in symbols]
    if not syms or any(s.is_turning for s in syms):
        raise BadItinerary("w_bound_check takes a nonempty sequence of lap symbols")
    l, s = chart.l, chart.s
    if region is None:
        region = "bimodal" if l == 2 else "half"
    L, _ = _lam_number(lam)
    tracked = [i for i in (i0 - 1, i0) if 1 <= i <= l - 1]
    if region not in ("bimodal", "half"):
        raise ValueError(f"unknown region {region!r}")
    if region == "bimodal" and l != 2:
        raise ValueError("the bimodal region needs l = 2")
    if isinstance(L, Fraction):
        return _w_bound_rational(syms, L, k_max, s, tracked, region)
    half = Fraction(1, 2)
    low = Fraction(0) if s == 1 else -1 / (L - 1)

    def inside(v):
        if region == "bimodal":
            return v < low or v > half
        return v > half or v < -half

    w = {i: half for i in tracked}
    for k in range(2, k_max + 1):
        j = syms[(k - 2) % len(syms)].index
        sign = (-1) ** j * s
        for i in tracked:
            w[i] = sign * L * w[i] + (1 if i == j else 0)
            if not inside(w[i]):
                return WBoundReport(False, region, k - 1, (k, i, float(w[i])))
    return WBoundReport(True, region, k_max - 1)


def _w_bound_rational(syms, L: Fraction, k_max, s, tracked, region) -> WBoundReport:
    # w = N / D with D = 2 q^(k-1) > 0, all in integers
    p, q = L.numerator, L.denominator
    N = {i: 1 for i in tracked}
    D = 2
    for k in range(2, k_max + 1):
        j = syms[(k - 2) % len(syms)].index
        sign = (-1) ** j * s
        for i in tracked:
            N[i] = sign * p * N[i] + (q * D if i == j else 0)
        D *= q
        for i in tracked:
            n = N[i]
            if region == "half":
                ok = 2 * abs(n) > D
            elif s == 1:
                ok = n < 0 or 2 * n > D
            else:  # below -1/(lam-1) = -q/(p-q), or above 1/2
                ok = n * (p - q) < -q * D or 2 * n > D
            if not ok:
                return WBoundReport(False, region, k - 1, (k, i, n / D))
    return WBoundReport(True, region, k_max - 1)


def eq11_residual(eq1: BifurcationEq, eq2: BifurcationEq) -> IntPoly:
    """``Q1_0 * Q2_1 - Q1_1 * Q2_0`` for two single-offset equations."""
    if len(eq1.Q) != 2 or len(eq2.Q) != 2:
        raise ValueError("eq11_residual needs single-offset equations")
    return eq1.Q[0] * eq2.Q[1] - eq1.Q[1] * eq2.Q[0]

