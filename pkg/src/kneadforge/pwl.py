"""Constant-slope piecewise-linear multimodal maps.

Two charts are provided:

* :class:`PLMap` -- the general multi-interval model on ``[0, 1]`` with
  breakpoints ``a_0 = 0 <= ... <= a_N = 1``; the i-th branch on ``I_k`` is
  ``x -> (-1)**i * s(k) * lam * x + b_k^i``.
* :class:`BimodalMap` -- the normalised bimodal family on ``[-a, a]``,
  ``a = 1/(lam - 1)``, with branches ``lam*x + 1``, ``-lam*x + b`` and
  ``lam*x - 1``.

All scalars are exact :class:`~kneadforge.algebra.AlgValue` objects over the
slope ``lam`` (rational or algebraic), so every comparison is certified.
"""

from __future__ import annotations

import math
from functools import cached_property
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

from .algebra import (
    AlgebraicNumber,
    AlgValue,
    DyadicPoly,
    as_algebraic,
)


class MalformedSigma(ValueError):
    """The interval map ``sigma`` sends some index outside ``1..N``."""


class AmbiguousBranch(ValueError):
    """A point sits exactly on a turning point and a branch was demanded."""


class InfeasibleMap(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class Symbol(NamedTuple):
    """Itinerary symbol: ``("c", i)`` turning point or ``("J", i)`` open lap."""

    kind: str
    index: int

    def __str__(self) -> str:
        return f"{self.kind}{self.index}"

    @property
    def is_turning(self) -> bool:
        return self.kind == "c"

    @classmethod
    def parse(cls, token: str) -> "Symbol":
        token = token.strip()
        if len(token) < 2 or token[0] not in "cJ" or not token[1:].isdigit():
            raise ValueError(f"bad itinerary symbol {token!r}")
        return cls(token[0], int(token[1:]))


def c(i: int) -> Symbol:
    return Symbol("c", i)


def J(i: int) -> Symbol:
    return Symbol("J", i)


# ---------------------------------------------------------------------------
# Combinatorial data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CombData:
    """Combinatorial signature ``{N, sigma, l, s}``; ``sigma`` is 1-based."""

    N: int
    sigma: tuple[int, ...]
    l: tuple[int, ...]
    s: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "sigma", tuple(int(v) for v in self.sigma))
        object.__setattr__(self, "l", tuple(int(v) for v in self.l))
        object.__setattr__(self, "s", tuple(int(v) for v in self.s))

    @classmethod
    def bimodal(cls) -> "CombData":
        return cls(1, (1,), (2,), (1,))

    @classmethod
    def single(cls, l: int, s: int = 1) -> "CombData":
        return cls(1, (1,), (l,), (s,))

    @property
    def total_turning(self) -> int:
        return sum(self.l)

    def sigma_l(self, k: int) -> int:
        """Index ``j`` with ``q(a_{k-1}^+) = a_j``."""
        sk = self.sigma[k - 1]
        return sk - 1 if self.s[k - 1] == 1 else sk

    def sigma_r(self, k: int) -> int:
        """Index ``j`` with ``q(a_k^-) = a_j``."""
        sk = self.sigma[k - 1]
        right_slope = (-1) ** self.l[k - 1] * self.s[k - 1]
        return sk if right_slope == 1 else sk - 1

    def to_json(self) -> dict:
        return {"N": self.N, "sigma": list(self.sigma), "l": list(self.l), "s": list(self.s)}

    @classmethod
    def from_json(cls, data: dict) -> "CombData":
        return cls(int(data["N"]), tuple(data["sigma"]), tuple(data["l"]), tuple(data["s"]))


@dataclass(frozen=True)
class SpaceReport:
    valid: bool
    essential: bool
    cyclic: bool
    primitive: bool
    problems: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {"valid": self.valid, "essential": self.essential, "cyclic": self.cyclic,
                "primitive": self.primitive, "problems": list(self.problems)}


def validate_space(comb: CombData) -> SpaceReport:
    """Structural flags of the map space, computed from ``sigma`` and ``l`` alone."""
    N = comb.N
    if N < 1:
        raise MalformedSigma("N must be positive")
    if len(comb.sigma) != N or any(not 1 <= v <= N for v in comb.sigma):
        raise MalformedSigma(f"sigma {comb.sigma} does not map into 1..{N}")
    problems = []
    if len(comb.l) != N or any(v < 0 for v in comb.l):
        problems.append("l must list N non-negative turning-point counts")
    if len(comb.s) != N or any(v not in (1, -1) for v in comb.s):
        problems.append("s must list N signs in {+1, -1}")
    image = set(comb.sigma)
    essential = all(comb.l[k - 1] > 0 for k in range(1, N + 1) if k not in image) if not problems else False

    def orbit_from(k: int) -> list[int]:
        seen, out = set(), []
        x = comb.sigma[k - 1]
        while x not in seen:
            seen.add(x)
            out.append(x)
            x = comb.sigma[x - 1]
        return out

    cyclic = len(image) == N and len(orbit_from(1)) == N and 1 in orbit_from(1)
    primitive = any(all(k0 in orbit_from(k) for k in range(1, N + 1)) for k0 in range(1, N + 1))
    return SpaceReport(not problems, essential, cyclic, primitive, tuple(problems))


# ---------------------------------------------------------------------------
# Feasibility
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    constraint: str
    detail: str

    def __str__(self) -> str:
        return f"{self.constraint}: {self.detail}"


@dataclass(frozen=True)
class FeasibilityReport:
    map: "PLMap | None"
    violations: tuple[Violation, ...]
    collisions: tuple[tuple[int, int], ...] = ()

    @property
    def feasible(self) -> bool:
        return not self.violations

    @property
    def collided(self) -> bool:
        return bool(self.collisions)


def _values(xs, lam):
    return tuple(AlgValue.of(x, lam) for x in xs)


def turning_point_formula(lam: AlgValue, s: int, i: int, b_prev: AlgValue, b_next: AlgValue) -> AlgValue:
    """Turning point between branches ``i-1`` and ``i`` of one interval."""
    return ((-1) ** i * s) * (b_prev - b_next) / (2 * lam)


def feasibility(comb: CombData, lam, breakpoints: Sequence, offsets: Sequence[Sequence],
                strict_eps=None) -> FeasibilityReport:
    """Check every defining constraint of the model space and build the map.

    Constraints are non-strict; colliding turning points are allowed and
    reported in ``collisions``.  With ``strict_eps`` the turning points must
    additionally be ``eps``-separated from each other and from the breakpoints.
    """
    validate_space(comb)
    alpha = as_algebraic(lam)
    L = AlgValue.lam(alpha)
    v: list[Violation] = []
    if L <= 1:
        v.append(Violation("slope", "lambda must exceed 1"))
    N = comb.N
    a = _values(breakpoints, alpha)
    if len(a) != N + 1:
        raise ValueError(f"expected {N + 1} breakpoints, got {len(a)}")
    if len(offsets) != N or any(len(offsets[k]) != comb.l[k] + 1 for k in range(N)):
        raise ValueError("offsets must have l(k)+1 entries for each interval k")
    b = tuple(_values(row, alpha) for row in offsets)
    if a[0] != 0 or a[N] != 1:
        v.append(Violation("breakpoints", "a_0 must be 0 and a_N must be 1"))
    for k in range(1, N + 1):
        if a[k - 1] > a[k]:
            v.append(Violation("breakpoints", f"a_{k - 1} > a_{k}"))

    eps = AlgValue.of(strict_eps, alpha) if strict_eps is not None else None
    chain: list[tuple[str, AlgValue]] = [("a_0", a[0])]
    collisions = []
    for k in range(1, N + 1):
        s, lk = comb.s[k - 1], comb.l[k - 1]
        for i in range(1, lk + 1):
            ck = turning_point_formula(L, s, i, b[k - 1][i - 1], b[k - 1][i])
            chain.append((f"c_{k}^{i}", ck))
            if i > 1 and ck == chain[-2][1]:
                collisions.append((k, i - 1))
        chain.append((f"a_{k}", a[k]))
    for (n1, x1), (n2, x2) in zip(chain, chain[1:]):
        if x1 > x2:
            v.append(Violation("turning-order", f"{n1} > {n2}"))
        if eps is not None:
            both_breaks = n1.startswith("a_") and n2.startswith("a_")
            if not both_breaks and x1 + eps > x2:
                v.append(Violation("turning-separation", f"{n1} + eps > {n2}"))

    for k in range(1, N + 1):
        sk = comb.sigma[k - 1]
        lo, hi = a[sk - 1], a[sk]
        row = b[k - 1]
        for i in range(1, comb.l[k - 1] + 1):
            tv = (row[i - 1] + row[i]) / 2
            if not lo <= tv <= hi:
                v.append(Violation("turning-value", f"q(c_{k}^{i}) outside I_{sk}"))
        s, lk = comb.s[k - 1], comb.l[k - 1]
        if s * L * a[k - 1] + row[0] != a[comb.sigma_l(k)]:
            v.append(Violation("left-boundary", f"q(a_{k - 1}+) != a_{comb.sigma_l(k)}"))
        if (-1) ** lk * s * L * a[k] + row[lk] != a[comb.sigma_r(k)]:
            v.append(Violation("right-boundary", f"q(a_{k}-) != a_{comb.sigma_r(k)}"))

    m = None if v else PLMap(comb, alpha, a, b)
    return FeasibilityReport(m, tuple(v), tuple(collisions))


def boundary_offsets(comb: CombData, lam, breakpoints: Sequence | None = None) -> list[tuple[AlgValue, AlgValue]]:
    """Offsets ``(b_k^0, b_k^{l(k)})`` forced by the boundary equations."""
    alpha = as_algebraic(lam)
    L = AlgValue.lam(alpha)
    N = comb.N
    a = _values(breakpoints if breakpoints is not None else
                [Fraction(k, N) for k in range(N + 1)], alpha)
    out = []
    for k in range(1, N + 1):
        s, lk = comb.s[k - 1], comb.l[k - 1]
        first = a[comb.sigma_l(k)] - s * L * a[k - 1]
        last = a[comb.sigma_r(k)] - (-1) ** lk * s * L * a[k]
        out.append((first, last))
    return out


# ---------------------------------------------------------------------------
# Orbit points
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrbitPoint:
    """One orbit step.

    ``form`` is present for orbits of turning points (steps >= 1): the
    coefficients ``w^i`` with ``value = sum_i w^i * b^i`` over the branch
    offsets ``b^0 .. b^l`` (for the bimodal chart ``b^0 = 1``, ``b^1 = b``,
    ``b^2 = -1``).
    """

    step: int
    value: AlgValue
    symbol: Symbol
    form: tuple[DyadicPoly, ...] | None = None

    def enclosure(self, eps=Fraction(1, 10 ** 12)) -> tuple[Fraction, Fraction]:
        return self.value.enclosure(eps)

    def linear_form(self) -> tuple[DyadicPoly, DyadicPoly]:
        """``(coefficient of b, constant)`` in the bimodal chart."""
        if self.form is None or len(self.form) != 3:
            raise ValueError("linear form in b is only defined for bimodal turning-point orbits")
        w0, w1, w2 = self.form
        return w1, w0 - w2


# ---------------------------------------------------------------------------
# Maps
# ---------------------------------------------------------------------------


class _ConstantSlopeMap:
    """Shared behaviour of single-interval charts: laps J^0..J^l, turning points c^1..c^l."""

    alpha: AlgebraicNumber
    l: int
    s: int

    @property
    def lam(self) -> AlgValue:
        return AlgValue.lam(self.alpha)

    def offsets(self) -> tuple[AlgValue, ...]:
        raise NotImplementedError

    def domain(self) -> tuple[AlgValue, AlgValue]:
        raise NotImplementedError

    # maps are immutable, so derived points are computed once per instance
    @cached_property
    def _turning_points(self) -> tuple[AlgValue, ...]:
        b = self.offsets()
        return tuple(turning_point_formula(self.lam, self.s, i, b[i - 1], b[i]) for i in range(1, self.l + 1))

    @cached_property
    def _turning_values(self) -> tuple[AlgValue, ...]:
        b = self.offsets()
        return tuple((b[i - 1] + b[i]) / 2 for i in range(1, self.l + 1))

    @cached_property
    def _domain(self) -> tuple[AlgValue, AlgValue]:
        return self.domain()

    def turning_points(self) -> tuple[AlgValue, ...]:
        return self._turning_points

    def turning_values(self) -> tuple[AlgValue, ...]:
        return self._turning_values

    def turning_point(self, i: int) -> AlgValue:
        return self.turning_points()[i - 1]

    @property
    def simple(self) -> bool:
        cs = self.turning_points()
        return all(x < y for x, y in zip(cs, cs[1:]))

    def locate(self, x) -> Symbol:
        x = AlgValue.of(x, self.alpha)
        lo, hi = self._domain
        if x < lo or x > hi:
            raise ValueError(f"{x} is outside the domain")
        for i, ci in enumerate(self.turning_points(), start=1):
            d = (x - ci).sign()
            if d < 0:
                return J(i - 1)
            if d == 0:
                return c(i)
        return J(self.l)

    def branch(self, i: int, x) -> AlgValue:
        x = AlgValue.of(x, self.alpha)
        return ((-1) ** i * self.s) * self.lam * x + self.offsets()[i]

    def evaluate(self, x, turning: str = "value") -> AlgValue:
        """Image of ``x``.

        At a turning point both adjacent branches agree, so the value is
        returned; with ``turning="strict"`` such points raise
        :class:`AmbiguousBranch` instead.
        """
        sym = self.locate(x)
        if sym.is_turning:
            if turning == "strict":
                raise AmbiguousBranch(f"{x} is the turning point {sym}")
            return self.turning_values()[sym.index - 1]
        return self.branch(sym.index, x)

    def orbit(self, x, n: int) -> list[OrbitPoint]:
        """``n + 1`` orbit points of ``x`` (step 0 is ``x`` itself)."""
        x = AlgValue.of(x, self.alpha)
        out = []
        for k in range(n + 1):
            sym = self.locate(x)
            out.append(OrbitPoint(k, x, sym))
            if k < n:
                x = self.evaluate(x)
        return out

    def turning_orbit(self, i: int, n: int) -> list[OrbitPoint]:
        """Orbit of ``c^i`` with symbolic coefficient forms attached to each step."""
        L = self.lam
        x = self.turning_point(i)
        pts = [OrbitPoint(0, x, c(i))]
        # form of q(c^i) = (b^{i-1} + b^i) / 2
        form = [DyadicPoly() for _ in range(self.l + 1)]
        form[i - 1] = form[i - 1] + DyadicPoly.half()
        form[i] = form[i] + DyadicPoly.half()
        x = self.turning_values()[i - 1]
        for k in range(1, n + 1):
            sym = self.locate(x)
            pts.append(OrbitPoint(k, x, sym, tuple(form)))
            if k == n:
                break
            j = sym.index
            if sym.is_turning:
                x = self.turning_values()[j - 1]
                form = [DyadicPoly() for _ in range(self.l + 1)]
                form[j - 1] = DyadicPoly.half()
                form[j] = form[j] + DyadicPoly.half()
            else:
                sign = (-1) ** j * self.s
                x = sign * L * x + self.offsets()[j]
                form = [w.times_lambda(sign) for w in form]
                form[j] = form[j] + 1
        return pts


@dataclass(frozen=True, eq=False)
class BimodalMap(_ConstantSlopeMap):
    """``q(x) = lam*x + 1`` on J^0, ``-lam*x + b`` on J^1, ``lam*x - 1`` on J^2."""

    alpha: AlgebraicNumber
    b: AlgValue
    l: int = field(default=2, init=False)
    s: int = field(default=1, init=False)

    def __init__(self, lam, b):
        alpha = as_algebraic(lam)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "b", AlgValue.of(b, alpha))

    @property
    def a(self) -> AlgValue:
        return 1 / (self.lam - 1)

    def offsets(self) -> tuple[AlgValue, ...]:
        one = AlgValue.const(1, self.alpha)
        return (one, self.b, -one)

    def domain(self) -> tuple[AlgValue, AlgValue]:
        return -self.a, self.a

    @property
    def c1(self) -> AlgValue:
        return (self.b - 1) / (2 * self.lam)

    @property
    def c2(self) -> AlgValue:
        return (self.b + 1) / (2 * self.lam)

    def b_bound(self) -> AlgValue:
        return (3 - self.lam) / (self.lam - 1)

    def violations(self) -> list[Violation]:
        out = []
        if self.lam <= 1 or self.lam > 3:
            out.append(Violation("slope", "lambda must lie in (1, 3]"))
            return out
        bound = self.b_bound()
        if not -bound <= self.b <= bound:
            out.append(Violation("b-range", f"b = {self.b} outside [-(3-lam)/(lam-1), (3-lam)/(lam-1)]"))
        return out

    @property
    def feasible(self) -> bool:
        return not self.violations()

    def to_unit(self, x) -> AlgValue:
        """Affine change of coordinates ``[-a, a] -> [0, 1]``."""
        return (AlgValue.of(x, self.alpha) * (self.lam - 1) + 1) / 2

    def from_unit(self, y) -> AlgValue:
        return (2 * AlgValue.of(y, self.alpha) - 1) / (self.lam - 1)

    def to_plmap(self) -> "PLMap":
        L = self.lam
        b1 = ((L + 1) + self.b * (L - 1)) / 2
        rep = feasibility(CombData.bimodal(), self.alpha, (0, 1), [(0, b1, 1 - L)])
        if rep.map is None:
            raise InfeasibleMap(rep.violations)
        return rep.map

    def mirror(self) -> "BimodalMap":
        """The map conjugated by ``x -> -x`` (offset ``b -> -b``)."""
        return BimodalMap(self.alpha, -self.b)

    def descriptor(self) -> dict:
        from .io import value_to_json, lambda_to_json
        return {"lambda": lambda_to_json(self.alpha), "b": value_to_json(self.b)}

    def __repr__(self) -> str:
        return f"BimodalMap(lam={self.alpha}, b={self.b})"


@dataclass(frozen=True, eq=False)
class PLMap(_ConstantSlopeMap):
    """General constant-slope map on ``[0, 1]`` (construct through :func:`feasibility`)."""

    comb: CombData
    alpha: AlgebraicNumber
    breakpoints: tuple[AlgValue, ...]
    offset_rows: tuple[tuple[AlgValue, ...], ...]

    @property
    def l(self) -> int:  # type: ignore[override]
        self._single()
        return self.comb.l[0]

    @property
    def s(self) -> int:  # type: ignore[override]
        self._single()
        return self.comb.s[0]

    def _single(self):
        if self.comb.N != 1:
            raise ValueError("laps and itineraries are defined for single-interval maps only")

    def offsets(self) -> tuple[AlgValue, ...]:
        self._single()
        return self.offset_rows[0]

    def domain(self) -> tuple[AlgValue, AlgValue]:
        return self.breakpoints[0], self.breakpoints[-1]

    @classmethod
    def create(cls, comb: CombData, lam, breakpoints, offsets, strict_eps=None) -> "PLMap":
        rep = feasibility(comb, lam, breakpoints, offsets, strict_eps)
        if rep.map is None:
            raise InfeasibleMap(rep.violations)
        return rep.map

    def all_turning_points(self) -> list[list[AlgValue]]:
        L = self.lam
        out = []
        for k in range(1, self.comb.N + 1):
            s, row = self.comb.s[k - 1], self.offset_rows[k - 1]
            out.append([turning_point_formula(L, s, i, row[i - 1], row[i])
                        for i in range(1, self.comb.l[k - 1] + 1)])
        return out

    def all_turning_values(self) -> list[list[AlgValue]]:
        return [[(row[i - 1] + row[i]) / 2 for i in range(1, len(row))] for row in self.offset_rows]

    def interval_of(self, x, side: str = "right") -> int:
        """Index ``k`` of the interval holding ``x``; at a shared breakpoint
        ``side`` picks the interval to its right (default) or left."""
        x = AlgValue.of(x, self.alpha)
        a = self.breakpoints
        if x < a[0] or x > a[-1]:
            raise ValueError(f"{x} is outside [0, 1]")
        N = self.comb.N
        if side == "left":
            for k in range(1, N + 1):
                if x <= a[k] and x >= a[k - 1]:
                    return k
        for k in range(N, 0, -1):
            if x >= a[k - 1] and x <= a[k]:
                return k
        raise AssertionError("unreachable")

    def evaluate(self, x, turning: str = "value", side: str = "right") -> AlgValue:  # type: ignore[override]
        if self.comb.N == 1:
            return super().evaluate(x, turning)
        x = AlgValue.of(x, self.alpha)
        k = self.interval_of(x, side)
        s, row = self.comb.s[k - 1], self.offset_rows[k - 1]
        cs = self.all_turning_points()[k - 1]
        i = 0
        for j, cj in enumerate(cs, start=1):
            d = (x - cj).sign()
            if d == 0:
                if turning == "strict":
                    raise AmbiguousBranch(f"{x} is the turning point c_{k}^{j}")
                return (row[j - 1] + row[j]) / 2
            if d > 0:
                i = j
        return ((-1) ** i * s) * self.lam * x + row[i]

    def to_bimodal(self) -> BimodalMap:
        if self.comb != CombData.bimodal():
            raise ValueError("not a map of the bimodal space")
        L = self.lam
        b1 = self.offset_rows[0][1]
        return BimodalMap(self.alpha, (2 * b1 - (L + 1)) / (L - 1))

    def descriptor(self) -> dict:
        from .io import value_to_json, lambda_to_json
        return {"comb": self.comb.to_json(), "lambda": lambda_to_json(self.alpha),
                "breakpoints": [value_to_json(v) for v in self.breakpoints],
                "offsets": [[value_to_json(v) for v in row] for row in self.offset_rows]}


def entropy(m) -> float:
    """Topological entropy ``log(lam)`` of a member of the constant-slope space."""
    return math.log(float(m.alpha))


def evaluate(m, x, turning: str = "value") -> AlgValue:
    return m.evaluate(x, turning)


def orbit(m, x, n: int) -> list[OrbitPoint]:
    return m.orbit(x, n)


def turning_points(m) -> tuple[AlgValue, ...]:
    return m.turning_points()


def turning_values(m) -> tuple[AlgValue, ...]:
    return m.turning_values()

