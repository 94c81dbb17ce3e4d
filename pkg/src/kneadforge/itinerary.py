"""Symbolic itineraries, the compatibility relation and realization intervals."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import AlgebraicNumber, AlgValue, IntPoly, as_algebraic
from .pwl import BimodalMap, Symbol, c, J


class CollidedTurningPoints(ValueError):
    """The map has coinciding turning points, so itineraries are not unique."""


class LengthMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Itinerary:
    """A finite symbol sequence, optionally eventually periodic.

    ``periodic_tail = (start, period)`` declares that ``symbols[start:]``
    repeats with the given period forever.
    """

    symbols: tuple[Symbol, ...]
    periodic_tail: tuple[int, int] | None = None

    def __post_init__(self):
        syms = tuple(s if isinstance(s, Symbol) else Symbol.parse(str(s)) for s in self.symbols)
        object.__setattr__(self, "symbols", syms)
        if self.periodic_tail is not None:
            start, period = self.periodic_tail
            if start < 0 or period < 1:
                raise ValueError("bad periodic tail")
            for m in range(start + period, len(syms)):
                if syms[m] != syms[m - period]:
                    raise ValueError(f"symbols do not repeat with period {period} from {start}")

    @classmethod
    def parse(cls, text: str) -> "Itinerary":
        """Parse ``"c1 J2 c1"`` with an optional ``"| period=k [start=j]"`` suffix."""
        body, _, suffix = text.partition("|")
        syms = tuple(Symbol.parse(t) for t in body.replace(",", " ").split())
        tail = None
        if suffix.strip():
            opts = dict(kv.split("=", 1) for kv in suffix.split())
            tail = (int(opts.get("start", 0)), int(opts["period"]))
        return cls(syms, tail)

    @classmethod
    def of(cls, x) -> "Itinerary":
        if isinstance(x, Itinerary):
            return x
        if isinstance(x, str):
            return cls.parse(x)
        return cls(tuple(x))

    def __str__(self) -> str:
        body = " ".join(str(s) for s in self.symbols)
        if self.periodic_tail is None:
            return body
        start, period = self.periodic_tail
        return f"{body} | period={period}" + (f" start={start}" if start else "")

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __getitem__(self, m):
        return self.symbols[m]

    def symbol_at(self, m: int) -> Symbol:
        if m < len(self.symbols):
            return self.symbols[m]
        if self.periodic_tail is None:
            raise IndexError(f"itinerary has only {len(self.symbols)} explicit symbols")
        start, period = self.periodic_tail
        return self.symbols[start + (m - start) % period]

    def expand(self, n: int) -> "Itinerary":
        """The first ``n`` symbols (uses the periodic tail past the explicit part)."""
        return Itinerary(tuple(self.symbol_at(m) for m in range(n)), self.periodic_tail)

    def to_json(self):
        syms = [str(s) for s in self.symbols]
        if self.periodic_tail is None:
            return syms
        return {"symbols": syms, "start": self.periodic_tail[0], "period": self.periodic_tail[1]}

    @classmethod
    def from_json(cls, data) -> "Itinerary":
        if isinstance(data, dict):
            tail = (int(data.get("start", 0)), int(data["period"])) if "period" in data else None
            return cls(tuple(data["symbols"]), tail)
        if isinstance(data, str):
            return cls.parse(data)
        return cls(tuple(data))

    def max_index(self) -> int:
        return max((s.index for s in self.symbols), default=0)

    def check_alphabet(self, l: int) -> None:
        for s in self.symbols:
            if (s.is_turning and not 1 <= s.index <= l) or (not s.is_turning and not 0 <= s.index <= l):
                raise ValueError(f"symbol {s} is not in the alphabet of a map with {l} turning points")

    @property
    def is_bifurcation(self) -> bool:
        """Starts and ends at turning symbols with only laps in between."""
        s = self.symbols
        return (len(s) >= 2 and s[0].is_turning and s[-1].is_turning
                and not any(x.is_turning for x in s[1:-1]))

    @property
    def is_periodic_turning(self) -> bool:
        return self.is_bifurcation and self.symbols[0] == self.symbols[-1]

    def periodic(self) -> "Itinerary":
        """Attach the natural tail to a periodic bifurcation itinerary."""
        if not self.is_periodic_turning:
            raise ValueError(f"{self} is not a periodic turning-point itinerary")
        return Itinerary(self.symbols, (0, len(self.symbols) - 1))

    def mirrored(self, l: int = 2) -> "Itinerary":
        """Image under the orientation flip ``J^i <-> J^{l-i}``, ``c^i <-> c^{l+1-i}``."""
        out = tuple(c(l + 1 - s.index) if s.is_turning else J(l - s.index) for s in self.symbols)
        return Itinerary(out, self.periodic_tail)

    def time_reversed(self) -> "Itinerary":
        """Symbols listed in the opposite order (no dynamical meaning by itself)."""
        return Itinerary(tuple(reversed(self.symbols)))


def compatible_symbol(tilde: Symbol, s: Symbol) -> bool:
    if not tilde.is_turning:
        return s == tilde
    i = tilde.index
    return s == tilde or s == J(i - 1) or s == J(i)


def _comparison_length(a: Itinerary, b: Itinerary) -> int:
    la, lb = len(a), len(b)
    ta, tb = a.periodic_tail, b.periodic_tail
    if la == lb:
        return la
    if ta is None and tb is None:
        raise LengthMismatch(f"cannot compare itineraries of lengths {la} and {lb} without periodic tails")
    if ta is not None and tb is not None:
        return max(la, lb, ta[0], tb[0]) + math.lcm(ta[1], tb[1])
    return lb if ta is not None else la


def is_compatible(tilde: Itinerary, I: Itinerary) -> bool:
    """Whether ``tilde`` is compatible with ``I``.

    Laps of ``tilde`` must be matched exactly; a turning symbol ``c^i`` of
    ``tilde`` admits ``c^i``, ``J^{i-1}`` or ``J^i`` in ``I``.
    """
    tilde, I = Itinerary.of(tilde), Itinerary.of(I)
    n = _comparison_length(tilde, I)
    return all(compatible_symbol(tilde.symbol_at(m), I.symbol_at(m)) for m in range(n))


def _start_point(m, x):
    if isinstance(x, Symbol):
        if not x.is_turning:
            raise ValueError("start symbol must be a turning point")
        return x, m.turning_point(x.index)
    if isinstance(x, str) and x.strip().startswith("c"):
        sym = Symbol.parse(x)
        return sym, m.turning_point(sym.index)
    return None, AlgValue.of(x, m.alpha)


def itinerary_of(m, x, n: int, stop_at_turning: bool = False) -> Itinerary:
    """The ``n``-itinerary (``n + 1`` symbols) of ``x`` under ``m``.

    ``x`` may be a value or a turning symbol such as ``"c1"``.  When the orbit
    of a turning point returns to it, the result carries the periodic tail.
    With ``stop_at_turning`` the sequence ends at the first turning point hit
    after step 0.
    """
    if not m.simple:
        raise CollidedTurningPoints("itineraries are not unique for collided turning points")
    start_sym, v = _start_point(m, x)
    syms = []
    tail = None
    for k in range(n + 1):
        s = m.locate(v)
        syms.append(s)
        if k > 0 and s.is_turning:
            if start_sym is not None and s == start_sym and tail is None:
                tail = (0, k)
            if stop_at_turning:
                break
        if k < n:
            v = m.evaluate(v)
    return Itinerary(tuple(syms), tail)


def first_return(m, i: int, horizon: int) -> Itinerary | None:
    """Itinerary of ``c^i`` up to its first hit of a turning point, if within ``horizon``."""
    it = itinerary_of(m, c(i), horizon, stop_at_turning=True)
    return it if len(it) >= 2 and it[-1].is_turning else None


# ---------------------------------------------------------------------------
# Realization intervals (bimodal chart)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Bound:
    value: AlgValue
    open: bool
    reason: str


@dataclass(frozen=True, eq=False)
class RealizationInterval:
    """Exact set ``lo (<|<=) b (<|<=) hi`` realising an itinerary at fixed lambda."""

    lam: AlgebraicNumber
    lo: AlgValue
    hi: AlgValue
    lo_open: bool
    hi_open: bool
    lo_reason: str = ""
    hi_reason: str = ""

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, b) -> bool:
        b = AlgValue.of(b, self.lam)
        lo_ok = self.lo < b if self.lo_open else self.lo <= b
        hi_ok = b < self.hi if self.hi_open else b <= self.hi
        return lo_ok and hi_ok

    def enclosure(self, eps=Fraction(1, 10 ** 12)) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
        return self.lo.enclosure(eps), self.hi.enclosure(eps)

    def approx(self) -> tuple[float, float]:
        return float(self.lo), float(self.hi)

    def interior_samples(self, k: int = 5) -> list[Fraction]:
        """``k`` rationals strictly inside (empty for a point interval)."""
        if self.is_point:
            return []
        eps = Fraction(1, 2 ** 20)
        while True:
            (llo, lhi), (hlo, hhi) = self.enclosure(eps)
            if lhi < hlo:
                break
            eps /= 2 ** 10
        return [lhi + (hlo - lhi) * Fraction(j, k + 1) for j in range(1, k + 1)]

    def __str__(self) -> str:
        lb = "(" if self.lo_open else "["
        rb = ")" if self.hi_open else "]"
        return f"{lb}{float(self.lo):.6g}, {float(self.hi):.6g}{rb}"

    def to_json(self) -> dict:
        from .io import lambda_to_json, value_to_json
        return {"lambda": lambda_to_json(self.lam), "lo": value_to_json(self.lo), "hi": value_to_json(self.hi),
                "lo_open": self.lo_open, "hi_open": self.hi_open,
                "lo_reason": self.lo_reason, "hi_reason": self.hi_reason}


def bimodal_constraints(I: Itinerary) -> list[tuple[IntPoly, IntPoly, str, str]]:
    """Linear constraints ``P(lam)*b + R(lam)  REL  0`` equivalent to the orbit
    of ``I[0]`` following ``I`` in the bimodal chart.

    ``REL`` is one of ``"<", ">", "<=", ">=", "=="``; the last symbol of a
    bifurcation itinerary yields the equation.  Domain constraints on ``b``
    are included.
    """
    from .bifurcation import BIMODAL, symbolic_orbit

    I = Itinerary.of(I)
    if not I or not I[0].is_turning:
        raise ValueError("itinerary must start at a turning point")
    I.check_alphabet(2)
    lam = IntPoly.lam()
    out = [
        (lam - 1, lam - 3, "<=", "b <= (3-lam)/(lam-1)"),
        (lam - 1, 3 - lam, ">=", "b >= -(3-lam)/(lam-1)"),
    ]
    orbit = symbolic_orbit(BIMODAL, I)
    for k in range(1, len(I)):
        w = orbit.steps[k - 1]
        # 2*lam*x as polynomials: coefficient of b and constant part
        coef = w[1].times_lambda().cleared(1)
        const = (w[0] - w[2]).times_lambda().cleared(1)
        # 2*lam*(x - c1) = (coef - 1) b + (const + 1); 2*lam*(x - c2) = (coef - 1) b + (const - 1)
        p = coef - 1
        r1, r2 = const + 1, const - 1
        s = I[k]
        tag = f"step {k} in {s}"
        if s == J(0):
            out.append((p, r1, "<", tag))
        elif s == J(1):
            out.append((p, r1, ">", tag))
            out.append((p, r2, "<", tag))
        elif s == J(2):
            out.append((p, r2, ">", tag))
        elif s == c(1):
            out.append((p, r1, "==", tag))
        elif s == c(2):
            out.append((p, r2, "==", tag))
        if s.is_turning and k != len(I) - 1:
            raise ValueError("turning symbols may only appear at the ends")
    return out


_FLIP = {"<": ">", ">": "<", "<=": ">=", ">=": "<=", "==": "=="}


def _holds(sign: int, rel: str) -> bool:
    return {"<": sign < 0, ">": sign > 0, "<=": sign <= 0, ">=": sign >= 0, "==": sign == 0}[rel]


def realization_interval(I, lam) -> RealizationInterval | None:
    """Exact set of offsets ``b`` for which ``q_{lam,b}`` realises ``I``.

    ``I`` must start at a turning point (normally a bifurcation itinerary).
    Each orbit requirement is linear in ``b`` at fixed ``lam``, so the answer is
    an interval; ``None`` means no feasible ``b`` realises ``I``.  Endpoints
    coming from strict lap constraints are open.
    """
    alpha = as_algebraic(lam)
    L = AlgValue.lam(alpha)
    if not (1 < L <= 3):
        return None
    lower: Bound | None = None
    upper: Bound | None = None

    def tighten(cur: Bound | None, new: Bound, is_lower: bool) -> Bound:
        if cur is None:
            return new
        d = (new.value - cur.value).sign()
        if d == 0:
            return Bound(cur.value, cur.open or new.open, cur.reason if cur.open else new.reason)
        if (d > 0) == is_lower:
            return new
        return cur

    for P, R, rel, tag in bimodal_constraints(I):
        sp = AlgValue.of(P, alpha).sign()
        if sp == 0:
            if not _holds(AlgValue.of(R, alpha).sign(), rel):
                return None
            continue
        root = AlgValue(-R, P, alpha)
        eff = rel if sp > 0 else _FLIP[rel]
        if eff == "==":
            lower = tighten(lower, Bound(root, False, tag), True)
            upper = tighten(upper, Bound(root, False, tag), False)
        elif eff in ("<", "<="):
            upper = tighten(upper, Bound(root, eff == "<", tag), False)
        else:
            lower = tighten(lower, Bound(root, eff == ">", tag), True)
    d = (upper.value - lower.value).sign()
    if d < 0 or (d == 0 and (lower.open or upper.open)):
        return None
    return RealizationInterval(alpha, lower.value, upper.value, lower.open, upper.open,
                               lower.reason, upper.reason)


def realizes(I, lam, b) -> bool:
    """Direct orbit check: does ``q_{lam,b}`` give ``I[0]`` exactly the itinerary ``I``?"""
    I = Itinerary.of(I)
    m = BimodalMap(lam, b)
    if not m.feasible:
        return False
    got = itinerary_of(m, I[0], len(I) - 1)
    return got.symbols == I.symbols


def parse_many(texts: Iterable[str]) -> list[Itinerary]:
    return [Itinerary.parse(t) for t in texts]


def as_symbols(seq: Sequence) -> tuple[Symbol, ...]:
    return tuple(s if isinstance(s, Symbol) else Symbol.parse(str(s)) for s in seq)
