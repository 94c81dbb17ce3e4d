"""Exact polynomial arithmetic, real-root isolation and sign decisions.

Everything here works over Python integers and :class:`fractions.Fraction`.
Real algebraic numbers are carried as an isolating interval plus a
square-free defining polynomial, and every sign question about a polynomial
expression in such a number is settled exactly (gcd test for zero, interval
refinement otherwise).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Union[int, Fraction]


class NotDivisible(ArithmeticError):
    """Raised when an exact polynomial quotient has a nonzero remainder."""


def as_fraction(x) -> Fraction:
    """Convert ints, Fractions, decimal strings or "p/q" strings to Fraction.

    Floats are rejected on purpose: exact code paths must never see them.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational number")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def format_rational(x: Rational) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# Integer polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntPoly:
    """Polynomial in one variable (lambda) with integer coefficients.

    ``coeffs[i]`` is the coefficient of ``lambda**i``; trailing zeros are
    trimmed so the zero polynomial has no coefficients and degree -1.
    """

    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        cs = [int(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    # construction helpers
    @classmethod
    def const(cls, c: int) -> "IntPoly":
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> "IntPoly":
        return cls((0,) * k + (c,))

    @classmethod
    def lam(cls) -> "IntPoly":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    # ring operations
    def __add__(self, other):
        other = _coerce_intpoly(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPoly(tuple(self[i] + other[i] for i in range(n)))

    __radd__ = __add__

    def __neg__(self):
        return IntPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = _coerce_intpoly(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return IntPoly(tuple(c * other for c in self.coeffs))
        other = _coerce_intpoly(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = IntPoly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k: int = 1) -> "IntPoly":
        """Multiply by ``lambda**k``."""
        if not self.coeffs:
            return self
        return IntPoly((0,) * k + self.coeffs)

    def derivative(self) -> "IntPoly":
        return IntPoly(tuple(i * c for i, c in enumerate(self.coeffs))[1:])

    def content(self) -> int:
        return math.gcd(*self.coeffs) if self.coeffs else 0

    def primitive(self) -> "IntPoly":
        """Divide out the integer content and make the leading coefficient positive."""
        if not self.coeffs:
            return self
        g = self.content()
        if self.lc < 0:
            g = -g
        return IntPoly(tuple(c // g for c in self.coeffs))

    def __call__(self, x):
        """Evaluate exactly at an int or Fraction (Horner)."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def sign_at_rational(self, x: Rational) -> int:
        x = Fraction(x)
        v = _eval_scaled(self.coeffs, x.numerator, x.denominator)
        return (v > 0) - (v < 0)

    def eval_interval(self, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
        """Naive interval Horner enclosure of the range over [lo, hi]."""
        if lo == hi:
            v = self(lo)
            return Fraction(v), Fraction(v)
        rlo = rhi = Fraction(0)
        for c in reversed(self.coeffs):
            cands = (rlo * lo, rlo * hi, rhi * lo, rhi * hi)
            rlo, rhi = min(cands) + c, max(cands) + c
        return rlo, rhi

    def to_fractions(self) -> list[Fraction]:
        return [Fraction(c) for c in self.coeffs]

    def __str__(self) -> str:
        return format_poly(self.coeffs)

    def __repr__(self) -> str:
        return f"IntPoly({list(self.coeffs)})"


def _coerce_intpoly(x):
    if isinstance(x, IntPoly):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return IntPoly.const(x)
    return NotImplemented


def _eval_scaled(coeffs: Sequence[int], n: int, d: int) -> int:
    """Return ``d**deg * p(n/d)`` as an integer; same sign as p(n/d) when d > 0."""
    acc = 0
    dp = 1
    # homogenised Horner: acc_k = acc_{k+1} * n + c_k * d^(deg-k)
    for c in reversed(coeffs):
        acc = acc * n + c * dp
        dp *= d
    return acc


def format_poly(coeffs: Sequence, var: str = "λ") -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if i == 0:
            body = f"{a}"
        else:
            mono = var if i == 1 else f"{var}^{i}"
            body = mono if a == 1 else f"{a}{mono}" if isinstance(a, int) else f"({a}){mono}"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


# ---------------------------------------------------------------------------
# Rational-coefficient helpers (lists of Fractions, lowest degree first)
# ---------------------------------------------------------------------------


def _trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _qdivmod(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = _trim(list(a))
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lb = b[-1]
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        f = a[-1] / lb
        q[k] = f
        for i, bc in enumerate(b):
            a[i + k] -= f * bc
        a.pop()
        _trim(a)
    return _trim(q), a


def _to_intpoly(a: Sequence[Fraction]) -> IntPoly:
    """Clear denominators and return the primitive integer polynomial (positive lc)."""
    a = _trim(list(a))
    if not a:
        return IntPoly()
    den = 1
    for c in a:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return IntPoly(tuple(int(c * den) for c in a)).primitive()


def poly_divmod(a: IntPoly, b: IntPoly) -> tuple[list[Fraction], list[Fraction]]:
    """Quotient and remainder over the rationals."""
    return _qdivmod(a.to_fractions(), b.to_fractions())


def poly_gcd(a: IntPoly, b: IntPoly) -> IntPoly:
    """Greatest common divisor over Q, returned primitive with positive lc."""
    x, y = a.to_fractions(), b.to_fractions()
    _trim(x)
    _trim(y)
    while y:
        _, r = _qdivmod(x, y)
        x, y = y, r
    if not x:
        return IntPoly()
    return _to_intpoly(x)


def divide_exact(num: IntPoly, den: IntPoly) -> IntPoly:
    """Exact quotient ``num / den``.

    When the rational quotient is not integral it is scaled by the lcm of its
    denominators (the result is then the primitive part).  Raises
    :class:`NotDivisible` on a nonzero remainder.
    """
    if den.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    q, r = poly_divmod(num, den)
    if r:
        raise NotDivisible(f"{num} is not divisible by {den}")
    if all(c.denominator == 1 for c in q):
        return IntPoly(tuple(int(c) for c in q))
    return _to_intpoly(q)


def pseudo_rem(a: IntPoly, m: IntPoly) -> tuple[IntPoly, int]:
    """Return ``(r, scale)`` with ``scale * a = q * m + r`` and ``scale > 0``.

    ``m`` must have positive leading coefficient.
    """
    if m.lc <= 0:
        raise ValueError("modulus needs a positive leading coefficient")
    a_c = list(a.coeffs)
    dm = m.degree
    lm = m.lc
    scale = 1
    while len(a_c) - 1 >= dm and a_c:
        k = len(a_c) - 1 - dm
        top = a_c[-1]
        a_c = [c * lm for c in a_c]
        scale *= lm
        for i, mc in enumerate(m.coeffs):
            a_c[i + k] -= top * mc
        a_c.pop()
        _trim(a_c)
    return IntPoly(tuple(a_c)), scale


def squarefree_part(p: IntPoly) -> IntPoly:
    if p.degree <= 0:
        return p.primitive()
    g = poly_gcd(p, p.derivative())
    return divide_exact(p.primitive(), g).primitive()


def squarefree_decomposition(p: IntPoly) -> list[tuple[IntPoly, int]]:
    """Yun's algorithm: list of (square-free factor, multiplicity), factors of degree >= 1."""
    out: list[tuple[IntPoly, int]] = []
    if p.degree <= 0:
        return out
    f = p.to_fractions()
    df = _deriv(f)
    a0 = _gcd_q(f, df)
    b, _ = _qdivmod(f, a0)
    c, _ = _qdivmod(df, a0)
    d = _sub(c, _deriv(b))
    i = 1
    while len(b) > 1:
        a = _gcd_q(b, d)
        if len(a) > 1:
            out.append((_to_intpoly(a), i))
        b, _ = _qdivmod(b, a)
        c, _ = _qdivmod(d, a)
        d = _sub(c, _deriv(b))
        i += 1
    return out


def _deriv(a: Sequence[Fraction]) -> list[Fraction]:
    return [i * c for i, c in enumerate(a)][1:]


def _sub(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _trim([Fraction(c) for c in out])


def _gcd_q(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    x, y = _trim(list(a)), _trim(list(b))
    while y:
        _, r = _qdivmod(x, y)
        x, y = y, r
    if not x:
        return x
    lc = x[-1]
    return [c / lc for c in x]


# ---------------------------------------------------------------------------
# Dyadic polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DyadicPoly:
    """``numerator / 2**shift``; canonical (odd content when shift > 0)."""

    numerator: IntPoly = IntPoly()
    shift: int = 0

    def __post_init__(self):
        num, k = self.numerator, self.shift
        if k < 0:
            num, k = num * (2 ** (-k)), 0
        if num.is_zero():
            k = 0
        else:
            while k > 0 and all(c % 2 == 0 for c in num.coeffs):
                num = IntPoly(tuple(c // 2 for c in num.coeffs))
                k -= 1
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "shift", k)

    @classmethod
    def const(cls, c: int, shift: int = 0) -> "DyadicPoly":
        return cls(IntPoly.const(c), shift)

    @classmethod
    def half(cls) -> "DyadicPoly":
        return cls(IntPoly.const(1), 1)

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def _aligned(self, other: "DyadicPoly") -> tuple[IntPoly, IntPoly, int]:
        k = max(self.shift, other.shift)
        return (self.numerator * (2 ** (k - self.shift)),
                other.numerator * (2 ** (k - other.shift)), k)

    def __add__(self, other):
        other = _coerce_dyadic(other)
        a, b, k = self._aligned(other)
        return DyadicPoly(a + b, k)

    __radd__ = __add__

    def __neg__(self):
        return DyadicPoly(-self.numerator, self.shift)

    def __sub__(self, other):
        return self + (-_coerce_dyadic(other))

    def __rsub__(self, other):
        return _coerce_dyadic(other) - self

    def __mul__(self, other):
        other = _coerce_dyadic(other)
        return DyadicPoly(self.numerator * other.numerator, self.shift + other.shift)

    __rmul__ = __mul__

    def times_lambda(self, sign: int = 1) -> "DyadicPoly":
        return DyadicPoly(self.numerator.shift(1) * sign, self.shift)

    def cleared(self, k: int) -> IntPoly:
        """``2**k * self`` as an IntPoly; ``k`` must be at least ``shift``."""
        if k < self.shift:
            raise ValueError(f"2^{k} does not clear denominator 2^{self.shift}")
        return self.numerator * (2 ** (k - self.shift))

    def coefficients(self) -> list[Fraction]:
        d = 2 ** self.shift
        return [Fraction(c, d) for c in self.numerator.coeffs]

    def __call__(self, x):
        return Fraction(self.numerator(x)) / (2 ** self.shift)

    def __str__(self) -> str:
        if self.shift == 0:
            return str(self.numerator)
        return f"({self.numerator})/{2 ** self.shift}"


def _coerce_dyadic(x) -> DyadicPoly:
    if isinstance(x, DyadicPoly):
        return x
    if isinstance(x, IntPoly):
        return DyadicPoly(x)
    if isinstance(x, int) and not isinstance(x, bool):
        return DyadicPoly(IntPoly.const(x))
    raise TypeError(f"cannot use {type(x).__name__} as a dyadic polynomial")


# ---------------------------------------------------------------------------
# Sturm sequences and root isolation
# ---------------------------------------------------------------------------


def sturm_sequence(p: IntPoly) -> list[IntPoly]:
    """Canonical Sturm chain of ``p``, each term scaled by a positive constant."""
    seq = [p, p.derivative()]
    while not seq[-1].is_zero() and seq[-1].degree > 0:
        _, r = poly_divmod(seq[-2], seq[-1])
        if not r:
            break
        seq.append(-_to_intpoly_keep_sign(r))
    return [s for s in seq if not s.is_zero()]


def _to_intpoly_keep_sign(a: Sequence[Fraction]) -> IntPoly:
    prim = _to_intpoly(a)
    a = _trim(list(a))
    return prim if (a[-1] > 0) == (prim.lc > 0) else -prim


def _variations(seq: Sequence[IntPoly], x: Fraction) -> int:
    signs = []
    for s in seq:
        v = s.sign_at_rational(x)
        if v:
            signs.append(v)
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def count_roots(p: IntPoly, lo: Rational, hi: Rational, seq: Sequence[IntPoly] | None = None) -> int:
    """Number of distinct real roots of ``p`` in the half-open interval (lo, hi]."""
    if p.is_zero():
        raise ValueError("the zero polynomial has infinitely many roots")
    seq = seq if seq is not None else sturm_sequence(p)
    return _variations(seq, Fraction(lo)) - _variations(seq, Fraction(hi))


def cauchy_bound(p: IntPoly) -> Fraction:
    lc = abs(p.lc)
    return 1 + max((Fraction(abs(c), lc) for c in p.coeffs[:-1]), default=Fraction(0))


@dataclass(frozen=True)
class AlgebraicNumber:
    """A real algebraic number: the unique root of ``poly`` in ``[lo, hi]``.

    ``poly`` is square-free, primitive, with positive leading coefficient.
    A rational number is represented with a linear ``poly`` and ``lo == hi``.
    """

    poly: IntPoly
    lo: Fraction
    hi: Fraction
    _tight: list = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.poly.degree < 1:
            raise ValueError("defining polynomial must have degree >= 1")
        if self.poly.lc < 0:
            object.__setattr__(self, "poly", -self.poly)
        if self.lo > self.hi:
            raise ValueError("empty isolating interval")
        if self.lo == self.hi:
            if self.poly.sign_at_rational(self.lo) != 0:
                raise ValueError(f"{format_rational(self.lo)} is not a root of {self.poly}")
        else:
            n = count_roots(self.poly, self.lo, self.hi) + (self.poly.sign_at_rational(self.lo) == 0)
            if n != 1:
                raise ValueError(f"[{self.lo}, {self.hi}] holds {n} roots of {self.poly}, not one")
        if self._tight is None:
            object.__setattr__(self, "_tight", [self.lo, self.hi])

    @classmethod
    def from_rational(cls, r: Rational) -> "AlgebraicNumber":
        r = as_fraction(r)
        return cls(IntPoly((-r.numerator, r.denominator)), r, r)

    @property
    def is_rational(self) -> bool:
        return self.poly.degree == 1 or self.lo == self.hi

    def exact_rational(self) -> Fraction | None:
        if self.poly.degree == 1:
            return Fraction(-self.poly.coeffs[0], self.poly.coeffs[1])
        if self.lo == self.hi:
            return self.lo
        return None

    def tight_interval(self) -> tuple[Fraction, Fraction]:
        """Best isolating interval computed so far (memoised refinements)."""
        r = self.exact_rational()
        if r is not None:
            return r, r
        return self._tight[0], self._tight[1]

    def _bisect_to(self, eps: Fraction) -> tuple[Fraction, Fraction]:
        r = self.exact_rational()
        if r is not None:
            return r, r
        lo, hi = self.tight_interval()
        p = self.poly
        s_hi = p.sign_at_rational(hi)
        if s_hi == 0:
            return hi, hi
        s_lo = p.sign_at_rational(lo)
        if s_lo == 0:
            return lo, lo
        while hi - lo > eps:
            mid = (lo + hi) / 2
            s = p.sign_at_rational(mid)
            if s == 0:
                lo = hi = mid
                break
            if s == s_lo:
                lo = mid
            else:
                hi = mid
        if hi - lo < self._tight[1] - self._tight[0]:
            self._tight[0], self._tight[1] = lo, hi
        return lo, hi

    def refine(self, eps: Rational) -> "AlgebraicNumber":
        """Bisect until ``hi - lo <= eps``; the result is nested in this interval."""
        eps = Fraction(eps)
        if eps <= 0:
            raise ValueError("eps must be positive")
        lo, hi = self._bisect_to(eps)
        if lo == hi:
            return AlgebraicNumber(self.poly, lo, hi)
        lo = max(lo, self.lo)
        hi = min(hi, self.hi)
        return AlgebraicNumber(self.poly, lo, hi)

    def halve(self) -> "AlgebraicNumber":
        """One bisection step: the width is at least halved."""
        lo, hi = self.tight_interval()
        return self.refine((hi - lo) / 2) if hi > lo else self

    def sign_of(self, p: "IntPoly | DyadicPoly") -> int:
        return sign_at(p, self)

    def __float__(self) -> float:
        lo, hi = self._bisect_to(Fraction(1, 2 ** 60))
        return float((lo + hi) / 2)

    def midpoint(self) -> Fraction:
        lo, hi = self.tight_interval()
        return (lo + hi) / 2

    def __str__(self) -> str:
        r = self.exact_rational()
        if r is not None:
            return format_rational(r)
        return f"root of {self.poly} in [{format_rational(self.lo)}, {format_rational(self.hi)}] (~{float(self):.6g})"


def refine(a: AlgebraicNumber, eps: Rational) -> AlgebraicNumber:
    return a.refine(eps)


def isolate_real_roots(p: IntPoly, window: tuple[Rational, Rational] | None = None) -> list[AlgebraicNumber]:
    """Certified isolating intervals for the real roots of ``p`` in the open ``window``.

    Roots are those of the square-free part, sorted by value.  ``window=None``
    means the whole real line.
    """
    if p.is_zero():
        raise ValueError("cannot isolate the roots of the zero polynomial")
    q = squarefree_part(p)
    if q.degree < 1:
        return []
    if window is None:
        bound = cauchy_bound(q)
        wlo, whi = -bound, bound
        include_hi = True
    else:
        wlo, whi = Fraction(window[0]), Fraction(window[1])
        if wlo >= whi:
            return []
        include_hi = False
    seq = sturm_sequence(q)
    out: list[AlgebraicNumber] = []
    stack = [(wlo, whi)]
    while stack:
        a, b = stack.pop()
        n = count_roots(q, a, b, seq)
        if n == 0:
            continue
        if n == 1:
            if q.sign_at_rational(b) == 0:
                if b != whi or include_hi:
                    out.append(AlgebraicNumber(q, b, b))
                continue
            if q.sign_at_rational(a) != 0:
                out.append(AlgebraicNumber(q, a, b))
                continue
        mid = (a + b) / 2
        stack.append((a, mid))
        stack.append((mid, b))
    out.sort(key=lambda r: r.hi)
    return out


def real_roots_with_multiplicity(p: IntPoly, window: tuple[Rational, Rational] | None = None) -> list[tuple[AlgebraicNumber, int]]:
    """Isolated roots in ``window`` together with their multiplicity in ``p``."""
    out = []
    for factor, mult in squarefree_decomposition(p):
        out.extend((r, mult) for r in isolate_real_roots(factor, window))
    out.sort(key=functools.cmp_to_key(lambda s, t: compare_distinct(s[0], t[0])))
    return out


def compare_distinct(a: AlgebraicNumber, b: AlgebraicNumber) -> int:
    """Order two algebraic numbers known to be different by refining until they separate."""
    eps = Fraction(1, 2 ** 8)
    while True:
        alo, ahi = a._bisect_to(eps)
        blo, bhi = b._bisect_to(eps)
        if ahi < blo:
            return -1
        if bhi < alo:
            return 1
        if alo == ahi == blo == bhi:
            return 0
        eps /= 2 ** 8


def sign_at(p: "IntPoly | DyadicPoly", a: AlgebraicNumber) -> int:
    """Exact sign of ``p(a)``.

    Zero is decided algebraically: the value vanishes iff ``gcd(p, a.poly)``
    has a root in the isolating interval.  Nonzero signs come from interval
    evaluation on a refined interval.
    """
    if isinstance(p, DyadicPoly):
        p = p.numerator
    if p.is_zero():
        return 0
    r = a.exact_rational()
    if r is not None:
        return p.sign_at_rational(r)
    if p.degree >= a.poly.degree:
        p, _ = pseudo_rem(p, a.poly)
        if p.is_zero():
            return 0
    if p.degree == 0:
        return 1 if p.lc > 0 else -1
    lo, hi = a.tight_interval()
    vlo, vhi = p.eval_interval(lo, hi)
    if vlo > 0:
        return 1
    if vhi < 0:
        return -1
    g = poly_gcd(p, a.poly)
    if g.degree >= 1:
        if count_roots(g, lo, hi) + (g.sign_at_rational(lo) == 0) > 0:
            return 0
    width = hi - lo
    while True:
        width /= 16
        lo, hi = a._bisect_to(width)
        if lo == hi:
            return p.sign_at_rational(lo)
        vlo, vhi = p.eval_interval(lo, hi)
        if vlo > 0:
            return 1
        if vhi < 0:
            return -1


# ---------------------------------------------------------------------------
# Rational functions and exact values in Q(alpha)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RatFunc:
    """Reduced quotient of integer polynomials, denominator with positive lc."""

    num: IntPoly
    den: IntPoly = IntPoly((1,))

    def __post_init__(self):
        num, den = self.num, self.den
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            num, den = IntPoly(), IntPoly.const(1)
        else:
            g = poly_gcd(num, den)
            if g.degree >= 1:
                num = divide_exact(num * g.lc ** (num.degree + 1), g)
                den = divide_exact(den * g.lc ** (den.degree + 1), g)
            c = math.gcd(num.content(), den.content())
            if den.lc < 0:
                c = -c
            num = IntPoly(tuple(x // c for x in num.coeffs))
            den = IntPoly(tuple(x // c for x in den.coeffs))
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __add__(self, other):
        other = _coerce_ratfunc(other)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_coerce_ratfunc(other))

    def __rsub__(self, other):
        return _coerce_ratfunc(other) - self

    def __mul__(self, other):
        other = _coerce_ratfunc(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce_ratfunc(other)
        return RatFunc(self.num * other.den, self.den * other.num)

    def __call__(self, x):
        if isinstance(x, AlgebraicNumber):
            return AlgValue(self.num, self.den, x)
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError("pole of the rational function")
        return Fraction(self.num(x)) / d

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __str__(self) -> str:
        if self.den == IntPoly.const(1):
            return str(self.num)
        return f"({self.num})/({self.den})"


def _coerce_ratfunc(x) -> RatFunc:
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, IntPoly):
        return RatFunc(x)
    if isinstance(x, int) and not isinstance(x, bool):
        return RatFunc(IntPoly.const(x))
    if isinstance(x, Fraction):
        return RatFunc(IntPoly.const(x.numerator), IntPoly.const(x.denominator))
    raise TypeError(f"cannot use {type(x).__name__} as a rational function")


class AlgValue:
    """An exact element ``num(alpha) / den(alpha)`` of Q(alpha).

    Both polynomials are kept reduced modulo the defining polynomial of
    ``alpha``; comparisons are exact via :func:`sign_at`.  Values tied to
    different algebraic numbers cannot be mixed.
    """

    __slots__ = ("num", "den", "alpha")
    __hash__ = None

    def __init__(self, num: IntPoly, den: IntPoly, alpha: AlgebraicNumber, _reduced: bool = False):
        if not _reduced:
            num, den = _reduce_pair(num, den, alpha)
        self.num = num
        self.den = den
        self.alpha = alpha

    @classmethod
    def const(cls, x: Rational, alpha: AlgebraicNumber) -> "AlgValue":
        x = Fraction(x)
        return cls(IntPoly.const(x.numerator), IntPoly.const(x.denominator), alpha, _reduced=True)

    @classmethod
    def lam(cls, alpha: AlgebraicNumber) -> "AlgValue":
        return cls(IntPoly.lam(), IntPoly.const(1), alpha)

    @classmethod
    def of(cls, x, alpha: AlgebraicNumber) -> "AlgValue":
        if isinstance(x, AlgValue):
            x._check(alpha)
            return x
        if isinstance(x, RatFunc):
            return cls(x.num, x.den, alpha)
        if isinstance(x, IntPoly):
            return cls(x, IntPoly.const(1), alpha)
        if isinstance(x, DyadicPoly):
            return cls(x.numerator, IntPoly.const(2 ** x.shift), alpha)
        return cls.const(as_fraction(x), alpha)

    def _check(self, alpha: AlgebraicNumber):
        if alpha is not self.alpha and alpha.poly != self.alpha.poly:
            raise ValueError("values over different algebraic numbers cannot be mixed")

    def _lift(self, other) -> "AlgValue":
        if isinstance(other, AlgValue):
            other._check(self.alpha)
            return other
        return AlgValue.of(other, self.alpha)

    def __add__(self, other):
        o = self._lift(other)
        if self.den == o.den:
            return AlgValue(self.num + o.num, self.den, self.alpha)
        return AlgValue(self.num * o.den + o.num * self.den, self.den * o.den, self.alpha)

    __radd__ = __add__

    def __neg__(self):
        return AlgValue(-self.num, self.den, self.alpha, _reduced=True)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return AlgValue(self.num * o.num, self.den * o.den, self.alpha)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o.sign() == 0:
            raise ZeroDivisionError("division by an exact zero")
        return AlgValue(self.num * o.den, self.den * o.num, self.alpha)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def sign(self) -> int:
        return sign_at(self.num, self.alpha) * sign_at(self.den, self.alpha)

    def _cmp(self, other) -> int:
        return (self - self._lift(other)).sign()

    def __eq__(self, other):
        try:
            return self._cmp(other) == 0
        except TypeError:
            return NotImplemented

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def exact_rational(self) -> Fraction | None:
        r = self.alpha.exact_rational()
        if r is not None:
            return Fraction(self.num(r)) / self.den(r)
        if self.num.degree <= 0 and self.den.degree == 0:
            return Fraction(self.num[0], self.den[0])
        return None

    def enclosure(self, eps: Rational = Fraction(1, 10 ** 12)) -> tuple[Fraction, Fraction]:
        """Rational interval of width <= eps containing the exact value."""
        r = self.exact_rational()
        if r is not None:
            return r, r
        eps = Fraction(eps)
        width = Fraction(1, 2 ** 20)
        while True:
            lo, hi = self.alpha._bisect_to(width)
            if lo == hi:
                v = Fraction(self.num(lo)) / self.den(lo)
                return v, v
            nlo, nhi = self.num.eval_interval(lo, hi)
            dlo, dhi = self.den.eval_interval(lo, hi)
            if dlo > 0 or dhi < 0:
                cands = (nlo / dlo, nlo / dhi, nhi / dlo, nhi / dhi)
                vlo, vhi = min(cands), max(cands)
                if vhi - vlo <= eps:
                    return vlo, vhi
            width /= 2 ** 8

    def __float__(self) -> float:
        lo, hi = self.enclosure(Fraction(1, 2 ** 64))
        return float((lo + hi) / 2)

    def as_ratfunc(self) -> RatFunc:
        return RatFunc(self.num, self.den)

    def __repr__(self) -> str:
        return f"AlgValue({float(self):.12g})"

    def __str__(self) -> str:
        r = self.exact_rational()
        if r is not None:
            return format_rational(r)
        return f"{float(self):.6g}"


def _reduce_pair(num: IntPoly, den: IntPoly, alpha: AlgebraicNumber) -> tuple[IntPoly, IntPoly]:
    r = alpha.exact_rational()
    if r is not None:
        v = Fraction(num(r)) / Fraction(den(r)) if den(r) != 0 else None
        if v is None:
            raise ZeroDivisionError("denominator vanishes at the algebraic point")
        return IntPoly.const(v.numerator), IntPoly.const(v.denominator)
    m = alpha.poly
    if num.degree >= m.degree:
        num, s1 = pseudo_rem(num, m)
    else:
        s1 = 1
    if den.degree >= m.degree:
        den, s2 = pseudo_rem(den, m)
    else:
        s2 = 1
    # value = (num/s1) / (den/s2)
    if s1 != 1 or s2 != 1:
        num, den = num * s2, den * s1
    if den.is_zero():
        raise ZeroDivisionError("denominator vanishes at the algebraic point")
    c = math.gcd(num.content(), den.content())
    if c > 1:
        num = IntPoly(tuple(x // c for x in num.coeffs))
        den = IntPoly(tuple(x // c for x in den.coeffs))
    return num, den


def to_value(x, alpha: AlgebraicNumber) -> AlgValue:
    return AlgValue.of(x, alpha)


def as_algebraic(lam) -> AlgebraicNumber:
    """Accept an AlgebraicNumber or anything convertible to an exact rational."""
    if isinstance(lam, AlgebraicNumber):
        return lam
    return AlgebraicNumber.from_rational(as_fraction(lam))


# ---------------------------------------------------------------------------
# JSON forms
# ---------------------------------------------------------------------------


def poly_to_json(p: IntPoly) -> list[str]:
    return [str(c) for c in p.coeffs]


def poly_from_json(data: Iterable) -> IntPoly:
    return IntPoly(tuple(int(str(c)) for c in data))


def algebraic_to_json(a: AlgebraicNumber) -> dict:
    return {"poly": poly_to_json(a.poly), "lo": format_rational(a.lo), "hi": format_rational(a.hi)}


def algebraic_from_json(data) -> AlgebraicNumber:
    if isinstance(data, dict):
        return AlgebraicNumber(poly_from_json(data["poly"]), as_fraction(data["lo"]), as_fraction(data["hi"]))
    return AlgebraicNumber.from_rational(as_fraction(str(data)))
