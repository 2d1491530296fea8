"""Outward-rounded interval arithmetic for certified results.

Every endpoint operation goes through an explicit MPFR context with
RoundDown (lower) or RoundUp (upper), so a computed Interval always encloses
the exact result. Used wherever a floor, an extracted binary digit, or a
printed decimal digit must be provably stable: the alpha oracle, the
bit-bootstrap extractor, and the engine's digit certification.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import gmpy2
from gmpy2 import mpfr

from .core import DomainError, FixedReal, PrecisionContext, PrecisionError, exact_mpfr


@dataclass(frozen=True)
class Interval:
    lo: FixedReal
    hi: FixedReal

    def __post_init__(self) -> None:
        if not self.lo <= self.hi:          # also rejects NaN endpoints
            raise ValueError(f"malformed interval [{self.lo}, {self.hi}]")

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def strictly_positive(self) -> bool:
        return self.lo > 0

    def mid(self, ctx: PrecisionContext) -> FixedReal:
        with ctx.activate():
            return gmpy2.div_2exp(self.lo + self.hi, 1)

    def width(self) -> FixedReal:
        with gmpy2.context(precision=64, round=gmpy2.RoundUp):
            return self.hi - self.lo


class IntervalContext:
    """Directed-rounding workspace at a PrecisionContext's full precision."""

    def __init__(self, ctx: PrecisionContext):
        self.ctx = ctx
        self.rd = ctx.rounding_down()
        self.ru = ctx.rounding_up()

    # -- constructors -------------------------------------------------------

    def point(self, x: FixedReal) -> Interval:
        return Interval(x, x)

    def from_int(self, n: int) -> Interval:
        v = exact_mpfr(n)
        return Interval(v, v)

    def from_fraction(self, q: Fraction) -> Interval:
        if q.denominator == 1:
            return self.from_int(q.numerator)
        n, d = exact_mpfr(q.numerator), exact_mpfr(q.denominator)
        return Interval(self.rd.div(n, d), self.ru.div(n, d))

    def from_int_reciprocal(self, n: int) -> Interval:
        if n == 0:
            raise DomainError("reciprocal of zero")
        one, d = mpfr(1), exact_mpfr(n)
        lo, hi = self.rd.div(one, d), self.ru.div(one, d)
        return Interval(min(lo, hi), max(lo, hi))

    # -- ring operations ----------------------------------------------------

    def add(self, a: Interval, b: Interval) -> Interval:
        return Interval(self.rd.add(a.lo, b.lo), self.ru.add(a.hi, b.hi))

    def sub(self, a: Interval, b: Interval) -> Interval:
        return Interval(self.rd.sub(a.lo, b.hi), self.ru.sub(a.hi, b.lo))

    def neg(self, a: Interval) -> Interval:
        # negation of an endpoint is exact at any precision
        return Interval(self.rd.minus(a.hi), self.ru.minus(a.lo))

    def mul(self, a: Interval, b: Interval) -> Interval:
        pairs = [(a.lo, b.lo), (a.lo, b.hi), (a.hi, b.lo), (a.hi, b.hi)]
        return Interval(min(self.rd.mul(p, q) for p, q in pairs),
                        max(self.ru.mul(p, q) for p, q in pairs))

    def square(self, a: Interval) -> Interval:
        if a.lo >= 0:
            return Interval(self.rd.mul(a.lo, a.lo), self.ru.mul(a.hi, a.hi))
        if a.hi <= 0:
            return Interval(self.rd.mul(a.hi, a.hi), self.ru.mul(a.lo, a.lo))
        m = max(self.ru.mul(a.lo, a.lo), self.ru.mul(a.hi, a.hi))
        return Interval(mpfr(0), m)

    def div(self, a: Interval, b: Interval) -> Interval:
        if b.contains_zero():
            raise PrecisionError(
                "interval denominator contains zero; raise the working precision")
        pairs = [(a.lo, b.lo), (a.lo, b.hi), (a.hi, b.lo), (a.hi, b.hi)]
        return Interval(min(self.rd.div(p, q) for p, q in pairs),
                        max(self.ru.div(p, q) for p, q in pairs))

    def reciprocal(self, a: Interval) -> Interval:
        return self.div(self.from_int(1), a)

    def scale2(self, a: Interval, s: int) -> Interval:
        if s >= 0:
            return Interval(self.rd.mul_2exp(a.lo, s), self.ru.mul_2exp(a.hi, s))
        return Interval(self.rd.div_2exp(a.lo, -s), self.ru.div_2exp(a.hi, -s))

    def sqrt(self, a: Interval) -> Interval:
        if a.lo < 0:
            raise DomainError(f"interval sqrt of [{a.lo}, {a.hi}]")
        return Interval(self.rd.sqrt(a.lo), self.ru.sqrt(a.hi))

    # -- certified arctangent for small arguments ---------------------------

    def atan_small(self, a: Interval) -> Interval:
        """Rigorous enclosure of arctan over an interval with |x| < 1/2.

        Alternating Taylor series evaluated per endpoint in interval
        arithmetic; the unevaluated tail is bounded by the next term and
        added as an explicit widening. arctan is increasing, so endpoint
        enclosures combine directly.
        """
        if self._mag_upper(a) >= 0.5:
            raise DomainError("atan_small requires |x| < 1/2")
        lo_enc = self._atan_point(a.lo)
        hi_enc = self._atan_point(a.hi)
        return Interval(min(lo_enc.lo, hi_enc.lo), max(lo_enc.hi, hi_enc.hi))

    def _mag_upper(self, a: Interval) -> FixedReal:
        """Upper bound on |x| over the interval; endpoint negation is exact."""
        return max(self.ru.minus(a.lo), a.hi)

    def _atan_point(self, x: FixedReal) -> Interval:
        rd, ru = self.rd, self.ru
        if x == 0:
            z = mpfr(0)
            return Interval(z, z)
        tol = gmpy2.exp2(-(self.ctx.total + 4))
        x_iv = Interval(x, x)
        x2 = self.square(x_iv)
        term = x_iv
        acc = self.from_int(0)
        n = 0
        sign = 1
        while True:
            d = exact_mpfr(2 * n + 1)
            contrib = Interval(rd.div(term.lo, d), ru.div(term.hi, d))
            if sign < 0:
                contrib = self.neg(contrib)
            acc = self.add(acc, contrib)
            term = self.mul(term, x2)
            tail = ru.div(self._mag_upper(term), exact_mpfr(2 * n + 3))
            n += 1
            sign = -sign
            if tail < tol:
                return Interval(rd.sub(acc.lo, tail), ru.add(acc.hi, tail))


def stable_scaled_floor(iv: Interval, shift: int) -> int:
    """floor(x * 2^shift), certified identical across the whole interval.

    Exact integer arithmetic on the dyadic endpoints; raises PrecisionError
    if the interval straddles a grid line (the floor would be ambiguous).
    """
    def scaled(x: FixedReal) -> int:
        m, e = x.as_mantissa_exp()
        s = int(e) + shift
        return int(m) << s if s >= 0 else int(m) >> -s

    lo, hi = scaled(iv.lo), scaled(iv.hi)
    if lo != hi:
        raise PrecisionError(
            f"floor not stable across interval (scaled endpoints {lo} != {hi})")
    return lo


def stable_decimal_digits(iv: Interval, digits: int) -> str:
    """Decimal expansion truncated at `digits` fractional places, certified.

    Returns the digit string only when every value in the interval shares it.
    """
    def scaled(x: FixedReal) -> int:
        m, e = x.as_mantissa_exp()
        m, e = int(m), int(e)
        v = m * 10 ** digits
        return v << e if e >= 0 else v >> -e

    lo, hi = scaled(iv.lo), scaled(iv.hi)
    if lo != hi or lo < 0:
        raise PrecisionError(f"decimal expansion not stable at {digits} digits")
    s = str(lo)
    if len(s) <= digits:
        s = s.zfill(digits + 1)
    return s[:-digits] + "." + s[-digits:] if digits else s
