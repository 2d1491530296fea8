"""Exact and fixed-precision arithmetic foundations.

Big integers are Python ints (arbitrary size natively). Exact rationals are
``fractions.Fraction``, aliased ``BigRational``: always reduced, denominator
strictly positive, sign carried by the numerator. Fixed-precision reals are
``gmpy2.mpfr`` values (binary significand + exponent) produced under an
explicit :class:`PrecisionContext`.

gmpy2 caveat that shapes everything here: bare Python operators on mpfr
round to the *thread's current* context, including unary minus. All
arithmetic therefore happens inside an activated context block or through
explicit context method calls. Helpers in this module follow that rule and
so must every caller that touches mpfr values directly.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
from gmpy2 import mpfr

# digit-string output for big integers (beta_7 alone has 113-digit terms)
sys.set_int_max_str_digits(0)

BigRational = Fraction
FixedReal = type(mpfr(0))


class NumericError(Exception):
    """Base class for arithmetic contract violations."""


class DomainError(NumericError):
    """Input outside an operation's mathematical domain."""


class SingularInputError(DomainError):
    """Evaluation would hit a pole or a vanishing denominator."""


class DegenerateInputError(DomainError):
    """Structurally excluded input (e.g. the k = 1 beta constant)."""


class PrecisionError(NumericError):
    """Requested result cannot be certified at the working precision."""


class InvariantViolation(NumericError):
    """An exact internal identity failed; indicates an arithmetic bug."""


@dataclass(frozen=True)
class PrecisionContext:
    """Working binary precision plus guard bits for rounding slack.

    All fixed-real operations under a context round to ``bits + guard_bits``
    binary digits; results are then trustworthy to about ``bits``.
    """

    bits: int
    guard_bits: int = 64

    def __post_init__(self) -> None:
        if self.bits < 32:
            raise ValueError(f"context bits must be >= 32, got {self.bits}")
        if self.guard_bits < 0:
            raise ValueError("guard_bits must be >= 0")

    @property
    def total(self) -> int:
        return self.bits + self.guard_bits

    def activate(self):
        """Fresh gmpy2 context manager at full working precision."""
        return gmpy2.context(precision=self.total)

    def rounding_down(self):
        return gmpy2.context(precision=self.total, round=gmpy2.RoundDown)

    def rounding_up(self):
        return gmpy2.context(precision=self.total, round=gmpy2.RoundUp)


def exact_mpfr(value: int | Fraction, ctx: PrecisionContext | None = None) -> FixedReal:
    """Convert an int or Fraction to mpfr without silent truncation.

    Integers convert exactly regardless of size; Fractions round once at the
    context's working precision (or the value's own size if no context).
    """
    if isinstance(value, (int,)) or isinstance(value, type(gmpy2.mpz(0))):
        n = int(value)
        return mpfr(n, precision=max(2, n.bit_length() + 1))
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return exact_mpfr(value.numerator)
        prec = ctx.total if ctx is not None else max(
            64, value.numerator.bit_length() + value.denominator.bit_length())
        with gmpy2.context(precision=prec):
            return exact_mpfr(value.numerator) / exact_mpfr(value.denominator)
    raise TypeError(f"cannot convert {type(value).__name__} exactly")


def floor_rational(q: Fraction) -> int:
    """Greatest integer <= q; floors toward -infinity also for negatives."""
    return q.numerator // q.denominator


def sqrt_fixed(x: FixedReal, ctx: PrecisionContext) -> FixedReal:
    """Square root by a self-correcting Newton ladder.

    Starts from a float-quality seed and doubles the working precision each
    rung; the iteration y <- (y + x/y)/2 squares the error per step, so one
    pass per rung suffices. Result squared matches x to within 4 ulps.
    """
    if gmpy2.is_nan(x) or x < 0:
        raise DomainError(f"sqrt of negative value {x}")
    if x == 0:
        with ctx.activate():
            return mpfr(0)

    # normalize x = f * 2^shift, f in [1/4, 1), shift even, so the exponent
    # halves exactly and the seed never leaves double range
    m, e = x.as_mantissa_exp()
    m, e = int(m), int(e)
    mb = m.bit_length()
    shift = e + mb
    if shift % 2:
        shift += 1
    fm = mpfr(m, precision=max(2, mb))
    with gmpy2.context(precision=max(ctx.total + 2, mb + 2)):
        f = gmpy2.div_2exp(fm, shift - e)        # exact, pure exponent shift
    with gmpy2.context(precision=64):
        y = gmpy2.sqrt(f)                        # seed estimate

    prec = 64
    rungs = []
    while prec < ctx.total + 2:
        prec = min(2 * prec, ctx.total + 2)
        rungs.append(prec)
    for p in rungs:
        with gmpy2.context(precision=p):
            y = gmpy2.div_2exp(y + f / y, 1)
    with ctx.activate():
        return gmpy2.mul_2exp(y, shift // 2) if shift >= 0 else gmpy2.div_2exp(y, -shift // 2)


def to_binary_fraction(x: FixedReal, m: int) -> tuple[int, ...]:
    """First m fractional binary digits of x in (0,1), truncated (no rounding).

    Truncation keeps the output a prefix of any longer extraction, which the
    bit-bootstrap relies on. Requires the value to actually carry the digits:
    its precision must be at least m plus slack.
    """
    if not (0 < x < 1):
        raise DomainError(f"binary fraction extraction needs 0 < x < 1, got {x}")
    if m < 1:
        raise DomainError("digit count must be positive")
    if x.precision < m + 2:
        raise PrecisionError(
            f"value carries {x.precision} bits, cannot certify {m} fractional digits")
    mant, e = x.as_mantissa_exp()
    mant, e = int(mant), int(e)
    # floor(x * 2^m) as exact integer arithmetic on the dyadic value
    sh = e + m
    scaled = mant << sh if sh >= 0 else mant >> -sh
    return tuple((scaled >> (m - 1 - i)) & 1 for i in range(m))


@dataclass(frozen=True)
class GaussianRational:
    """Exact complex number with rational real and imaginary parts."""

    re: Fraction
    im: Fraction

    @staticmethod
    def of(re, im=0) -> "GaussianRational":
        return GaussianRational(Fraction(re), Fraction(im))

    def __add__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __mul__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __truediv__(self, other: "GaussianRational") -> "GaussianRational":
        d = other.re * other.re + other.im * other.im
        if d == 0:
            raise SingularInputError("division by complex zero")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / d,
            (self.im * other.re - self.re * other.im) / d,
        )

    def squared(self) -> "GaussianRational":
        return GaussianRational(
            self.re * self.re - self.im * self.im,
            2 * self.re * self.im,
        )

    def pow_pow2(self, j: int) -> "GaussianRational":
        """self ** (2**j) by j exact squarings."""
        z = self
        for _ in range(j):
            z = z.squared()
        return z


I_UNIT = GaussianRational.of(0, 1)
