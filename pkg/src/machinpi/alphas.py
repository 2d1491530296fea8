"""Binary bootstrap of the coefficient sequence.

The integer alpha_k is the first k significant binary digits of 1/pi read as
an integer, equivalently alpha_k = 2*alpha_(k-1) + s_k where s_k is bit k of
the sequence (s) and alpha_0 = 0. Bit extraction from an approximation of pi
is certification-first: a bit is emitted only when it is provably identical
across the whole error interval, because one wrong trailing bit corrupts
every later coefficient (the classic failure is 41722 instead of 41721 at
k = 16 when naively doubling from an 8-bit prefix).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

import gmpy2

from .core import (
    DomainError,
    FixedReal,
    PrecisionContext,
    PrecisionError,
    to_binary_fraction,
)
from .intervals import Interval, IntervalContext, stable_scaled_floor


class BitOrigin(enum.Enum):
    FROM_PI_APPROX = "from_pi_approx"
    FROM_REFERENCE_PI = "from_reference_pi"


@dataclass(frozen=True)
class BitSeq:
    """Bits s_1..s_n; s_k is fractional binary digit k+1 of 1/pi.

    Position 1 of the raw fraction is always 0 (1/pi < 1/2) and is dropped,
    so the indexing here starts at the first significant digit.
    """

    bits: tuple[int, ...]
    origin: BitOrigin

    def __post_init__(self) -> None:
        if not self.bits:
            raise DomainError("empty bit sequence")
        if any(b not in (0, 1) for b in self.bits):
            raise DomainError("bit sequence entries must be 0 or 1")

    def __len__(self) -> int:
        return len(self.bits)

    def __getitem__(self, k: int) -> int:
        """1-based access: seq[k] = s_k."""
        if not 1 <= k <= len(self.bits):
            raise IndexError(f"s_{k} not held (have 1..{len(self.bits)})")
        return self.bits[k - 1]


@dataclass(frozen=True)
class AlphaSeq:
    """alpha_0..alpha_K with alpha_0 = 0; alpha_k doubles (+ carry bit) per step."""

    values: tuple[int, ...]

    def __post_init__(self) -> None:
        v = self.values
        if not v or v[0] != 0:
            raise DomainError("sequence must start at alpha_0 = 0")
        for k in range(1, len(v)):
            if v[k] not in (2 * v[k - 1], 2 * v[k - 1] + 1):
                raise DomainError(f"alpha_{k} breaks the doubling rule")
            if v[k] >= 1 << k:
                raise DomainError(f"alpha_{k} out of range (must be < 2^{k})")

    def __len__(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, k: int) -> int:
        return self.values[k]

    @property
    def last(self) -> int:
        return self.values[-1]

    def bit(self, k: int) -> int:
        """s_k recovered from parity: alpha_k is odd iff s_k = 1."""
        return self.values[k] & 1


def alpha_from_bits(bits: BitSeq) -> AlphaSeq:
    """Doubling rule alpha_k = 2*alpha_(k-1) + s_k over the whole prefix."""
    values = [0]
    for b in bits.bits:
        values.append(2 * values[-1] + b)
    return AlphaSeq(tuple(values))


def bits_from_enclosure(enclosure: Interval, k0: int,
                        ic: IntervalContext,
                        origin: BitOrigin = BitOrigin.FROM_PI_APPROX) -> BitSeq:
    """Certified s_1..s_k0 from a rigorous enclosure of pi.

    Inverts the enclosure with outward rounding and demands that the first
    k0+1 fractional binary digits of the reciprocal agree on both endpoints;
    otherwise no bit is emitted (PrecisionError).
    """
    if k0 < 1:
        raise DomainError("bit count must be >= 1")
    if not enclosure.strictly_positive():
        raise PrecisionError("pi enclosure is not even provably positive")
    recip = ic.reciprocal(enclosure)
    scaled = stable_scaled_floor(recip, k0 + 1)
    if not (1 << (k0 - 1)) <= scaled < (1 << k0):
        raise PrecisionError(
            "reciprocal enclosure out of the (1/4, 1/2) band; approximation unusable")
    return BitSeq(tuple((scaled >> (k0 - 1 - i)) & 1 for i in range(k0)), origin)


def bits_from_pi_approx(pi_approx: FixedReal, k0: int, ctx: PrecisionContext,
                        err_bound: Fraction | int | FixedReal = 0,
                        origin: BitOrigin = BitOrigin.FROM_PI_APPROX) -> BitSeq:
    """Certified extraction from a point approximation with a known error bound.

    err_bound must bound |pi_approx - pi|; the extraction succeeds only when
    every value in [pi_approx - err_bound, pi_approx + err_bound] shares the
    first k0+1 reciprocal digits. With the default bound 0 the value is
    treated as exact (reference-grade input).
    """
    ic = IntervalContext(ctx)
    if isinstance(err_bound, Fraction) or isinstance(err_bound, int):
        b_iv = ic.from_fraction(Fraction(err_bound))
        bound = b_iv.hi
    else:
        bound = err_bound
    if bound < 0:
        raise DomainError("error bound must be >= 0")
    lo = ic.rd.sub(pi_approx, bound)
    hi = ic.ru.add(pi_approx, bound)
    return bits_from_enclosure(Interval(lo, hi), k0, ic, origin)


def bits_from_pi_approx_unchecked(pi_approx: FixedReal, k0: int) -> BitSeq:
    """Blind truncation of 1/pi_approx; no certification whatsoever.

    Exists for demonstrating the failure mode the certified path prevents.
    Do not feed the result into anything that extends a trusted prefix.
    """
    with gmpy2.context(precision=pi_approx.precision + 8):
        recip = 1 / pi_approx
    raw = to_binary_fraction(recip, k0 + 1)
    if raw[0] != 0:
        raise DomainError("reciprocal not below 1/2; not a pi approximation")
    return BitSeq(raw[1:], BitOrigin.FROM_PI_APPROX)


def binary_recip_pi_from_parity(alphas: AlphaSeq, K: int) -> str:
    """Binary string of 1/pi assembled from coefficient parities.

    Digit at fractional position n+1 is alpha_n mod 2; position 1 is the
    fixed leading 0. Rendered as '0.' followed by K+1 binary digits.
    """
    if len(alphas) < K:
        raise DomainError(f"need alpha_1..alpha_{K}, have {len(alphas)}")
    return "0.0" + "".join(str(alphas.bit(k)) for k in range(1, K + 1))


def parse_binary_fraction(s: str) -> Fraction:
    """Exact value of a '0.xxx' binary-digit string (test/verification aid)."""
    if not s.startswith("0."):
        raise DomainError("expected a '0.'-prefixed binary fraction")
    digits = s[2:]
    if digits.strip("01"):
        raise DomainError("non-binary digit in fraction")
    return Fraction(int(digits, 2), 1 << len(digits))
