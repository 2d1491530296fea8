"""Nested-radical oracle for the coefficient sequence.

Computes a_k = sqrt(2 + a_(k-1)) (a_0 = 0) and the integers
alpha_k = floor(a_k / sqrt(2 - a_(k-1))) directly. The subtraction
2 - a_(k-1) is about (pi/2^k)^2, so roughly 2k bits cancel; callers must
supply bits >= 4k + 64 and the floor is certified by interval arithmetic
before being returned. This path is the independent check for the
bit-bootstrap; the digit engine never calls it.
"""

from __future__ import annotations

from dataclasses import dataclass

import gmpy2

from .core import DomainError, FixedReal, PrecisionContext, PrecisionError, sqrt_fixed
from .intervals import Interval, IntervalContext, stable_scaled_floor


@dataclass(frozen=True)
class NestedRadicalState:
    """Radical pair at depth k: a_k in [0, 2) rising, b_k = sqrt(2 - a_(k-1)) falling."""

    k: int
    a_k: FixedReal
    b_k: FixedReal


def _require_depth_precision(k: int, ctx: PrecisionContext) -> None:
    need = 4 * k + 64
    if ctx.bits < need:
        raise PrecisionError(
            f"depth {k} needs ctx.bits >= {need} (cancellation guard), got {ctx.bits}")


def nested_a(k: int, ctx: PrecisionContext) -> FixedReal:
    """a_k at context precision; a_0 = 0."""
    if k < 0:
        raise DomainError("radical depth must be >= 0")
    _require_depth_precision(k, ctx)
    with ctx.activate():
        a = gmpy2.mpfr(0)
    for _ in range(k):
        with ctx.activate():
            a = a + 2
        a = sqrt_fixed(a, ctx)
    return a


def nested_state(k: int, ctx: PrecisionContext) -> NestedRadicalState:
    """(a_k, b_k) pair; b_k needs the previous-level radical."""
    if k < 1:
        raise DomainError("radical state defined for k >= 1")
    _require_depth_precision(k, ctx)
    a_prev = nested_a(k - 1, ctx)
    with ctx.activate():
        ap2 = a_prev + 2
        bm = 2 - a_prev
    a_k = sqrt_fixed(ap2, ctx)
    b_k = sqrt_fixed(bm, ctx)
    return NestedRadicalState(k, a_k, b_k)


def _radical_intervals(k: int, ic: IntervalContext) -> tuple[Interval, Interval]:
    """Certified enclosures of (a_k, b_k)."""
    two = ic.from_int(2)
    a_prev = ic.from_int(0)
    for _ in range(k - 1):
        a_prev = ic.sqrt(ic.add(two, a_prev))
    a_k = ic.sqrt(ic.add(two, a_prev))
    b_k = ic.sqrt(ic.sub(two, a_prev))
    return a_k, b_k


def alpha_via_radicals(k: int, ctx: PrecisionContext) -> int:
    """Certified floor(a_k / b_k); raises PrecisionError if not provably stable."""
    if k < 1:
        raise DomainError("coefficient index must be >= 1")
    _require_depth_precision(k, ctx)
    ic = IntervalContext(ctx)
    a_k, b_k = _radical_intervals(k, ic)
    ratio = ic.div(a_k, b_k)
    return stable_scaled_floor(ratio, 0)


def srf_limit_check(k: int, ctx: PrecisionContext) -> FixedReal:
    """2^k * sqrt(2 - a_(k-1)); approaches pi from below, error ~ pi^3/(6*4^k)."""
    if k < 2:
        raise DomainError("limit check defined for k >= 2")
    _require_depth_precision(k, ctx)
    a_prev = nested_a(k - 1, ctx)
    with ctx.activate():
        gap = 2 - a_prev
    root = sqrt_fixed(gap, ctx)
    with ctx.activate():
        return gmpy2.mul_2exp(root, k)
