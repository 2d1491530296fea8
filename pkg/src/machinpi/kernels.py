"""High-precision tangent and arctangent kernels.

Two independent arctangent series (a factored Taylor form and a two-sequence
iterative form), the truncated-sine tangent kernel tan x = 2 p^2/q, the
tangent doubling recurrence eta_n = 2 eta_{n-1} / (1 - eta_{n-1}^2), and two
quadratically convergent root-finding drivers built on them.

Series stop when the running term drops below 2^-(bits+guard) relative to
the accumulated sum, so results are trustworthy to roughly `bits` binary
digits regardless of the result's magnitude.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import gmpy2
from gmpy2 import mpfr

from .core import (
    DomainError,
    FixedReal,
    PrecisionContext,
    SingularInputError,
    exact_mpfr,
)
from .intervals import Interval, IntervalContext


def arctan_euler(x: FixedReal, ctx: PrecisionContext) -> FixedReal:
    """arctan by the factored series sum of c_n * x^(2n+1) / (1+x^2)^(n+1).

    c_n = 4^n (n!)^2 / (2n+1)! obeys c_n/c_(n-1) = 2n/(2n+1), so each term
    comes from the previous by one multiply. All terms share the sign of x;
    there is no cancellation and the series converges for every real x.
    """
    if x == 0:
        with ctx.activate():
            return mpfr(0)
    with ctx.activate():
        negative = x < 0
        if negative:
            x = -x
        y = x * x / (1 + x * x)
        term = x / (1 + x * x)
        acc = term
        eps = gmpy2.exp2(-ctx.total)
        n = 1
        while term > eps * acc:
            term = term * y * mpfr(2 * n) / mpfr(2 * n + 1)
            acc += term
            n += 1
        return -acc if negative else acc


def arctan_gh(x: FixedReal, ctx: PrecisionContext) -> FixedReal:
    """arctan by the two-sequence iteration.

    g_1 = 2/x, h_1 = 1, then g_n = g(1 - 4/x^2) + 4h/x and
    h_n = h(1 - 4/x^2) - 4g/x; the sum is 2 sum 1/(2n-1) * g/(g^2 + h^2).
    Per-term magnitude shrinks by (1 + 4/x^2), which beats the factored
    series for the same argument. x = 0 is rejected rather than shortcut:
    g_1 is undefined there and a silent 0 would mask misuse.
    """
    if x == 0:
        raise DomainError("arctan_gh is undefined at x = 0 (g_1 = 2/x)")
    with ctx.activate():
        negative = x < 0
        if negative:
            x = -x
        w = 1 - 4 / (x * x)
        c = 4 / x
        g, h = 2 / x, mpfr(1)
        acc = mpfr(0)
        eps = gmpy2.exp2(-ctx.total)
        n = 1
        while True:
            u = 2 * g / ((2 * n - 1) * (g * g + h * h))
            acc += u
            if acc != 0 and abs(u) < eps * abs(acc):
                break
            g, h = g * w + c * h, h * w - c * g
            n += 1
        return -acc if negative else acc


@dataclass(frozen=True)
class PQState:
    """Partial sums of the truncated-sine tangent kernel after n terms."""

    n: int
    p: FixedReal
    q: FixedReal
    r: FixedReal


def tan_pq(x: FixedReal, n: int, ctx: PrecisionContext) -> FixedReal:
    """n-term truncation 2 p_n^2 / q_n of the tangent kernel.

    p accumulates the sine series of x, q the sine series of 2x (the shift
    2^(2m-1) applied to each shared term r_m = (-1)^(m-1) x^(2m-1)/(2m-1)!),
    giving tan x = 2 sin^2 x / sin 2x in the limit. x^2 is computed once and
    reused; the factorial grows incrementally as an exact integer.
    """
    if n < 1:
        raise DomainError("term count must be >= 1")
    return _final_tan(_tan_pq_states(x, n, ctx), ctx)


def _tan_pq_states(x: FixedReal, n: int, ctx: PrecisionContext) -> list[PQState]:
    states = []
    with ctx.activate():
        p, q = mpfr(0), mpfr(0)
        x0 = +x
        xsq = x * x
        fact = 1
        for m in range(1, n + 1):
            if m > 1:
                fact = fact * (2 * m - 2) * (2 * m - 1)
            r = x0 / exact_mpfr(fact)
            if m % 2 == 0:
                r = -r
            p = p + r
            q = q + gmpy2.mul_2exp(r, 2 * m - 1)
            x0 = x0 * xsq
            states.append(PQState(m, p, q, r))
    return states


def _final_tan(states: list[PQState], ctx: PrecisionContext) -> FixedReal:
    last = states[-1]
    if last.q == 0:
        raise SingularInputError("tangent kernel denominator q_n vanished")
    with ctx.activate():
        return gmpy2.mul_2exp(last.p * last.p, 1) / last.q


def tan_pq_exact(x: Fraction, n: int) -> tuple[Fraction, Fraction, Fraction]:
    """Exact-rational p_n, q_n and 2 p_n^2/q_n for structural checks."""
    p = q = Fraction(0)
    x0 = Fraction(x)
    xsq = x0 * x0
    fact = 1
    for m in range(1, n + 1):
        if m > 1:
            fact = fact * (2 * m - 2) * (2 * m - 1)
        r = x0 / fact
        if m % 2 == 0:
            r = -r
        p += r
        q += r * (1 << (2 * m - 1))
        x0 *= xsq
    if q == 0:
        raise SingularInputError("tangent kernel denominator q_n vanished")
    return p, q, 2 * p * p / q


def eta_doubling(x: FixedReal, m: int, ctx: PrecisionContext) -> FixedReal:
    """tan(2^m arctan x) by m tangent doublings y <- 2y / (1 - y^2).

    Fails loudly if any intermediate square approaches 1 (a doubling step
    would cross a pole of the tangent).
    """
    if m < 1:
        raise DomainError("doubling count must be >= 1")
    with ctx.activate():
        y = +x
        guard = gmpy2.exp2(-(ctx.bits // 2))
        for _ in range(m):
            den = 1 - y * y
            if abs(den) < guard:
                raise SingularInputError(
                    "tangent doubling hit a pole (1 - y^2 within guard of 0)")
            y = gmpy2.mul_2exp(y, 1) / den
        return y


def eta_doubling_exact(x: Fraction, m: int) -> Fraction:
    """Exact-rational tangent doubling; digit counts double per step."""
    if m < 1:
        raise DomainError("doubling count must be >= 1")
    y = Fraction(x)
    for _ in range(m):
        den = 1 - y * y
        if den == 0:
            raise SingularInputError("tangent doubling hit an exact pole")
        y = 2 * y / den
    return y


def eta_doubling_interval(ic: IntervalContext, x: Interval, m: int) -> Interval:
    """Certified tangent doubling; the interval div rejects straddled poles."""
    one = ic.from_int(1)
    y = x
    for _ in range(m):
        y = ic.div(ic.scale2(y, 1), ic.sub(one, ic.square(y)))
    return y


def tan_split(k: int, sigma: int, alpha: int, n: int, ctx: PrecisionContext) -> FixedReal:
    """tan(2^(k-1)/alpha) via sigma doublings of the kernel at a tiny argument.

    Evaluates the series at 2^(k-1-sigma)/alpha, where each kernel term buys
    ~2 sigma bits, then redoubles sigma times. sigma = 0 degenerates to the
    plain kernel.
    """
    if not 0 <= sigma <= k - 1:
        raise DomainError(f"need 0 <= sigma <= k-1, got sigma={sigma}, k={k}")
    with ctx.activate():
        x = gmpy2.exp2(k - 1 - sigma) / exact_mpfr(alpha)
    t = _final_tan(_tan_pq_states(x, n, ctx), ctx)
    if sigma == 0:
        return t
    return eta_doubling(t, sigma, ctx)


def tan_fixed(x: FixedReal, ctx: PrecisionContext) -> FixedReal:
    """General tangent: scale the argument below 1/8, run the kernel until

    terms are negligible, then redouble. Adequate for arguments away from
    the poles of tan; a near-pole redoubling raises SingularInputError.
    """
    if x == 0:
        with ctx.activate():
            return mpfr(0)
    with ctx.activate():
        negative = x < 0
        if negative:
            x = -x
        sigma = max(0, int(gmpy2.floor(gmpy2.log2(x))) + 4)
        y = gmpy2.div_2exp(x, sigma)
        # kernel until the running term is negligible relative to p
        p, q = mpfr(0), mpfr(0)
        x0 = +y
        xsq = y * y
        fact = 1
        m = 1
        eps = gmpy2.exp2(-(ctx.total + 4))
        while True:
            if m > 1:
                fact = fact * (2 * m - 2) * (2 * m - 1)
            r = x0 / exact_mpfr(fact)
            if m % 2 == 0:
                r = -r
            p = p + r
            q = q + gmpy2.mul_2exp(r, 2 * m - 1)
            x0 = x0 * xsq
            if abs(r) < eps * abs(p):
                break
            m += 1
        if q == 0:
            raise SingularInputError("tangent kernel denominator vanished")
        t = gmpy2.mul_2exp(p * p, 1) / q
    if sigma:
        t = eta_doubling(t, sigma, ctx)
    with ctx.activate():
        return -t if negative else +t


def theta_iteration(k: int, steps: int, ctx: PrecisionContext) -> FixedReal:
    """Fixed-point iteration theta <- theta + 2^-k (1 - tan(2^(k-1) theta)).

    Started at theta = 2^-k; converges quadratically to the angle whose
    2^(k-1) multiple has tangent 1, i.e. pi / 2^(k+1).
    """
    if k < 1:
        raise DomainError("k must be >= 1")
    if steps < 1:
        raise DomainError("step count must be >= 1")
    with ctx.activate():
        theta = gmpy2.exp2(-k)
    for _ in range(steps - 1):
        with ctx.activate():
            arg = gmpy2.mul_2exp(theta, k - 1)
        t = tan_fixed(arg, ctx)
        with ctx.activate():
            theta = theta + gmpy2.div_2exp(1 - t, k)
    return theta


def arctan_newton(
    c: Fraction | int,
    start: FixedReal,
    steps: int,
    ctx: PrecisionContext,
) -> FixedReal:
    """Newton refinement of arctan(1/c) from a nearby start.

    Update s <- s - (1 - sin^2 s)(tan s - 1/c) with sin and tan recovered
    from the half-angle tangent t = tan(s/2): sin s = 2t/(1+t^2),
    tan s = 2t/(1-t^2). Error squares per step.
    """
    c = Fraction(c)
    if c == 0:
        raise DomainError("reciprocal target 1/c undefined for c = 0")
    target = exact_mpfr(Fraction(1, 1) / c, ctx)
    s = start
    for _ in range(steps):
        with ctx.activate():
            half = gmpy2.div_2exp(s, 1)
        t = tan_fixed(half, ctx)
        with ctx.activate():
            t2 = t * t
            sin_s = gmpy2.mul_2exp(t, 1) / (1 + t2)
            tan_s = gmpy2.mul_2exp(t, 1) / (1 - t2)
            s = s - (1 - sin_s * sin_s) * (tan_s - target)
    return s
