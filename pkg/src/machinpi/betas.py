"""Exact rational closing constant of the two-term formula.

beta_k completes pi/4 = 2^(k-1) arctan(1/alpha_k) + arctan(1/beta_k). The
production route squares the unit-circle point
(kappa_1, lambda_1) = ((a^2-1)/(a^2+1), 2a/(a^2+1)) k-1 times and evaluates
kappa_k / (1 - lambda_k). Internally the iteration runs on the
shared-denominator integer triple (K, L, D) with D = (a^2+1)^(2^(n-1)),
kappa_n = K/D, lambda_n = L/D: squarings double the digit counts, so the
work is pure integer multiplication (gmpy2.mpz) with a single rational
reduction at the end. An exact complex-power evaluation serves as oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import gmpy2
from gmpy2 import mpfr, mpz

from .core import (
    DegenerateInputError,
    DomainError,
    FixedReal,
    GaussianRational,
    I_UNIT,
    InvariantViolation,
    PrecisionContext,
    exact_mpfr,
)
from .kernels import arctan_euler, eta_doubling
from .radicals import alpha_via_radicals, nested_state

# above this index the per-step exact modulus check costs more than the
# iteration itself (the squarings double in size every step)
INVARIANT_CHECK_MAX_K = 16

# digit counts double per squaring; beyond this the exact complex power is
# no longer a practical oracle
COMPLEX_ORACLE_MAX_K = 24


@dataclass(frozen=True)
class KappaLambdaState:
    """One step of the squaring iteration; kappa^2 + lambda^2 = 1 exactly."""

    n: int
    kappa: Fraction
    lam: Fraction


@dataclass(frozen=True)
class BetaConstant:
    k: int
    alpha: int
    beta: Fraction


def _validate(k: int, alpha: int) -> None:
    if k == 1:
        raise DegenerateInputError(
            "k = 1 is degenerate: lambda_1 = 1 makes 1 - lambda_k vanish")
    if k < 2:
        raise DomainError("index must be >= 2")
    if alpha < 1:
        raise DomainError("coefficient must be >= 1")


def _triple_iter(k: int, alpha: int, check: bool) -> tuple[mpz, mpz, mpz]:
    a2 = mpz(alpha) * alpha
    K, L, D = a2 - 1, 2 * mpz(alpha), a2 + 1
    for _ in range(2, k + 1):
        K, L, D = K * K - L * L, 2 * K * L, D * D
        if check and K * K + L * L != D * D:
            raise InvariantViolation("unit modulus kappa^2 + lambda^2 = 1 broke")
    return K, L, D


def kappa_lambda_steps(k: int, alpha: int) -> Iterator[KappaLambdaState]:
    """States n = 1..k as exact rationals, modulus asserted at every step."""
    _validate(k, alpha)
    a2 = mpz(alpha) * alpha
    K, L, D = a2 - 1, 2 * mpz(alpha), a2 + 1
    yield KappaLambdaState(1, Fraction(int(K), int(D)), Fraction(int(L), int(D)))
    for n in range(2, k + 1):
        K, L, D = K * K - L * L, 2 * K * L, D * D
        if K * K + L * L != D * D:
            raise InvariantViolation("unit modulus kappa^2 + lambda^2 = 1 broke")
        yield KappaLambdaState(n, Fraction(int(K), int(D)), Fraction(int(L), int(D)))


def beta_pair(k: int, alpha: int, check: bool | None = None) -> tuple[int, int]:
    """Exact (numerator, denominator) of beta_k, not reduced."""
    _validate(k, alpha)
    if check is None:
        check = k <= INVARIANT_CHECK_MAX_K
    K, L, D = _triple_iter(k, alpha, check)
    den = D - L
    if den == 0:
        raise InvariantViolation("1 - lambda_k vanished for k >= 2")
    return int(K), int(den)


def beta_two_step(k: int, alpha: int) -> BetaConstant:
    """beta_k = kappa_k / (1 - lambda_k) after k-1 exact squaring steps."""
    num, den = beta_pair(k, alpha)
    return BetaConstant(k, alpha, Fraction(num, den))


def beta_complex_oracle(k: int, alpha: int) -> BetaConstant:
    """beta_k = 2 / (((a+i)/(a-i))^(2^(k-1)) - i) - i in exact complex rationals.

    The imaginary part must come out exactly zero; anything else signals an
    arithmetic bug, not a precision problem.
    """
    _validate(k, alpha)
    if k > COMPLEX_ORACLE_MAX_K:
        raise DomainError(
            f"complex oracle capped at k <= {COMPLEX_ORACLE_MAX_K} "
            "(digit counts double per index)")
    a = GaussianRational.of(alpha)
    z = (a + I_UNIT) / (a - I_UNIT)
    w = z.pow_pow2(k - 1)
    beta = GaussianRational.of(2) / (w - I_UNIT) - I_UNIT
    if beta.im != 0:
        raise InvariantViolation(f"beta_{k} has nonzero imaginary part {beta.im}")
    return BetaConstant(k, alpha, beta.re)


def kappa_lambda_fixed(k: int, alpha: int, ctx: PrecisionContext) -> tuple[FixedReal, FixedReal]:
    """(kappa_k, lambda_k) at fixed precision, for sign and decay surveys.

    1 - lambda_k cancels about 2k bits, so callers should budget
    ctx.bits >= 2k plus slack when they divide by it.
    """
    _validate(k, alpha)
    with ctx.activate():
        a2 = exact_mpfr(alpha * alpha)
        kap = (a2 - 1) / (a2 + 1)
        lam = exact_mpfr(2 * alpha) / (a2 + 1)
        for _ in range(2, k + 1):
            kap, lam = kap * kap - lam * lam, 2 * kap * lam
        return kap, lam


def beta_reciprocal_fixed(k: int, alpha: int, ctx: PrecisionContext) -> FixedReal:
    """1/beta_k = (1 - lambda_k)/kappa_k without exact big-integer growth."""
    kap, lam = kappa_lambda_fixed(k, alpha, ctx)
    with ctx.activate():
        return (1 - lam) / kap


def beta_trig_check(k: int, alpha: int, ctx: PrecisionContext) -> FixedReal:
    """|beta_k - cos(phi)/(1 - sin(phi))| for phi = 2^(k-1) arctan(2a/(a^2-1)).

    The trigonometric form is evaluated without trig calls: the half-angle
    tangent tan(phi/2) equals the (k-2)-fold doubling of 2a/(a^2-1), and sin,
    cos follow rationally from it.
    """
    if alpha == 1:
        raise DomainError("alpha = 1 is singular in the trigonometric form (a^2 - 1 = 0)")
    _validate(k, alpha)
    exact = beta_two_step(k, alpha).beta
    theta0 = Fraction(2 * alpha, alpha * alpha - 1)
    if k == 2:
        t = exact_mpfr(theta0, ctx)
    else:
        t = eta_doubling(exact_mpfr(theta0, ctx), k - 2, ctx)
    with ctx.activate():
        t2 = t * t
        sin_phi = gmpy2.mul_2exp(t, 1) / (1 + t2)
        cos_phi = (1 - t2) / (1 + t2)
        trig = cos_phi / (1 - sin_phi)
        return abs(exact_mpfr(exact, ctx) - trig)


def fractional_link_check(k: int, ctx: PrecisionContext) -> FixedReal:
    """Residual of arctan(1/beta_k) = -2^(k-1) arctan(frac/(1 + floor * ratio)).

    ratio = a_k/sqrt(2 - a_(k-1)) comes from the radical oracle, frac is its
    fractional part. 1/beta_k is evaluated at fixed precision (the exact
    value is out of reach for larger k), so the residual reflects both sides'
    working precision.
    """
    if k < 2:
        raise DomainError("link check defined for k >= 2")
    alpha = alpha_via_radicals(k, ctx)
    state = nested_state(k, ctx)
    with ctx.activate():
        ratio = state.a_k / state.b_k
        frac = ratio - alpha
        arg = frac / (1 + alpha * ratio)
    recip_beta = beta_reciprocal_fixed(k, alpha, ctx)
    lhs = arctan_euler(recip_beta, ctx)
    rhs_inner = arctan_euler(arg, ctx)
    with ctx.activate():
        rhs = -gmpy2.mul_2exp(rhs_inner, k - 1)
        return abs(lhs - rhs)
