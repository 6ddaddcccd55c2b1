"""Numerical verification of the asymptotic lemmas: the fractional-power
sums, the exact convolution ratios, and the Manin-type main-term evaluators
used to compare exact counts with their predicted leading behavior.

Ratios that can be exact are kept as Fractions; everything involving
q^(i/t) or log q is evaluated in mpmath at a caller-chosen precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .fqarith import FqField
from .ratpoints import schanuel_constant

DEFAULT_DPS = 50


def technical_sum(F: FqField, t: int, j: int, m: int, M: int, dps: int = DEFAULT_DPS):
    """sum_{i=0}^{M} q^((t-j)i/t) * i^(m-t), high precision."""
    if not (0 < j < t < m):
        raise ValueError("need 0 < j < t < m")
    q = F.q
    with mpmath.workdps(dps):
        total = mpmath.mpf(0)
        for i in range(M + 1):
            total += mpmath.mpf(q) ** (mpmath.mpf(i) * (t - j) / t) * mpmath.mpf(i) ** (
                m - t
            )
        return total


def technical_main_term(F: FqField, t: int, j: int, m: int, M: int, dps: int = DEFAULT_DPS):
    """Predicted leading term (1/(((t-j)/t) log q) + 1/2) q^((t-j)M/t) M^(m-t)."""
    q = F.q
    with mpmath.workdps(dps):
        alpha = mpmath.mpf(t - j) / t
        lead = 1 / (alpha * mpmath.log(q)) + mpmath.mpf(1) / 2
        return lead * mpmath.mpf(q) ** (alpha * M) * mpmath.mpf(M) ** (m - t)


def technical_lemma_check(F: FqField, t: int, j: int, m: int, M: int, dps: int = DEFAULT_DPS):
    """Normalized deviation dev(M) = |sum/main - 1| * M; bounded in M when
    the lemma's main term is right."""
    s = technical_sum(F, t, j, m, M, dps)
    main = technical_main_term(F, t, j, m, M, dps)
    with mpmath.workdps(dps):
        return abs(s / main - 1) * M


def technical2_check(k: int, M: int) -> Fraction:
    """Exact ratio of (1/k!) sum_i i (M-i)^k to M^(k+2)/(k+2)!.  For k = 1
    this is exactly (M^2 - 1)/M^2."""
    if k < 1 or k % 2 == 0:
        raise ValueError("k must be odd and >= 1")
    if M < 1:
        raise ValueError("M >= 1 required")
    s = Fraction(sum(i * (M - i) ** k for i in range(M + 1)), math.factorial(k))
    main = Fraction(M ** (k + 2), math.factorial(k + 2))
    return s / main


def product_main_term_check(rV: int, rW: int, M: int) -> Fraction:
    """Exact ratio of sum_i i^(rV-1) (M-i)^(rW-1) to its limiting value
    M^(rV+rW-1) (rV-1)! (rW-1)! / (rV+rW-1)!."""
    if not (rV >= rW >= 1):
        raise ValueError("need rV >= rW >= 1")
    total = sum(i ** (rV - 1) * (M - i) ** (rW - 1) for i in range(M + 1))
    main = Fraction(
        M ** (rV + rW - 1) * math.factorial(rV - 1) * math.factorial(rW - 1),
        math.factorial(rV + rW - 1),
    )
    return Fraction(total) / main


def manin_main_term(c, r: int, F: FqField, M: int, dps: int = DEFAULT_DPS):
    """c * (log q)^r / (r-1)! * q^M * M^(r-1)."""
    if r < 1:
        raise ValueError("rank r >= 1 required")
    q = F.q
    with mpmath.workdps(dps):
        if isinstance(c, Fraction):
            c = mpmath.mpf(c.numerator) / mpmath.mpf(c.denominator)
        else:
            c = mpmath.mpf(c)
        return (
            c
            * mpmath.log(q) ** r
            / math.factorial(r - 1)
            * mpmath.mpf(q) ** M
            * mpmath.mpf(M) ** (r - 1)
        )


@dataclass(frozen=True)
class SymmMainTerms:
    """Leading coefficients of the Sym^m count at height exponent M (the
    anticanonical-height scale).  Each entry multiplies q^M M^(power)."""

    reducible_coeff: Fraction  # power m-1
    total_coeff: Fraction  # power m-1
    irreducible_coeff: Fraction | None  # m = 2 only; power 1
    diagonal: object | None  # mpf coefficient at power m-3, m >= 3
    j2_cycle: object | None  # mpf coefficient at power m-3, m >= 3


def symm_main_terms(F: FqField, m: int, dps: int = DEFAULT_DPS) -> SymmMainTerms:
    """Main-term bookkeeping for N_{Sym^m} of the plane."""
    if m < 2:
        raise ValueError("m >= 2 required")
    S = schanuel_constant(2, F)
    reducible = S**m / (3**m * math.factorial(m) * math.factorial(m - 1))
    if m == 2:
        irreducible = S * S / 9
        total = S * S / 6
        assert total == irreducible + reducible
        return SymmMainTerms(reducible, total, irreducible, None, None)
    with mpmath.workdps(dps):
        logq2 = mpmath.log(F.q) ** 2
        diag = Fraction(2) * S ** (m - 1) / (
            3 ** (m - 1) * math.factorial(m) * math.factorial(m - 3)
        )
        j2 = Fraction(4) * S**m / (3**m * math.factorial(m) * math.factorial(m - 3))
        to_mpf = lambda f: mpmath.mpf(f.numerator) / mpmath.mpf(f.denominator)
        return SymmMainTerms(
            reducible, reducible, None, to_mpf(diag) / logq2, to_mpf(j2) / logq2
        )


def binomial_cancellation(k: int) -> int:
    """sum_j C(2k-1, j) (-1)^j; identically 0, the cancellation that kills
    the order-M^(m-2) terms."""
    return sum((-1) ** j * math.comb(2 * k - 1, j) for j in range(2 * k))
