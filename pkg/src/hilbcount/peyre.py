"""Peyre-constant machinery over F_q(t): zeta closed forms, Euler products
of local densities of the punctual Hilbert schemes of the plane, and the
leading constants they assemble into.

Local densities are represented exactly as polynomials in x = 1/q_v, so the
m = 2 telescoping identity can be checked by rational comparison and the
Euler-product tail admits an explicit bound from the 1 + O(x^2) expansion
of the damped density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import SizeError
from .fqarith import FqField, irreducible_count
from .genfun import QPoly, hilb_count_poly
from .ratpoints import schanuel_constant

DEFAULT_DPS = 50


@dataclass(frozen=True)
class GlobalFieldParams:
    """Arithmetic invariants of the global field.  Defaults describe F_q(t);
    other fields are supported by the closed-form constants only."""

    field: FqField
    genus: int = 0
    class_number: int = 1
    l_poly: tuple[int, ...] = (1,)

    def __post_init__(self):
        if self.genus == 0 and (self.class_number != 1 or tuple(self.l_poly) != (1,)):
            raise ValueError("genus 0 forces class number 1 and trivial L-polynomial")


def zeta_fqt(s, field: FqField):
    """zeta of F_q(t): 1/((1 - q^(1-s))(1 - q^(-s))).  Exact for integer s."""
    q = field.q
    if isinstance(s, int):
        if s <= 1:
            raise ValueError("s > 1 required")
        return 1 / ((1 - Fraction(1, q ** (s - 1))) * (1 - Fraction(1, q**s)))
    s = mpmath.mpf(s)
    if s <= 1:
        raise ValueError("s > 1 required")
    q = mpmath.mpf(q)
    return 1 / ((1 - q ** (1 - s)) * (1 - q**-s))


def zeta_k(s: int, params: GlobalFieldParams):
    """zeta_K(s) = L(q^-s) * zeta_{F_q(t)}(s) for integer s > 1, exact."""
    q = params.field.q
    lval = sum(Fraction(c, q ** (s * i)) for i, c in enumerate(params.l_poly))
    return lval * zeta_fqt(s, params.field)


def local_density_poly(m: int) -> QPoly:
    """omega_v for Hilb^m of the plane as a polynomial in x = 1/q_v:
    |Hilb^m(F_{q_v})| / q_v^(2m).  Constant term 1, second coefficient 2."""
    hp = hilb_count_poly(m)
    coeffs = list(reversed([hp.coefficient(i) for i in range(2 * m + 1)]))
    out = QPoly(coeffs)
    assert out.coefficient(0) == 1
    if m >= 2:
        assert out.coefficient(1) == 2
    return out


def damped_density_poly(m: int) -> QPoly:
    """(1 - x)^2 * omega_v(x): the convergence-factored local density.
    Expands as 1 + O(x^2); the vanishing linear term is what makes the
    Euler product converge."""
    x = QPoly.var()
    out = (1 - x) * (1 - x) * local_density_poly(m)
    assert out.coefficient(0) == 1
    if m >= 2:
        assert out.coefficient(1) == 0
    return out


def places_by_degree(field: FqField, deg_cut: int) -> list[tuple[int, int]]:
    """(degree, number of places of that degree) for the projective line,
    including the infinite place in the degree-1 bucket."""
    if deg_cut < 1:
        raise ValueError("deg_cut >= 1 required")
    out = []
    for d in range(1, deg_cut + 1):
        count = irreducible_count(d, field.q) + (1 if d == 1 else 0)
        out.append((d, count))
    return out


def euler_product_factors(field: FqField, poly: QPoly, deg_cut: int):
    """Exact per-degree factors (degree, count, base value at x = q^-d)."""
    return [
        (d, count, poly.evaluate(Fraction(1, field.q**d)))
        for d, count in places_by_degree(field, deg_cut)
    ]


def _tail_log_bound(field: FqField, poly: QPoly, deg_cut: int) -> Fraction:
    """Bound on |log of the omitted factors| for degrees > deg_cut.

    Uses |poly(x) - 1| <= C x^k0 for x <= 1, with k0 the first nonzero power
    (k0 >= 2 for damped densities) and C the absolute coefficient sum,
    |log(1+u)| <= 2|u| for |u| <= 1/2, and at most 2 q^d / d <= 2 q^d places
    of degree d."""
    k0 = next(i for i, c in enumerate(poly.coeffs[1:], 1) if c != 0)
    assert k0 >= 2
    C = sum(abs(c) for c in poly.coeffs[1:])
    q = field.q
    if C * Fraction(1, q ** (k0 * (deg_cut + 1))) > Fraction(1, 2):
        raise SizeError("deg_cut too small for the tail bound to apply")
    # sum_{d > deg_cut} 2 q^d * 2C q^(-k0 d) = 4C r^(deg_cut+1) / (1 - r)
    r = Fraction(1, q ** (k0 - 1))
    return 4 * C * r ** (deg_cut + 1) / (1 - r)


def euler_product_density(field: FqField, m: int, deg_cut: int, dps: int = DEFAULT_DPS):
    """Truncated product of (1 - q_v^-1)^2 omega_v over all places of degree
    <= deg_cut, with an explicit bound on the log of the omitted tail."""
    poly = damped_density_poly(m)
    factors = euler_product_factors(field, poly, deg_cut)
    with mpmath.workdps(dps):
        value = mpmath.mpf(1)
        for _, count, base in factors:
            value *= mpmath.mpf(base.numerator) ** count / mpmath.mpf(
                base.denominator
            ) ** count
        tb = _tail_log_bound(field, poly, deg_cut)
        tail = mpmath.mpf(tb.numerator) / mpmath.mpf(tb.denominator)
        # |true/truncated - 1| <= e^tail - 1
        residual = mpmath.expm1(tail) * abs(value)
        return value, residual


@dataclass(frozen=True)
class PeyreResult:
    value: object  # mpmath.mpf
    residual_bound: object  # mpmath.mpf
    exact_prefactor: Fraction


def mu_slope(m: int, mu=None) -> Fraction:
    """Minimum-slope parameter of the effective cone.  Table-driven: 1 for
    m = 2, and r when m is the binomial coefficient C(r+2, 2)."""
    if mu is not None:
        mu = Fraction(mu)
        if mu <= 0:
            raise ValueError("mu must be positive")
        return mu
    if m == 2:
        return Fraction(1)
    r = 1
    while (r + 2) * (r + 1) // 2 <= m:
        if (r + 2) * (r + 1) // 2 == m:
            return Fraction(r)
        r += 1
    raise ValueError(f"no tabulated slope for m={m}; pass mu explicitly")


def alpha_star_hilbm(mu) -> Fraction:
    """alpha^* of Hilb^m of the plane: mu / 9."""
    mu = Fraction(mu)
    if mu <= 0:
        raise ValueError("mu must be positive")
    return mu / 9


def peyre_constant_pn(n: int, params: GlobalFieldParams, dps: int = DEFAULT_DPS):
    """Leading constant for P^n: S_K(n+1, 1) / ((n+1) log q)."""
    q = params.field.q
    if params.genus == 0:
        S = schanuel_constant(n, params.field)
    else:
        S = schanuel_constant(
            n,
            params.field,
            g=params.genus,
            class_number=params.class_number,
            zeta_value=zeta_k(n + 1, params),
        )
    with mpmath.workdps(dps):
        value = (
            mpmath.mpf(S.numerator)
            / mpmath.mpf(S.denominator)
            / ((n + 1) * mpmath.log(q))
        )
        return PeyreResult(value, mpmath.mpf(0), S)


def peyre_constant_hilb2(params: GlobalFieldParams, dps: int = DEFAULT_DPS):
    """Leading constant for Hilb^2 of the plane:
    J^2 / (9 (q-1)^2 q^(6(g-1)) (log q)^2 zeta_K(3)^2)."""
    q = params.field.q
    g, J = params.genus, params.class_number
    rational = Fraction(J * J, 9 * (q - 1) ** 2) * Fraction(q) ** (-6 * (g - 1))
    rational /= zeta_k(3, params) ** 2
    with mpmath.workdps(dps):
        value = (
            mpmath.mpf(rational.numerator)
            / mpmath.mpf(rational.denominator)
            / mpmath.log(q) ** 2
        )
        return PeyreResult(value, mpmath.mpf(0), rational)


def peyre_constant_hilbm(
    m: int,
    params: GlobalFieldParams,
    mu=None,
    deg_cut: int = 8,
    dps: int = DEFAULT_DPS,
):
    """Leading constant for Hilb^m of the plane by the general product
    formula; the Euler product is enumerable over F_q(t) only."""
    if m < 2:
        raise ValueError("m >= 2 required")
    if params.genus != 0:
        raise ValueError("Euler product enumeration implemented for genus 0 only")
    q = params.field.q
    mu = mu_slope(m, mu)
    prefactor = mu * Fraction(params.class_number**2, 9 * (q - 1) ** 2)
    prefactor *= Fraction(q) ** (-2 * (m + 1) * (params.genus - 1))
    product, residual = euler_product_density(params.field, m, deg_cut, dps)
    with mpmath.workdps(dps):
        scale = (
            mpmath.mpf(prefactor.numerator)
            / mpmath.mpf(prefactor.denominator)
            / mpmath.log(q) ** 2
        )
        return PeyreResult(scale * product, scale * residual, prefactor)


def cm_constant(
    m: int,
    params: GlobalFieldParams,
    mu=None,
    deg_cut: int = 8,
    dps: int = DEFAULT_DPS,
):
    """The positive constant c_m relating the prime-orbit main term to the
    total Sym^m main term.  Exactly 2/3 for m = 2; for m >= 3 the displayed
    product formula, implemented for genus 0."""
    if m < 2:
        raise ValueError("m >= 2 required")
    if m == 2:
        with mpmath.workdps(dps):
            return PeyreResult(mpmath.mpf(2) / 3, mpmath.mpf(0), Fraction(2, 3))
    if params.genus != 0:
        raise ValueError("c_m implemented for genus 0 only")
    mu = mu_slope(m, mu)
    S = schanuel_constant(2, params.field)
    prefactor = (
        mu
        * Fraction(3) ** (m - 2)
        * zeta_k(3, params) ** 2
        * math.factorial(m)
        * math.factorial(m - 1)
        / S ** (m - 2)
    )
    product, residual = euler_product_density(params.field, m, deg_cut, dps)
    with mpmath.workdps(dps):
        scale = mpmath.mpf(prefactor.numerator) / mpmath.mpf(prefactor.denominator)
        return PeyreResult(scale * product, scale * residual, prefactor)


def zeta3_damped_poly() -> QPoly:
    """(1 - x^3)^2: the per-place factor of zeta_K(3)^-2.  For m = 2 this
    equals the damped density identically (telescoping identity)."""
    x3 = QPoly((0, 0, 0, 1))
    return (1 - x3) * (1 - x3)
