"""Canonical points of P^n(F_q(t)), exact-height enumeration, and the
closed-form counts they must reproduce.

A point is stored as a coprime tuple of polynomials whose first nonzero
entry is monic; this is the unique representative of its F_q(t)^*-orbit,
and its height is q to the maximum coordinate degree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import SizeError
from .fqarith import FqField, Poly, poly_gcd

# Max number of coordinate tuples scanned by enumerate_exact_height.
TUPLE_GUARD = 10**9


@dataclass(frozen=True)
class ProjPointFqt:
    coords: tuple[Poly, ...]

    @property
    def n(self) -> int:
        return len(self.coords) - 1

    @property
    def field(self) -> FqField:
        return self.coords[0].field

    def serialize(self) -> str:
        return "/".join(c.serialize() for c in self.coords)


def canonicalize(coords) -> ProjPointFqt:
    """Reduce a nonzero coordinate tuple to the canonical orbit representative."""
    coords = tuple(coords)
    if all(c.is_zero for c in coords):
        raise ValueError("all coordinates are zero")
    g = Poly.zero(coords[0].field)
    for c in coords:
        g = poly_gcd(g, c)
        if g.degree == 0:
            break
    if g.degree > 0:
        coords = tuple(c // g for c in coords)
    pivot = next(c for c in coords if not c.is_zero)
    if not pivot.is_monic:
        u = pivot.field.inv(pivot.lead)
        coords = tuple(c.scale(u) for c in coords)
    return ProjPointFqt(coords)


def height_exponent(P: ProjPointFqt) -> int:
    """Exponent M with H(P) = q^M; this is the max coordinate degree."""
    return max(c.degree for c in P.coords if not c.is_zero)


def height_rational(P: ProjPointFqt) -> int:
    return P.field.q ** height_exponent(P)


def enumerate_exact_height(n: int, field: FqField, M: int):
    """Yield every canonical point of P^n(F_q(t)) of height exactly q^M."""
    if n < 1 or M < 0:
        raise ValueError("need n >= 1 and M >= 0")
    q = field.q
    ncodes = q ** (M + 1)
    if ncodes ** (n + 1) > TUPLE_GUARD:
        raise SizeError(
            f"enumeration would scan q^((n+1)(M+1)) = {q}^{(n + 1) * (M + 1)} tuples"
        )
    # precompute one Poly per code along with the filter data
    polys = []
    degs = []
    monic = []
    for code in range(ncodes):
        digits = []
        c = code
        for _ in range(M + 1):
            digits.append(c % q)
            c //= q
        f = Poly(field, digits)
        polys.append(f)
        degs.append(f.degree)
        monic.append(f.is_monic)
    one = Poly.one(field)
    for tup in itertools.product(range(ncodes), repeat=n + 1):
        if max(degs[c] for c in tup) != M:
            continue
        # canonical form: first nonzero coordinate monic
        pivot = next(c for c in tup if c)
        if not monic[pivot]:
            continue
        g = Poly.zero(field)
        coprime = False
        for c in tup:
            g = poly_gcd(g, polys[c])
            if g.degree == 0:
                coprime = True
                break
        if not coprime and g != one:
            continue
        yield ProjPointFqt(tuple(polys[c] for c in tup))


def schanuel_constant(
    n: int,
    field: FqField,
    g: int = 0,
    class_number: int = 1,
    zeta_value: Fraction | None = None,
) -> Fraction:
    """Leading constant S_K(n+1, 1) in the exact-height point count.

    For K = F_q(t) this is q^(n+1)(1 - q^-n)(1 - q^-(n+1))/(q - 1), an exact
    rational.  For other (g, class number) the caller must supply the value
    of zeta_K at n+1."""
    q = field.q
    if g == 0 and class_number == 1 and zeta_value is None:
        return (
            Fraction(q ** (n + 1), q - 1)
            * (1 - Fraction(1, q**n))
            * (1 - Fraction(1, q ** (n + 1)))
        )
    if zeta_value is None:
        raise ValueError("zeta_K(n+1) required when (g, J) != (0, 1)")
    return Fraction(class_number) * Fraction(q) ** ((1 - g) * (n + 1)) / (
        (q - 1) * zeta_value
    )


def point_count_exact_height(n: int, field: FqField, M: int) -> int:
    """Closed-form count of P^n(F_q(t)) points of height exactly q^M."""
    q = field.q
    if M == 0:
        return (q ** (n + 1) - 1) // (q - 1)
    value = schanuel_constant(n, field) * q ** ((n + 1) * M)
    assert value.denominator == 1
    return int(value)


@dataclass(frozen=True)
class PairCount:
    observed: Fraction
    closed_form: Fraction

    @property
    def match(self) -> bool:
        return self.observed == self.closed_form


def count_reducible_pairs(field: FqField, M: int) -> PairCount:
    """Halved convolution (1/2) sum_N A(N) A(M-N) over P^2 heights, with the
    exact closed form it must equal for M >= 1."""
    if M < 1:
        raise ValueError("M >= 1 required")
    q = field.q
    observed = Fraction(0)
    for N in range(M + 1):
        observed += Fraction(
            point_count_exact_height(2, field, N)
            * point_count_exact_height(2, field, M - N),
            2,
        )
    S = schanuel_constant(2, field)
    closed = (
        Fraction(S * S, 2) * q ** (3 * M) * M
        + Fraction(q * q + 1, 2 * (q * q - 1)) * S * S * q ** (3 * M)
    )
    return PairCount(observed, closed)


def count_pairs_closed_subset(field: FqField, M: int) -> Fraction:
    """Halved convolution of P^1 x P^2 exact-height counts; the majorant for
    pairs with a rational component on a line."""
    if M < 1:
        raise ValueError("M >= 1 required")
    total = Fraction(0)
    for N in range(M + 1):
        total += Fraction(
            point_count_exact_height(1, field, N)
            * point_count_exact_height(2, field, M - N),
            2,
        )
    return total
