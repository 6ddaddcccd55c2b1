"""Truncated power series with exact rational coefficients, the zeta and
symmetric/Hilbert generating functions of the plane over F_q, and the
closed 0-cycle formulas they cross-validate.

Everything here is exact: series coefficients are Fractions (or polynomials
with Fraction coefficients), and integrality of the final counts is asserted
rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import SizeError
from .fqarith import FqField, mobius

SERIES_ORDER_GUARD = 64
SERIES_Q_GUARD = 16


def _field_size(F) -> int:
    q = F.q if isinstance(F, FqField) else int(F)
    if q < 2:
        raise ValueError("field size must be >= 2")
    return q


class QPoly:
    """Dense polynomial with Fraction coefficients in one formal variable.

    Used both for point counts as polynomials in the field size and for
    local densities as polynomials in 1/q_v."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        c = [Fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def var(cls):
        return cls((0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, QPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        if not isinstance(other, QPoly):
            other = QPoly((other,))
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return QPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return QPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        if not isinstance(other, QPoly):
            other = QPoly((other,))
        return self + (-other)

    def __rsub__(self, other):
        return QPoly((other,)) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QPoly(tuple(c * other for c in self.coeffs))
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1 or 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] += x * y
        return QPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * (1 / Fraction(other))

    def __pow__(self, e: int):
        result = QPoly((1,))
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def evaluate(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def coefficient(self, i) -> Fraction:
        return self.coeffs[i] if i < len(self.coeffs) else Fraction(0)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def __repr__(self):
        return f"QPoly({list(self.coeffs)})"


class TruncSeries:
    """Power series truncated at a fixed order, with exact coefficients.

    Coefficients may be Fractions or QPoly values; all arithmetic is exact
    through the truncation order."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs):
        if order < 0:
            raise ValueError("order must be >= 0")
        c = list(coeffs)[: order + 1]
        while len(c) < order + 1:
            c.append(Fraction(0))
        self.order = order
        self.coeffs = c

    @classmethod
    def constant(cls, order, value=Fraction(1)):
        return cls(order, [value])

    def coefficient(self, m):
        return self.coeffs[m]

    def __eq__(self, other):
        return (
            isinstance(other, TruncSeries)
            and self.order == other.order
            and all(x == y for x, y in zip(self.coeffs, other.coeffs))
        )

    def __add__(self, other):
        return TruncSeries(
            min(self.order, other.order),
            [x + y for x, y in zip(self.coeffs, other.coeffs)],
        )

    def __sub__(self, other):
        return TruncSeries(
            min(self.order, other.order),
            [x - y for x, y in zip(self.coeffs, other.coeffs)],
        )

    def __mul__(self, other):
        N = min(self.order, other.order)
        out = [Fraction(0)] * (N + 1)
        for i, x in enumerate(self.coeffs[: N + 1]):
            if not x:
                continue
            for j in range(N + 1 - i):
                y = other.coeffs[j]
                if y:
                    out[i + j] = out[i + j] + x * y
        return TruncSeries(N, out)

    def inverse(self):
        c0 = self.coeffs[0]
        if not c0:
            raise ValueError("inverse needs nonzero constant term")
        inv0 = 1 / c0 if isinstance(c0, Fraction) else None
        if inv0 is None:
            raise ValueError("inverse supported for Fraction coefficients only")
        out = [inv0] + [Fraction(0)] * self.order
        for n in range(1, self.order + 1):
            acc = Fraction(0)
            for k in range(1, n + 1):
                acc += self.coeffs[k] * out[n - k]
            out[n] = -inv0 * acc
        return TruncSeries(self.order, out)

    def exp(self):
        if self.coeffs[0]:
            raise ValueError("exp needs zero constant term")
        one = Fraction(1) if isinstance(self.coeffs[0], Fraction) else QPoly((1,))
        out = [one] + [self.coeffs[0] * 0] * self.order
        for n in range(1, self.order + 1):
            acc = self.coeffs[0] * 0
            for k in range(1, n + 1):
                acc = acc + (self.coeffs[k] * k) * out[n - k]
            out[n] = acc * Fraction(1, n)
        return TruncSeries(self.order, out)

    def log(self):
        one = Fraction(1) if isinstance(self.coeffs[0], Fraction) else QPoly((1,))
        if self.coeffs[0] != one:
            raise ValueError("log needs constant term 1")
        zero = self.coeffs[0] * 0
        out = [zero] * (self.order + 1)
        for n in range(1, self.order + 1):
            acc = self.coeffs[n] * n
            for k in range(1, n):
                acc = acc - (out[k] * k) * self.coeffs[n - k]
            out[n] = acc * Fraction(1, n)
        return TruncSeries(self.order, out)


def _check_series_guard(q: int, order: int):
    if order > SERIES_ORDER_GUARD or q > SERIES_Q_GUARD:
        raise SizeError(
            f"series guard exceeded (order {order} > {SERIES_ORDER_GUARD} "
            f"or q {q} > {SERIES_Q_GUARD})"
        )


def zeta_p2_series(F, N: int) -> TruncSeries:
    """Zeta series of the plane: 1/((1-t)(1-qt)(1-q^2 t)) through order N."""
    q = _field_size(F)
    _check_series_guard(q, N)
    prod = TruncSeries.constant(N)
    for a in (1, q, q * q):
        geom = TruncSeries(N, [Fraction(a) ** i for i in range(N + 1)])
        prod = prod * geom
    return prod


def sym_counts(F, m_max: int) -> list[int]:
    """|Sym^m P^2(F_q)| for m = 0..m_max."""
    series = zeta_p2_series(F, m_max)
    out = []
    for c in series.coeffs:
        assert c.denominator == 1
        out.append(int(c))
    return out


def chen7_closed(F, m: int) -> int:
    """Closed even/odd formula for |Sym^m P^2(F_q)|."""
    if m < 1:
        raise ValueError("m >= 1 required")
    q = _field_size(F)
    k = m // 2
    total = Fraction(0)
    for i in range(k):
        total += (i + 1) * Fraction(q ** (2 * (m - i)) + q ** (2 * i + 1))
    total *= 1 + Fraction(1, q)
    if m % 2 == 0:
        total += Fraction(m + 2, 2) * q**m
    else:
        total += Fraction(m + 1, 2) * q ** (m - 1) * (q * q + q + 1)
    assert total.denominator == 1
    return int(total)


def _gottsche_argument(point_counts, N: int, zero, one):
    """The series sum_k (t^k / k) * c_k / (1 - q^k t^k) inside the exp, with
    c_k = point_counts(k) in whatever coefficient ring is supplied."""
    coeffs = [zero for _ in range(N + 1)]
    for k in range(1, N + 1):
        c_k, qk = point_counts(k)
        power = one
        for j in range(0, (N - k) // k + 1):
            # term (c_k / k) * q^(k j) t^(k (j+1))
            coeffs[k * (j + 1)] = coeffs[k * (j + 1)] + (c_k * power) * Fraction(1, k)
            power = power * qk
    return TruncSeries(N, coeffs)


def hilb_counts(F, m_max: int) -> list[int]:
    """|Hilb^m P^2(F_q)| for m = 0..m_max via the exponential formula."""
    q = _field_size(F)
    _check_series_guard(q, m_max)

    def counts(k):
        return Fraction(q ** (2 * k) + q**k + 1), Fraction(q**k)

    series = _gottsche_argument(counts, m_max, Fraction(0), Fraction(1)).exp()
    out = []
    for c in series.coeffs:
        assert c.denominator == 1, "Hilbert count coefficients must be integers"
        out.append(int(c))
    return out


def hilb_count_poly(m: int) -> QPoly:
    """|Hilb^m P^2| as a polynomial in the field size (degree 2m, monic,
    second coefficient 2)."""
    if m < 0:
        raise ValueError("m >= 0 required")
    if m > SERIES_ORDER_GUARD:
        raise SizeError("series guard exceeded")
    x = QPoly.var()

    def counts(k):
        return x ** (2 * k) + x**k + 1, x**k

    series = _gottsche_argument(counts, m, QPoly(), QPoly((1,))).exp()
    poly = series.coeffs[m]
    assert poly.is_integral(), "Hilbert count polynomial must have integer coefficients"
    assert poly.degree == 2 * m
    if m >= 1:
        assert poly.coefficient(2 * m) == 1
    if m >= 2:
        assert poly.coefficient(2 * m - 1) == 2
    return poly


def closed_point_counts(F, m_max: int) -> list[int]:
    """Number of closed points of degree m on P^2 over F_q (prime 0-cycles),
    for m = 1..m_max, via Mobius inversion of the Newton identity."""
    q = _field_size(F)
    out = []
    for m in range(1, m_max + 1):
        total = 0
        for d in range(1, m + 1):
            if m % d == 0:
                r = m // d
                total += mobius(d) * (q ** (2 * r) + q**r + 1)
        value = Fraction(total, m)
        assert value.denominator == 1 and value > 0
        out.append(int(value))
    return out


@dataclass(frozen=True)
class Chen8Result:
    value: Fraction  # the formula value, exact (integral for prime powers)
    recursion: int  # the Mobius-recursion ground truth
    valid: bool


def chen8_closed(F, m: int) -> Chen8Result:
    """The closed even/odd formula for degree-m closed points, evaluated
    verbatim and compared against the Mobius recursion.  The formula is
    exact for prime-power m; for other m the divergence is reported, never
    repaired."""
    if m < 2:
        raise ValueError("m >= 2 required")
    q = _field_size(F)
    if m % 2 == 0:
        value = Fraction(q ** (2 * m) - q ** (m // 2), m)
    else:
        j = next(d for d in range(2, m + 1) if m % d == 0)
        value = Fraction(q ** (2 * m) + q**m - q ** (2 * m // j) - q ** (m // j), m)
    recursion = closed_point_counts(q, m)[m - 1]
    return Chen8Result(value, recursion, value == recursion)


@dataclass(frozen=True)
class Chen1Result:
    ratio: Fraction
    main_term: Fraction  # (1/m)(1 - 1/q - 1/q^2 + 1/q^3)
    normalized_error: Fraction  # |m*ratio - m*main| * q^m


def chen1_ratio(F, m: int) -> Chen1Result:
    """Proportion of degree-m 0-cycles that are prime, with the normalized
    error against the (1/m)(1 - 1/q - 1/q^2 + 1/q^3) main term."""
    if m < 1:
        raise ValueError("m >= 1 required")
    q = _field_size(F)
    ratio = Fraction(closed_point_counts(q, m)[m - 1], sym_counts(q, m)[m])
    main = Fraction(1, m) * (
        1 - Fraction(1, q) - Fraction(1, q * q) + Fraction(1, q**3)
    )
    err = abs(m * ratio - m * main) * q**m
    return Chen1Result(ratio, main, err)


@dataclass(frozen=True)
class CycleRow:
    m: int
    sym: int
    hilb: int
    primes: int
    chen7: int
    chen8: Fraction
    chen8_valid: bool
    ratio_error: Fraction


def cycle_table(F, m_max: int) -> list[CycleRow]:
    """One row per m with every 0-cycle count and its closed-form checks."""
    q = _field_size(F)
    sym = sym_counts(q, m_max)
    hilb = hilb_counts(q, m_max)
    primes = closed_point_counts(q, m_max)
    rows = []
    for m in range(1, m_max + 1):
        c8 = (
            chen8_closed(q, m)
            if m >= 2
            else Chen8Result(Fraction(primes[0]), primes[0], True)
        )
        c1 = chen1_ratio(q, m)
        rows.append(
            CycleRow(
                m=m,
                sym=sym[m],
                hilb=hilb[m],
                primes=primes[m - 1],
                chen7=chen7_closed(q, m),
                chen8=c8.value,
                chen8_valid=c8.valid,
                ratio_error=c1.normalized_error,
            )
        )
    return rows
