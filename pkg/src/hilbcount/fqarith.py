"""Exact arithmetic in F_q (q = p^k) and in the polynomial ring F_q[t].

Field elements are encoded as plain integers in [0, q).  The base-p digits
of the code are the coordinates in the polynomial basis 1, x, ..., x^(k-1)
of F_{p^k} over F_p; for k = 1 the code is just the residue mod p.  The
defining modulus is the lexicographically least monic irreducible of degree
k over F_p (by coefficient sequence, lowest degree first), so outputs are
reproducible across runs.

Polynomials over F_q are immutable dense coefficient tuples (lowest degree
first, no trailing zeros).  All counts use Python's arbitrary-precision
integers.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .errors import CharacteristicError, SizeError

# Max number of monic polynomials scanned when listing irreducibles.
ENUM_GUARD = 10**7


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def field_from_order(q: int) -> "FqField":
    """F_q for a prime power q = p^k."""
    if q < 2:
        raise ValueError("q must be a prime power >= 2")
    p = 2
    while p * p <= q and q % p != 0:
        p += 1
    if q % p != 0:
        p = q  # q itself is prime
    k = 0
    n = q
    while n % p == 0:
        n //= p
        k += 1
    if n != 1:
        raise ValueError(f"{q} is not a prime power")
    return FqField(p, k)


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("mobius undefined for n < 1")
    result = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            result = -result
        d += 1
    if n > 1:
        result = -result
    return result


def irreducible_count(d: int, q: int) -> int:
    """Number of monic irreducibles of degree d over F_q (Mobius count)."""
    total = Fraction(0)
    for e in range(1, d + 1):
        if d % e == 0:
            total += Fraction(mobius(e) * q ** (d // e), d)
    assert total.denominator == 1
    return int(total)


class FqField:
    """The finite field F_{p^k} with integer-coded elements."""

    def __init__(self, p: int, k: int = 1, modulus: tuple[int, ...] | None = None):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if k < 1:
            raise ValueError("extension degree must be >= 1")
        self.p = p
        self.k = k
        self.q = p**k
        if k == 1:
            # t itself; never used in arithmetic but kept for the record
            self.modulus = (0, 1) if modulus is None else tuple(modulus)
        else:
            if modulus is None:
                modulus = _least_irreducible_modulus(p, k)
            else:
                modulus = tuple(c % p for c in modulus)
                if len(modulus) != k + 1 or modulus[-1] != 1:
                    raise ValueError("modulus must be monic of degree k")
                if not _fp_is_irreducible(modulus, p):
                    raise ValueError("modulus is reducible over F_p")
            self.modulus = modulus
        self._mul_cache: dict[tuple[int, int], int] = {}
        self._inv_cache: dict[int, int] = {}

    def __repr__(self):
        if self.k == 1:
            return f"FqField({self.p})"
        return f"FqField({self.p}, {self.k})"

    def __eq__(self, other):
        return (
            isinstance(other, FqField)
            and (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus)
        )

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    # --- element codecs ---

    def digits(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.k):
            a, r = divmod(a, self.p)
            out.append(r)
        return tuple(out)

    def encode(self, digits) -> int:
        a = 0
        for c in reversed(list(digits)):
            a = a * self.p + (c % self.p)
        return a

    # --- arithmetic on codes ---

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        da, db = self.digits(a), self.digits(b)
        return self.encode((x + y) % self.p for x, y in zip(da, db))

    def sub(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a - b) % self.p
        da, db = self.digits(a), self.digits(b)
        return self.encode((x - y) % self.p for x, y in zip(da, db))

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        return self.encode((-x) % self.p for x in self.digits(a))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        key = (a, b) if a <= b else (b, a)
        cached = self._mul_cache.get(key)
        if cached is not None:
            return cached
        prod = [0] * (2 * self.k - 1)
        da, db = self.digits(a), self.digits(b)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        # reduce modulo the defining polynomial
        m = self.modulus
        for i in range(len(prod) - 1, self.k - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                for j in range(self.k):
                    prod[i - self.k + j] = (prod[i - self.k + j] - c * m[j]) % self.p
        result = self.encode(prod[: self.k])
        self._mul_cache[key] = result
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero field element")
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        cached = self._inv_cache.get(a)
        if cached is None:
            cached = self.pow(a, self.q - 2)
            self._inv_cache[a] = cached
        return cached

    def pow(self, a: int, e: int) -> int:
        result = 1
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def is_square_unit(self, a: int) -> bool:
        """Whether a nonzero element is a square in F_q^* (q odd)."""
        if a == 0:
            raise ValueError("zero is not a unit")
        if self.q % 2 == 0:
            raise CharacteristicError("squareness of units needs odd q")
        return self.pow(a, (self.q - 1) // 2) == 1

    def sqrt_unit(self, a: int) -> int:
        """A square root of a nonzero square in F_q^* (exhaustive; q is small)."""
        for r in range(1, self.q):
            if self.mul(r, r) == a:
                return r
        raise ValueError("element is not a square")

    def elements(self):
        return range(self.q)


# --- raw F_p polynomial helpers, used only to pick the field modulus ---


def _fp_trim(c: list[int]) -> tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _fp_mod(a: tuple[int, ...], b: tuple[int, ...], p: int) -> tuple[int, ...]:
    a = list(a)
    db = len(b) - 1
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) - 1 >= db and a:
        c = (a[-1] * inv_lead) % p
        shift = len(a) - 1 - db
        for j in range(len(b)):
            a[shift + j] = (a[shift + j] - c * b[j]) % p
        while a and a[-1] == 0:
            a.pop()
    return tuple(a)


def _fp_is_irreducible(f: tuple[int, ...], p: int) -> bool:
    deg = len(f) - 1
    if deg <= 0:
        return False
    # trial division by every monic polynomial of degree <= deg/2
    for d in range(1, deg // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            g = tuple(tail) + (1,)
            if not _fp_mod(f, g, p):
                return False
    return True


def _least_irreducible_modulus(p: int, k: int) -> tuple[int, ...]:
    if p**k > ENUM_GUARD:
        raise SizeError(f"modulus search over {p}^{k} candidates exceeds guard")
    for tail in itertools.product(range(p), repeat=k):
        f = tuple(tail) + (1,)
        if _fp_is_irreducible(f, p):
            return f
    raise AssertionError("no irreducible polynomial found (impossible)")


class Poly:
    """Dense polynomial over an FqField.  deg(0) is reported as -1; callers
    that need the -infinity convention must special-case is_zero."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FqField, coeffs):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.field = field
        self.coeffs = tuple(c)

    @classmethod
    def zero(cls, field):
        return cls(field, ())

    @classmethod
    def one(cls, field):
        return cls(field, (1,))

    @classmethod
    def constant(cls, field, c):
        return cls(field, (c % field.q if field.k == 1 else c,))

    @classmethod
    def t(cls, field):
        return cls(field, (0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> int:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field.q, self.coeffs))

    def __add__(self, other):
        F = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = F.add(out[i], c)
        return Poly(F, out)

    def __sub__(self, other):
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        out = []
        for i in range(n):
            x = self.coeffs[i] if i < len(self.coeffs) else 0
            y = other.coeffs[i] if i < len(other.coeffs) else 0
            out.append(F.sub(x, y))
        return Poly(F, out)

    def __neg__(self):
        F = self.field
        return Poly(F, (F.neg(c) for c in self.coeffs))

    def __mul__(self, other):
        F = self.field
        if self.is_zero or other.is_zero:
            return Poly.zero(F)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    if y:
                        out[i + j] = F.add(out[i + j], F.mul(x, y))
        return Poly(F, out)

    def scale(self, c: int):
        F = self.field
        return Poly(F, (F.mul(c, x) for x in self.coeffs))

    def shift(self, n: int):
        """Multiply by t^n."""
        if self.is_zero:
            return self
        return Poly(self.field, (0,) * n + self.coeffs)

    def __divmod__(self, other):
        if other.is_zero:
            raise ZeroDivisionError("division by zero polynomial")
        F = self.field
        rem = list(self.coeffs)
        db = other.degree
        quo = [0] * max(len(rem) - db, 0)
        inv_lead = F.inv(other.lead)
        while len(rem) - 1 >= db and rem:
            c = F.mul(rem[-1], inv_lead)
            shift = len(rem) - 1 - db
            quo[shift] = c
            for j, y in enumerate(other.coeffs):
                rem[shift + j] = F.sub(rem[shift + j], F.mul(c, y))
            while rem and rem[-1] == 0:
                rem.pop()
        return Poly(F, quo), Poly(F, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, e: int):
        result = Poly.one(self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def monic(self):
        if self.is_zero:
            return self
        if self.is_monic:
            return self
        return self.scale(self.field.inv(self.lead))

    def evaluate(self, x: int) -> int:
        F = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def derivative(self):
        F = self.field
        out = []
        for i in range(1, len(self.coeffs)):
            # i * c_i; the prime-field scalar i mod p has element code i mod p
            out.append(F.mul(i % F.p, self.coeffs[i]))
        return Poly(F, out)

    def pow_mod(self, e: int, m: "Poly") -> "Poly":
        result = Poly.one(self.field) % m
        base = self % m
        while e:
            if e & 1:
                result = (result * base) % m
            base = (base * base) % m
            e >>= 1
        return result

    def serialize(self) -> str:
        if self.is_zero:
            return "0"
        return ",".join(str(c) for c in self.coeffs)

    def __repr__(self):
        if self.is_zero:
            return "Poly(0)"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append("t" if c == 1 else f"{c}*t")
            else:
                terms.append(f"t^{i}" if c == 1 else f"{c}*t^{i}")
        return "Poly(" + " + ".join(terms) + ")"


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd; gcd(0, 0) = 0."""
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """Extended Euclid: returns (g, s, u) with g monic and s*a + u*b = g."""
    F = a.field
    r0, r1 = a, b
    s0, s1 = Poly.one(F), Poly.zero(F)
    u0, u1 = Poly.zero(F), Poly.one(F)
    while not r1.is_zero:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        u0, u1 = u1, u0 - q * u1
    if r0.is_zero:
        return r0, s0, u0
    c = F.inv(r0.lead)
    return r0.scale(c), s0.scale(c), u0.scale(c)


def poly_lcm(a: Poly, b: Poly) -> Poly:
    if a.is_zero or b.is_zero:
        return Poly.zero(a.field)
    return ((a * b) // poly_gcd(a, b)).monic()


def poly_core(a: Poly, b: Poly) -> dict:
    """Bundle of the four ring operations used everywhere downstream."""
    out = {"sum": a + b, "product": a * b, "gcd": poly_gcd(a, b)}
    if not b.is_zero:
        q, r = divmod(a, b)
        out["quotient"] = q
        out["remainder"] = r
    return out


def multiplicity(f: Poly, p: Poly) -> int:
    """Largest e with p^e | f; f must be nonzero."""
    if f.is_zero:
        raise ValueError("multiplicity of zero polynomial")
    e = 0
    while True:
        q, r = divmod(f, p)
        if not r.is_zero:
            return e
        f = q
        e += 1


def is_squarefree(f: Poly) -> bool:
    if f.is_zero:
        return False
    if f.degree == 0:
        return True
    # any repeated factor divides gcd(f, f'); this covers char p since a
    # square factor g^2 | f forces g | f' as well
    return poly_gcd(f, f.derivative()).degree == 0


def all_polys(field: FqField, max_deg: int) -> list[Poly]:
    """Every polynomial of degree <= max_deg, indexed by its base-q code."""
    q = field.q
    out = []
    for code in range(q ** (max_deg + 1)):
        digits = []
        c = code
        for _ in range(max_deg + 1):
            digits.append(c % q)
            c //= q
        out.append(Poly(field, digits))
    return out


_IRRED_CACHE: dict[tuple, tuple[Poly, ...]] = {}


def irreducibles_of_degree(d: int, field: FqField) -> list[Poly]:
    """All monic irreducibles of degree d, sorted lexicographically by
    coefficient sequence (lowest degree first)."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    q = field.q
    if q**d > ENUM_GUARD:
        raise SizeError(f"irreducible scan q^d = {q}^{d} exceeds guard {ENUM_GUARD}")
    key = (field.p, field.k, field.modulus, d)
    cached = _IRRED_CACHE.get(key)
    if cached is not None:
        return list(cached)
    lower: list[Poly] = []
    for e in range(1, d // 2 + 1):
        lower.extend(irreducibles_of_degree(e, field))
    found = []
    for tail in itertools.product(range(q), repeat=d):
        f = Poly(field, tuple(tail) + (1,))
        if all((f % g).coeffs for g in lower if 2 * g.degree <= d):
            found.append(f)
    assert len(found) == irreducible_count(d, q)
    _IRRED_CACHE[key] = tuple(found)
    return found


def is_irreducible(f: Poly) -> bool:
    if f.degree < 1:
        return False
    for e in range(1, f.degree // 2 + 1):
        for g in irreducibles_of_degree(e, f.field):
            if (f % g).is_zero:
                return False
    return True


def trial_factor(f: Poly) -> list[tuple[Poly, int]]:
    """Factor a nonzero polynomial into monic irreducibles by trial division.
    Only intended for the small degrees that appear in height computations."""
    if f.is_zero:
        raise ValueError("cannot factor zero")
    factors = []
    g = f.monic()
    d = 1
    while g.degree >= 1:
        if d > g.degree // 2:
            factors.append((g, 1))
            break
        for p in irreducibles_of_degree(d, f.field):
            if (g % p).is_zero:
                e = 0
                while (g % p).is_zero:
                    g = g // p
                    e += 1
                factors.append((p, e))
        d += 1
    return factors


def squarefree_decompose(f: Poly) -> tuple[Poly, Poly]:
    """Write f = d * h^2 with d squarefree.  The unit of f stays on d."""
    F = f.field
    unit = f.lead
    d = Poly.constant(F, unit)
    h = Poly.one(F)
    for p, e in trial_factor(f):
        if e % 2:
            d = d * p
        h = h * p ** (e // 2)
    assert d * h * h == f
    return d, h


def quadratic_character(a: Poly, p: Poly, field: FqField) -> int:
    """Legendre-style character of a modulo the monic irreducible p."""
    if field.q % 2 == 0:
        raise CharacteristicError("quadratic character needs odd q")
    r = a % p
    if r.is_zero:
        return 0
    s = r.pow_mod((field.q ** p.degree - 1) // 2, p)
    if s == Poly.one(field):
        return 1
    assert s == Poly.constant(field, field.neg(1)), "character power must be +-1"
    return -1


def count_points_pn(n: int, field: FqField, k: int = 1) -> int:
    """|P^n(F_{q^k})| as an exact integer."""
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    qk = field.q**k
    return (qk ** (n + 1) - 1) // (qk - 1)
