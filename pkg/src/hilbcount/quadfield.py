"""Places, valuations, and heights in quadratic extensions L = F_q(t)(sqrt(D))
with q odd, plus enumeration of the degree-2 points of the projective plane
of a given exact height.

Height normalization: |x|_w = q^(-w(x) deg(w)) with w the normalized
(surjective onto Z) valuation, deg(w) = f_w * deg(base place), and the
infinite base place of F_q(t) given degree 1.  This is the unique choice
satisfying the product formula in L, and H(x) = (prod_w max_i |x_i|_w)^(1/2)
is then Galois- and scaling-invariant.

Enumeration strategy: every degree-2 point of the plane lies on a unique
rational line, and on that line corresponds to a unique irreducible binary
quadratic form over F_q[t] (primitive, leading coefficient monic).  Writing
the line's module of sections in a reduced basis (P, Q) with degrees
d_P <= d_Q (leading coefficient vectors independent over F_q), the squared
height of the point attached to a form F is exactly

    H^2 = q^(deg F) * prod_{w | infty} max(|z|_w q^(e f d_P), q^(e f d_Q))
                                       / max(|z|_w, 1)

with z the root of F, so it depends on the line only through (d_P, d_Q).
Counting therefore factors as (number of lines per degree class) times
(number of forms matching the target height per class).  The bounds
2 d_Q <= M and deg F <= M are provable from H^2 >= q^(2 d_Q) and
H^2 >= q^(deg F + 2 d_P), so the search is complete; the stability flag is
still computed by exhaustively probing enlarged bounds.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from . import ratpoints
from .errors import CharacteristicError, SizeError, WrongDegreeError
from .fqarith import (
    FqField,
    Poly,
    is_squarefree,
    multiplicity,
    poly_gcd,
    poly_lcm,
    poly_xgcd,
    quadratic_character,
    squarefree_decompose,
)

INF = math.inf

# residue fields larger than this fall back from exhaustive square roots
SQRT_SEARCH_GUARD = 2 * 10**6
# max coefficient triples scanned per form enumeration pass
FORM_GUARD = 2 * 10**7


class _Infinity:
    def __repr__(self):
        return "INFINITE_PLACE"


INFINITE_PLACE = _Infinity()


def _require_odd(field: FqField):
    if field.q % 2 == 0:
        raise CharacteristicError("quadratic extensions need odd q")


class RatFunc:
    """Reduced fraction of polynomials with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        field = num.field
        if den is None:
            den = Poly.one(field)
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        if num.is_zero:
            den = Poly.one(field)
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
            if not den.is_monic:
                c = field.inv(den.lead)
                num, den = num.scale(c), den.scale(c)
        self.num = num
        self.den = den

    @property
    def field(self):
        return self.num.field

    @property
    def is_zero(self):
        return self.num.is_zero

    def __eq__(self, other):
        return (
            isinstance(other, RatFunc)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other):
        return RatFunc(self.num * other.den - other.num * self.den, self.den * other.den)

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __mul__(self, other):
        return RatFunc(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        if other.is_zero:
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def serialize(self) -> str:
        return f"{self.num.serialize()}|{self.den.serialize()}"

    def __repr__(self):
        return f"RatFunc({self.num!r}/{self.den!r})"


class QuadExt:
    """L = F_q(t)(sqrt(D)) for squarefree D (or a nonsquare constant)."""

    def __init__(self, field: FqField, d: Poly):
        _require_odd(field)
        if d.is_zero:
            raise ValueError("D must be nonzero")
        if d.degree == 0:
            if field.is_square_unit(d.lead):
                raise ValueError("constant D must be a nonsquare unit")
        elif not is_squarefree(d):
            raise ValueError("D must be squarefree")
        self.field = field
        self.d = d
        self.deg_d = d.degree

    def __eq__(self, other):
        return isinstance(other, QuadExt) and self.field == other.field and self.d == other.d

    def __hash__(self):
        return hash((self.field, self.d))

    def infinite_type(self) -> str:
        if self.deg_d % 2 == 1:
            return "ramified"
        return "split" if self.field.is_square_unit(self.d.lead) else "inert"

    def element(self, a, b) -> "QuadElem":
        if isinstance(a, Poly):
            a = RatFunc(a)
        if isinstance(b, Poly):
            b = RatFunc(b)
        return QuadElem(self, a, b)

    def __repr__(self):
        return f"QuadExt(q={self.field.q}, D={self.d!r})"


class QuadElem:
    """a + b sqrt(D) with rational-function parts."""

    __slots__ = ("ext", "a", "b")

    def __init__(self, ext: QuadExt, a: RatFunc, b: RatFunc):
        self.ext = ext
        self.a = a
        self.b = b

    @property
    def is_zero(self):
        return self.a.is_zero and self.b.is_zero

    def __eq__(self, other):
        return (
            isinstance(other, QuadElem)
            and self.ext == other.ext
            and self.a == other.a
            and self.b == other.b
        )

    def __add__(self, other):
        return QuadElem(self.ext, self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        return QuadElem(self.ext, self.a - other.a, self.b - other.b)

    def __neg__(self):
        return QuadElem(self.ext, -self.a, -self.b)

    def __mul__(self, other):
        d = RatFunc(self.ext.d)
        return QuadElem(
            self.ext,
            self.a * other.a + d * (self.b * other.b),
            self.a * other.b + self.b * other.a,
        )

    def conj(self):
        return QuadElem(self.ext, self.a, -self.b)

    def norm(self) -> RatFunc:
        d = RatFunc(self.ext.d)
        return self.a * self.a - d * (self.b * self.b)

    def trace(self) -> RatFunc:
        return self.a + self.a

    def scalar_mul(self, r: RatFunc):
        return QuadElem(self.ext, self.a * r, self.b * r)

    def __truediv__(self, other):
        if other.is_zero:
            raise ZeroDivisionError("division by zero element")
        n = other.norm()
        w = self * other.conj()
        return QuadElem(w.ext, w.a / n, w.b / n)

    def __repr__(self):
        return f"QuadElem({self.a!r} + {self.b!r}*sqrt(D))"


@dataclass(frozen=True, eq=False)
class PlaceQ:
    """A place of L above a place of F_q(t); seed fixes the split branch."""

    ext: QuadExt
    base: object  # monic irreducible Poly, or INFINITE_PLACE
    kind: str  # split | inert | ramified
    e: int
    f: int
    seed: object = None  # split: residue sqrt of D (Poly) / field code at infinity

    @property
    def base_degree(self) -> int:
        return 1 if self.base is INFINITE_PLACE else self.base.degree

    @property
    def degree(self) -> int:
        return self.f * self.base_degree

    def __repr__(self):
        return f"PlaceQ({self.base!r}, {self.kind})"


def _sqrt_mod(c: Poly, p: Poly, field: FqField) -> Poly:
    """A square root of the nonzero residue c in F_q[t]/(p), by power trick
    when the residue field has Q = 3 mod 4, else exhaustive search."""
    Q = field.q**p.degree
    c = c % p
    assert not c.is_zero
    if Q % 4 == 3:
        r = c.pow_mod((Q + 1) // 4, p)
        assert ((r * r - c) % p).is_zero, "residue is not a square"
        return r
    if Q > SQRT_SEARCH_GUARD:
        raise SizeError(f"residue field of size {Q} exceeds sqrt search guard")
    q = field.q
    for code in range(1, Q):
        digits = []
        x = code
        for _ in range(p.degree):
            digits.append(x % q)
            x //= q
        r = Poly(field, digits)
        if ((r * r - c) % p).is_zero:
            return r
    raise ValueError("residue is not a square")


def _poly_modinv(a: Poly, mod: Poly) -> Poly:
    g, s, _ = poly_xgcd(a % mod, mod)
    assert g == Poly.one(a.field), "element not invertible modulo the given power"
    return s % mod


def _hensel_sqrt(d: Poly, p: Poly, seed: Poly, prec: int) -> Poly:
    """Lift seed (a sqrt of d mod p) to a sqrt of d mod p^prec by Newton."""
    r = seed % p
    k = 1
    while k < prec:
        k = min(2 * k, prec)
        mod = p**k
        inv = _poly_modinv(r + r, mod)
        r = ((r * r + d) * inv) % mod
    assert ((r * r - d) % p**prec).is_zero
    return r


def splitting_type(v, ext: QuadExt) -> tuple[PlaceQ, ...]:
    """The places of L above the place v of F_q(t) (v = monic irreducible
    or INFINITE_PLACE), with (e, f) and split-branch seeds."""
    field = ext.field
    if v is INFINITE_PLACE:
        kind = ext.infinite_type()
        if kind == "ramified":
            return (PlaceQ(ext, v, "ramified", 2, 1),)
        if kind == "inert":
            return (PlaceQ(ext, v, "inert", 1, 2),)
        r = field.sqrt_unit(ext.d.lead)
        return (
            PlaceQ(ext, v, "split", 1, 1, seed=r),
            PlaceQ(ext, v, "split", 1, 1, seed=field.neg(r)),
        )
    chi = quadratic_character(ext.d, v, field)
    if chi == 0:
        assert multiplicity(ext.d, v) == 1  # squarefree
        return (PlaceQ(ext, v, "ramified", 2, 1),)
    if chi == -1:
        return (PlaceQ(ext, v, "inert", 1, 2),)
    r = _sqrt_mod(ext.d, v, field)
    return (
        PlaceQ(ext, v, "split", 1, 1, seed=r),
        PlaceQ(ext, v, "split", 1, 1, seed=(-r) % v),
    )


def _split_finite_valuation(A: Poly, B: Poly, d: Poly, p: Poly, seed: Poly) -> int:
    """w(A + B sqrt(d)) at a finite split place with branch seed."""
    if B.is_zero:
        return multiplicity(A, p)
    if A.is_zero:
        return multiplicity(B, p)  # sqrt(d) is a unit at a split place
    norm = A * A - d * B * B
    prec = multiplicity(norm, p) + 1
    r = _hensel_sqrt(d, p, seed, prec)
    g = (A + B * r) % p**prec
    assert not g.is_zero, "split valuation reached its precision bound"
    v = multiplicity(g, p)
    assert v < prec
    return v


def _reverse(f: Poly) -> Poly:
    return Poly(f.field, tuple(reversed(f.coeffs)))


def _integral_valuation(w: PlaceQ, A: Poly, B: Poly):
    """w(A + B sqrt(D)) for polynomial parts, not both zero."""
    ext = w.ext
    d = ext.d
    if w.base is INFINITE_PLACE:
        if w.kind == "ramified":
            va = INF if A.is_zero else -2 * A.degree
            vb = INF if B.is_zero else -2 * B.degree - d.degree
            return min(va, vb)
        if w.kind == "inert":
            norm = A * A - d * B * B
            v = -norm.degree
            assert v % 2 == 0, "inert valuation numerator must be even"
            return v // 2
        # split at infinity: move to u = 1/t coordinates and reuse the
        # finite-split routine at the place u
        field = ext.field
        if B.is_zero:
            return -A.degree
        dpr = ext.deg_d // 2
        if A.is_zero:
            return -B.degree - dpr
        m = max(A.degree, B.degree + dpr)
        P1 = _reverse(A).shift(m - A.degree)
        P2 = _reverse(B).shift(m - B.degree - dpr)
        dt = _reverse(d)  # deg d = 2 dpr exactly, so this is u^(2dpr) d(1/u)
        u = Poly.t(field)
        return _split_finite_valuation(P1, P2, dt, u, Poly.constant(field, w.seed)) - m
    p = w.base
    if w.kind == "ramified":
        va = INF if A.is_zero else 2 * multiplicity(A, p)
        vb = INF if B.is_zero else 2 * multiplicity(B, p) + 1
        return min(va, vb)
    if w.kind == "inert":
        norm = A * A - d * B * B
        v = multiplicity(norm, p)
        assert v % 2 == 0, "inert valuation numerator must be even"
        return v // 2
    return _split_finite_valuation(A, B, d, p, w.seed)


def valuation(z: QuadElem, w: PlaceQ) -> int:
    """Normalized valuation of z at w (surjective onto Z)."""
    if z.is_zero:
        raise ZeroDivisionError("valuation of zero")
    h = poly_lcm(z.a.den, z.b.den)
    A = z.a.num * (h // z.a.den)
    B = z.b.num * (h // z.b.den)
    v = _integral_valuation(w, A, B)
    if w.base is INFINITE_PLACE:
        vh = -h.degree
    else:
        vh = multiplicity(h, w.base)
    return v - w.e * vh


def infinite_places(ext: QuadExt) -> tuple[PlaceQ, ...]:
    return splitting_type(INFINITE_PLACE, ext)


def _finite_support(polys: list[Poly]) -> list[Poly]:
    """Monic irreducible factors of the gcd of the given nonzero polynomials."""
    from .fqarith import trial_factor

    g = Poly.zero(polys[0].field)
    for f in polys:
        g = poly_gcd(g, f)
        if g.degree == 0:
            return []
    return [p for p, _ in trial_factor(g)]


@dataclass(frozen=True)
class DegreeTwoPoint:
    ext: QuadExt
    coords: tuple[QuadElem, ...]  # polynomial parts, canonical
    orbit_key: tuple


def _orbit_key(ext: QuadExt, y: tuple[QuadElem, ...]) -> tuple:
    """Conjugation- and presentation-invariant key: the values x_i conj(x_i)
    and x_i conj(x_j) + x_j conj(x_i) of the pivot-normalized coordinates.
    These live in F_q(t) and do not depend on which sqrt(D) presentation of
    the residue field was used."""
    d = RatFunc(ext.d)
    parts = []
    n = len(y)
    for i in range(n):
        parts.append((y[i].a * y[i].a - d * (y[i].b * y[i].b)).serialize())
    for i in range(n):
        for j in range(i + 1, n):
            tij = (y[i].a * y[j].a - d * (y[i].b * y[j].b))
            parts.append((tij + tij).serialize())
    return tuple(parts)


def canonicalize_quadratic(ext: QuadExt, coords) -> DegreeTwoPoint:
    """Scale by the inverse of the first nonzero coordinate, clear
    denominators, remove polynomial content, and normalize the leading unit.
    Raises WrongDegreeError when the point is actually rational."""
    coords = tuple(coords)
    nonzero = [c for c in coords if not c.is_zero]
    if not nonzero:
        raise ValueError("all coordinates are zero")
    pivot = next(c for c in coords if not c.is_zero)
    y = tuple(c / pivot for c in coords)
    if all(c.b.is_zero for c in y):
        raise WrongDegreeError("point is rational (degree 1), not degree 2")
    key = _orbit_key(ext, y)
    field = ext.field
    h = Poly.one(field)
    for c in y:
        h = poly_lcm(h, c.a.den)
        h = poly_lcm(h, c.b.den)
    apols = [c.a.num * (h // c.a.den) for c in y]
    bpols = [c.b.num * (h // c.b.den) for c in y]
    g = Poly.zero(field)
    for f in apols + bpols:
        g = poly_gcd(g, f)
        if g.degree == 0:
            break
    if g.degree > 0:
        apols = [f // g for f in apols]
        bpols = [f // g for f in bpols]
    lead = None
    for ai, bi in zip(apols, bpols):
        if not ai.is_zero:
            lead = ai.lead
            break
        if not bi.is_zero:
            lead = bi.lead
            break
    c = field.inv(lead)
    apols = [f.scale(c) for f in apols]
    bpols = [f.scale(c) for f in bpols]
    out = tuple(ext.element(a, b) for a, b in zip(apols, bpols))
    return DegreeTwoPoint(ext, out, key)


def conjugate_point(P: DegreeTwoPoint) -> DegreeTwoPoint:
    return canonicalize_quadratic(P.ext, tuple(c.conj() for c in P.coords))


def height_degree2(P: DegreeTwoPoint) -> Fraction:
    """Exponent h with H(P) = q^h (h a half-integer >= 0)."""
    ext = P.ext
    nonzero = [c for c in P.coords if not c.is_zero]
    total = 0
    for w in infinite_places(ext):
        m = min(valuation(c, w) for c in nonzero)
        total -= w.degree * m
    norms = [c.norm().num for c in nonzero]  # denominators are 1
    for p in _finite_support(norms):
        for w in splitting_type(p, ext):
            m = min(valuation(c, w) for c in nonzero)
            total -= w.degree * m
    h = Fraction(total, 2)
    assert h >= 0
    return h


def product_formula_defect(z: QuadElem) -> int:
    """sum_w w(z) deg(w) over all places where z can have nonzero valuation;
    zero iff the normalization is consistent."""
    from .fqarith import trial_factor

    ext = z.ext
    support: dict = {}
    norm = z.norm()
    for f in (norm.num, norm.den, ext.d):
        if f.degree > 0:
            for p, _ in trial_factor(f):
                support[p] = True
    total = 0
    for w in infinite_places(ext):
        total += valuation(z, w) * w.degree
    for p in support:
        for w in splitting_type(p, ext):
            total += valuation(z, w) * w.degree
    return total


# --- enumeration of degree-2 points of the plane ---


def kt_main_term(field: FqField, M: int) -> Fraction:
    """2 S^2 q^(3M) M, the conjectured point count (two points per orbit)."""
    S = ratpoints.schanuel_constant(2, field)
    return 2 * S * S * Fraction(field.q) ** (3 * M) * M


def _line_basis(lams: tuple[Poly, Poly, Poly]):
    """A basis of the saturated kernel {X : lam . X = 0} for a coprime lam.
    The cross product of the returned vectors equals lam exactly."""
    l0, l1, l2 = lams
    field = l0.field
    zero, one = Poly.zero(field), Poly.one(field)
    if l0.is_zero and l1.is_zero:
        # lam = (0, 0, 1) in canonical form
        return (one, zero, zero), (zero, one, zero)
    g1, a, b = poly_xgcd(l0, l1)
    u1 = (-(l1 // g1), l0 // g1, zero)
    u2 = (-(a * l2), -(b * l2), g1)
    return u1, u2


def _vec_degree(v) -> int:
    return max(c.degree for c in v if not c.is_zero)


def _lead_vector(v, d: int):
    return tuple(c.coeffs[d] if len(c.coeffs) > d else 0 for c in v)


def _reduce_basis(u1, u2):
    """Reduce at infinity until the leading coefficient vectors are
    independent over F_q; returns ((P, d_P), (Q, d_Q)) with d_P <= d_Q."""
    field = u1[0].field
    while True:
        d1, d2 = _vec_degree(u1), _vec_degree(u2)
        if d1 > d2:
            u1, u2 = u2, u1
            d1, d2 = d2, d1
        L1 = _lead_vector(u1, d1)
        L2 = _lead_vector(u2, d2)
        i = next(i for i, c in enumerate(L1) if c)
        c = field.mul(L2[i], field.inv(L1[i]))
        if c == 0 or any(L2[j] != field.mul(c, L1[j]) for j in range(3)):
            return (u1, d1), (u2, d2)
        shift = d2 - d1
        u2 = tuple(x2 - x1.scale(c).shift(shift) for x1, x2 in zip(u1, u2))
        assert any(not x.is_zero for x in u2), "basis degenerated (impossible)"


def _line_classes(field: FqField, dq_cap: int) -> Counter:
    """Counter {(d_P, d_Q): number of lines} over all rational lines whose
    reduced basis has d_Q <= dq_cap (dual height d_P + d_Q <= 2 dq_cap)."""
    classes: Counter = Counter()
    for N in range(0, 2 * dq_cap + 1):
        for pt in ratpoints.enumerate_exact_height(2, field, N):
            u1, u2 = _line_basis(pt.coords)
            (_, dP), (_, dQ) = _reduce_basis(u1, u2)
            assert dP + dQ == N, "reduced basis degrees must sum to dual height"
            if dQ <= dq_cap:
                classes[(dP, dQ)] += 1
    return classes


@dataclass(frozen=True)
class FormData:
    """Infinity data of a primitive irreducible form A s^2 + B s u + C u^2."""

    deg_f: int
    inf_kind: str  # split2 (distinct slopes) | split1 | inert | ramified
    slopes: tuple  # (v1, v2) for split2, else (W,) with W = alpha - gamma


def _form_exponent(fd: FormData, dP: int, dQ: int) -> int:
    """Exponent of q in H^2 for the point of this form on a (d_P, d_Q) line."""
    if fd.inf_kind == "split2":
        g = 0
        for v in fd.slopes:
            g += max(dP - v, dQ) - max(-v, 0)
    elif fd.inf_kind == "split1":
        v0 = fd.slopes[0] // 2
        g = 2 * (max(dP - v0, dQ) - max(-v0, 0))
    else:
        W = fd.slopes[0]
        g = max(2 * dP - W, 2 * dQ) - max(-W, 0)
    assert g >= 0
    return fd.deg_f + g


def _classify_form(A: Poly, B: Poly, C: Poly, disc: Poly, field: FqField) -> FormData:
    alpha = A.degree
    gamma = C.degree
    beta = B.degree if not B.is_zero else None
    deg_f = max(alpha, gamma) if beta is None else max(alpha, beta, gamma)
    if disc.degree % 2 == 1:
        kind = "ramified"
    elif field.is_square_unit(disc.lead):
        kind = "split"
    else:
        kind = "inert"
    if beta is not None and 2 * beta > alpha + gamma:
        assert kind == "split", "distinct Newton slopes force a split infinity"
        return FormData(deg_f, "split2", (alpha - beta, beta - gamma))
    if kind == "split":
        assert (alpha - gamma) % 2 == 0
        return FormData(deg_f, "split1", (alpha - gamma,))
    return FormData(deg_f, kind, (alpha - gamma,))


def _poly_sqrt(f: Poly) -> Poly | None:
    """The polynomial square root of f, or None.  f nonzero, even degree,
    square leading unit assumed pre-checked."""
    field = f.field
    n = f.degree // 2
    g = [0] * (n + 1)
    g[n] = field.sqrt_unit(f.lead)
    two = field.add(1, 1)
    inv_top = field.inv(field.mul(two, g[n]))
    for k in range(1, n + 1):
        idx = 2 * n - k
        acc = f.coeffs[idx] if idx < len(f.coeffs) else 0
        # known ordered cross terms: g_i g_{idx-i} with both indices above n-k
        for i in range(n - k + 1, n):
            acc = field.sub(acc, field.mul(g[i], g[idx - i]))
        g[n - k] = field.mul(acc, inv_top)
    cand = Poly(field, g)
    return cand if cand * cand == f else None


def _is_square_poly(f: Poly) -> bool:
    if f.is_zero:
        return True
    if f.degree % 2 == 1:
        return False
    if not f.field.is_square_unit(f.lead):
        return False
    if f.degree == 0:
        return True
    return _poly_sqrt(f) is not None


def _form_stream(field: FqField, fmax: int, a_codes=None, min_deg: int = 0):
    """Yield (A, B, C, disc) over primitive forms with monic A, nonsquare
    discriminant, and coefficient degrees <= fmax (max degree >= min_deg)."""
    from .fqarith import all_polys

    polys = all_polys(field, fmax)
    monic_codes = [i for i, f in enumerate(polys) if f.is_monic]
    ncodes = len(polys)
    if len(monic_codes) * ncodes * ncodes > FORM_GUARD:
        raise SizeError("form enumeration exceeds guard")
    if a_codes is None:
        a_codes = monic_codes
    bsq = [f * f for f in polys]
    four = field.add(field.add(1, 1), field.add(1, 1))
    degs = [f.degree for f in polys]
    for ai in a_codes:
        A = polys[ai]
        dA = degs[ai]
        for ci in range(1, ncodes):
            C = polys[ci]
            ac4 = (A * C).scale(four)
            gAC = poly_gcd(A, C)
            dmaxAC = max(dA, degs[ci])
            for bi in range(ncodes):
                if dmaxAC < min_deg and degs[bi] < min_deg:
                    continue
                B = polys[bi]
                disc = bsq[bi] - ac4
                if disc.is_zero or _is_square_poly(disc):
                    continue
                if gAC.degree > 0 and poly_gcd(gAC, B).degree > 0:
                    continue
                yield A, B, C, disc


def _match_counts(field, fmax, classes, M, min_deg=0, jobs=1):
    """For each (d_P, d_Q) class, how many forms give exponent exactly M."""
    counts = {cls: 0 for cls in classes}

    def run(a_codes):
        local = {cls: 0 for cls in classes}
        for A, B, C, disc in _form_stream(field, fmax, a_codes, min_deg):
            fd = _classify_form(A, B, C, disc, field)
            for cls in classes:
                if _form_exponent(fd, *cls) == M:
                    local[cls] += 1
        return local

    if jobs <= 1:
        return run(None)
    from concurrent.futures import ThreadPoolExecutor

    from .fqarith import all_polys

    monic = [i for i, f in enumerate(all_polys(field, fmax)) if f.is_monic]
    chunks = [monic[i::jobs] for i in range(jobs)]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        for local in pool.map(run, chunks):
            for cls, v in local.items():
                counts[cls] += v
    return counts


@dataclass(frozen=True)
class QuadraticCount:
    q: int
    M: int
    count: int
    stable: bool
    main_term: Fraction  # kt_main_term
    ratio: Fraction  # count / main_term; tends to 1/2 (orbits vs points)


def enumerate_degree2(
    field: FqField, M: int, bound: tuple[int, int] | None = None, jobs: int = 1
) -> QuadraticCount:
    """Count Galois orbits of degree-2 points of the plane with H^2 = q^M.

    bound = (dq_cap, fmax) caps the line class d_Q and the form coefficient
    degrees; the defaults (M // 2, M) are complete by the height inequalities
    in the module docstring.  The stability flag re-probes with both caps
    enlarged: boundary line classes are checked to contribute no matching
    form (so their line counts are irrelevant), and the enlarged form scan
    must add no matches to any class."""
    _require_odd(field)
    if M < 1:
        raise ValueError("M >= 1 required")
    dq_cap, fmax = bound if bound is not None else (M // 2, M)
    classes = _line_classes(field, dq_cap)
    boundary = [
        (dP, dQ)
        for dQ in (dq_cap + 1, dq_cap + 2)
        for dP in range(dQ + 1)
    ]
    all_classes = sorted(set(classes) | set(boundary))
    matches = _match_counts(field, fmax, all_classes, M, jobs=jobs)
    count = sum(classes[cls] * matches.get(cls, 0) for cls in classes)
    stable = all(matches[cls] == 0 for cls in boundary)
    # enlarged form scan: degrees in (fmax, fmax+2] must contribute nothing
    extra = _match_counts(field, fmax + 2, all_classes, M, min_deg=fmax + 1, jobs=jobs)
    stable = stable and all(v == 0 for v in extra.values())
    main = kt_main_term(field, M)
    return QuadraticCount(field.q, M, count, stable, main, Fraction(count) / main)


def degree2_orbits(field: FqField, M: int):
    """Construct each counted orbit explicitly (slow; for cross-validation).
    Yields DegreeTwoPoint values, one per orbit."""
    _require_odd(field)
    dq_cap, fmax = M // 2, M
    forms = [
        (A, B, C, disc, _classify_form(A, B, C, disc, field))
        for A, B, C, disc in _form_stream(field, fmax)
    ]
    for N in range(0, 2 * dq_cap + 1):
        for pt in ratpoints.enumerate_exact_height(2, field, N):
            u1, u2 = _line_basis(pt.coords)
            (P, dP), (Q, dQ) = _reduce_basis(u1, u2)
            if dQ > dq_cap:
                continue
            for A, B, C, disc, fd in forms:
                if _form_exponent(fd, dP, dQ) != M:
                    continue
                d0, h = squarefree_decompose(disc)
                ext = QuadExt(field, d0)
                two_a = A + A
                coords = []
                for Pi, Qi in zip(P, Q):
                    coords.append(ext.element(-(B * Pi) + two_a * Qi, h * Pi))
                yield canonicalize_quadratic(ext, coords)


@dataclass(frozen=True)
class Hilb2Splits:
    irreducible_main: Fraction  # S^2 q^(3M) M
    reducible: ratpoints.PairCount  # exact
    total_main: Fraction  # (3/2) S^2 q^(3M) M
    sym_coeff: Fraction  # S^2/6, the smoothed Sym^2 coefficient


def hilb2_split_counts(field: FqField, M: int) -> Hilb2Splits:
    """The two displayed main terms for Hilb^2 of the plane at H = q^M,
    the exact reducible count, and the reindexing identity against the
    Sym^2 coefficient S^2/6: heights of split points are supported on
    exponents divisible by 3, so the on-support constant is 3 times the
    smoothed one, total_main = 3 * (S^2/6) * q^(3M) * (3M)."""
    if M < 1:
        raise ValueError("M >= 1 required")
    S = ratpoints.schanuel_constant(2, field)
    q3m = Fraction(field.q) ** (3 * M)
    irreducible = S * S * q3m * M
    reducible = ratpoints.count_reducible_pairs(field, M)
    total = Fraction(3, 2) * S * S * q3m * M
    sym_coeff = S * S / 6
    assert total == 3 * sym_coeff * q3m * (3 * M)
    assert Fraction(1, 9) + Fraction(1, 18) == Fraction(1, 6)
    return Hilb2Splits(irreducible, reducible, total, sym_coeff)
