import pytest
from hypothesis import given, settings, strategies as st

from hilbcount.errors import CharacteristicError, SizeError
from hilbcount.fqarith import (
    FqField,
    Poly,
    all_polys,
    count_points_pn,
    field_from_order,
    irreducible_count,
    irreducibles_of_degree,
    is_irreducible,
    is_prime,
    is_squarefree,
    mobius,
    multiplicity,
    poly_core,
    poly_gcd,
    poly_lcm,
    poly_xgcd,
    quadratic_character,
    squarefree_decompose,
    trial_factor,
)

F2 = FqField(2)
F3 = FqField(3)
F5 = FqField(5)
F9 = FqField(3, 2)


def poly_from_code(field, code, length):
    digits = []
    for _ in range(length):
        digits.append(code % field.q)
        code //= field.q
    return Poly(field, digits)


codes = st.integers(min_value=0, max_value=3**5 - 1)


def test_is_prime_and_mobius():
    assert [n for n in range(2, 20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert [mobius(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]
    with pytest.raises(ValueError):
        mobius(0)


def test_field_from_order():
    assert field_from_order(9).q == 9
    assert field_from_order(7).q == 7
    with pytest.raises(ValueError):
        field_from_order(6)
    with pytest.raises(ValueError):
        field_from_order(1)


@pytest.mark.parametrize("field", [F2, F3, F5, F9])
def test_field_axioms(field):
    elems = list(field.elements())
    assert len(elems) == field.q
    for a in elems:
        assert field.add(a, field.neg(a)) == 0
        if a != 0:
            assert field.mul(a, field.inv(a)) == 1
    # squares: exactly (q-1)/2 nonzero squares for odd q, and sqrt verifies
    if field.q % 2 == 1:
        squares = {field.mul(a, a) for a in elems if a != 0}
        assert len(squares) == (field.q - 1) // 2
        for s in squares:
            assert field.is_square_unit(s)
            r = field.sqrt_unit(s)
            assert field.mul(r, r) == s
        for a in elems:
            if a != 0 and a not in squares:
                assert not field.is_square_unit(a)


def test_extension_field_modulus_irreducible():
    # the modulus used for F_9 must be irreducible over F_3
    mod = Poly(F3, F9.modulus)
    assert is_irreducible(mod)
    assert mod.degree == 2


@given(a=codes, b=codes)
@settings(max_examples=60, deadline=None)
def test_poly_divmod(a, b):
    pa = poly_from_code(F3, a, 5)
    pb = poly_from_code(F3, b, 5)
    if pb.is_zero:
        return
    q, r = divmod(pa, pb)
    assert q * pb + r == pa
    assert r.is_zero or r.degree < pb.degree


@given(a=codes, b=codes)
@settings(max_examples=60, deadline=None)
def test_gcd_xgcd(a, b):
    pa = poly_from_code(F3, a, 5)
    pb = poly_from_code(F3, b, 5)
    if pa.is_zero and pb.is_zero:
        return
    g = poly_gcd(pa, pb)
    assert g.is_monic
    assert (pa % g).is_zero and (pb % g).is_zero
    g2, s, u = poly_xgcd(pa, pb)
    assert g2 == g
    assert s * pa + u * pb == g
    lcm = poly_lcm(pa, pb)
    if not (pa.is_zero or pb.is_zero):
        assert (lcm % pa).is_zero and (lcm % pb).is_zero
        assert lcm.degree == pa.degree + pb.degree - g.degree


def test_poly_core_bundle():
    t = Poly.t(F3)
    a, b = t * t, t * (t + Poly.one(F3))
    bundle = poly_core(a, b)
    assert bundle["gcd"] == t
    assert bundle["product"] == a * b
    assert bundle["quotient"] * b + bundle["remainder"] == a


def test_serialize():
    t = Poly.t(F2)
    one = Poly.one(F2)
    assert (one + t * t).serialize() == "1,0,1"
    assert Poly.zero(F2).serialize() == "0"


@pytest.mark.parametrize("field,dmax", [(F2, 5), (F3, 4), (F5, 3)])
def test_irreducibles_of_degree(field, dmax):
    for d in range(1, dmax + 1):
        irr = irreducibles_of_degree(d, field)
        assert len(irr) == irreducible_count(d, field.q)
        for p in irr:
            assert p.is_monic and is_irreducible(p)


def test_all_polys_complete():
    ps = all_polys(F3, 2)
    assert len(ps) == 27
    assert len({p.coeffs for p in ps}) == 27


@given(a=codes)
@settings(max_examples=40, deadline=None)
def test_trial_factor_reassembles(a):
    f = poly_from_code(F3, a, 5)
    if f.is_zero:
        return
    prod = Poly.constant(F3, f.lead)
    for p, e in trial_factor(f):
        assert is_irreducible(p)
        prod = prod * p**e
    assert prod == f


@given(a=codes)
@settings(max_examples=40, deadline=None)
def test_squarefree_decompose(a):
    f = poly_from_code(F3, a, 5)
    if f.is_zero:
        return
    d, h = squarefree_decompose(f)
    assert d * h * h == f
    assert d.degree == 0 or is_squarefree(d)


def test_multiplicity():
    t = Poly.t(F3)
    f = t * t * (t + Poly.one(F3))
    assert multiplicity(f, t) == 2
    assert multiplicity(f, t + Poly.one(F3)) == 1
    assert multiplicity(f, t + Poly.constant(F3, 2)) == 0


@pytest.mark.parametrize("field", [F3, F5])
def test_quadratic_character_matches_exhaustive(field):
    for p in irreducibles_of_degree(1, field) + irreducibles_of_degree(2, field):
        residues = [f % p for f in all_polys(field, p.degree - 1)]
        squares = {(r * r % p).coeffs for r in residues}
        for a in all_polys(field, 2):
            chi = quadratic_character(a, p, field)
            if (a % p).is_zero:
                assert chi == 0
            elif (a % p).coeffs in squares:
                assert chi == 1
            else:
                assert chi == -1


def test_quadratic_character_even_q_rejected():
    t = Poly.t(F2)
    with pytest.raises(CharacteristicError):
        quadratic_character(Poly.one(F2), t, F2)


def test_count_points_pn():
    assert count_points_pn(2, F2) == 7
    assert count_points_pn(2, F3) == 13
    assert count_points_pn(2, F2, k=2) == 21  # P^2(F_4)


def test_enumeration_guard():
    with pytest.raises(SizeError):
        irreducibles_of_degree(40, F5)
