import itertools

import pytest
from hypothesis import given, strategies as st

from perfcx import polys
from perfcx.errors import CapacityExceeded, UnsupportedRing
from perfcx.rings import (ZZ, ComponentPoint, GenericPoint, LocalQuotient, MaxPrime,
                          PolysOverPrimeField, Product, is_prime_elem, is_prime_int,
                          parse_point, prime_factors)


def naive_prime(n):
    return n > 1 and all(n % d for d in range(2, int(n ** 0.5) + 1))


def test_prime_examples():
    assert is_prime_elem(ZZ, 7)
    assert not is_prime_elem(ZZ, 1)
    assert is_prime_elem(ZZ, -7)
    F2 = PolysOverPrimeField(2)
    assert is_prime_elem(F2, (1, 1, 1))  # x^2 + x + 1


def test_miller_rabin_matches_trial_division():
    assert [n for n in range(2000) if is_prime_int(n)] == [n for n in range(2000) if naive_prime(n)]
    assert is_prime_int(2 ** 61 - 1)
    assert not is_prime_int(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7


def _all_polys(p, deg):
    for coeffs in itertools.product(range(p), repeat=deg):
        yield tuple(coeffs) + (1,)


@pytest.mark.parametrize("p,deg", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3)])
def test_irreducibility_against_products(p, deg):
    # oracle: a monic polynomial is reducible iff it is a product of two monic ones of lower degree
    reducible = set()
    for d in range(1, deg // 2 + 1):
        for a in _all_polys(p, d):
            for b in _all_polys(p, deg - d):
                reducible.add(polys.mul(a, b, p))
    for f in _all_polys(p, deg):
        assert polys.is_irreducible(f, p) == (f not in reducible), f


def test_irreducibility_degree_cap():
    with pytest.raises(CapacityExceeded):
        polys.is_irreducible((1,) + (0,) * 20 + (1,), 2)


@given(st.lists(st.integers(0, 4), max_size=6), st.lists(st.integers(0, 4), min_size=1, max_size=4))
def test_poly_division_identity(a, b):
    p = 5
    a, b = polys.trim(a, p), polys.trim(b, p)
    if not b:
        return
    q, r = polys.divmod_(a, b, p)
    assert polys.add(polys.mul(q, b, p), r, p) == a
    assert polys.degree(r) < polys.degree(b)


@given(st.lists(st.integers(0, 2), max_size=5), st.lists(st.integers(0, 2), max_size=5))
def test_poly_xgcd(a, b):
    p = 3
    a, b = polys.trim(a, p), polys.trim(b, p)
    g, s, t = polys.xgcd(a, b, p)
    assert polys.add(polys.mul(s, a, p), polys.mul(t, b, p), p) == g
    if g:
        assert g[-1] == 1


@given(st.integers(-10 ** 6, 10 ** 6), st.integers(-1000, 1000).filter(bool))
def test_integer_divmod_and_canonical(a, b):
    q, r = ZZ.divmod(a, b)
    assert q * b + r == a and abs(r) <= abs(b) // 2 + 1
    assoc, unit = ZZ.canonical(a)
    assert assoc >= 0 and unit * assoc == a and unit in (1, -1)


def test_prime_factors():
    assert prime_factors(ZZ, 360) == [(2, 3), (3, 2), (5, 1)]
    F2 = PolysOverPrimeField(2)
    # x^3 + 1 = (x + 1)(x^2 + x + 1) over F_2
    assert prime_factors(F2, (1, 0, 0, 1)) == [((1, 1), 1), ((1, 1, 1), 1)]


def test_local_quotient_arithmetic():
    R = LocalQuotient(ZZ, 3, 2)
    assert R.modulus == 9
    assert R.reduce(-1) == 8
    assert R.valuation(0) == 2 and R.valuation(6) == 1 and R.valuation(4) == 0
    assert R.is_unit(4) and not R.is_unit(3)
    assert R.mul(R.inverse(4), 4) == 1
    assert R.canonical(6) == (3, R.canonical(6)[1]) and R.mul(3, R.canonical(6)[1]) == 6
    assert R.residue_field() == LocalQuotient(ZZ, 3, 1)


def test_quotient_rejects_bad_parameters():
    with pytest.raises(UnsupportedRing):
        LocalQuotient(ZZ, 4, 1)
    with pytest.raises(UnsupportedRing):
        LocalQuotient(ZZ, 2, 0)
    with pytest.raises(UnsupportedRing):
        Product(())


def test_product_ring():
    R = Product((LocalQuotient(ZZ, 2, 2), LocalQuotient(ZZ, 3, 2)))
    assert R.from_int(7) == (3, 7)
    assert R.parse("7") == (3, 7)
    assert R.mul((2, 3), (2, 3)) == (0, 0)
    assert R.is_unit((1, 2)) and not R.is_unit((2, 1))


def test_points():
    assert parse_point(ZZ, "(0)") == GenericPoint()
    assert parse_point(ZZ, "-5") == MaxPrime(5)
    with pytest.raises(ValueError):
        parse_point(ZZ, "6")
    R = Product((LocalQuotient(ZZ, 2, 2), LocalQuotient(ZZ, 3, 2)))
    assert parse_point(R, "c1") == ComponentPoint(1)
    assert MaxPrime(5).label(ZZ) == "5"
