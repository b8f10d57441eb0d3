import random

import pytest

from oracles import p_torsion_length
from perfcx.complexes import (PerfectComplex, direct_sum, homology, moore, shift, split_product,
                              tensor, unit_complex, zero_complex)
from perfcx.errors import NonTorsionInput, UnsupportedSupport
from perfcx.invariants import (ThickSupport, alternating_rank_sum, chi_F, k0_class, k0_module_roundtrip,
                               lambda_artin, lambda_p, report, supp)
from perfcx.matrix import Matrix
from perfcx.rings import ZZ, ComponentPoint, GenericPoint, LocalQuotient, MaxPrime, Product
from perfcx.sampling import random_complex, random_product_complex, random_torsion_complex

Z4 = LocalQuotient(ZZ, 2, 2)
Z9 = LocalQuotient(ZZ, 3, 2)


def test_support_examples():
    assert supp(moore(ZZ, 5)) == ThickSupport.primes([5])
    assert supp(unit_complex(ZZ, 0)).is_full()
    assert supp(zero_complex(ZZ)).is_empty()
    assert supp(moore(ZZ, 12)) == ThickSupport.primes([2, 3])


def test_chi_examples():
    R = unit_complex(ZZ, 0)
    assert chi_F(R) == 1
    assert chi_F(direct_sum(R, shift(R, 1))) == 0
    assert chi_F(moore(ZZ, 7)) == 0


def test_lambda_examples():
    for p in (2, 3, 5):
        for q in (2, 3, 5):
            assert lambda_p(moore(ZZ, q), p) == (1 if p == q else 0)
    assert lambda_p(moore(ZZ, 9), 3) == 2
    assert lambda_p(zero_complex(ZZ), 2) == 0
    assert lambda_p(shift(moore(ZZ, 8), 1), 2) == -3
    with pytest.raises(NonTorsionInput):
        lambda_p(unit_complex(ZZ, 0), 2)


def test_lambda_artin_examples():
    assert lambda_artin(PerfectComplex.build(Z4, {0: 1})) == 1
    M = PerfectComplex.build(Z4, {1: 1, 0: 1}, {1: Matrix.from_rows(Z4, [[2]])})
    assert lambda_artin(M) == 0
    assert lambda_artin(zero_complex(Z4)) == 0


def test_k0_class_examples():
    S = ThickSupport.primes([2, 3])
    c = k0_class(direct_sum(moore(ZZ, 2), moore(ZZ, 3)), S)
    assert (c[MaxPrime(2)], c[MaxPrime(3)]) == (1, 1)
    assert k0_class(unit_complex(ZZ, 0), ThickSupport.full())[GenericPoint()] == 1
    with pytest.raises(UnsupportedSupport):
        k0_class(moore(ZZ, 2), ThickSupport.primes([3]))


def test_k0_basis_vectors():
    S = ThickSupport.primes([2, 3, 5])
    for q in (2, 3, 5):
        for i in range(1, 5):
            c = k0_class(moore(ZZ, q ** i), S)
            assert c.as_dict() == {MaxPrime(q): i}


def test_roundtrip_examples():
    assert k0_module_roundtrip(moore(ZZ, 3)) == 0
    assert k0_module_roundtrip(unit_complex(ZZ, 0)) == 1
    rng = random.Random(2)
    for _ in range(50):
        X = random_complex(rng)
        assert alternating_rank_sum(X) == chi_F(X)


def test_lambda_matches_valuation_oracle():
    rng = random.Random(4)
    for _ in range(60):
        X = random_torsion_complex(rng, (2, 3, 5), max_exp=3)
        H = homology(X)
        for p in (2, 3, 5):
            expected = sum((-1) ** (n % 2) * p_torsion_length(m.invariant_factors, p) for n, m in H.entries)
            assert lambda_p(X, p) == expected


def test_lambda_of_tensor_with_coprime_moore_vanishes():
    rng = random.Random(6)
    for _ in range(30):
        X = random_torsion_complex(rng, (2,), max_exp=3)
        Y = tensor(X, moore(ZZ, 3))
        assert lambda_p(Y, 2) == 0 and lambda_p(Y, 3) == 0
        assert homology(Y).is_zero()


def test_support_of_sums_and_shifts():
    rng = random.Random(8)
    for _ in range(30):
        X, Y = random_torsion_complex(rng, (2, 3)), random_torsion_complex(rng, (3, 5))
        assert supp(direct_sum(X, Y)) == supp(X).union(supp(Y))
        assert supp(shift(X, 3)) == supp(X)


def test_lambda_artin_additive_over_components():
    R = Product((Z4, Z9))
    rng = random.Random(9)
    for _ in range(30):
        X = random_product_complex(rng, R)
        parts = split_product(X)
        assert [lambda_artin(X, i) for i in range(2)] == [lambda_artin(P) for P in parts]
        S = ThickSupport.components([0, 1])
        c = k0_class(X, S)
        assert [c[ComponentPoint(i)] for i in range(2)] == [lambda_artin(P) for P in parts]


def test_free_product_complexes_have_equal_component_lambdas():
    # a free module over a product has equal rank on every factor, so Lambda is constant
    rng = random.Random(10)
    R = Product((Z4, Z9))
    for _ in range(20):
        X = random_product_complex(rng, R)
        a, b = lambda_artin(X, 0), lambda_artin(X, 1)
        assert a == b == alternating_rank_sum(X)


def test_report_documents():
    assert report(moore(ZZ, 4)) == {"supp": ["2"], "chi": 0, "lambda": {"2": 2}}
    assert report(unit_complex(ZZ, 0)) == {"supp": "Full", "chi": 1}
    parts = [PerfectComplex.build(Z4, {0: 1}), zero_complex(Z9)]
    assert report(parts) == {"supp": ["c0"], "Lambda": {"c0": 1, "c1": 0}}
