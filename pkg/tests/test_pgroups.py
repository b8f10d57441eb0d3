import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import p_torsion_length
from perfcx.complexes import homology, moore, shift, direct_sum
from perfcx.errors import MalformedComplex
from perfcx.invariants import lambda_p
from perfcx.pgroups import (FpAbGroup, brute_force_homology_at, chi_p, fp_homology, homology_at,
                            lemma_parallel_check, make_complex)
from perfcx.rings import ZZ
from perfcx.sampling import random_fp_complex


def test_identity_complex_is_acyclic():
    C = make_complex(2, {1: [1], 0: [1]}, {1: [[1]]})
    assert all(g.ngens == 0 for g in fp_homology(C).values())
    check = lemma_parallel_check(C)
    assert (check.lhs, check.rhs, check.equal) == (0, 0, True)


def test_zero_differentials_keep_the_groups():
    C = make_complex(3, {0: [2, 1], 1: [1]}, {})
    assert fp_homology(C) == {0: FpAbGroup(3, (2, 1)), 1: FpAbGroup(3, (1,))}
    assert lemma_parallel_check(C).lhs == 3 - 1


def test_multiplication_by_p_on_z_mod_p_squared():
    C = make_complex(2, {1: [2], 0: [2]}, {1: [[2]]})
    assert fp_homology(C) == {0: FpAbGroup(2, (1,)), 1: FpAbGroup(2, (1,))}
    assert lemma_parallel_check(C).equal


def test_chi_p_examples():
    assert chi_p({0: FpAbGroup(2, (3,))}) == 3
    assert chi_p({1: FpAbGroup(5, (2,))}) == -2
    assert chi_p({}) == 0


def test_malformed_inputs():
    with pytest.raises(MalformedComplex):
        FpAbGroup(4, (1,))
    with pytest.raises(MalformedComplex):
        make_complex(2, {1: [1], 0: [2]}, {1: [[1]]})  # 1 is not well defined from Z/2 to Z/4
    with pytest.raises(MalformedComplex):
        make_complex(2, {2: [1], 1: [1], 0: [1]}, {2: [[1]], 1: [[1]]})  # d^2 != 0


def test_brute_force_examples():
    C = make_complex(2, {1: [2], 0: [3]}, {1: [[2]]})
    # Z/4 -> Z/8, 1 |-> 2: injective, cokernel Z/2; kernel 0
    assert brute_force_homology_at(C, 0) == FpAbGroup(2, (1,))
    assert brute_force_homology_at(C, 1) == FpAbGroup(2)
    D = make_complex(2, {0: [2, 1]}, {})
    assert brute_force_homology_at(D, 0) == FpAbGroup(2, (2, 1))
    with pytest.raises(ValueError):
        brute_force_homology_at(make_complex(2, {0: [5]}, {}), 0)


def test_homology_matches_enumeration():
    rng = random.Random(31)
    checked = 0
    for _ in range(150):
        p = rng.choice([2, 3])
        C = random_fp_complex(rng, p, max_exp=3, max_gens=2, max_log=4 if p == 2 else 3)
        for n in C.degrees:
            if C.group(n).log_order <= 4 and C.group(n + 1).log_order <= 4:
                assert homology_at(C, n) == brute_force_homology_at(C, n)
                checked += 1
    assert checked > 100


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([2, 3]), st.integers(0, 10 ** 6))
def test_lemma_holds_on_random_complexes(p, seed):
    C = random_fp_complex(random.Random(seed), p)
    assert lemma_parallel_check(C).equal


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(-3, 3))
def test_shift_negates_or_keeps_chi(seed, k):
    C = random_fp_complex(random.Random(seed), 2)
    D = C.shifted(k)
    sign = -1 if k % 2 else 1
    assert chi_p(D.groups) == sign * chi_p(C.groups)
    assert lemma_parallel_check(D).equal


def test_bridge_to_lambda():
    # lambda_p of a torsion complex over Z equals chi_p of the p-parts of its homology
    rng = random.Random(32)
    for _ in range(30):
        X = direct_sum(moore(ZZ, rng.choice([2, 4, 8, 6, 12])), shift(moore(ZZ, rng.choice([2, 3, 4])), 1))
        for p in (2, 3):
            groups = {n: FpAbGroup(p, tuple(e for t in m.invariant_factors for e in [ZZ.valuation(t, p)] if e))
                      for n, m in homology(X).entries}
            assert lambda_p(X, p) == chi_p(groups)
            assert chi_p(groups) == sum((-1) ** (n % 2) * p_torsion_length(m.invariant_factors, p)
                                        for n, m in homology(X).entries)
