import random
from dataclasses import replace

import pytest

from oracles import p_torsion_length
from perfcx.complexes import (PerfectComplex, direct_sum, homology, is_quasi_iso, moore, shift,
                              unit_complex, zero_complex)
from perfcx.errors import (MalformedCertificate, NotHereditary, UnsupportedGenerators,
                           UnsupportedSupport, VerificationFailed)
from perfcx.generation import (Atom, Certificate, Step, _Builder, _kill_build, kill_bottom_class,
                               max_steps, plan, plan_from, realize, verify)
from perfcx.invariants import ThickSupport, k0_class
from perfcx.ktheory import can_generate
from perfcx.matrix import Matrix
from perfcx.rings import ZZ, LocalQuotient, PolysOverPrimeField
from perfcx.sampling import random_complex, random_torsion_complex

S23 = ThickSupport.primes([2, 3])
S235 = ThickSupport.primes([2, 3, 5])


def _total_length(X, p):
    return sum(p_torsion_length(m.invariant_factors, p) for _, m in homology(X).entries)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_moore_square_certificate(p):
    S = ThickSupport.primes([p])
    cert = plan(ZZ, S, moore(ZZ, p * p))
    assert len(cert.atoms) == 2 and len(cert) == 1
    assert verify(cert).ok
    assert homology(realize(cert)) == homology(moore(ZZ, p * p))
    kcert = plan(ZZ, S, moore(ZZ, p * p), "kill")
    assert len(kcert.atoms) == 1 and len(kcert) == 1 and verify(kcert).ok


def test_full_support_single_cone():
    for t in (4, 12, 27):
        cert = plan(ZZ, ThickSupport.full(), moore(ZZ, t))
        assert len(cert) == 1 and verify(cert).ok
        assert cert.atoms == (Atom("unit", None, 0),)


def test_zero_target_gives_empty_certificate():
    cert = plan(ZZ, S23, zero_complex(ZZ))
    assert cert.final is None and len(cert) == 0 and not cert.atoms
    assert verify(cert).ok
    assert realize(cert).is_empty()


def test_kill_examples():
    alpha, residual = kill_bottom_class(moore(ZZ, 2), 2)
    assert homology(residual).is_zero()
    # the order-2 class injects into Z/4, leaving the cokernel Z/2 in degree 0
    _, residual = kill_bottom_class(moore(ZZ, 4), 2)
    assert homology(residual) == homology(moore(ZZ, 2))
    with pytest.raises(UnsupportedSupport):
        kill_bottom_class(moore(ZZ, 2), 3)


def test_kill_lowers_length_by_one():
    rng = random.Random(21)
    for _ in range(40):
        X = random_torsion_complex(rng)
        for p in (2, 3):
            if not _total_length(X, p):
                continue
            alpha, residual = kill_bottom_class(X, p)
            assert _total_length(residual, p) == _total_length(X, p) - 1
            assert alpha.source.ranks == shift(moore(ZZ, p), min(alpha.source.ranks)).ranks


def test_wrong_atom_fails_verification():
    M2 = moore(ZZ, 2)
    bogus = Certificate(ZZ, (Atom("moore", 3, 0),), (), "a0", homology(M2))
    report = verify(bogus)
    assert not report.ok and report.failing_step == 0
    with pytest.raises(VerificationFailed):
        report.raise_for_failure()


def test_malformed_certificates():
    claimed = homology(moore(ZZ, 2))
    with pytest.raises(MalformedCertificate):
        verify(Certificate(ZZ, (Atom("moore", 2, 0),), (Step("s1", "a0", "s7", {}),), "s1", claimed))
    with pytest.raises(MalformedCertificate):
        verify(Certificate(ZZ, (Atom("moore", 4, 0),), (), "a0", claimed))
    with pytest.raises(MalformedCertificate):
        verify(Certificate(ZZ, (Atom("moore", 2, 0),), (), "a9", claimed))
    steps = (Step("s1", "a0", "a0", {}), Step("s1", "a0", "a0", {}))
    with pytest.raises(MalformedCertificate):
        verify(Certificate(ZZ, (Atom("moore", 2, 0),), steps, "s1", claimed))


def test_bad_chain_map_is_reported_at_its_step():
    comps = {0: Matrix.from_rows(ZZ, [[1]])}  # not a chain map M(2) -> M(3)
    cert = Certificate(ZZ, (Atom("moore", 2, 0), Atom("moore", 3, 0)),
                       (Step("s1", "a0", "a1", comps),), "s1", homology(moore(ZZ, 2)))
    report = verify(cert)
    assert not report.ok and report.failing_step == 0


def test_tampered_claim_is_caught():
    cert = plan(ZZ, S23, moore(ZZ, 12))
    bad = replace(cert, claimed=homology(moore(ZZ, 6)))
    report = verify(bad)
    assert not report.ok and report.failing_step == len(cert)


@pytest.mark.parametrize("strategy", ["formality", "kill"])
def test_random_plans_verify_within_bound(strategy):
    rng = random.Random(22)
    for _ in range(40):
        Y = random_torsion_complex(rng, (2, 3, 5), max_exp=3)
        cert = plan(ZZ, S235, Y, strategy)
        assert verify(cert).ok
        assert cert.claimed == homology(Y)
        assert len(cert) <= max_steps(Y)


def test_full_support_plans_with_free_homology():
    rng = random.Random(23)
    for _ in range(30):
        Y = random_complex(rng)
        cert = plan(ZZ, ThickSupport.full(), Y)
        assert verify(cert).ok and len(cert) <= max_steps(Y)


def test_kill_transport_is_a_quasi_isomorphism():
    rng = random.Random(24)
    for _ in range(20):
        Y = random_torsion_complex(rng)
        if homology(Y).is_zero():
            continue
        b = _Builder(ZZ)
        ref, phi = _kill_build(b, Y, [2, 3])
        assert phi.target == Y and is_quasi_iso(phi)


def test_planner_agrees_with_the_decision_procedure():
    # soundness: every planned target is reachable according to can_generate
    rng = random.Random(25)
    atoms = [moore(ZZ, 2), moore(ZZ, 3)]
    for _ in range(30):
        Y = random_torsion_complex(rng)
        cert = plan_from(atoms, Y)
        assert verify(cert).ok
        assert can_generate(atoms, Y).verdict
        assert k0_class(realize(cert), S23) == k0_class(Y, S23)


def test_plan_from_rejects_nonstandard_generators():
    with pytest.raises(UnsupportedGenerators):
        plan_from([moore(ZZ, 4)], moore(ZZ, 2))
    with pytest.raises(UnsupportedGenerators):
        plan_from([direct_sum(moore(ZZ, 2), moore(ZZ, 2))], moore(ZZ, 2))
    cert = plan_from([shift(moore(ZZ, 2), 3)], moore(ZZ, 8))
    assert verify(cert).ok
    cert = plan_from([unit_complex(ZZ, 1)], moore(ZZ, 6))
    assert verify(cert).ok


def test_unsupported_rings_and_supports():
    Z4 = LocalQuotient(ZZ, 2, 2)
    with pytest.raises(NotHereditary):
        plan(Z4, ThickSupport.full(), PerfectComplex.build(Z4, {0: 1}))
    with pytest.raises(UnsupportedSupport):
        plan(ZZ, ThickSupport.primes([2]), moore(ZZ, 6))
    with pytest.raises(UnsupportedSupport):
        plan(ZZ, ThickSupport.full(), unit_complex(ZZ, 0), "kill")


def test_polynomial_ring_plans():
    F2 = PolysOverPrimeField(2)
    x, x1 = (0, 1), (1, 1)
    Y = moore(F2, (0, 1, 0, 1))  # x^3 + x = x (x + 1)^2
    cert = plan(F2, ThickSupport.primes([x, x1]), Y)
    assert verify(cert).ok
    assert verify(plan(F2, ThickSupport.primes([x, x1]), Y, "kill")).ok
    assert homology(realize(cert)) == homology(Y)
