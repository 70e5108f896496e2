from fractions import Fraction

import pytest
import sympy

from qsective.classifier import classify
from qsective.errors import DomainError
from qsective.oracle import (
    DIRECT,
    LEMMA2_PRIME_POWER,
    SEARCHED_PRIME,
    FactorProof,
    WitnessCertificate,
    find_witness,
    prime_power_witness,
    prime_powers_up_to,
    residue_density_scan,
    scan_solvability,
    search_prime_witness,
)
from qsective.qfree import validate_instance
from qsective.residue import root_mod, scan_root


def test_prime_powers_listing():
    got = [pe for pe, _, _ in prime_powers_up_to(30)]
    assert got == [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29]


def test_scan_finds_first_failure():
    v = scan_solvability(validate_instance(3, [2, 4]), 100)
    assert not v.solvable_everywhere
    assert v.first_failure.modulus == 7 and v.first_failure.scan_verified
    assert v.checked_moduli == 5
    assert v.verify(validate_instance(3, [2, 4]))


def test_scan_example_passes_and_roots_verify():
    inst = validate_instance(3, [7, 251, 1757, 12299])
    v = scan_solvability(inst, 10**4)
    assert v.solvable_everywhere
    assert len(v.roots) == v.checked_moduli == len(prime_powers_up_to(10**4))
    assert all(inst.evaluate(x, m) == 0 for m, x in v.roots.items())
    assert v.verify(inst)


def test_scan_agrees_with_full_scan_on_every_prime_power():
    inst = validate_instance(3, [2, 3, 10, 45])
    v = scan_solvability(inst, 2000)
    for pe, _, _ in prime_powers_up_to(v.first_failure.modulus if v.first_failure else 2000):
        truth = scan_root(inst, pe)
        if v.first_failure and pe == v.first_failure.modulus:
            assert truth is None
        else:
            assert truth is not None


def test_scan_bound_cap():
    with pytest.raises(DomainError):
        scan_solvability(validate_instance(3, [2]), 10**7)


def test_witness_examples():
    assert find_witness(validate_instance(3, [2, 4])).modulus == 7
    # k = 1: 9 beats the searched prime 13 because it is smaller
    w = find_witness(validate_instance(3, [7]))
    assert w.modulus == 9 and w.scan_verified
    assert search_prime_witness(validate_instance(3, [7])).modulus == 13
    assert find_witness(validate_instance(3, [7, 251, 1757])).modulus == 13


def test_witness_refused_for_intersective():
    with pytest.raises(DomainError):
        find_witness(validate_instance(3, [7, 251, 1757, 12299]))


def test_factor_proof_witness_above_scan_cap():
    inst = validate_instance(3, [147, 490, 28, 1764, 12])
    w = find_witness(inst)
    assert w.construction == LEMMA2_PRIME_POWER and not w.scan_verified
    assert (w.prime, w.exponent, w.modulus) == (7, 15, 7**15)
    assert w.verify(inst)
    # valuations of 7 sum to 7 and 12 is no cube mod 7, so 7^8 is the least failing power
    assert root_mod(inst, 7**7) is not None
    assert root_mod(inst, 7**8) is None
    for j, a in enumerate(inst.entries):
        level = next(f.level for f in w.factor_proofs if f.index == j)
        assert not sympy.is_nthpow_residue(a, 3, 7**level)


def test_mod_qq_witness():
    inst = validate_instance(3, [20, 700, 105, 1764, 4410])
    w = prime_power_witness(inst, 3)
    assert w.modulus == 3**6 and w.construction == DIRECT and w.scan_verified
    assert scan_root(inst, 3**5) is not None


def test_forged_certificates_rejected():
    inst = validate_instance(3, [7, 251, 1757, 12299])
    assert not WitnessCertificate(7, DIRECT, 7, 1, True).verify(inst)
    fake = WitnessCertificate(7**12, LEMMA2_PRIME_POWER, 7, 12, False, [FactorProof(j, "euler", 1) for j in range(4)])
    assert not fake.verify(inst)
    assert not WitnessCertificate(13, SEARCHED_PRIME, 13, 1, False, []).verify(validate_instance(3, [7, 251, 1757]))


def test_factor_proof_kinds():
    inst = validate_instance(3, [2, 14, 49])
    assert FactorProof(0, "euler", 1).verify(inst, 7)
    assert FactorProof(1, "valuation", 2).verify(inst, 7)
    assert FactorProof(2, "valuation", 3).verify(inst, 7)
    assert not FactorProof(2, "valuation", 2).verify(inst, 7)
    assert FactorProof(0, "scan", 2).verify(inst, 3)


def test_density_of_single_entry():
    # units are all cubes mod p = 2 (mod 3); 7 is a cube for a third of p = 1 (mod 3)
    d = residue_density_scan(validate_instance(3, [7]), 2 * 10**5)
    assert abs(float(d.fraction) - 2 / 3) < 0.01
    assert residue_density_scan(validate_instance(3, [7, 251, 1757, 12299]), 10**4).fraction == Fraction(1)


def test_classify_then_witness_reuses_report():
    inst = validate_instance(3, [2, 4])
    rep = classify(inst)
    assert find_witness(inst, rep).modulus == 7
