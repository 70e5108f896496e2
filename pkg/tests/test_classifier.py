import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpora import SMOOTH_CUBEFREE
from qsective.classifier import (
    COVERING_FAILS,
    INTERSECTIVE,
    K_EQUALS_ONE,
    MOD_QQ_FAILS,
    NOT_INTERSECTIVE,
    PRIME_CONDITION_FAILS,
    ResidueWitness,
    check_residue_everywhere,
    classify,
    exponentiate_instance,
    lower_bound_check,
)
from qsective.errors import ConsistencyError, DomainError
from qsective.oracle import find_witness, scan_solvability
from qsective.qfree import ProblemInstance, validate_instance
from qsective.residue import scan_root


@pytest.mark.parametrize("p2", [251, 2141])
def test_two_prime_examples(p2):
    entries = [7, p2, 7 * p2, 49 * p2]
    rep = classify(validate_instance(3, entries))
    assert rep.verdict == INTERSECTIVE and rep.intersective
    assert rep.failures == [] and rep.failure_reason is None
    assert rep.condition1.covers
    assert rep.condition2.index == 1 and rep.condition2.modulus == 27
    assert p2 % 27 == 8 and pow(rep.condition2.root, 3, 27) == 8
    # at 7 the witness is the entry p2; at p2 it is 7
    assert rep.condition3[7].index == 1
    assert rep.condition3[p2].index == 0
    assert rep.verify()


def test_k_equals_one():
    rep = classify(validate_instance(3, [2, 4]))
    assert rep.verdict == NOT_INTERSECTIVE
    assert rep.failure_reason.reason == K_EQUALS_ONE


def test_covering_failure_first():
    rep = classify(validate_instance(3, [7, 251, 1757]))
    assert rep.failure_reason.reason == COVERING_FAILS
    assert rep.condition1.uncovered_vector == (1, 1)
    assert rep.verify()


def test_prime_condition_failure():
    rep = classify(validate_instance(3, [147, 490, 28, 1764, 12]))
    assert rep.condition1.covers and rep.condition2 is not None
    assert rep.failures == [type(rep.failures[0])(PRIME_CONDITION_FAILS, 7)]


def test_mod_qq_failure():
    rep = classify(validate_instance(3, [20, 700, 105, 1764, 4410]))
    assert [f.reason for f in rep.failures] == [MOD_QQ_FAILS]
    assert rep.condition2 is None


def test_q5_family_example():
    # 2, 3, 6, 12, 18, 48 for q = 5
    rep = classify(validate_instance(5, [2, 3, 6, 12, 18, 48]))
    assert rep.intersective
    assert rep.condition2.modulus == 3125
    assert pow(rep.condition2.root, 5, 3125) == [2, 3, 6, 12, 18, 48][rep.condition2.index] % 3125
    # frozen: smallest entry index with a fifth root mod 5^5, smallest root
    assert (rep.condition2.index, rep.condition2.root) == (4, 83)


def test_negative_entries():
    pos = classify(validate_instance(3, [7, 251, 1757, 12299]))
    neg = classify(validate_instance(3, [-7, -251, -1757, -12299]))
    # x -> -x maps roots of x^3 - a to roots of x^3 + a
    assert pos.verdict == neg.verdict == INTERSECTIVE
    assert neg.matrix.signs == (-1, -1, -1, -1)


def test_verify_detects_tampering():
    rep = classify(validate_instance(3, [7, 251, 1757, 12299]))
    rep.condition2 = ResidueWitness(1, 27, 5)
    assert not rep.verify()
    rep = classify(validate_instance(3, [7, 251, 1757, 12299]))
    rep.verdict = NOT_INTERSECTIVE
    assert not rep.verify()


@settings(max_examples=150, deadline=None)
@given(st.lists(st.sampled_from(SMOOTH_CUBEFREE), min_size=1, max_size=6, unique=True))
def test_soundness_against_oracle(entries):
    """Intersective means a root at every prime power up to the bound;
    otherwise a re-verified witness modulus exists."""
    inst = validate_instance(3, entries)
    rep = classify(inst)
    assert rep.verify()
    if rep.intersective:
        assert scan_solvability(inst, 3000).solvable_everywhere
    else:
        w = find_witness(inst, rep)
        assert w.verify(inst)
        if w.scan_verified:
            assert scan_root(inst, w.modulus) is None


def test_lower_bound():
    rng = random.Random(4)
    for _ in range(200):
        inst = validate_instance(3, rng.sample(SMOOTH_CUBEFREE, rng.randint(1, 3)))
        assert lower_bound_check(inst)
    assert not lower_bound_check(validate_instance(3, [7, 251, 1757, 12299]))


def test_lower_bound_raises_on_contradiction():
    inst = validate_instance(3, [2, 3])
    rep = classify(inst)
    rep.verdict = INTERSECTIVE
    with pytest.raises(ConsistencyError):
        lower_bound_check(inst, rep)


def test_residue_everywhere_examples():
    assert check_residue_everywhere(validate_instance(3, [2]), 100).first_failure == 7
    assert check_residue_everywhere(validate_instance(3, [1757]), 100).first_failure == 13
    assert check_residue_everywhere(validate_instance(3, [7, 251, 1757, 12299]), 10**5).passed


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from(SMOOTH_CUBEFREE), min_size=2, max_size=6, unique=True))
def test_covering_implies_residue_everywhere(entries):
    inst = validate_instance(3, entries)
    rep = classify(inst)
    if rep.condition1.covers and rep.matrix.k >= 2:
        assert check_residue_everywhere(inst, 5000).passed


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from(SMOOTH_CUBEFREE), min_size=1, max_size=5, unique=True), st.data())
def test_exponentiation_preserves_verdict(entries, data):
    inst = validate_instance(3, entries)
    c = data.draw(st.lists(st.integers(1, 2), min_size=len(entries), max_size=len(entries)))
    assert classify(exponentiate_instance(inst, c)).verdict == classify(inst).verdict


def test_exponentiate_instance():
    inst = validate_instance(3, [2, 4, 7])
    ex = exponentiate_instance(inst, [2, 2, 1])
    assert ex.entries == (4, 2, 7)
    assert ex.multiset
    assert exponentiate_instance(inst, [1, 1, 1]) is inst
    with pytest.raises(DomainError):
        exponentiate_instance(inst, [3, 1, 1])
    with pytest.raises(DomainError):
        exponentiate_instance(inst, [1, 1])


def test_multiset_instance_classifies():
    inst = ProblemInstance(3, (2, 2, 7), True)
    assert classify(inst).verdict == NOT_INTERSECTIVE
