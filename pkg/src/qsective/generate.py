"""Two-prime example families for q = 3 and q = 5, pair mining, and
exponent-vector expansion."""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from itertools import product

from .arith import is_prime, primes_up_to
from .classifier import ClassificationReport, classify, exponentiate_instance
from .errors import ConsistencyError, DomainError, WidthError
from .oracle import OracleVerdict, scan_solvability
from .qfree import ProblemInstance, validate_instance
from .residue import qth_power_table

log = logging.getLogger(__name__)

# exponent pairs (e1, e2) of p1^e1 * p2^e2 for each family
FAMILY_EXPONENTS = {
    3: ((1, 0), (0, 1), (1, 1), (2, 1)),
    5: ((1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (4, 1)),
}

EXPANSION_FULL_LIMIT = 256
EXPANSION_SAMPLE = 64


@dataclass
class FamilyResult:
    p1: int
    p2: int
    instance: ProblemInstance
    report: ClassificationReport
    some_power_mod_qq: bool
    mutual_residues: bool

    @property
    def conditions_verdict(self) -> bool:
        return self.some_power_mod_qq and self.mutual_residues


def _is_power_mod_prime(a: int, q: int, p: int) -> bool:
    if p == q or (p - 1) % q:
        return True
    return pow(a, (p - 1) // q, p) == 1


def family_entries(q: int, p1: int, p2: int) -> list[int]:
    if q not in FAMILY_EXPONENTS:
        raise DomainError(f"no two-prime family for q = {q}")
    if p1 == p2 or q in (p1, p2) or not (is_prime(p1) and is_prime(p2)):
        raise DomainError(f"need two distinct primes other than {q}, got {p1}, {p2}")
    return [p1**e1 * p2**e2 for e1, e2 in FAMILY_EXPONENTS[q]]


def family_conditions(q: int, p1: int, p2: int) -> tuple[bool, bool]:
    """The two family conditions, evaluated without the classifier.

    Returns (some entry is a q-th power mod q^q, p1 and p2 are mutual
    q-th power residues).
    """
    entries = family_entries(q, p1, p2)
    qq = q**q
    powers = set(qth_power_table(q, qq).tolist())
    first = any(a % qq in powers for a in entries)
    second = _is_power_mod_prime(p1, q, p2) and _is_power_mod_prime(p2, q, p1)
    return first, second


def _family(q: int, p1: int, p2: int) -> FamilyResult:
    inst = validate_instance(q, family_entries(q, p1, p2))
    report = classify(inst)
    first, second = family_conditions(q, p1, p2)
    result = FamilyResult(p1, p2, inst, report, first, second)
    if not report.condition1.covers:
        raise ConsistencyError(f"family hyperplanes for ({p1}, {p2}) do not cover F_{q}^2")
    if result.conditions_verdict != report.intersective:
        raise ConsistencyError(f"family conditions and classifier disagree for ({p1}, {p2})")
    return result


def family_q3(p1: int, p2: int) -> FamilyResult:
    """(x^3 - p1)(x^3 - p2)(x^3 - p1 p2)(x^3 - p1^2 p2), classified and cross-checked."""
    return _family(3, p1, p2)


def family_q5(p1: int, p2: int) -> FamilyResult:
    """The six-factor q = 5 family, classified and cross-checked."""
    return _family(5, p1, p2)


@dataclass
class MinedPair:
    p1: int
    p2: int
    family: FamilyResult
    spot_check: OracleVerdict


def mine_pairs(q: int, search_bound: int, *, spot_check_bound: int = 10**3):
    """Yield every pair ``p1 < p2 <= search_bound`` whose family is intersective.

    Pairs come out ordered by ``p1`` then ``p2``. Each is confirmed by the
    classifier and by an oracle scan of prime powers up to
    ``spot_check_bound``.
    """
    if q not in FAMILY_EXPONENTS:
        raise DomainError(f"mining supports q in {sorted(FAMILY_EXPONENTS)}")
    primes = [p for p in primes_up_to(search_bound) if p != q]
    for i, p1 in enumerate(primes):
        for p2 in primes[i + 1 :]:
            first, second = family_conditions(q, p1, p2)
            if not (first and second):
                continue
            fam = _family(q, p1, p2)
            check = scan_solvability(fam.instance, spot_check_bound)
            if not check.solvable_everywhere:
                raise ConsistencyError(f"oracle found no root mod {check.first_failure.modulus} for ({p1}, {p2})")
            yield MinedPair(p1, p2, fam, check)


def expand_by_exponentiation(inst: ProblemInstance, report: ClassificationReport | None = None) -> list[ProblemInstance]:
    """All ``(q-1)**l`` variants ``rad_q(a_j ** c_j)``, checked for a common verdict.

    Every variant is classified when there are at most 256 of them;
    otherwise a fixed 64-variant sample is. Variants that overflow the
    integer width are skipped and logged.
    """
    q = inst.q
    verdict = (report or classify(inst)).verdict
    variants = []
    for c in product(range(1, q), repeat=inst.l):
        try:
            variants.append(exponentiate_instance(inst, c))
        except WidthError as exc:
            log.warning("skipping exponent vector %s: %s", c, exc)
    if len(variants) <= EXPANSION_FULL_LIMIT:
        checked = variants
    else:
        checked = random.Random(0).sample(variants, EXPANSION_SAMPLE)
    for v in checked:
        if classify(v).verdict != verdict:
            raise ConsistencyError(f"exponentiated instance {v.entries} changed the verdict")
    return variants
