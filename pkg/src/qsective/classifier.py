"""Decision procedure for roots of prod (x^q - a_j) modulo every integer.

The instance is intersective exactly when

1. the hyperplanes ``sum_i nu_ij x_i = 0`` cover F_q^k,
2. some ``a_j`` is a q-th power modulo ``q**q``, and
3. every support prime ``p_i`` has some ``a_j`` with ``p_i`` not dividing
   ``a_j`` that is a q-th power modulo ``p_i``.

A single support prime (k = 1) is never intersective: one hyperplane
through the origin of F_q^1 is ``{0}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .arith import check_width, factorize, primes_up_to
from .covering import CoveringReport, check_covering, hyperplanes_of, verify_covering_report
from .errors import ConsistencyError, DomainError
from .qfree import ENUMERATION_CAP, ExponentMatrix, ProblemInstance, exponent_matrix, validate_instance
from .residue import SCAN_BOUND, is_qth_power_mod, is_qth_power_mod_p, roots_mod_prime

INTERSECTIVE = "intersective"
NOT_INTERSECTIVE = "not_intersective"

COVERING_FAILS = "covering_fails"
MOD_QQ_FAILS = "mod_qq_fails"
PRIME_CONDITION_FAILS = "prime_condition_fails"
K_EQUALS_ONE = "k_equals_one"


@dataclass(frozen=True)
class Failure:
    reason: str
    prime: int | None = None


@dataclass(frozen=True)
class ResidueWitness:
    """``entries[index]`` is a q-th power modulo ``modulus``; ``root`` proves it.

    ``root`` is ``None`` only when the modulus is a prime too large to scan
    with ``modulus = 1 (mod q)``; the Euler criterion then stands as proof.
    """

    index: int
    modulus: int
    root: int | None


@dataclass
class ClassificationReport:
    instance: ProblemInstance
    matrix: ExponentMatrix
    verdict: str
    condition1: CoveringReport
    condition2: ResidueWitness | None
    condition3: dict[int, ResidueWitness | None]
    failures: list[Failure] = field(default_factory=list)

    @property
    def intersective(self) -> bool:
        return self.verdict == INTERSECTIVE

    @property
    def failure_reason(self) -> Failure | None:
        return self.failures[0] if self.failures else None

    def verify(self) -> bool:
        """Re-check every embedded certificate with plain modular arithmetic."""
        inst = self.instance
        q, entries = inst.q, inst.entries
        if not verify_covering_report(self.condition1):
            return False
        if self.condition2 is not None:
            w = self.condition2
            if w.modulus != q**q or (pow(w.root, q, w.modulus) - entries[w.index]) % w.modulus:
                return False
        for p, w in self.condition3.items():
            if w is None:
                continue
            a = entries[w.index]
            if w.modulus != p or a % p == 0:
                return False
            if w.root is None:
                if not is_qth_power_mod_p(a, q, p):
                    return False
            elif (pow(w.root, q, p) - a) % p:
                return False
        holds = (
            self.matrix.k >= 2
            and self.condition1.covers
            and self.condition2 is not None
            and all(w is not None for w in self.condition3.values())
        )
        return holds == self.intersective and (not self.failures) == holds


def _prime_witness(inst: ProblemInstance, p: int) -> ResidueWitness | None:
    q = inst.q
    for j, a in enumerate(inst.entries):
        if a % p and is_qth_power_mod_p(a, q, p):
            if p <= SCAN_BOUND or p == q or (p - 1) % q:
                return ResidueWitness(j, p, roots_mod_prime(a, q, p)[0])
            return ResidueWitness(j, p, None)
    return None


def classify(inst: ProblemInstance, *, bound: int = ENUMERATION_CAP) -> ClassificationReport:
    """Evaluate all three conditions and return a certified verdict."""
    q = inst.q
    matrix = exponent_matrix(ProblemInstance(q, tuple(abs(a) for a in inst.entries), True))
    matrix = ExponentMatrix(q, matrix.primes, matrix.nu, tuple(-1 if a < 0 else 1 for a in inst.entries))
    cond1 = check_covering(hyperplanes_of(matrix), q, matrix.k, bound=bound)

    qq = check_width(q**q, "q^q")
    cond2 = None
    for i, a in enumerate(inst.entries):
        r = is_qth_power_mod(a, q, qq)
        if r is not None:
            cond2 = ResidueWitness(i, qq, r)
            break

    cond3 = {p: _prime_witness(inst, p) for p in matrix.primes}

    failures = []
    if matrix.k == 1:
        failures.append(Failure(K_EQUALS_ONE))
    elif not cond1.covers:
        failures.append(Failure(COVERING_FAILS))
    failures.extend(Failure(PRIME_CONDITION_FAILS, p) for p, w in cond3.items() if w is None)
    if cond2 is None:
        failures.append(Failure(MOD_QQ_FAILS))
    verdict = NOT_INTERSECTIVE if failures else INTERSECTIVE
    return ClassificationReport(inst, matrix, verdict, cond1, cond2, cond3, failures)


@dataclass
class ResidueScanReport:
    prime_bound: int
    primes_checked: int
    first_failure: int | None

    @property
    def passed(self) -> bool:
        return self.first_failure is None


def check_residue_everywhere(inst: ProblemInstance, prime_bound: int) -> ResidueScanReport:
    """Check that some ``a_j`` is a q-th power modulo every prime up to the bound.

    The primes ``q`` and ``p_1..p_k`` are skipped. For instances whose
    entries are q-free and not +-1 this holds for all primes exactly when
    the hyperplanes cover F_q^k.
    """
    q = inst.q
    excluded = {q} | set(exponent_matrix(inst).primes)
    checked = 0
    for p in primes_up_to(prime_bound):
        if p in excluded:
            continue
        checked += 1
        if (p - 1) % q:
            continue
        e = (p - 1) // q
        if not any(pow(a, e, p) == 1 for a in inst.entries):
            return ResidueScanReport(prime_bound, checked, p)
    return ResidueScanReport(prime_bound, checked, None)


def lower_bound_check(inst: ProblemInstance, report: ClassificationReport | None = None) -> bool:
    """True when ``l <= q``; the verdict must then be not intersective.

    Entries are q-free and not +-1, so none is a perfect q-th power and
    fewer than ``q + 1`` hyperplanes can never cover.
    """
    if inst.l > inst.q:
        return False
    report = report or classify(inst)
    if report.intersective:
        raise ConsistencyError(f"instance with l = {inst.l} <= q = {inst.q} classified intersective")
    return True


def exponentiate_instance(inst: ProblemInstance, c) -> ProblemInstance:
    """Replace each ``a_j`` by the q-free part of ``a_j ** c_j``."""
    q = inst.q
    c = list(c)
    if len(c) != inst.l:
        raise DomainError(f"need {inst.l} exponents, got {len(c)}")
    if any(not 1 <= cj < q for cj in c):
        raise DomainError(f"exponents must lie in [1, {q})")
    if all(cj == 1 for cj in c):
        return inst
    entries = []
    for a, cj in zip(inst.entries, c):
        # reduce exponents before multiplying so a^c itself is never formed
        f = factorize(a)
        r = f.sign**cj
        for p, e in f.factors:
            r *= p ** (e * cj % q)
        entries.append(check_width(r, "rad_q(a^c)"))
    return validate_instance(q, entries, allow_duplicates=True)
