"""Brute-force verification, witness moduli and residue density scans.

Nothing here consults the covering criterion: solvability is settled
prime power by prime power, either by lifting a root found by scanning
modulo ``p`` or by scanning the whole residue ring.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .arith import WIDTH_BITS, primes_up_to, valuation
from .classifier import (
    COVERING_FAILS,
    K_EQUALS_ONE,
    MOD_QQ_FAILS,
    PRIME_CONDITION_FAILS,
    ClassificationReport,
    classify,
)
from .errors import DomainError, WitnessNotFound
from .qfree import ProblemInstance, exponent_matrix
from .residue import SCAN_BOUND, first_root_mod_prime, hensel_lift, qth_power_table, scan_root

DEFAULT_SCAN_BOUND = 10**4
DEFAULT_SEARCH_BOUND = 10**6

LEMMA2_PRIME_POWER = "lemma2_prime_power"
SEARCHED_PRIME = "searched_prime"
DIRECT = "direct"


@dataclass(frozen=True)
class FactorProof:
    """Why ``x**q - a_index`` has no root modulo ``p**level``.

    ``kind`` is ``"valuation"`` (``p**(level-1)`` exactly divides the
    q-free entry, so no root exists one level up), ``"scan"`` (a full
    scan of the residues modulo ``p**level``) or ``"euler"`` (``level`` is
    1 and the Euler criterion fails).
    """

    index: int
    kind: str
    level: int

    def verify(self, inst: ProblemInstance, p: int) -> bool:
        a, q = inst.entries[self.index], inst.q
        if self.kind == "valuation":
            return a % p == 0 and valuation(a, p) == self.level - 1 and 1 <= self.level - 1 < q
        if self.kind == "scan":
            m = p**self.level
            return m <= SCAN_BOUND and not (qth_power_table(q, m) == a % m).any()
        if self.kind == "euler":
            return self.level == 1 and a % p != 0 and (p - 1) % q == 0 and pow(a, (p - 1) // q, p) != 1
        return False


@dataclass
class WitnessCertificate:
    """A modulus at which the instance polynomial has no root.

    ``modulus`` is ``None`` when ``prime**exponent`` is wider than the
    supported width; the factor proofs still certify it.
    """

    modulus: int | None
    construction: str
    prime: int
    exponent: int
    scan_verified: bool
    factor_proofs: list[FactorProof] = field(default_factory=list)

    @property
    def scan_range(self) -> tuple[int, int] | None:
        return (0, self.modulus) if self.scan_verified else None

    def verify(self, inst: ProblemInstance) -> bool:
        p, e = self.prime, self.exponent
        if self.modulus is not None and self.modulus != p**e:
            return False
        if self.scan_verified:
            return self.modulus <= SCAN_BOUND and scan_root(inst, self.modulus) is None
        if self.construction != LEMMA2_PRIME_POWER:
            return False
        proofs = {f.index: f for f in self.factor_proofs}
        if sorted(proofs) != list(range(inst.l)):
            return False
        # every factor rootless mod p^s_j with s_j <= e / l gives a rootless product mod p^e
        return all(f.level * inst.l <= e and f.verify(inst, p) for f in proofs.values())


@dataclass
class OracleVerdict:
    bound: int
    checked_moduli: int
    first_failure: WitnessCertificate | None
    roots: dict[int, int] = field(default_factory=dict)

    @property
    def solvable_everywhere(self) -> bool:
        return self.first_failure is None

    def verify(self, inst: ProblemInstance) -> bool:
        if any(m > self.bound or inst.evaluate(x, m) for m, x in self.roots.items()):
            return False
        return self.first_failure is None or self.first_failure.verify(inst)


def prime_powers_up_to(bound: int) -> list[tuple[int, int, int]]:
    """``(p**e, p, e)`` for every prime power up to ``bound``, by increasing value."""
    out = []
    for p in primes_up_to(bound):
        pe, e = p, 1
        while pe <= bound:
            out.append((pe, p, e))
            pe *= p
            e += 1
    out.sort()
    return out


def scan_solvability(inst: ProblemInstance, modulus_bound: int = DEFAULT_SCAN_BOUND) -> OracleVerdict:
    """Check every prime power up to ``modulus_bound`` for a root.

    Composite moduli need no separate check: by CRT they are solvable
    exactly when each prime-power part is. At primes not dividing
    ``q * prod a_j`` a root of one factor modulo ``p`` is lifted by
    Hensel's lemma; at the remaining primes the ring is scanned.
    """
    if modulus_bound > SCAN_BOUND:
        raise DomainError(f"modulus bound {modulus_bound} exceeds the scan cap {SCAN_BOUND}")
    q = inst.q
    special = set(exponent_matrix(inst).primes) | {q}
    seeds: dict[int, tuple[int, int] | None] = {}
    roots: dict[int, int] = {}
    checked = 0
    for pe, p, e in prime_powers_up_to(modulus_bound):
        checked += 1
        if p in special:
            x = scan_root(inst, pe)
        else:
            if p not in seeds:
                seeds[p] = None
                for j, a in enumerate(inst.entries):
                    r = first_root_mod_prime(a, q, p)
                    if r is not None:
                        seeds[p] = (j, r)
                        break
            seed = seeds[p]
            if seed is None:
                x = None
            elif e == 1:
                x = seed[1]
            else:
                x = hensel_lift(inst.entries[seed[0]], q, p, seed[1], e)
        if x is None:
            cert = WitnessCertificate(pe, DIRECT, p, e, scan_root(inst, pe) is None)
            return OracleVerdict(modulus_bound, checked, cert, roots)
        roots[pe] = x
    return OracleVerdict(modulus_bound, checked, None, roots)


def _factor_proof(inst: ProblemInstance, j: int, p: int) -> FactorProof | None:
    """Cheapest proof that ``x**q - a_j`` has no root modulo ``p**q``."""
    a, q = inst.entries[j], inst.q
    level, m = 1, p
    while level <= q and m <= SCAN_BOUND:
        if not (qth_power_table(q, m) == a % m).any():
            return FactorProof(j, "scan", level)
        level += 1
        m *= p
    if a % p == 0:
        v = valuation(a, p)
        if v < q:
            return FactorProof(j, "valuation", v + 1)
        return None
    if p != q and (p - 1) % q == 0 and pow(a, (p - 1) // q, p) != 1:
        return FactorProof(j, "euler", 1)
    return None


def prime_power_witness(inst: ProblemInstance, p: int) -> WitnessCertificate | None:
    """Witness at a power of ``p`` when no factor has a root modulo ``p**q``.

    The smallest exponent whose ring is small enough to scan is preferred;
    otherwise the factor proofs certify ``p**(q*l)``.
    """
    q, l = inst.q, inst.l
    big = q * l
    e, pe = 1, p
    while e <= big and pe <= SCAN_BOUND:
        if scan_root(inst, pe) is None:
            return WitnessCertificate(pe, DIRECT if e < big else LEMMA2_PRIME_POWER, p, e, True)
        e += 1
        pe *= p
    proofs = [_factor_proof(inst, j, p) for j in range(l)]
    if any(f is None for f in proofs):
        return None
    modulus = p**big
    if modulus.bit_length() > WIDTH_BITS:
        modulus = None
    return WitnessCertificate(modulus, LEMMA2_PRIME_POWER, p, big, False, proofs)


def search_prime_witness(inst: ProblemInstance, search_bound: int = DEFAULT_SEARCH_BOUND) -> WitnessCertificate:
    """Least prime ``p = 1 (mod q)`` outside the support at which no ``a_j`` is a q-th power.

    Primes not congruent to 1 mod q cannot work: every unit is a q-th
    power there.
    """
    q = inst.q
    excluded = set(exponent_matrix(inst).primes) | {q}
    for p in primes_up_to(search_bound):
        if (p - 1) % q or p in excluded:
            continue
        e = (p - 1) // q
        if all(pow(a, e, p) != 1 for a in inst.entries):
            scanned = p <= SCAN_BOUND and scan_root(inst, p) is None
            proofs = [] if scanned else [FactorProof(j, "euler", 1) for j in range(inst.l)]
            return WitnessCertificate(p, SEARCHED_PRIME, p, 1, scanned, proofs)
    raise WitnessNotFound(f"no witness prime up to {search_bound}")


def find_witness(
    inst: ProblemInstance,
    report: ClassificationReport | None = None,
    search_bound: int = DEFAULT_SEARCH_BOUND,
) -> WitnessCertificate:
    """Concrete modulus without a root, for an instance that is not intersective.

    Every failed condition proposes a certificate; scan-verified ones are
    preferred, then the smallest modulus.
    """
    report = report or classify(inst)
    if report.intersective:
        raise DomainError("instance is intersective; no witness modulus exists")
    found = []
    notes = []
    for failure in report.failures:
        if failure.reason in (COVERING_FAILS, K_EQUALS_ONE):
            try:
                found.append(search_prime_witness(inst, search_bound))
            except WitnessNotFound as exc:
                notes.append(str(exc))
        elif failure.reason == PRIME_CONDITION_FAILS:
            cert = prime_power_witness(inst, failure.prime)
            if cert is not None:
                found.append(cert)
        elif failure.reason == MOD_QQ_FAILS:
            cert = prime_power_witness(inst, inst.q)
            if cert is not None:
                found.append(cert)
    if not found:
        raise WitnessNotFound("; ".join(notes) or "no applicable witness construction")

    def cost(c: WitnessCertificate):
        return (not c.scan_verified, c.prime**c.exponent)

    best = min(found, key=cost)
    if not best.verify(inst):
        raise WitnessNotFound(f"candidate witness {best} failed re-verification")
    return best


@dataclass
class DensityScan:
    prime_bound: int
    hits: int
    total: int

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.hits, self.total) if self.total else Fraction(0)


def residue_density_scan(inst: ProblemInstance, prime_bound: int) -> DensityScan:
    """Share of primes up to the bound (outside ``q`` and the support) at which
    some ``a_j`` is a q-th power."""
    q = inst.q
    excluded = set(exponent_matrix(inst).primes) | {q}
    hits = total = 0
    for p in primes_up_to(prime_bound):
        if p in excluded:
            continue
        total += 1
        if (p - 1) % q or any(pow(a, (p - 1) // q, p) == 1 for a in inst.entries):
            hits += 1
    return DensityScan(prime_bound, hits, total)
