"""q-free radicals, instance validation and the exponent matrix."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .arith import factorize, is_prime
from .errors import DomainError

ENUMERATION_CAP = 10**8


class InstanceError(DomainError):
    """An input violates one of the hypotheses on ``(q, a_1..a_l)``."""

    kind = "invalid_instance"


class NotOddPrime(InstanceError):
    kind = "q_not_odd_prime"


class EmptyInstance(InstanceError):
    kind = "empty_entries"


class ZeroEntry(InstanceError):
    kind = "zero_entry"


class UnitEntry(InstanceError):
    kind = "unit_entry"


class NotQFree(InstanceError):
    kind = "not_q_free"

    def __init__(self, entry: int, prime: int, exponent: int, q: int):
        super().__init__(f"{entry} is not {q}-free: {prime}^{exponent} divides it")
        self.entry = entry
        self.prime = prime
        self.exponent = exponent


class DuplicateEntry(InstanceError):
    kind = "duplicate_entry"


@dataclass(frozen=True)
class ProblemInstance:
    """The polynomial prod_j (x^q - a_j), stored as ``q`` and its constants.

    ``multiset`` marks derived instances (e.g. after exponentiation) in
    which repeated constants are allowed.
    """

    q: int
    entries: tuple[int, ...]
    multiset: bool = False

    @property
    def l(self) -> int:  # noqa: E743
        return len(self.entries)

    def evaluate(self, x: int, m: int) -> int:
        """Value of the polynomial at ``x`` reduced modulo ``m``."""
        v = 1 % m
        xq = pow(x, self.q, m)
        for a in self.entries:
            v = v * (xq - a) % m
        return v


@dataclass(frozen=True)
class ExponentMatrix:
    """Support primes and exact exponents ``nu[i][j]`` of ``p_i`` in ``a_j``."""

    q: int
    primes: tuple[int, ...]
    nu: tuple[tuple[int, ...], ...]
    signs: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.primes)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.nu)


def rad_q_signed(n: int, q: int) -> int:
    """``sign(n) * prod p^(e mod q)``: the q-free part of ``n``, sign kept."""
    if n == 0:
        raise DomainError("rad_q of 0 is undefined")
    f = factorize(n)
    r = f.sign
    for p, e in f.factors:
        r *= p ** (e % q)
    return r


def rad_q_abs(n: int, q: int) -> int:
    return rad_q_signed(abs(n), q)


def is_q_free(n: int, q: int) -> bool:
    return all(e < q for _, e in factorize(n).factors)


def validate_instance(q: int, entries, *, allow_duplicates: bool = False) -> ProblemInstance:
    """Check the hypotheses on ``(q, entries)`` and build the instance.

    Each violated hypothesis raises its own :class:`InstanceError`
    subclass. A warning is issued when the covering enumeration for this
    instance would exceed ``ENUMERATION_CAP`` vectors.
    """
    if q == 2 or not is_prime(q):
        raise NotOddPrime(f"q = {q} is not an odd prime")
    entries = tuple(int(a) for a in entries)
    if not entries:
        raise EmptyInstance("at least one entry is required")
    seen = set()
    support = set()
    for a in entries:
        if a == 0:
            raise ZeroEntry("entries must be nonzero")
        if a in (1, -1):
            raise UnitEntry(f"entry {a} is excluded (must not be 1 or -1)")
        f = factorize(a)
        for p, e in f.factors:
            if e >= q:
                raise NotQFree(a, p, e, q)
            support.add(p)
        if a in seen and not allow_duplicates:
            raise DuplicateEntry(f"entry {a} appears more than once")
        seen.add(a)
    if q ** len(support) > ENUMERATION_CAP:
        warnings.warn(
            f"covering check needs {q}^{len(support)} vectors, above the cap of {ENUMERATION_CAP}",
            RuntimeWarning,
            stacklevel=2,
        )
    return ProblemInstance(q, entries, multiset=allow_duplicates)


def exponent_matrix(inst: ProblemInstance) -> ExponentMatrix:
    facs = [factorize(a) for a in inst.entries]
    primes = sorted({p for f in facs for p in f.primes})
    nu = tuple(tuple(f.exponent(p) for f in facs) for p in primes)
    return ExponentMatrix(inst.q, tuple(primes), nu, tuple(f.sign for f in facs))
