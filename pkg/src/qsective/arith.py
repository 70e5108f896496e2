"""Exact integer primitives: powers, primality, factorization, CRT.

Python integers never wrap, so the 127-bit width limit is enforced
explicitly: anything wider raises :class:`WidthError` instead of being
silently accepted.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt

import numpy as np

from .errors import DomainError, WidthError

WIDTH_BITS = 127
PRIMALITY_LIMIT = 1 << 64
TRIAL_DIVISION_LIMIT = 2000

# Deterministic for n < 3.3e24, which covers the whole 64-bit range.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def check_width(n: int, what: str = "value") -> int:
    if abs(n).bit_length() > WIDTH_BITS:
        raise WidthError(f"{what} {n} exceeds {WIDTH_BITS}-bit width")
    return n


def check_modulus(m: int) -> int:
    if m < 2:
        raise DomainError(f"modulus must be >= 2, got {m}")
    return check_width(m, "modulus")


def mod_pow(base: int, exp: int, m: int) -> int:
    """Return ``base**exp mod m`` in ``[0, m)``."""
    check_modulus(m)
    if exp < 0:
        raise DomainError("exponent must be nonnegative")
    return pow(base, exp, m)


def mod_inverse(a: int, m: int) -> int:
    if m == 1:
        return 0
    try:
        return pow(a, -1, m)
    except ValueError:
        raise DomainError(f"{a} is not invertible modulo {m}") from None


@lru_cache(maxsize=None)
def prime_sieve(limit: int) -> np.ndarray:
    """Boolean array ``s`` with ``s[n]`` true iff ``n`` is prime, ``n <= limit``."""
    s = np.ones(max(limit + 1, 2), dtype=bool)
    s[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if s[p]:
            s[p * p :: p] = False
    s.setflags(write=False)
    return s


def primes_up_to(limit: int) -> list[int]:
    if limit < 2:
        return []
    return np.flatnonzero(prime_sieve(limit)).tolist()


_SMALL_PRIMES = primes_up_to(1000)
_SMALL_PRIME_SET = frozenset(_SMALL_PRIMES)
_TRIAL_PRIMES = primes_up_to(TRIAL_DIVISION_LIMIT)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for every ``n < 2**64``."""
    if n < 2:
        return False
    if n <= 1000:
        return n in _SMALL_PRIME_SET
    if n >= PRIMALITY_LIMIT:
        raise WidthError(f"primality of {n} is outside the supported 64-bit range")
    return not _proved_composite(n)


def _proved_composite(n: int) -> bool:
    """True when a small factor or a Miller-Rabin base exposes ``n`` (odd, > 1000)
    as composite. A False answer only certifies primality below ``2**64``."""
    for p in _SMALL_PRIMES[:25]:
        if n % p == 0:
            return True
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return True
    return False


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than ``n``."""
    c = max(n + 1, 2)
    while not is_prime(c):
        c += 1
    return c


@dataclass(frozen=True)
class FactoredInteger:
    sign: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise DomainError("sign must be +1 or -1")
        primes = [p for p, _ in self.factors]
        if any(p < PRIMALITY_LIMIT and not is_prime(p) for p in primes):
            raise DomainError("every listed factor must be prime")
        if primes != sorted(set(primes)) or any(e <= 0 for _, e in self.factors):
            raise DomainError("factors must have strictly increasing primes and positive exponents")

    @property
    def value(self) -> int:
        v = self.sign
        for p, e in self.factors:
            v *= p**e
        return v

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def exponent(self, p: int) -> int:
        for r, e in self.factors:
            if r == p:
                return e
        return 0


def _pollard_brent(n: int) -> int:
    """Return a nontrivial factor of the odd composite ``n``.

    The constant ``c`` runs 1, 2, 3, ... so results are reproducible.
    """
    c = 0
    while True:
        c += 1
        y, r, g, m = 2, 1, 1, 128
        q = 1
        x = ys = 2
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g


def _split_large(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    # above 2**64 a composite can still be split once some base exposes it
    if n < PRIMALITY_LIMIT and is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    if n >= PRIMALITY_LIMIT and not _proved_composite(n):
        raise WidthError(f"cannot certify the primality of the {n.bit_length()}-bit factor {n}")
    r = isqrt(n)
    if r * r == n:
        _split_large(r, out)
        _split_large(r, out)
        return
    d = _pollard_brent(n)
    _split_large(d, out)
    _split_large(n // d, out)


def factorize(n: int) -> FactoredInteger:
    """Canonical signed factorization of a nonzero integer.

    Trial division by the primes below ``TRIAL_DIVISION_LIMIT``, then
    Brent's variant of Pollard rho on whatever composite cofactor is left.
    """
    if n == 0:
        raise DomainError("cannot factor 0")
    check_width(n)
    sign = -1 if n < 0 else 1
    m = abs(n)
    found: dict[int, int] = {}
    for p in _TRIAL_PRIMES:
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            found[p] = e
    if m > 1:
        if m < _TRIAL_PRIMES[-1] ** 2:
            found[m] = found.get(m, 0) + 1
        else:
            _split_large(m, found)
    return FactoredInteger(sign, tuple(sorted(found.items())))


def valuation(n: int, p: int) -> int:
    """Exponent of ``p`` in ``n``; ``n`` must be nonzero."""
    if n == 0:
        raise DomainError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> tuple[int, int]:
    """Combine ``x = r1 (mod m1)`` and ``x = r2 (mod m2)`` for coprime moduli."""
    if m1 < 1 or m2 < 1:
        raise DomainError("moduli must be positive")
    if gcd(m1, m2) != 1:
        raise DomainError(f"moduli {m1} and {m2} are not coprime")
    m = check_width(m1 * m2, "CRT modulus")
    t = (r2 - r1) * mod_inverse(m1, m2) % m2
    return (r1 + m1 * t) % m, m
