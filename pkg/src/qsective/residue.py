"""q-th power residues, Hensel lifting and roots of prod (x^q - a_j) mod m."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .arith import check_width, crt_pair, factorize, is_prime, mod_inverse, valuation
from .errors import BoundExceeded, DomainError, HenselError
from .qfree import ProblemInstance

SCAN_BOUND = 10**6
_CACHE_LIMIT = 1 << 17


def powers_mod(xs: np.ndarray, e: int, m: int) -> np.ndarray:
    """Elementwise ``xs**e mod m`` for an int64 array; needs ``m**2 < 2**63``."""
    if m > 3 * 10**9:
        raise BoundExceeded(f"vectorised powering needs a modulus below 3e9, got {m}")
    base = np.asarray(xs, dtype=np.int64) % m
    acc = np.full(base.shape, 1 % m, dtype=np.int64)
    while e:
        if e & 1:
            acc = acc * base % m
        e >>= 1
        if e:
            base = base * base % m
    return acc


@lru_cache(maxsize=4096)
def _cached_powers(q: int, m: int) -> np.ndarray:
    t = powers_mod(np.arange(m, dtype=np.int64), q, m)
    t.setflags(write=False)
    return t


def qth_power_table(q: int, m: int) -> np.ndarray:
    """Array whose entry ``x`` is ``x**q mod m`` for ``0 <= x < m``."""
    if m > SCAN_BOUND:
        raise BoundExceeded(f"scan of {m} residues exceeds the scan bound {SCAN_BOUND}")
    if m <= _CACHE_LIMIT:
        return _cached_powers(q, m)
    return powers_mod(np.arange(m, dtype=np.int64), q, m)


def is_qth_power_mod_p(a: int, q: int, p: int) -> bool:
    """Whether ``a`` is a q-th power modulo the prime ``p`` (``p`` must not divide ``a``)."""
    if a % p == 0:
        raise DomainError(f"{p} divides {a}; the residue test is undefined there")
    if p == q or (p - 1) % q:
        return True
    return pow(a, (p - 1) // q, p) == 1


def roots_mod_prime(a: int, q: int, p: int) -> list[int]:
    """All ``x`` in ``[0, p)`` with ``x**q = a (mod p)``, ascending."""
    a %= p
    if p <= SCAN_BOUND:
        return np.flatnonzero(qth_power_table(q, p) == a).tolist()
    if a == 0:
        return [0]
    if p == q:
        return [a]
    if (p - 1) % q:
        # x -> x^q permutes the units; invert it with the inverse exponent
        return [pow(a, mod_inverse(q, p - 1), p)]
    if pow(a, (p - 1) // q, p) != 1:
        return []
    x, zeta = _sylow_root(a, q, p)
    roots = [x]
    for _ in range(q - 1):
        roots.append(roots[-1] * zeta % p)
    return sorted(roots)


def _sylow_root(a: int, q: int, p: int) -> tuple[int, int]:
    """One q-th root of the residue ``a`` modulo ``p = 1 (mod q)`` and a
    primitive q-th root of unity (Tonelli-Shanks over the q-Sylow subgroup)."""
    s, t = 0, p - 1
    while t % q == 0:
        t //= q
        s += 1
    z = 2
    while pow(z, (p - 1) // q, p) == 1:
        z += 1
    c = pow(z, t, p)  # generates the subgroup of order q^s
    omega = pow(c, q ** (s - 1), p)
    powers_of_omega = {pow(omega, j, p): j for j in range(q)}
    # x^q = a * b with b in the subgroup of order q^(s-1)
    x = pow(a, mod_inverse(q, t), p) if t > 1 else 1
    b = pow(x, q, p) * mod_inverse(a, p) % p
    while b != 1:
        i, h = 0, b
        while h != 1:
            prev, h = h, pow(h, q, p)
            i += 1
        j = powers_of_omega[mod_inverse(prev, p)]
        d = pow(c, j * q ** (s - 1 - i), p)
        x = x * d % p
        b = b * pow(d, q, p) % p
    return x, omega


@lru_cache(maxsize=8192)
def _first_roots(q: int, p: int) -> dict[int, int]:
    out: dict[int, int] = {}
    for x, v in enumerate(qth_power_table(q, p).tolist()):
        out.setdefault(v, x)
    return out


def first_root_mod_prime(a: int, q: int, p: int) -> int | None:
    """Smallest root of ``x**q = a (mod p)``, or ``None``."""
    if p <= _CACHE_LIMIT:
        return _first_roots(q, p).get(a % p)
    rs = roots_mod_prime(a, q, p)
    return rs[0] if rs else None


def _valuation_capped(n: int, p: int, cap: int) -> int:
    if n == 0:
        return cap
    return min(valuation(n, p), cap)


def hensel_lift(a: int, q: int, p: int, root: int, b: int) -> int:
    """Lift ``root`` of ``x**q - a`` to a root modulo ``p**b``.

    Requires ``v(g(root)) > 2 v(g'(root))`` where ``g = x**q - a`` and
    ``v`` is the p-adic valuation. For ``p != q`` and ``p`` not dividing
    ``root`` this means ``g(root) = 0 (mod p)``; for ``p = q`` and a unit
    root it means ``q**3`` divides ``g(root)``, which a seed modulo
    ``q**q`` always satisfies. The result agrees with ``root`` modulo
    ``p**(v(g(root)) - v(g'(root)))``.
    """
    if b < 1:
        raise DomainError("target exponent must be >= 1")
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    pb = check_width(p**b, "lifting modulus")
    g = root**q - a
    if g == 0:
        return root % pb
    dval = valuation(q, p) + (q - 1) * valuation(root, p) if root else None
    if dval is None:
        raise HenselError(
            "derivative vanishes at the seed", value_valuation=valuation(g, p), derivative_valuation=None
        )
    gval = valuation(g, p)
    if gval <= 2 * dval:
        raise HenselError(
            f"valuation inequality v(g) > 2 v(g') fails: v(g) = {gval}, v(g') = {dval}",
            value_valuation=gval,
            derivative_valuation=dval,
        )
    if gval >= b:
        return root % pb
    work = p ** (b + dval)
    shift = p**dval
    x = root % work
    while True:
        gx = (pow(x, q, work) - a) % work
        if gx % pb == 0:
            return x % pb
        dx = q * pow(x, q - 1, work) % work
        unit = (dx // shift) % pb
        x = (x - (gx // shift) * mod_inverse(unit, pb)) % work


def _scan_first_root(a: int, q: int, m: int) -> int | None:
    hits = np.flatnonzero(qth_power_table(q, m) == a % m)
    return int(hits[0]) if hits.size else None


def root_mod_prime_power(a: int, q: int, p: int, e: int) -> int | None:
    """Some ``x`` with ``x**q = a (mod p**e)``, or ``None`` if there is none."""
    pe = check_width(p**e, "prime power")
    if pe <= SCAN_BOUND:
        return _scan_first_root(a, q, pe)
    a_red = a % pe
    if a_red == 0:
        return 0
    v = valuation(a_red, p)
    if v % q:
        return None
    rest = e - v
    unit = (a_red // p**v) % p**rest
    if p != q:
        seeds = roots_mod_prime(unit, q, p)
        if not seeds:
            return None
        y = hensel_lift(unit, q, p, seeds[0], rest)
    else:
        seed_level = min(rest, 3)
        y = _scan_first_root(unit, q, q**seed_level)
        if y is None:
            return None
        if rest > seed_level:
            y = hensel_lift(unit, q, q, y, rest)
    return p ** (v // q) * y % pe


def is_qth_power_mod(a: int, q: int, m: int) -> int | None:
    """A q-th root of ``a`` modulo ``m`` if one exists.

    Small moduli are scanned exhaustively; larger ones are split into
    prime powers and recombined by CRT.
    """
    if m < 1:
        raise DomainError("modulus must be positive")
    check_width(m, "modulus")
    if m == 1:
        return 0
    if m <= SCAN_BOUND:
        return _scan_first_root(a, q, m)
    x, mod = 0, 1
    for p, e in factorize(m).factors:
        r = root_mod_prime_power(a, q, p, e)
        if r is None:
            return None
        x, mod = crt_pair(x, mod, r, p**e)
    return x


def _unit_tree_search(entries, q: int, p: int, e: int) -> int | None:
    """Digit-by-digit search over units ``x`` mod ``p**e``.

    A branch is abandoned once no factor can gain further valuation:
    if every ``v_p(x**q - a_j)`` is below the current depth, all lifts
    of ``x`` share those valuations.
    """
    nodes = list(range(1, p))
    pt = p
    for t in range(1, e + 1):
        alive = []
        for x in nodes:
            vals = [_valuation_capped((pow(x, q, p**e) - a) % p**e, p, e) for a in entries]
            if sum(vals) >= e:
                return x
            if any(v >= t for v in vals):
                alive.append(x)
        if not alive or t == e:
            return None
        nodes = [x + d * pt for x in alive for d in range(p)]
        pt *= p
    return None


@dataclass(frozen=True)
class PrimePowerRoot:
    p: int
    e: int
    root: int
    factor_index: int | None

    @property
    def modulus(self) -> int:
        return self.p**self.e


@dataclass
class RootCertificate:
    """A root of the instance polynomial modulo ``modulus``.

    ``factor_index`` is set when a single factor ``x**q - a_j`` vanishes at
    ``root`` modulo the whole modulus; ``components`` record the choice
    made at each prime power.
    """

    modulus: int
    root: int
    factor_index: int | None
    components: list[PrimePowerRoot] = field(default_factory=list)

    def verify(self, inst: ProblemInstance) -> bool:
        m = self.modulus
        if not 0 <= self.root < m or inst.evaluate(self.root, m) != 0:
            return False
        if self.factor_index is not None and (pow(self.root, inst.q, m) - inst.entries[self.factor_index]) % m:
            return False
        for c in self.components:
            if c.factor_index is not None and (pow(self.root, inst.q, c.modulus) - inst.entries[c.factor_index]) % c.modulus:
                return False
            if inst.evaluate(self.root, c.modulus):
                return False
        return True


def product_root_mod_prime_power(inst: ProblemInstance, p: int, e: int) -> PrimePowerRoot | None:
    """Root of prod (x^q - a_j) modulo ``p**e`` or ``None``.

    Tries each factor alone first (smallest index wins). Failing that, a
    root can only come from several factors sharing the valuation: either
    ``x = 0 (mod p)``, where factor ``j`` contributes exactly ``v_p(a_j)``,
    or, for ``p = q``, a unit found by :func:`_unit_tree_search`.
    """
    q = inst.q
    for j, a in enumerate(inst.entries):
        r = root_mod_prime_power(a, q, p, e)
        if r is not None:
            return PrimePowerRoot(p, e, r, j)
    if sum(min(valuation(a, p), e) for a in inst.entries) >= e:
        return PrimePowerRoot(p, e, 0, None)
    if p != q:
        # a unit x with x^q = a_j (mod p) would already lift to a single-factor root
        return None
    r = _unit_tree_search(inst.entries, q, p, e)
    return None if r is None else PrimePowerRoot(p, e, r, None)


def scan_root(inst: ProblemInstance, m: int) -> int | None:
    """Smallest ``x`` in ``[0, m)`` with prod (x^q - a_j) = 0 (mod m), by full scan."""
    if m > SCAN_BOUND:
        raise BoundExceeded(f"full scan of {m} residues exceeds {SCAN_BOUND}")
    if m == 1:
        return 0
    xq = qth_power_table(inst.q, m)
    acc = np.full(m, 1, dtype=np.int64)
    for a in inst.entries:
        acc = acc * ((xq - a % m) % m) % m
    hits = np.flatnonzero(acc == 0)
    return int(hits[0]) if hits.size else None


def root_mod(inst: ProblemInstance, m: int) -> RootCertificate | None:
    """A certified root of the instance polynomial modulo ``m``, if any."""
    if m < 1:
        raise DomainError("modulus must be positive")
    check_width(m, "modulus")
    if m == 1:
        return RootCertificate(1, 0, None, [])
    parts = []
    x, mod = 0, 1
    try:
        for p, e in factorize(m).factors:
            part = product_root_mod_prime_power(inst, p, e)
            if part is None:
                return None
            parts.append(part)
            x, mod = crt_pair(x, mod, part.root, part.modulus)
    except BoundExceeded:
        if m > SCAN_BOUND:
            raise
        r = scan_root(inst, m)
        return None if r is None else RootCertificate(m, r, _single_factor(inst, r, m), [])
    return RootCertificate(m, x, _single_factor(inst, x, m), parts)


def _single_factor(inst: ProblemInstance, x: int, m: int) -> int | None:
    xq = pow(x, inst.q, m)
    for j, a in enumerate(inst.entries):
        if (xq - a) % m == 0:
            return j
    return None
