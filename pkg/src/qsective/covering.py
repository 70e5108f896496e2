"""Hyperplanes of F_q^k attached to an instance, and covering checks.

Vectors of F_q^k are enumerated in lexicographic order with the first
coordinate most significant, so the ordinal of ``(x_1, ..., x_k)`` is
``sum x_i * q**(k - i)``.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from itertools import combinations, product
from math import comb

import numpy as np

from .errors import BoundExceeded, DomainError
from .qfree import ENUMERATION_CAP, ExponentMatrix

Hyperplane = tuple[int, ...]

# Assignments longer than this are summarised by digest only.
ASSIGNMENT_KEEP_LIMIT = 10**6
_CHUNK = 1 << 20


@dataclass
class CoveringReport:
    q: int
    k: int
    hyperplanes: list[Hyperplane]
    covers: bool
    uncovered_vector: tuple[int, ...] | None = None
    assignment: np.ndarray | None = field(default=None, repr=False)
    assignment_digest: str | None = None
    plane_counts: list[int] | None = None

    @property
    def vector_count(self) -> int:
        return self.q**self.k

    def per_vector_assignment(self) -> dict[tuple[int, ...], int]:
        """Map each vector to the index of the first hyperplane containing it."""
        if self.assignment is None:
            raise DomainError("no stored assignment (uncovered, or too large to keep)")
        return {v: int(i) for v, i in zip(iter_vectors(self.q, self.k), self.assignment)}


def iter_vectors(q: int, k: int):
    return product(range(q), repeat=k)


def vector_of(ordinal: int, q: int, k: int) -> tuple[int, ...]:
    out = []
    for _ in range(k):
        ordinal, r = divmod(ordinal, q)
        out.append(r)
    return tuple(reversed(out))


def hyperplanes_of(matrix: ExponentMatrix) -> list[Hyperplane]:
    """Coefficient vectors ``(nu_1j, ..., nu_kj) mod q``, one per entry, duplicates kept."""
    q = matrix.q
    planes = []
    for j in range(len(matrix.signs)):
        col = tuple(v % q for v in matrix.column(j))
        if not any(col):
            raise DomainError(f"column {j} is zero mod {q}; it defines the whole space")
        planes.append(col)
    return planes


def _first_plane_index(planes: list[Hyperplane], q: int, k: int, start: int, stop: int) -> np.ndarray:
    n = np.arange(start, stop, dtype=np.int64)
    digits = np.empty((k, n.size), dtype=np.int64)
    rest = n
    for i in range(k - 1, -1, -1):
        rest, digits[i] = np.divmod(rest, q)
    idx = np.full(n.size, -1, dtype=np.int64)
    # reversed so the smallest covering index is written last
    for j in range(len(planes) - 1, -1, -1):
        coeffs = np.asarray(planes[j], dtype=np.int64)
        hit = (coeffs @ digits) % q == 0
        idx[hit] = j
    return idx


def check_covering(planes: list[Hyperplane], q: int, k: int, *, bound: int = ENUMERATION_CAP) -> CoveringReport:
    """Decide by full enumeration whether ``planes`` cover F_q^k.

    On success every vector is assigned the smallest index of a plane
    containing it; on failure the lexicographically first uncovered
    vector is reported.
    """
    if k < 1:
        raise DomainError("dimension must be positive")
    total = q**k
    if total > min(bound, ENUMERATION_CAP):
        raise BoundExceeded(f"{q}^{k} = {total} vectors exceeds the enumeration bound {min(bound, ENUMERATION_CAP)}")
    planes = [tuple(int(c) % q for c in p) for p in planes]
    for p in planes:
        if len(p) != k:
            raise DomainError(f"hyperplane {p} does not live in dimension {k}")
        if not any(p):
            raise DomainError("zero functional is not a hyperplane")

    keep = total <= ASSIGNMENT_KEEP_LIMIT
    dtype = np.int16 if len(planes) < 2**15 else np.int32
    kept = [] if keep else None
    h = hashlib.sha256()
    counts = np.zeros(len(planes), dtype=np.int64)
    for start in range(0, total, _CHUNK):
        stop = min(total, start + _CHUNK)
        idx = _first_plane_index(planes, q, k, start, stop)
        missing = np.flatnonzero(idx < 0)
        if missing.size:
            return CoveringReport(q, k, planes, False, uncovered_vector=vector_of(start + int(missing[0]), q, k))
        chunk = idx.astype(dtype)
        h.update(chunk.astype("<i4").tobytes())
        counts += np.bincount(idx, minlength=len(planes))
        if keep:
            kept.append(chunk)
    return CoveringReport(
        q,
        k,
        planes,
        True,
        assignment=np.concatenate(kept) if keep else None,
        assignment_digest=h.hexdigest(),
        plane_counts=counts.tolist(),
    )


def verify_covering_report(report: CoveringReport) -> bool:
    """Independently re-check a report vector by vector."""
    q, k, planes = report.q, report.k, report.hyperplanes

    def on_plane(v, j):
        return sum(c * x for c, x in zip(planes[j], v)) % q == 0

    if not report.covers:
        v = report.uncovered_vector
        return v is not None and len(v) == k and not any(on_plane(v, j) for j in range(len(planes)))
    if report.assignment is None:
        return check_covering(planes, q, k).assignment_digest == report.assignment_digest
    if len(report.assignment) != q**k:
        return False
    return all(0 <= j < len(planes) and on_plane(v, int(j)) for v, j in zip(iter_vectors(q, k), report.assignment))


def normalized_hyperplanes(q: int, k: int) -> list[Hyperplane]:
    """One coefficient vector per hyperplane: first nonzero coefficient equal to 1."""
    out = []
    for v in iter_vectors(q, k):
        nz = next((c for c in v if c), 0)
        if nz == 1:
            out.append(v)
    return out


def _plane_masks(q: int, k: int, planes: list[Hyperplane]) -> list[int]:
    vecs = list(iter_vectors(q, k))
    masks = []
    for p in planes:
        m = 0
        for i, v in enumerate(vecs):
            if sum(c * x for c, x in zip(p, v)) % q == 0:
                m |= 1 << i
        masks.append(m)
    return masks


MIN_COVER_VECTOR_BOUND = 10**5
MIN_COVER_SEARCH_BOUND = 2 * 10**7


def _check_search_size(q: int, k: int, sizes) -> int:
    if k < 2:
        raise DomainError("covering numbers are only defined for dimension >= 2")
    if q**k > MIN_COVER_VECTOR_BOUND:
        raise BoundExceeded(f"{q}^{k} vectors exceeds {MIN_COVER_VECTOR_BOUND}")
    n = (q**k - 1) // (q - 1)
    work = sum(comb(n, s) for s in sizes)
    if work > MIN_COVER_SEARCH_BOUND:
        raise BoundExceeded(f"subset search of {work} candidates exceeds {MIN_COVER_SEARCH_BOUND}")
    return n


def find_covering_of_size(q: int, k: int, size: int) -> list[Hyperplane] | None:
    """Exhaustively look for ``size`` distinct hyperplanes covering F_q^k."""
    _check_search_size(q, k, [size])
    planes = normalized_hyperplanes(q, k)
    masks = _plane_masks(q, k, planes)
    full = (1 << q**k) - 1
    for combo in combinations(range(len(planes)), size):
        m = 0
        for i in combo:
            m |= masks[i]
        if m == full:
            return [planes[i] for i in combo]
    return None


def min_covering_size(q: int, k: int) -> int:
    """Least number of hyperplanes whose union is F_q^k, by exhaustive search."""
    n = _check_search_size(q, k, range(1, q + 2))
    for size in range(1, n + 1):
        if find_covering_of_size(q, k, size) is not None:
            return size
    raise DomainError(f"no covering of F_{q}^{k} by hyperplanes")  # unreachable for k >= 2
