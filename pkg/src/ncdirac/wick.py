"""Pair partitions, crossings and the q-Wick vacuum-trace formula.

Partitions of ``{0, ..., 2k-1}`` are produced in canonical order: the
smallest unpaired point is matched with each larger unpaired point in turn and
the rest is partitioned recursively. Enumeration is vectorised level by level
(partitions of ``2k`` are built from those of ``2k - 2`` by relabelling), so
``2k = 16`` (2,027,025 partitions) stays well under a second of numpy work.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

import numpy as np

MAX_POINTS = 16


class EnumerationBudgetError(RuntimeError):
    """Raised when a request exceeds the pair-partition enumeration budget."""


def double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


@lru_cache(maxsize=None)
def _partition_table(two_k: int) -> np.ndarray:
    # int8 table of shape (N, k, 2), 0-based, blocks sorted by left endpoint
    if two_k == 0:
        return np.zeros((1, 0, 2), dtype=np.int8)
    prev = _partition_table(two_k - 2)
    k = two_k // 2
    chunks = []
    for j in range(1, two_k):
        rest = np.array([i for i in range(1, two_k) if i != j], dtype=np.int8)
        block = np.empty((prev.shape[0], k, 2), dtype=np.int8)
        block[:, 0, 0] = 0
        block[:, 0, 1] = j
        if k > 1:
            block[:, 1:, :] = rest[prev]
        chunks.append(block)
    return np.concatenate(chunks, axis=0)


def _check_points(two_k: int) -> None:
    if two_k < 0 or two_k % 2:
        raise ValueError(f"need an even number of points, got {two_k}")
    if two_k > MAX_POINTS:
        raise EnumerationBudgetError(
            f"{two_k} points exceeds the enumeration budget of {MAX_POINTS}"
        )


def partition_array(two_k: int) -> np.ndarray:
    """All pair partitions of ``2k`` points as a read-only ``(N, k, 2)`` array (0-based)."""
    _check_points(two_k)
    table = _partition_table(two_k)
    table.flags.writeable = False
    return table


def enumerate_pair_partitions(two_k: int) -> list[tuple[tuple[int, int], ...]]:
    """Pair partitions of ``{1, ..., 2k}`` as tuples of 1-based ``(i, j)``, ``i < j``."""
    table = partition_array(two_k)
    return [tuple((int(a) + 1, int(b) + 1) for a, b in row) for row in table]


def crossings(pairs) -> int:
    """Number of block pairs ``(i, j), (k, l)`` with ``i < k < j < l``."""
    blocks = [tuple(sorted(p)) for p in pairs]
    seen = sorted(x for b in blocks for x in b)
    if len(set(seen)) != len(seen):
        raise ValueError("pairs overlap")
    count = 0
    for (a, b), (c, d) in combinations(blocks, 2):
        if a > c:
            a, b, c, d = c, d, a, b
        if a < c < b < d:
            count += 1
    return count


@lru_cache(maxsize=None)
def _crossing_table(two_k: int) -> np.ndarray:
    table = _partition_table(two_k)
    k = two_k // 2
    counts = np.zeros(table.shape[0], dtype=np.int32)
    for u, v in combinations(range(k), 2):
        a, b = table[:, u, 0], table[:, u, 1]
        c, d = table[:, v, 0], table[:, v, 1]
        # left endpoints are increasing, so a < c always holds
        counts += (c < b) & (b < d)
    return counts


def crossing_counts(two_k: int) -> np.ndarray:
    """Crossing number of every partition in :func:`partition_array` order."""
    _check_points(two_k)
    return _crossing_table(two_k)


def inversions(sigma) -> int:
    """Inversion count of a permutation given as a sequence of ``1..n`` (or ``0..n-1``)."""
    s = [int(v) for v in sigma]
    n = len(s)
    base = min(s) if s else 0
    if sorted(s) != list(range(base, base + n)) or base not in (0, 1):
        raise ValueError(f"not a permutation: {sigma}")
    return sum(1 for i in range(n) for j in range(i + 1, n) if s[i] > s[j])


def q_power(q: float, exponents: np.ndarray) -> np.ndarray:
    # 0**0 must be 1 so that q = 0 keeps the non-crossing partitions
    return np.power(float(q), exponents.astype(float))


def wick_trace(q: float, vectors) -> float:
    """Vacuum trace of ``s_q(f_1) ... s_q(f_m)`` by the pair-partition formula."""
    if not -1.0 <= q <= 1.0:
        raise ValueError(f"q must lie in [-1, 1], got {q}")
    vecs = [np.asarray(v, dtype=float).ravel() for v in vectors]
    if vecs and len({v.size for v in vecs}) != 1:
        raise ValueError("vectors have mismatched dimensions")
    m = len(vecs)
    if m % 2:
        return 0.0
    if m == 0:
        return 1.0
    _check_points(m)
    f = np.stack(vecs)
    gram = f @ f.T
    table = _partition_table(m)
    weights = q_power(q, _crossing_table(m))
    prods = np.prod(gram[table[:, :, 0], table[:, :, 1]], axis=1)
    return float(np.dot(weights, prods))
