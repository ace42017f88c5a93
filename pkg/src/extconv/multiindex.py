"""Ordered multiindices and the sign calculus built on them.

A multiindex is a strictly increasing tuple of indices in 1..n; the set of all
length-k multiindices, ordered alphabetically (= tuple-lexicographically), is
the basis bookkeeping unit for everything else in the package.  Ranks are
0-based internally and 1-based in all I/O.

Sign conventions
----------------
``sign_of_string`` is the parity of the permutation sorting a duplicate-free
index string, computed by inversion count.  Two derived signs matter and they
are NOT interchangeable:

* ``sign_append(i, I)`` is the coefficient of e^[I∪i] in e^I ∧ e^i (the index
  wedged on the *right*).  It equals (−1)^(k−p) with p the 1-based position of
  i in the sorted union and k the union's length.  This is the sign the
  projection's coefficient formula uses, so that the wedge-sum and
  coefficientwise forms of the projection agree identically.
* ``sign_interlace(J, blocks)`` is the parity of the interlaced string
  (j_1, I^1, ..., j_s, I^s), each index written *before* its block.
  ``sign_interlace_append`` writes each index *after* its block,
  (I^1, j_1, ..., I^s, j_s); the two differ by (−1)^(s·(k−1)) for blocks of
  length k−1, so they coincide whenever s is even.  The wedge-power/minor
  expansion is sign-correct with the append variant.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import DomainError

# a string of distinct indices, not necessarily sorted; every function taking
# one validates distinctness and raises DomainError on duplicates
IndexString = Sequence[int]


@dataclass(frozen=True)
class MultiIndex:
    """Strictly increasing index tuple in 1..n."""

    indices: tuple[int, ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))
        if self.n < 1:
            raise DomainError(f"ambient dimension must be positive, got {self.n}")
        prev = 0
        for i in self.indices:
            if i <= prev:
                raise DomainError(f"indices must be strictly increasing, got {self.indices}")
            prev = i
        if prev > self.n:
            raise DomainError(f"index {prev} exceeds ambient dimension {self.n}")

    @classmethod
    def from_text(cls, text: str, n: int) -> "MultiIndex":
        """Parse the comma-separated text form, e.g. "1,3,4"."""
        text = text.strip()
        if not text:
            return cls((), n)
        return cls(tuple(int(part) for part in text.split(",")), n)

    @property
    def k(self) -> int:
        return len(self.indices)

    @property
    def text(self) -> str:
        return ",".join(str(i) for i in self.indices)

    def without(self, j: int) -> "MultiIndex":
        if j not in self.indices:
            raise DomainError(f"{j} is not a member of {self.indices}")
        return MultiIndex(tuple(i for i in self.indices if i != j), self.n)

    def union(self, other: "MultiIndex") -> "MultiIndex":
        if set(self.indices) & set(other.indices):
            raise DomainError(f"union of overlapping multiindices {self} and {other}")
        return MultiIndex(tuple(sorted(self.indices + other.indices)), self.n)

    def complement(self) -> "MultiIndex":
        members = set(self.indices)
        return MultiIndex(tuple(i for i in range(1, self.n + 1) if i not in members), self.n)

    def __contains__(self, j: int) -> bool:
        return j in self.indices

    def __iter__(self):
        return iter(self.indices)

    def __len__(self) -> int:
        return len(self.indices)

    def __lt__(self, other: "MultiIndex") -> bool:
        return self.indices < other.indices

    def __le__(self, other: "MultiIndex") -> bool:
        return self.indices <= other.indices


@dataclass(frozen=True)
class Partition:
    """A split of a multiindex into s single indices and s blocks of length k−1.

    ``J`` is increasing, the blocks are pairwise disjoint and listed in
    increasing alphabetical order; together they exhaust the parent multiindex.
    """

    J: MultiIndex
    blocks: tuple[MultiIndex, ...]


def enumerate_multiindices(n: int, k: int) -> list[MultiIndex]:
    """All C(n,k) members of the degree-k index set, alphabetically ordered."""
    if k < 0 or k > n:
        raise DomainError(f"degree {k} out of range for dimension {n}")
    return [MultiIndex(combo, n) for combo in itertools.combinations(range(1, n + 1), k)]


def rank(mi: MultiIndex) -> int:
    """0-based alphabetical rank of ``mi`` among multiindices of its length."""
    n, k = mi.n, mi.k
    r = 0
    prev = 0
    for t, i in enumerate(mi.indices):
        for v in range(prev + 1, i):
            r += math.comb(n - v, k - t - 1)
        prev = i
    return r


def unrank(n: int, k: int, r: int) -> MultiIndex:
    """Inverse of :func:`rank`."""
    if k < 0 or k > n:
        raise DomainError(f"degree {k} out of range for dimension {n}")
    if r < 0 or r >= math.comb(n, k):
        raise DomainError(f"rank {r} out of range for ({n},{k})")
    out = []
    prev = 0
    for t in range(k):
        v = prev + 1
        while True:
            count = math.comb(n - v, k - t - 1)
            if r < count:
                break
            r -= count
            v += 1
        out.append(v)
        prev = v
    return MultiIndex(tuple(out), n)


def sign_of_string(entries: IndexString) -> int:
    """Parity (±1) of the permutation sorting a duplicate-free index string."""
    entries = tuple(entries)
    if len(set(entries)) != len(entries):
        raise DomainError(f"index string has duplicate entries: {entries}")
    inversions = 0
    for a in range(len(entries)):
        ea = entries[a]
        for b in range(a + 1, len(entries)):
            if ea > entries[b]:
                inversions += 1
    return -1 if inversions & 1 else 1


def _flatten_interlaced(J: Iterable[int], blocks: Sequence[MultiIndex | Sequence[int]],
                        index_first: bool) -> tuple[int, ...]:
    J = tuple(J)
    if len(J) != len(blocks):
        raise DomainError(f"{len(J)} indices against {len(blocks)} blocks")
    out: list[int] = []
    for j, block in zip(J, blocks):
        items = tuple(block)
        if index_first:
            out.append(j)
            out.extend(items)
        else:
            out.extend(items)
            out.append(j)
    return tuple(out)


def sign_interlace(J: Iterable[int], blocks: Sequence[MultiIndex | Sequence[int]]) -> int:
    """Sign of the interlaced string (j_1, I^1, ..., j_s, I^s)."""
    return sign_of_string(_flatten_interlaced(J, blocks, index_first=True))


def sign_interlace_append(J: Iterable[int], blocks: Sequence[MultiIndex | Sequence[int]]) -> int:
    """Sign of the interlaced string (I^1, j_1, ..., I^s, j_s).

    This is the variant carried by the wedge-power/minor expansion; it equals
    ``sign_interlace(J, blocks) * (−1)**(s·(k−1))`` for s blocks of length k−1.
    """
    return sign_of_string(_flatten_interlaced(J, blocks, index_first=False))


def sign_append(i: int, I: MultiIndex) -> int:
    """Coefficient (±1) of e^[I∪i] in e^I ∧ e^i.

    Equals (−1)^(k−p): moving i from the appended slot to its sorted position
    p within the length-k union costs k−p transpositions.
    """
    if i in I:
        raise DomainError(f"index {i} already in {I.indices}")
    union = sorted(I.indices + (i,))
    p = union.index(i) + 1
    return -1 if (len(union) - p) & 1 else 1


def k_flip(J: MultiIndex, blocks: Sequence[MultiIndex], p: int, m: int, q: int
           ) -> tuple[MultiIndex, tuple[MultiIndex, ...]]:
    """Exchange subscript j_p with entry q of block m, re-sorting both sides.

    Positions are 1-based.  The flipped pair is again increasing/alphabetical,
    and flipping the same two values back restores the original pair.
    """
    blocks = tuple(blocks)
    _check_disjoint(J, blocks)
    if not 1 <= p <= len(J):
        raise DomainError(f"subscript position {p} out of range 1..{len(J)}")
    if not 1 <= m <= len(blocks):
        raise DomainError(f"block position {m} out of range 1..{len(blocks)}")
    block = blocks[m - 1]
    if not 1 <= q <= len(block):
        raise DomainError(f"in-block position {q} out of range 1..{len(block)}")
    j_val = J.indices[p - 1]
    b_val = block.indices[q - 1]
    new_J = MultiIndex(tuple(sorted((set(J.indices) - {j_val}) | {b_val})), J.n)
    new_block = MultiIndex(tuple(sorted((set(block.indices) - {b_val}) | {j_val})), block.n)
    new_blocks = tuple(sorted(blocks[:m - 1] + (new_block,) + blocks[m:],
                              key=lambda b: b.indices))
    return new_J, new_blocks


def _check_disjoint(J: MultiIndex, blocks: Sequence[MultiIndex]) -> None:
    seen = set(J.indices)
    total = len(J)
    for block in blocks:
        seen.update(block.indices)
        total += len(block)
    if len(seen) != total:
        raise DomainError("subscripts and blocks must be pairwise disjoint")


def block_partitions(I: MultiIndex, s: int, k: int) -> Iterator[Partition]:
    """All splits of I into s subscripts and s disjoint blocks of length k−1.

    Yields in deterministic order: J ascending alphabetically, blocks in
    canonical (alphabetical) order within each J.  The number of splits is
    C(ks, s) · (s(k−1))! / ((k−1)!^s · s!).
    """
    if k < 2:
        raise DomainError(f"block partitions need block length k−1 ≥ 1, got k={k}")
    if s < 1:
        raise DomainError(f"partition count s must be positive, got {s}")
    if len(I) != k * s:
        raise DomainError(f"multiindex length {len(I)} != k·s = {k * s}")
    n = I.n
    members = I.indices
    for J_tuple in itertools.combinations(members, s):
        J = MultiIndex(J_tuple, n)
        rest = tuple(i for i in members if i not in J_tuple)
        for raw_blocks in _equal_blocks(rest, s, k - 1):
            yield Partition(J, tuple(MultiIndex(b, n) for b in raw_blocks))


def _equal_blocks(items: tuple[int, ...], count: int, size: int
                  ) -> Iterator[list[tuple[int, ...]]]:
    """Unordered partitions of ``items`` into ``count`` blocks of ``size``.

    Canonical form: each block is increasing and blocks are emitted anchored on
    the smallest remaining element, so the block list comes out alphabetical
    (disjoint blocks sort by their minima).
    """
    if count == 0:
        yield []
        return
    anchor, rest = items[0], items[1:]
    for companions in itertools.combinations(rest, size - 1):
        block = (anchor,) + companions
        remaining = tuple(i for i in rest if i not in companions)
        for tail in _equal_blocks(remaining, count - 1, size):
            yield [block] + tail
