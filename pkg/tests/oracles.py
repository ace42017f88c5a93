"""Independent brute-force oracles for the test suite.

Everything here deliberately avoids the package's own sign/enumeration code:
permutation parity comes from cycle decomposition, wedge signs from shuffle
position sums, determinants from the full permutation expansion, and set
partitions from permutation grouping with dedup.  Expected values frozen into
tests were computed with these.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


def parity_by_cycles(seq):
    """±1 parity of the permutation sorting ``seq``, via cycle decomposition."""
    order = sorted(range(len(seq)), key=lambda i: seq[i])
    seen = [False] * len(seq)
    parity = 1
    for start in range(len(seq)):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = order[i]
            length += 1
        if length % 2 == 0:
            parity = -parity
    return parity


def shuffle_wedge(a: dict, b: dict) -> dict:
    """Wedge of two forms given as {sorted index tuple: coeff} dicts.

    The sign of merging two sorted blocks is the shuffle swap count
    Σ_j (pos_j − j) over the final positions of the first block's entries.
    """
    out: dict = {}
    for I, x in a.items():
        set_I = set(I)
        for J, y in b.items():
            if set_I & set(J):
                continue
            merged = tuple(sorted(I + J))
            positions = [merged.index(v) for v in I]
            swaps = sum(p - j for j, p in enumerate(positions))
            sign = -1 if swaps % 2 else 1
            value = out.get(merged, 0) + sign * x * y
            if value == 0:
                out.pop(merged, None)
            else:
                out[merged] = value
    return out


def wedge_many(forms: list[dict]) -> dict:
    acc = forms[0]
    for nxt in forms[1:]:
        acc = shuffle_wedge(acc, nxt)
    return acc


def perm_det(rows):
    """Determinant by full permutation expansion with cycle-parity signs."""
    size = len(rows)
    total = 0
    for perm in itertools.permutations(range(size)):
        sign = parity_by_cycles(perm)
        prod = 1
        for i in range(size):
            prod *= rows[i][perm[i]]
        total += sign * prod
    return total


def brute_partitions(members: tuple[int, ...], s: int, k: int) -> set:
    """All (J, blocks) splits via raw permutation grouping, as canonical sets."""
    out = set()
    for J in itertools.combinations(members, s):
        rest = [m for m in members if m not in J]
        for perm in itertools.permutations(rest):
            blocks = frozenset(tuple(sorted(perm[i * (k - 1):(i + 1) * (k - 1)]))
                               for i in range(s))
            if len(blocks) == s:
                out.add((J, blocks))
    return out


def rand_exact(rng, numerator: int = 8, denominator: int = 4) -> Fraction:
    return Fraction(rng.randint(-numerator, numerator), rng.randint(1, denominator))


def form_to_dict(form) -> dict:
    return form.as_dict()


def dict_to_coeff_list(n, k, d):
    import math
    out = [0] * math.comb(n, k)
    order = list(itertools.combinations(range(1, n + 1), k))
    index = {combo: i for i, combo in enumerate(order)}
    for key, value in d.items():
        out[index[tuple(key)]] = value
    return out
