"""Shape matrices and their minor tables.

A shape matrix for degree k on R^n has one row per length-(k−1) multiindex
(alphabetical order) and one column per coordinate direction.  Its order-s
minor table collects every s×s minor, with both the row selection and the
column selection taken in increasing order: plain determinants, no cofactor
sign layer — all signs in the wedge-power expansion are carried explicitly by
the interlace sign, keeping a single canonical sign location.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Mapping, Sequence

from . import scalars
from .errors import DomainError
from .exterior import KForm
from .multiindex import MultiIndex, enumerate_multiindices


class ShapeMatrix:
    """Dense C(n,k−1) × n matrix over an exact or float backend."""

    __slots__ = ("n", "k", "entries", "backend")

    def __init__(self, n: int, k: int, entries: Sequence[Sequence] | None = None,
                 backend: str = scalars.EXACT):
        if not 2 <= k <= n:
            raise DomainError(f"shape matrices need 2 ≤ k ≤ n, got k={k}, n={n}")
        scalars.check_backend(backend)
        nrows = math.comb(n, k - 1)
        if entries is None:
            z = scalars.zero(backend)
            entries = tuple((z,) * n for _ in range(nrows))
        else:
            entries = tuple(tuple(scalars.coerce(v, backend) for v in row) for row in entries)
            if len(entries) != nrows or any(len(row) != n for row in entries):
                raise DomainError(f"expected a {nrows}×{n} array for (n={n}, k={k})")
        self.n = n
        self.k = k
        self.entries = entries
        self.backend = backend

    @classmethod
    def zero(cls, n: int, k: int, backend: str = scalars.EXACT) -> "ShapeMatrix":
        return cls(n, k, None, backend)

    @property
    def row_labels(self) -> list[MultiIndex]:
        return enumerate_multiindices(self.n, self.k - 1)

    def entry(self, row_label: MultiIndex | Sequence[int], col: int):
        """Entry at a multiindex row and 1-based column."""
        from .multiindex import rank
        mi = row_label if isinstance(row_label, MultiIndex) \
            else MultiIndex(tuple(row_label), self.n)
        if not 1 <= col <= self.n:
            raise DomainError(f"column {col} out of range 1..{self.n}")
        return self.entries[rank(mi)][col - 1]

    def __add__(self, other: "ShapeMatrix") -> "ShapeMatrix":
        self._check_compatible(other)
        rows = [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)]
        return ShapeMatrix(self.n, self.k, rows, self.backend)

    def __sub__(self, other: "ShapeMatrix") -> "ShapeMatrix":
        self._check_compatible(other)
        rows = [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)]
        return ShapeMatrix(self.n, self.k, rows, self.backend)

    def scale(self, factor) -> "ShapeMatrix":
        factor = scalars.coerce(factor, self.backend)
        rows = [[factor * v for v in row] for row in self.entries]
        return ShapeMatrix(self.n, self.k, rows, self.backend)

    def _check_compatible(self, other: "ShapeMatrix") -> None:
        if (self.n, self.k, self.backend) != (other.n, other.k, other.backend):
            raise DomainError("mismatched shape matrices")

    def __eq__(self, other) -> bool:
        if not isinstance(other, ShapeMatrix):
            return NotImplemented
        return (self.n, self.k, self.backend) == (other.n, other.k, other.backend) \
            and self.entries == other.entries

    def __repr__(self) -> str:
        return f"ShapeMatrix(n={self.n}, k={self.k}, backend={self.backend!r}, {list(self.entries)!r})"

    def to_json(self) -> dict:
        return {"n": self.n, "k": self.k,
                "rows": [mi.text for mi in self.row_labels],
                "data": [[scalars.scalar_to_json(v, self.backend) for v in row]
                         for row in self.entries]}

    @classmethod
    def from_json(cls, obj: Mapping, backend: str | None = None) -> "ShapeMatrix":
        n, k = int(obj["n"]), int(obj["k"])
        data = obj["data"]
        if backend is None:
            flat = [v for row in data for v in row]
            backend = scalars.FLOAT if any(isinstance(v, float) for v in flat) else scalars.EXACT
        rows_order = obj.get("rows")
        expected = [mi.text for mi in enumerate_multiindices(n, k - 1)]
        if rows_order is not None and list(rows_order) != expected:
            raise DomainError("row labels must be the alphabetical (k−1)-multiindices")
        entries = [[scalars.scalar_from_json(v, backend) for v in row] for row in data]
        return cls(n, k, entries, backend)


def tensor(a: KForm, b) -> ShapeMatrix:
    """Outer product of a degree-(k−1) form with a vector: entry (I,i) = a_I·b_i."""
    if isinstance(b, KForm):
        if b.n != a.n or b.backend != a.backend:
            raise DomainError("mismatched tensor factors")
        if b.k != 1:
            raise DomainError(f"second factor must be degree 1, got {b.k}")
        b_vals = b.coeffs
    else:
        b_vals = tuple(scalars.coerce(v, a.backend) for v in b)
        if len(b_vals) != a.n:
            raise DomainError(f"expected a vector of length {a.n}, got {len(b_vals)}")
    rows = [[av * bv for bv in b_vals] for av in a.coeffs]
    return ShapeMatrix(a.n, a.k + 1, rows, a.backend)


class MinorTable:
    """All order-s minors of a shape matrix (or any table in that layout).

    Rows are the s-subsets of row positions, columns the s-subsets of column
    positions, both 0-based internally and enumerated lexicographically.
    """

    __slots__ = ("n", "k", "s", "backend", "row_sets", "col_sets", "values",
                 "_row_index", "_col_index")

    def __init__(self, n: int, k: int, s: int, values: Sequence[Sequence],
                 backend: str = scalars.EXACT):
        nrows = math.comb(n, k - 1)
        if not 1 <= s <= min(n, nrows):
            raise DomainError(f"order {s} out of range 1..{min(n, nrows)}")
        scalars.check_backend(backend)
        self.n, self.k, self.s, self.backend = n, k, s, backend
        self.row_sets = tuple(itertools.combinations(range(nrows), s))
        self.col_sets = tuple(itertools.combinations(range(n), s))
        values = tuple(tuple(scalars.coerce(v, backend) for v in row) for row in values)
        if len(values) != len(self.row_sets) or any(len(r) != len(self.col_sets) for r in values):
            raise DomainError(f"expected a {len(self.row_sets)}×{len(self.col_sets)} value array")
        self.values = values
        self._row_index = {rs: i for i, rs in enumerate(self.row_sets)}
        self._col_index = {cs: i for i, cs in enumerate(self.col_sets)}

    def value(self, row_set: Sequence[int], col_set: Sequence[int]):
        """Value at 0-based row-position and column-position subsets."""
        try:
            return self.values[self._row_index[tuple(row_set)]][self._col_index[tuple(col_set)]]
        except KeyError as exc:
            raise DomainError(f"no cell for rows {tuple(row_set)}, cols {tuple(col_set)}") from exc

    def replace(self, row_set: Sequence[int], col_set: Sequence[int], value) -> "MinorTable":
        """Copy with one cell changed (used by sensitivity checks)."""
        ri = self._row_index[tuple(row_set)]
        ci = self._col_index[tuple(col_set)]
        rows = [list(r) for r in self.values]
        rows[ri][ci] = value
        return MinorTable(self.n, self.k, self.s, rows, self.backend)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MinorTable):
            return NotImplemented
        return (self.n, self.k, self.s, self.backend) == (other.n, other.k, other.s, other.backend) \
            and self.values == other.values

    def to_json(self) -> dict:
        labels = enumerate_multiindices(self.n, self.k - 1)
        return {
            "n": self.n, "k": self.k, "s": self.s,
            "rows": [[labels[i].text for i in rs] for rs in self.row_sets],
            "cols": [[c + 1 for c in cs] for cs in self.col_sets],
            "values": [[scalars.scalar_to_json(v, self.backend) for v in row]
                       for row in self.values],
        }


def table_inner(a: MinorTable, b: MinorTable):
    """Entrywise inner product of two tables in the same minor space."""
    if (a.n, a.k, a.s) != (b.n, b.k, b.s) or a.backend != b.backend:
        raise DomainError("mismatched minor tables")
    total = scalars.zero(a.backend)
    for ra, rb in zip(a.values, b.values):
        for va, vb in zip(ra, rb):
            total += va * vb
    return total


def det(rows: Sequence[Sequence]):
    """Determinant of a small square matrix.

    Direct expansion up to 3×3; Bareiss fraction-free elimination above (exact
    division, valid for rational entries; for floats it degrades to ordinary
    elimination with the same pivoting).
    """
    m = len(rows)
    if any(len(r) != m for r in rows):
        raise DomainError("determinant of a non-square matrix")
    if m == 0:
        return 1
    if m == 1:
        return rows[0][0]
    if m == 2:
        (a, b), (c, d) = rows
        return a * d - b * c
    if m == 3:
        (a, b, c), (d, e, f), (g, h, i) = rows
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    return _det_bareiss([list(r) for r in rows])


def _det_bareiss(m: list[list]) -> object:
    size = len(m)
    sign = 1
    prev = 1
    for step in range(size - 1):
        if m[step][step] == 0:
            for r in range(step + 1, size):
                if m[r][step] != 0:
                    m[step], m[r] = m[r], m[step]
                    sign = -sign
                    break
            else:
                return 0 * m[0][0]
        pivot = m[step][step]
        for i in range(step + 1, size):
            row_i = m[i]
            row_k = m[step]
            lead = row_i[step]
            for j in range(step + 1, size):
                num = pivot * row_i[j] - lead * row_k[j]
                row_i[j] = _exact_div(num, prev)
            row_i[step] = 0
        prev = pivot
    return sign * m[-1][-1] if sign > 0 else -m[-1][-1]


def _exact_div(num, den):
    if den == 1:
        return num
    if isinstance(num, int) and isinstance(den, int):
        q, r = divmod(num, den)
        if r:  # Bareiss guarantees divisibility for exact inputs
            raise ArithmeticError("fraction-free elimination produced a non-divisible entry")
        return q
    if isinstance(num, float) or isinstance(den, float):
        return num / den
    return Fraction(num, den) if isinstance(num, int) else num / den


def adjugate(X: ShapeMatrix, s: int) -> MinorTable:
    """The order-s minor table of X; order 1 is X itself."""
    nrows = math.comb(X.n, X.k - 1)
    if not 1 <= s <= min(X.n, nrows):
        raise DomainError(f"minor order {s} out of range 1..{min(X.n, nrows)}")
    entries = X.entries
    values = []
    if s == 1:
        values = [[entries[r][c] for c in range(X.n)] for r in range(nrows)]
    elif s == 2:
        col_sets = tuple(itertools.combinations(range(X.n), 2))
        for r0, r1 in itertools.combinations(range(nrows), 2):
            top, bot = entries[r0], entries[r1]
            values.append([top[c0] * bot[c1] - top[c1] * bot[c0] for c0, c1 in col_sets])
    else:
        col_sets = tuple(itertools.combinations(range(X.n), s))
        for row_set in itertools.combinations(range(nrows), s):
            picked = [entries[r] for r in row_set]
            values.append([det([[row[c] for c in col_set] for row in picked])
                           for col_set in col_sets])
    return MinorTable(X.n, X.k, s, values, X.backend)


def laplace_residual(table_next: MinorTable, table: MinorTable, X: ShapeMatrix,
                     position: int):
    """Max |expansion mismatch| of the order-(s+1) table against the order-s one.

    Every order-(s+1) minor must equal its expansion along the entry column at
    1-based ``position`` within the minor's column selection; on an exact
    backend the residual of consistent tables is identically zero.
    """
    if (table_next.n, table_next.k) != (X.n, X.k) or (table.n, table.k) != (X.n, X.k):
        raise DomainError("tables and matrix disagree on (n, k)")
    if table_next.backend != X.backend or table.backend != X.backend:
        raise DomainError("tables and matrix disagree on backend")
    if table_next.s != table.s + 1:
        raise DomainError(f"expected consecutive orders, got {table.s} and {table_next.s}")
    s1 = table_next.s
    if not 1 <= position <= s1:
        raise DomainError(f"expansion position {position} out of range 1..{s1}")
    entries = X.entries
    worst = scalars.zero(X.backend)
    li = position - 1
    for row_set, value_row in zip(table_next.row_sets, table_next.values):
        for col_set, lhs in zip(table_next.col_sets, value_row):
            col = col_set[li]
            sub_cols = col_set[:li] + col_set[li + 1:]
            acc = scalars.zero(X.backend)
            for mi in range(s1):
                entry = entries[row_set[mi]][col]
                if entry == 0:
                    continue
                sub_rows = row_set[:mi] + row_set[mi + 1:]
                minor = table.value(sub_rows, sub_cols)
                term = entry * minor
                acc += term if (li + mi) % 2 == 0 else -term
            gap = lhs - acc
            if gap < 0:
                gap = -gap
            if gap > worst:
                worst = gap
    return worst
