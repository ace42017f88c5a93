"""The projection from shape matrices to forms and its wedge-power machinery.

``project`` sends a shape matrix to the form obtained by wedging each column
(read as a (k−1)-form) with its coordinate direction on the right.  It sends
outer products to wedge products and gradients to exterior derivatives, and it
is onto, with ``right_inverse`` as a sign-free section.

For even k the s-th wedge power of a projected matrix is a signed sum of
order-s minors; ``wedge_power_from_minors`` evaluates that expansion directly
from a minor table, ``minor_power_map`` materializes it as an explicit linear
map from minor space to degree-k·s forms, and ``pullback_support`` is that
map's transpose, turning form-side support coefficients into minor-space
coefficient tables.  For odd k (any power ≥ 2) and for powers beyond n/k the
maps are identically zero and the fast paths return zero without touching
minors.

All interlace signs here use the append convention (index written after its
block); see the multiindex module for why the expansion needs that variant.
"""

from __future__ import annotations

import itertools
import math
from typing import Sequence

from . import scalars
from .errors import DomainError
from .exterior import KForm
from .multiindex import (MultiIndex, block_partitions, enumerate_multiindices, rank,
                         sign_append, sign_interlace_append)
from .shapespace import MinorTable, ShapeMatrix, adjugate


def project(X: ShapeMatrix) -> KForm:
    """Project a shape matrix to its degree-k form.

    Coefficient of e^K is Σ_{j∈K} sign_append(j, K∖j) · X[K∖j, j]; for k = 2
    this is the antisymmetrization X − Xᵀ read into coefficients.
    """
    n, k = X.n, X.k
    row_rank = {mi.indices: i for i, mi in enumerate(enumerate_multiindices(n, k - 1))}
    entries = X.entries
    out = []
    for K in enumerate_multiindices(n, k):
        acc = scalars.zero(X.backend)
        idx = K.indices
        for p, j in enumerate(idx, start=1):
            value = entries[row_rank[idx[:p - 1] + idx[p:]]][j - 1]
            if value == 0:
                continue
            # append sign for position p in a length-k union: (−1)^(k−p)
            acc += value if (k - p) % 2 == 0 else -value
        out.append(acc)
    return KForm(n, k, out, X.backend)


def right_inverse(x: KForm) -> ShapeMatrix:
    """A section of the projection: project(right_inverse(x)) == x exactly.

    Each coefficient is parked in the slot (K∖max K, max K), whose append sign
    is +1, so the construction is sign-free.
    """
    n, k = x.n, x.k
    if not 2 <= k <= n:
        raise DomainError(f"right inverse needs 2 ≤ k ≤ n, got k={k}, n={n}")
    nrows = math.comb(n, k - 1)
    rows = [[scalars.zero(x.backend)] * n for _ in range(nrows)]
    for K, value in zip(enumerate_multiindices(n, k), x.coeffs):
        if value == 0:
            continue
        top = K.indices[-1]
        rows[rank(MultiIndex(K.indices[:-1], n))][top - 1] = value
    return ShapeMatrix(n, k, rows, x.backend)


def _power_degree_checks(n: int, k: int, s: int) -> None:
    limit = min(n, math.comb(n, k - 1))
    if not 2 <= s <= limit:
        raise DomainError(f"power order {s} out of range 2..{limit}")


def wedge_power_from_minors(X: ShapeMatrix, s: int, _flip_one_sign: bool = False) -> KForm:
    """Evaluate the s-th wedge power of project(X) from its order-s minors.

    Zero without computing minors when k is odd or s exceeds n/k.  The
    ``_flip_one_sign`` hook negates a single interlace sign so checkers can
    prove they would catch a sign fault; it is never set in real use.
    """
    n, k = X.n, X.k
    _power_degree_checks(n, k, s)
    if k % 2 == 1 or s > n // k:
        return KForm.zero(n, k * s, X.backend)
    table = adjugate(X, s)
    factor = math.factorial(s)
    row_rank = {mi.indices: i for i, mi in enumerate(enumerate_multiindices(n, k - 1))}
    out = []
    flip = -1 if _flip_one_sign else 1
    for K in enumerate_multiindices(n, k * s):
        acc = scalars.zero(X.backend)
        for part in block_partitions(K, s, k):
            sign = sign_interlace_append(part.J.indices, part.blocks) * flip
            flip = 1
            row_set = tuple(sorted(row_rank[b.indices] for b in part.blocks))
            col_set = tuple(j - 1 for j in part.J.indices)
            minor = table.value(row_set, col_set)
            acc += minor if sign > 0 else -minor
        out.append(factor * acc)
    return KForm(n, k * s, out, X.backend)


class MinorPowerMap:
    """Linear map from order-s minor space to degree-k·s forms.

    Matrix rows follow the degree-k·s basis; columns flatten minor cells
    row-set-major.  Entries are s!·(append interlace sign) on cells whose
    row/column selections split the target multiindex, zero elsewhere; the
    whole matrix is zero for odd k or s beyond n/k.
    """

    __slots__ = ("n", "k", "s", "entries")

    def __init__(self, n: int, k: int, s: int, entries: tuple[tuple[int, ...], ...]):
        self.n, self.k, self.s = n, k, s
        self.entries = entries

    @property
    def shape(self) -> tuple[int, int]:
        rows = len(self.entries)
        return rows, len(self.entries[0]) if rows else 0

    def apply(self, table: MinorTable | None = None, scalar=None) -> KForm:
        """Apply to a minor table (or, at order 0, to a plain scalar)."""
        if self.s == 0:
            if scalar is None:
                raise DomainError("the order-0 map applies to a scalar")
            backend = scalars.FLOAT if isinstance(scalar, float) else scalars.EXACT
            return KForm(self.n, 0, [scalar], backend)
        if table is None:
            raise DomainError("missing minor table")
        if (table.n, table.k, table.s) != (self.n, self.k, self.s):
            raise DomainError(f"table space ({table.n},{table.k},{table.s}) does not match "
                              f"map space ({self.n},{self.k},{self.s})")
        flat = [v for row in table.values for v in row]
        out = []
        for row in self.entries:
            acc = scalars.zero(table.backend)
            for coeff, value in zip(row, flat):
                if coeff:
                    acc += coeff * value
            out.append(acc)
        return KForm(self.n, self.k * self.s, out, table.backend)


def minor_power_map(n: int, k: int, s: int) -> MinorPowerMap:
    """Materialize the order-s power map; order 1 is the projection, order 0 identity."""
    if s == 0:
        return MinorPowerMap(n, k, 0, ((1,),))
    nrows_matrix = math.comb(n, k - 1)
    if s == 1:
        ncells = nrows_matrix * n
        rows = []
        for K in enumerate_multiindices(n, k):
            row = [0] * ncells
            for j in K.indices:
                reduced = K.without(j)
                row[rank(reduced) * n + (j - 1)] = sign_append(j, reduced)
            rows.append(tuple(row))
        return MinorPowerMap(n, k, 1, tuple(rows))
    _power_degree_checks(n, k, s)
    row_sets = list(itertools.combinations(range(nrows_matrix), s))
    col_sets = list(itertools.combinations(range(n), s))
    row_set_index = {rs: i for i, rs in enumerate(row_sets)}
    col_set_index = {cs: i for i, cs in enumerate(col_sets)}
    ncells = len(row_sets) * len(col_sets)
    targets = enumerate_multiindices(n, k * s) if k * s <= n else []
    rows = [[0] * ncells for _ in targets]
    if k % 2 == 0 and s <= n // k:
        factor = math.factorial(s)
        label_rank = {mi.indices: i for i, mi in enumerate(enumerate_multiindices(n, k - 1))}
        for ti, K in enumerate(targets):
            row = rows[ti]
            for part in block_partitions(K, s, k):
                sign = sign_interlace_append(part.J.indices, part.blocks)
                rs = tuple(sorted(label_rank[b.indices] for b in part.blocks))
                cs = tuple(j - 1 for j in part.J.indices)
                row[row_set_index[rs] * len(col_sets) + col_set_index[cs]] = factor * sign
    return MinorPowerMap(n, k, s, tuple(tuple(r) for r in rows))


def pullback_support(forms: Sequence[KForm]) -> list[MinorTable]:
    """Transpose of the power maps: forms D_s ↦ minor-space tables d_s.

    Input holds D_s of degree k·s for s = 1..n//k (k read off the first form).
    Each output table pairs with every minor table M exactly as D_s pairs with
    the power map's image of M; on a partition cell the entry is
    s!·(append interlace sign)·(D_s coefficient at the joint multiindex).
    """
    if not forms:
        raise DomainError("need at least one support form")
    k = forms[0].k
    n = forms[0].n
    backend = forms[0].backend
    if not 2 <= k <= n:
        raise DomainError(f"support pullback needs 2 ≤ k ≤ n, got k={k}, n={n}")
    if len(forms) != n // k:
        raise DomainError(f"expected {n // k} support forms for (n={n}, k={k}), got {len(forms)}")
    for s, form in enumerate(forms, start=1):
        if form.n != n or form.backend != backend:
            raise DomainError("support forms disagree on dimension or backend")
        if form.k != k * s:
            raise DomainError(f"form {s} has degree {form.k}, expected {k * s}")
    labels = enumerate_multiindices(n, k - 1)
    out = []
    nrows_matrix = math.comb(n, k - 1)
    for s, form in enumerate(forms, start=1):
        factor = math.factorial(s)
        values = []
        for row_set in itertools.combinations(range(nrows_matrix), s):
            blocks = [labels[r] for r in row_set]
            block_members = set()
            degenerate = False
            for b in blocks:
                for i in b.indices:
                    if i in block_members:
                        degenerate = True
                        break
                    block_members.add(i)
                if degenerate:
                    break
            row_vals = []
            for col_set in itertools.combinations(range(n), s):
                cols = tuple(c + 1 for c in col_set)
                if degenerate or block_members & set(cols):
                    row_vals.append(scalars.zero(backend))
                    continue
                joint = tuple(sorted(block_members | set(cols)))
                sign = sign_interlace_append(cols, blocks)
                coeff = form.coefficient(MultiIndex(joint, n))
                value = factor * coeff
                row_vals.append(value if sign > 0 else -value)
            values.append(row_vals)
        out.append(MinorTable(n, k, s, values, backend))
    return out
