"""Dense two-phase simplex with Bland anti-cycling.

Solves   minimize c·x  subject to  A x ≥ b,  x ≥ 0.

Desk-scale constraint counts need no external solver; the float path keeps the
tableau in a numpy array, the exact path runs the same algorithm on rational
scalars with zero tolerance (meant for small certificate-style instances).
Pivoting enters the most negative reduced cost while the objective makes
progress and switches permanently to Bland's rule (lowest eligible index in,
lowest basis index out on ties) once it stalls, so cycling is impossible and
the iteration cap only ever fires on genuinely huge instances; hitting it is
reported as its own status rather than raised.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DomainError, LPInternalError

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
ITERATION_LIMIT = "iteration_limit"


@dataclass
class LPResult:
    status: str
    x: list | None
    objective: object | None
    iterations: int


def minimize(c: Sequence, A: Sequence[Sequence], b: Sequence, *,
             exact: bool = False, max_iter: int | None = None,
             all_ones_var: int | None = None) -> LPResult:
    """Minimize c·x over {A x ≥ b, x ≥ 0}.

    ``all_ones_var`` names a variable whose constraint column is all ones
    (a uniform slack): raising it alone reaches feasibility, so the solve
    starts from that basis and phase one is skipped.
    """
    m = len(A)
    nv = len(c)
    if len(b) != m or any(len(row) != nv for row in A):
        raise DomainError(f"inconsistent LP dimensions: c has {nv}, A is {m} rows")
    if m == 0:
        zero = Fraction(0) if exact else 0.0
        return LPResult(OPTIMAL, [zero] * nv, zero, 0)
    if max_iter is None:
        max_iter = 200 + 25 * (m + nv)
    if all_ones_var is not None:
        if any(row[all_ones_var] != 1 for row in A):
            raise DomainError(f"variable {all_ones_var} is not an all-ones column")
        if max(b) > 0:
            return (_solve_exact_warm if exact else _solve_float_warm)(
                c, A, b, max_iter, all_ones_var)
    if exact:
        return _solve_exact(c, A, b, max_iter)
    return _solve_float(c, A, b, max_iter)


# ---------------------------------------------------------------------------
# float path (numpy tableau)

_EPS = 1e-9


def _solve_float(c, A, b, max_iter) -> LPResult:
    m, nv = len(A), len(c)
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)

    # rows with nonpositive rhs are negated so every rhs is nonnegative; the
    # surplus then enters with +1 and serves as the initial basic variable
    need_art = b > 0
    rows = np.where(need_art[:, None], A, -A)
    rhs = np.where(need_art, b, -b)
    surplus = np.diag(np.where(need_art, -1.0, 1.0))
    art_rows = np.flatnonzero(need_art)
    na = art_rows.size

    art = np.zeros((m, na))
    for j, i in enumerate(art_rows):
        art[i, j] = 1.0
    T = np.hstack([rows, surplus, art, rhs[:, None]])
    ncols = nv + m + na

    basis = np.empty(m, dtype=int)
    basis[:] = nv + np.arange(m)          # surplus where feasible
    for j, i in enumerate(art_rows):
        basis[i] = nv + m + j             # artificial elsewhere

    iterations = 0
    if na:
        cost1 = np.zeros(ncols)
        cost1[nv + m:] = 1.0
        status, iterations = _run_float(T, basis, cost1, max_iter, phase_cols=ncols)
        if status != OPTIMAL:
            return LPResult(status if status == ITERATION_LIMIT else INFEASIBLE,
                            None, None, iterations)
        if _phase_objective(T, basis, cost1) > 1e-7:
            return LPResult(INFEASIBLE, None, None, iterations)
        _evict_artificials_float(T, basis, nv + m)

    cost2 = np.zeros(ncols)
    cost2[:nv] = c
    status, extra = _run_float(T, basis, cost2, max_iter - iterations,
                               phase_cols=nv + m)
    iterations += extra
    if status != OPTIMAL:
        return LPResult(status, None, None, iterations)
    x = np.zeros(ncols)
    x[basis] = T[:, -1]
    objective = float(c @ x[:nv])
    return LPResult(OPTIMAL, [float(v) for v in x[:nv]], objective, iterations)


def _phase_objective(T, basis, cost) -> float:
    return float(cost[basis] @ T[:, -1])


def _solve_float_warm(c, A, b, max_iter, ones_var) -> LPResult:
    """Phase-two-only solve from the uniform-slack feasible basis."""
    m, nv = len(A), len(c)
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    T = np.hstack([A, -np.eye(m), b[:, None]])
    pivot_row = int(np.argmax(b))
    # basic form for {ones_var @ pivot_row, surplus elsewhere}: subtracting the
    # pivot row clears the all-ones column, negating restores +1 surplus signs
    keep = T[pivot_row].copy()
    T = keep[None, :] - T
    T[pivot_row] = keep
    basis = np.array([nv + i for i in range(m)])
    basis[pivot_row] = ones_var
    cost = np.concatenate([c, np.zeros(m)])
    status, iterations = _run_float(T, basis, cost, max_iter, phase_cols=nv + m)
    if status != OPTIMAL:
        return LPResult(status, None, None, iterations)
    x = np.zeros(nv + m)
    x[basis] = T[:, -1]
    return LPResult(OPTIMAL, [float(v) for v in x[:nv]],
                    float(c @ x[:nv]), iterations)


def _solve_exact_warm(c, A, b, max_iter, ones_var) -> LPResult:
    m, nv = len(A), len(c)
    c = [Fraction(v) for v in c]
    b = [Fraction(v) for v in b]
    pivot_row = max(range(m), key=lambda i: b[i])
    T = []
    for i in range(m):
        row = [Fraction(v) for v in A[i]] + [Fraction(0)] * m + [b[i]]
        row[nv + i] = Fraction(-1)
        T.append(row)
    keep = list(T[pivot_row])
    for i in range(m):
        T[i] = keep if i == pivot_row else [kv - v for kv, v in zip(keep, T[i])]
    basis = [nv + i for i in range(m)]
    basis[pivot_row] = ones_var
    cost = c + [Fraction(0)] * m
    status, iterations = _run_exact(T, basis, cost, max_iter, nv + m)
    if status != OPTIMAL:
        return LPResult(status, None, None, iterations)
    x = [Fraction(0)] * (nv + m)
    for i, bv in enumerate(basis):
        x[bv] = T[i][-1]
    objective = sum(ci * xi for ci, xi in zip(c, x[:nv]))
    return LPResult(OPTIMAL, x[:nv], objective, iterations)


_STALL_LIMIT = 40  # degenerate pivots tolerated before switching to Bland


def _run_float(T, basis, cost, max_iter, phase_cols) -> tuple[str, int]:
    """Pivot until optimal/unbounded; columns ≥ phase_cols stay out.

    Entering variable: most negative reduced cost (fast) until the objective
    stalls, then permanently Bland's lowest-index rule, which cannot cycle.
    """
    bland = False
    stall = 0
    last_objective = None
    for it in range(max(0, max_iter)):
        reduced = cost[:phase_cols] - cost[basis] @ T[:, :phase_cols]
        reduced[basis[basis < phase_cols]] = 0.0
        candidates = np.flatnonzero(reduced < -_EPS)
        if candidates.size == 0:
            return OPTIMAL, it
        col = int(candidates[0]) if bland else int(candidates[np.argmin(reduced[candidates])])
        column = T[:, col]
        eligible = np.flatnonzero(column > _EPS)
        if eligible.size == 0:
            return UNBOUNDED, it
        ratios = T[eligible, -1] / column[eligible]
        best = ratios.min()
        tied = eligible[ratios <= best + _EPS]
        row = int(tied[np.argmin(basis[tied])])
        _pivot_float(T, row, col)
        basis[row] = col
        if not bland:
            objective = float(cost[basis] @ T[:, -1])
            if last_objective is not None and objective >= last_objective - _EPS:
                stall += 1
                if stall > _STALL_LIMIT:
                    bland = True
            else:
                stall = 0
            last_objective = objective
    return ITERATION_LIMIT, max(0, max_iter)


def _pivot_float(T, row, col) -> None:
    T[row, :] /= T[row, col]
    factors = T[:, col].copy()
    factors[row] = 0.0
    T -= np.outer(factors, T[row, :])
    T[:, col] = 0.0
    T[row, col] = 1.0


def _evict_artificials_float(T, basis, real_cols) -> None:
    """Pivot zero-value basic artificials onto real columns where possible."""
    for i in range(T.shape[0]):
        if basis[i] < real_cols:
            continue
        nz = np.flatnonzero(np.abs(T[i, :real_cols]) > _EPS)
        if nz.size:
            _pivot_float(T, i, int(nz[0]))
            basis[i] = int(nz[0])
        # an all-zero row is a redundant constraint; leaving the artificial
        # basic at value 0 is harmless because its column never re-enters


# ---------------------------------------------------------------------------
# exact path (Fraction tableau)


def _solve_exact(c, A, b, max_iter) -> LPResult:
    m, nv = len(A), len(c)
    c = [Fraction(v) for v in c]
    b = [Fraction(v) for v in b]
    rows = []
    signs = []
    for i in range(m):
        bi = b[i]
        flip = bi <= 0
        signs.append(flip)
        row = [Fraction(v) if not flip else -Fraction(v) for v in A[i]]
        rows.append(row)
    rhs = [(-bi if flip else bi) for bi, flip in zip(b, signs)]
    art_rows = [i for i, flip in enumerate(signs) if not flip]
    na = len(art_rows)
    ncols = nv + m + na

    T = []
    for i in range(m):
        row = rows[i] + [Fraction(0)] * (m + na) + [rhs[i]]
        row[nv + i] = Fraction(1) if signs[i] else Fraction(-1)
        T.append(row)
    for j, i in enumerate(art_rows):
        T[i][nv + m + j] = Fraction(1)

    basis = [nv + i for i in range(m)]
    for j, i in enumerate(art_rows):
        basis[i] = nv + m + j

    iterations = 0
    if na:
        cost1 = [Fraction(0)] * (nv + m) + [Fraction(1)] * na
        status, iterations = _run_exact(T, basis, cost1, max_iter, ncols)
        if status != OPTIMAL:
            return LPResult(status if status == ITERATION_LIMIT else INFEASIBLE,
                            None, None, iterations)
        if sum(cost1[bv] * T[i][-1] for i, bv in enumerate(basis)) > 0:
            return LPResult(INFEASIBLE, None, None, iterations)
        _evict_artificials_exact(T, basis, nv + m)

    cost2 = c + [Fraction(0)] * (m + na)
    status, extra = _run_exact(T, basis, cost2, max_iter - iterations, nv + m)
    iterations += extra
    if status != OPTIMAL:
        return LPResult(status, None, None, iterations)
    x = [Fraction(0)] * ncols
    for i, bv in enumerate(basis):
        x[bv] = T[i][-1]
    objective = sum(ci * xi for ci, xi in zip(c, x[:nv]))
    return LPResult(OPTIMAL, x[:nv], objective, iterations)


def _run_exact(T, basis, cost, max_iter, phase_cols) -> tuple[str, int]:
    m = len(T)
    basis_set = set(basis)
    bland = False
    stall = 0
    last_objective = None
    for it in range(max(0, max_iter)):
        col = -1
        best_rj = 0
        for j in range(phase_cols):
            if j in basis_set:
                continue
            rj = cost[j] - sum(cost[basis[i]] * T[i][j] for i in range(m))
            if rj < 0:
                if bland:
                    col = j
                    break
                if rj < best_rj:
                    best_rj = rj
                    col = j
        if col < 0:
            return OPTIMAL, it
        row = -1
        best = None
        for i in range(m):
            tic = T[i][col]
            if tic > 0:
                ratio = T[i][-1] / tic
                if best is None or ratio < best or (ratio == best and basis[i] < basis[row]):
                    best = ratio
                    row = i
        if row < 0:
            return UNBOUNDED, it
        _pivot_exact(T, row, col)
        basis_set.discard(basis[row])
        basis[row] = col
        basis_set.add(col)
        if not bland:
            objective = sum(cost[basis[i]] * T[i][-1] for i in range(m))
            if last_objective is not None and objective >= last_objective:
                stall += 1
                if stall > _STALL_LIMIT:
                    bland = True
            else:
                stall = 0
            last_objective = objective
    return ITERATION_LIMIT, max(0, max_iter)


def _pivot_exact(T, row, col) -> None:
    pivot = T[row][col]
    if pivot == 0:
        raise LPInternalError("pivot on a zero entry")
    T[row] = [v / pivot for v in T[row]]
    prow = T[row]
    for i in range(len(T)):
        if i == row:
            continue
        factor = T[i][col]
        if factor != 0:
            T[i] = [v - factor * pv for v, pv in zip(T[i], prow)]


def _evict_artificials_exact(T, basis, real_cols) -> None:
    for i in range(len(T)):
        if basis[i] < real_cols:
            continue
        for j in range(real_cols):
            if T[i][j] != 0:
                _pivot_exact(T, i, j)
                basis[i] = j
                break
