"""Deterministic random generators shared by checkers, campaigns and the CLI.

Every trial draws from its own stream derived from (seed, trial index), so
results do not depend on scheduling and any witness can be replayed from the
numbers stored in the report.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from . import scalars
from .exterior import KForm, wedge
from .shapespace import ShapeMatrix

_STRIDE = 1_000_003  # coprime spacing keeps per-trial streams disjoint


def derive_rng(seed: int, index: int) -> random.Random:
    return random.Random(seed * _STRIDE + index)


def random_form(n: int, k: int, rng: random.Random, scale: float) -> KForm:
    coeffs = [rng.uniform(-scale, scale) for _ in range(math.comb(n, k))]
    return KForm(n, k, coeffs, scalars.FLOAT)


def random_exact_form(n: int, k: int, rng: random.Random,
                      numerator: int = 8, denominator: int = 4) -> KForm:
    coeffs = [Fraction(rng.randint(-numerator, numerator), rng.randint(1, denominator))
              for _ in range(math.comb(n, k))]
    return KForm(n, k, coeffs, scalars.EXACT)


def random_matrix(n: int, k: int, rng: random.Random, scale: float) -> ShapeMatrix:
    rows = [[rng.uniform(-scale, scale) for _ in range(n)]
            for _ in range(math.comb(n, k - 1))]
    return ShapeMatrix(n, k, rows, scalars.FLOAT)


def random_integer_matrix(n: int, k: int, rng: random.Random,
                          low: int = -5, high: int = 5) -> ShapeMatrix:
    """Exact-backend matrix with integer entries, the campaign default."""
    rows = [[rng.randint(low, high) for _ in range(n)]
            for _ in range(math.comb(n, k - 1))]
    return ShapeMatrix(n, k, rows, scalars.EXACT)


def random_line(n: int, k: int, rng: random.Random, scale: float,
                exact: bool = False) -> tuple[KForm, KForm]:
    """A direction pair (alpha, beta) with alpha ∧ beta ≠ 0.

    Degenerate draws carry no information for line tests, so they are
    redrawn; with continuous coefficients this effectively never loops.
    """
    for _ in range(100):
        if exact:
            alpha = random_exact_form(n, k - 1, rng)
            beta = random_exact_form(n, 1, rng)
        else:
            alpha = random_form(n, k - 1, rng, scale)
            beta = random_form(n, 1, rng, scale)
        if not wedge(alpha, beta).is_zero():
            return alpha, beta
    raise RuntimeError(f"could not draw a nondegenerate direction for (n={n}, k={k})")
