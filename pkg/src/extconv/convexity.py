"""Sampled and LP-based testers for the exterior convexity notions.

All sampled checks are falsifiers, not provers: a pass means "no violation
found in N trials at tolerance τ" and is reported as exactly that.  A fail
always carries a witness whose numbers replay the violation bit-for-bit.

The checks implemented here:

* second-difference convexity/affinity along degree-one wedge lines
  (``check_ext_one_convex`` / ``check_ext_one_affine``), and the classical
  rank-one counterpart for matrix functions (``check_rank_one_convex``);
* the lift f ∘ projection and the line-consistency cross-check tying the two
  families of line tests together (``cross_check_lift``);
* a least-squares fitter recovering wedge-power pairings for functions affine
  along every line (``fit_quasiaffine``);
* a supporting-coefficient search (``polyconvex_support_lp``): over a sampled
  set of forms, the smallest uniform slack t for which some coefficients c_s
  satisfy f(η) ≥ f(ξ) + Σ_s⟨c_s, η^s − ξ^s⟩ − t on the whole sample.  A slack
  within tolerance certifies the sample; a positive optimal slack is a sound
  refutation, because the sampled constraints alone already admit no
  supporting coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import scalars
from .errors import DomainError, LPInternalError
from .exterior import KForm, scalar_product, wedge, wedge_power
from .functions import FormFunction
from .projection import project, right_inverse
from .sampling import (derive_rng, random_exact_form, random_form, random_line,
                       random_matrix)
from .shapespace import ShapeMatrix, tensor
from . import simplex


@dataclass
class SamplerConfig:
    """Knobs shared by every sampled check; defaults match the campaign defaults."""

    seed: int = 0
    trials: int = 100
    coeff_range: float = 2.0
    step: float = 1e-3
    tolerance: float = 1e-9

    def __post_init__(self):
        if self.trials < 1:
            raise DomainError("trials must be at least 1")
        if self.step <= 0:
            raise DomainError("step must be positive")
        if self.tolerance < 0:
            raise DomainError("tolerance must be nonnegative")


@dataclass
class Verdict:
    status: str                    # "pass" | "fail"
    mode: str
    trials: int
    seed: int
    tolerance: float
    step: float
    witness: dict | None = None

    def to_json(self) -> dict:
        out = {"status": self.status, "mode": self.mode, "trials": self.trials,
               "seed": self.seed, "tolerance": self.tolerance, "step": self.step}
        out["witness"] = self.witness
        return out


def line_restriction(f: FormFunction, xi: KForm, alpha: KForm, beta: KForm
                     ) -> Callable:
    """The scalar function t ↦ f(xi + t · alpha∧beta)."""
    if alpha.k != f.k - 1 or beta.k != 1:
        raise DomainError(f"direction degrees ({alpha.k},{beta.k}) do not fit a "
                          f"degree-{f.k} line")
    direction = wedge(alpha, beta)
    if (direction.n, direction.k) != (xi.n, xi.k):
        raise DomainError("direction does not live in the argument space")

    def g(t):
        return f(xi + direction.scale(t))

    return g


def _second_difference(g: Callable, t: float, h: float):
    return g(t + h) + g(t - h) - 2 * g(t)


def _scan_lines(f: FormFunction, cfg: SamplerConfig, mode: str) -> Verdict:
    affine = mode == "one-affine"
    for trial in range(cfg.trials):
        rng = derive_rng(cfg.seed, trial)
        xi = random_form(f.n, f.k, rng, cfg.coeff_range)
        alpha, beta = random_line(f.n, f.k, rng, cfg.coeff_range)
        t = rng.uniform(-1.0, 1.0)
        g = line_restriction(f, xi, alpha, beta)
        d2 = _second_difference(g, t, cfg.step)
        threshold = cfg.tolerance * max(1.0, abs(g(t)))
        bad = abs(d2) > threshold if affine else d2 < -threshold
        if bad:
            witness = {"trial": trial, "xi": xi.to_json(), "alpha": alpha.to_json(),
                       "beta": beta.to_json(), "t": t, "h": cfg.step,
                       "second_difference": d2, "threshold": threshold}
            return Verdict("fail", mode, cfg.trials, cfg.seed, cfg.tolerance,
                           cfg.step, witness)
    return Verdict("pass", mode, cfg.trials, cfg.seed, cfg.tolerance, cfg.step)


def check_ext_one_convex(f: FormFunction, cfg: SamplerConfig) -> Verdict:
    """Sampled second-difference test along wedge lines; fail carries a witness."""
    return _scan_lines(f, cfg, "one-convex")


def check_ext_one_affine(f: FormFunction, cfg: SamplerConfig) -> Verdict:
    """As the convexity check, but requiring |second difference| ≤ tolerance."""
    return _scan_lines(f, cfg, "one-affine")


def replay_witness(f: FormFunction, witness: dict):
    """Recompute the witnessed second difference from its stored numbers."""
    xi = KForm.from_json(witness["xi"], scalars.FLOAT)
    alpha = KForm.from_json(witness["alpha"], scalars.FLOAT)
    beta = KForm.from_json(witness["beta"], scalars.FLOAT)
    g = line_restriction(f, xi, alpha, beta)
    return _second_difference(g, witness["t"], witness["h"])


class LiftedFunction:
    """The matrix function X ↦ f(project(X))."""

    __slots__ = ("f", "n", "k")

    def __init__(self, f: FormFunction):
        self.f = f
        self.n = f.n
        self.k = f.k

    def __call__(self, X: ShapeMatrix):
        if (X.n, X.k) != (self.n, self.k):
            raise DomainError(f"matrix lives in ({X.n},{X.k}), lift expects "
                              f"({self.n},{self.k})")
        return self.f(project(X))


def lift(f: FormFunction) -> LiftedFunction:
    return LiftedFunction(f)


def check_rank_one_convex(F: Callable, n: int, k: int, cfg: SamplerConfig) -> Verdict:
    """Second-difference test for a matrix function along rank-one directions."""
    for trial in range(cfg.trials):
        rng = derive_rng(cfg.seed, trial)
        X = random_matrix(n, k, rng, cfg.coeff_range)
        a = random_form(n, k - 1, rng, cfg.coeff_range)
        b = random_form(n, 1, rng, cfg.coeff_range)
        direction = tensor(a, b)
        t = rng.uniform(-1.0, 1.0)

        def g(tau):
            return F(X + direction.scale(tau))

        d2 = _second_difference(g, t, cfg.step)
        threshold = cfg.tolerance * max(1.0, abs(g(t)))
        if d2 < -threshold:
            witness = {"trial": trial, "X": X.to_json(), "a": a.to_json(),
                       "b": b.to_json(), "t": t, "h": cfg.step,
                       "second_difference": d2, "threshold": threshold}
            return Verdict("fail", "rank-one-convex", cfg.trials, cfg.seed,
                           cfg.tolerance, cfg.step, witness)
    return Verdict("pass", "rank-one-convex", cfg.trials, cfg.seed,
                   cfg.tolerance, cfg.step)


@dataclass
class LineCrossCheck:
    backend: str
    lines: int
    points_per_line: int
    max_discrepancy: object
    tolerance: float
    status: str

    def to_json(self) -> dict:
        gap = self.max_discrepancy
        return {"backend": self.backend, "lines": self.lines,
                "points_per_line": self.points_per_line,
                "max_discrepancy": scalars.scalar_to_json(gap, self.backend),
                "tolerance": self.tolerance, "status": self.status}


def cross_check_lift(f: FormFunction, cfg: SamplerConfig,
                     backend: str = scalars.FLOAT,
                     points_per_line: int = 3,
                     tolerance: float = 1e-12) -> LineCrossCheck:
    """Compare f along wedge lines with its lift along the matched matrix lines.

    The matched matrix line sits at right_inverse(xi) + t · alpha⊗beta; the
    discrepancy is exactly zero algebraically, so anything beyond float
    rounding is a sign fault somewhere in the projection path.
    """
    scalars.check_backend(backend)
    exact = backend == scalars.EXACT
    F = lift(f)
    worst = scalars.zero(backend)
    for trial in range(cfg.trials):
        rng = derive_rng(cfg.seed, trial)
        if exact:
            xi = random_exact_form(f.n, f.k, rng)
            alpha, beta = random_line(f.n, f.k, rng, cfg.coeff_range, exact=True)
        else:
            xi = random_form(f.n, f.k, rng, cfg.coeff_range)
            alpha, beta = random_line(f.n, f.k, rng, cfg.coeff_range)
        g = line_restriction(f, xi, alpha, beta)
        base = right_inverse(xi)
        direction = tensor(alpha, beta)
        for _ in range(points_per_line):
            if exact:
                t = Fraction(rng.randint(-8, 8), rng.randint(1, 4))
            else:
                t = rng.uniform(-1.0, 1.0)
            gap = g(t) - F(base + direction.scale(t))
            if gap < 0:
                gap = -gap
            if gap > worst:
                worst = gap
    ok = (worst == 0) if exact else (worst <= tolerance)
    return LineCrossCheck(backend, cfg.trials, points_per_line, worst, tolerance,
                          "pass" if ok else "fail")


@dataclass
class QuasiaffineFit:
    """Result of fitting f(ξ) ≈ c_0 + Σ_s⟨c_s, ξ^s⟩ by least squares."""

    status: str                        # "ok" | "inconclusive"
    constant: float
    coefficients: list[KForm] = field(default_factory=list)
    validation_residual: float = float("inf")
    samples: int = 0
    seed: int = 0

    def as_function(self, n: int, k: int) -> FormFunction:
        return FormFunction.affine_combination(n, k, [self.constant, *self.coefficients])

    def to_json(self) -> dict:
        return {"status": self.status, "constant": self.constant,
                "coefficients": [c.to_json() for c in self.coefficients],
                "validation_residual": self.validation_residual,
                "samples": self.samples, "seed": self.seed}


def _power_features(xi: KForm, smax: int) -> list[float]:
    feats = [1.0]
    power = xi
    feats.extend(power.coeffs)
    for s in range(2, smax + 1):
        power = wedge(power, xi)
        feats.extend(power.coeffs)
    return feats


def fit_quasiaffine(f: FormFunction, cfg: SamplerConfig,
                    validation_samples: int | None = None) -> QuasiaffineFit:
    """Least-squares recovery of a wedge-power pairing representation.

    The design matrix stacks (1, ξ, ξ², ...) coefficient features over at
    least twice as many samples as unknowns; the reported residual is the
    worst absolute error on a fresh validation sample, so a function that is
    not a wedge-power pairing is rejected by a large residual rather than by a
    fitted-but-meaningless coefficient vector.  Feature columns that vanish
    identically on the sample (odd-degree powers) are pinned to zero instead of
    being left floating.
    """
    n, k = f.n, f.k
    smax = n // k
    dims = [math.comb(n, k * s) for s in range(1, smax + 1)]
    unknowns = 1 + sum(dims)
    nsamples = max(cfg.trials, 2 * unknowns)
    if validation_samples is None:
        validation_samples = max(cfg.trials, 50)

    spread = cfg.coeff_range
    for attempt in range(3):
        offset = attempt * 10_000_000
        rows, targets = [], []
        for j in range(nsamples):
            rng = derive_rng(cfg.seed, offset + j)
            xi = random_form(n, k, rng, spread)
            rows.append(_power_features(xi, smax))
            targets.append(f(xi))
        design = np.asarray(rows, dtype=float)
        y = np.asarray(targets, dtype=float)

        live = np.flatnonzero(np.abs(design).max(axis=0) > 1e-12)
        solution = np.zeros(unknowns)
        sub = design[:, live]
        coeffs, _, rank, _ = np.linalg.lstsq(sub, y, rcond=None)
        if rank < live.size:
            spread *= 2.0  # widen the cloud and retry before giving up
            continue
        solution[live] = coeffs

        worst = 0.0
        for j in range(validation_samples):
            rng = derive_rng(cfg.seed, 77_000_000 + j)
            xi = random_form(n, k, rng, cfg.coeff_range)
            predicted = float(np.dot(solution, _power_features(xi, smax)))
            gap = abs(f(xi) - predicted)
            if gap > worst:
                worst = gap

        forms = []
        pos = 1
        for s, dim in enumerate(dims, start=1):
            forms.append(KForm(n, k * s, [float(v) for v in solution[pos:pos + dim]],
                               scalars.FLOAT))
            pos += dim
        return QuasiaffineFit("ok", float(solution[0]), forms, worst,
                              nsamples, cfg.seed)
    return QuasiaffineFit("inconclusive", 0.0, [], float("inf"), nsamples, cfg.seed)


@dataclass
class SupportSearch:
    """Outcome of the supporting-coefficient LP at one base point."""

    status: str                       # "certified" | "refuted" | "inconclusive"
    base: KForm
    slack: float | None
    coefficients: list[KForm] | None
    sample_size: int
    seed: int
    tolerance: float

    def to_json(self) -> dict:
        return {"status": self.status, "base": self.base.to_json(),
                "slack": None if self.slack is None else float(self.slack),
                "coefficients": None if self.coefficients is None
                else [c.to_json() for c in self.coefficients],
                "sample_size": self.sample_size, "seed": self.seed,
                "tolerance": self.tolerance}


def polyconvex_support_lp(f: FormFunction, xi: KForm, cfg: SamplerConfig,
                          etas: Sequence[KForm] | None = None) -> SupportSearch:
    """Search for supporting coefficients c_s at the base point ``xi``.

    Minimizes the uniform slack t ≥ 0 subject to
    f(η_j) − f(ξ) − Σ_s⟨c_s, η_j^s − ξ^s⟩ ≥ −t over the sample {η_j}.  The
    optimal slack is the smallest worst-case violation any coefficient choice
    leaves; within tolerance it yields a certificate, above it the sampled
    points alone already rule every candidate out.
    """
    n, k = f.n, f.k
    if (xi.n, xi.k) != (n, k):
        raise DomainError(f"base point lives in ({xi.n},{xi.k}), expected ({n},{k})")
    smax = n // k
    dims = [math.comb(n, k * s) for s in range(1, smax + 1)]
    total = sum(dims)

    if etas is None:
        etas = [random_form(n, k, derive_rng(cfg.seed, j), cfg.coeff_range)
                for j in range(cfg.trials)]
    else:
        etas = list(etas)

    base_powers = [wedge_power(xi, s) for s in range(1, smax + 1)]
    f_base = f(xi)

    A, b = [], []
    for eta in etas:
        w: list[float] = []
        power = eta
        for s in range(1, smax + 1):
            if s > 1:
                power = wedge(power, eta)
            diff = power - base_powers[s - 1]
            w.extend(float(v) for v in diff.coeffs)
        row = [-v for v in w] + w + [1.0]
        A.append(row)
        b.append(-(f(eta) - f_base))

    cost = [0.0] * (2 * total) + [1.0]
    result = simplex.minimize(cost, A, b, all_ones_var=2 * total)
    if result.status == simplex.UNBOUNDED:
        raise LPInternalError("support slack is bounded below by zero yet the "
                              "solver reported unbounded")
    if result.status != simplex.OPTIMAL:
        return SupportSearch("inconclusive", xi, None, None, len(etas),
                             cfg.seed, cfg.tolerance)
    x = result.x
    slack = float(result.objective)
    forms = []
    pos = 0
    for s, dim in enumerate(dims, start=1):
        block = [x[pos + i] - x[total + pos + i] for i in range(dim)]
        forms.append(KForm(n, k * s, [float(v) for v in block], scalars.FLOAT))
        pos += dim
    status = "certified" if slack <= cfg.tolerance else "refuted"
    return SupportSearch(status, xi, slack, forms, len(etas), cfg.seed,
                         cfg.tolerance)


def support_inequality_gap(f: FormFunction, xi: KForm,
                           coefficients: Sequence[KForm], eta: KForm):
    """Violation f(ξ) + Σ⟨c_s, η^s − ξ^s⟩ − f(η) of the support inequality at η."""
    total = f(xi)
    for s, c in enumerate(coefficients, start=1):
        total += scalar_product(c, wedge_power(eta, s) - wedge_power(xi, s))
    return total - f(eta)
