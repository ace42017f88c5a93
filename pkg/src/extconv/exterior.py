"""Alternating forms with exact-rational or float coefficients.

A degree-k form on R^n is stored densely: one coefficient per length-k
multiindex, in alphabetical rank order.  Degrees above n are legal and carry
an empty coefficient vector (the canonical zero object), so wedge chains never
branch on overflow.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Mapping, Sequence

from . import scalars
from .errors import DomainError
from .multiindex import MultiIndex, enumerate_multiindices, rank, sign_of_string


class KForm:
    """Element of the degree-k exterior power over R^n."""

    __slots__ = ("n", "k", "coeffs", "backend")

    def __init__(self, n: int, k: int, coeffs: Sequence | None = None,
                 backend: str = scalars.EXACT):
        if n < 1:
            raise DomainError(f"dimension must be positive, got {n}")
        if k < 0:
            raise DomainError(f"degree must be nonnegative, got {k}")
        scalars.check_backend(backend)
        size = math.comb(n, k)
        if coeffs is None:
            coeffs = (scalars.zero(backend),) * size
        else:
            coeffs = tuple(scalars.coerce(c, backend) for c in coeffs)
            if len(coeffs) != size:
                raise DomainError(f"expected {size} coefficients for ({n},{k}), got {len(coeffs)}")
        self.n = n
        self.k = k
        self.coeffs = coeffs
        self.backend = backend

    @classmethod
    def zero(cls, n: int, k: int, backend: str = scalars.EXACT) -> "KForm":
        return cls(n, k, None, backend)

    @classmethod
    def basis(cls, n: int, indices: Sequence[int], backend: str = scalars.EXACT) -> "KForm":
        """The basis form e^I for the (sorted, distinct) index tuple I."""
        mi = MultiIndex(tuple(indices), n)
        coeffs = [scalars.zero(backend)] * math.comb(n, mi.k)
        coeffs[rank(mi)] = scalars.one(backend)
        return cls(n, mi.k, coeffs, backend)

    @classmethod
    def from_dict(cls, n: int, k: int, entries: Mapping[Sequence[int], object],
                  backend: str = scalars.EXACT) -> "KForm":
        coeffs = [scalars.zero(backend)] * math.comb(n, k)
        for key, value in entries.items():
            mi = key if isinstance(key, MultiIndex) else MultiIndex(tuple(key), n)
            if mi.k != k:
                raise DomainError(f"key {mi.indices} has length {mi.k}, expected {k}")
            coeffs[rank(mi)] = scalars.coerce(value, backend)
        return cls(n, k, coeffs, backend)

    def coefficient(self, indices: Sequence[int] | MultiIndex):
        mi = indices if isinstance(indices, MultiIndex) else MultiIndex(tuple(indices), self.n)
        if mi.k != self.k:
            raise DomainError(f"index length {mi.k} does not match degree {self.k}")
        return self.coeffs[rank(mi)]

    def as_dict(self) -> dict[tuple[int, ...], object]:
        """Nonzero coefficients keyed by index tuple."""
        basis = enumerate_multiindices(self.n, self.k)
        return {mi.indices: c for mi, c in zip(basis, self.coeffs) if c != 0}

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def scale(self, factor) -> "KForm":
        factor = scalars.coerce(factor, self.backend)
        return KForm(self.n, self.k, [factor * c for c in self.coeffs], self.backend)

    def __add__(self, other: "KForm") -> "KForm":
        _check_same_space(self, other)
        return KForm(self.n, self.k, [a + b for a, b in zip(self.coeffs, other.coeffs)],
                     self.backend)

    def __sub__(self, other: "KForm") -> "KForm":
        _check_same_space(self, other)
        return KForm(self.n, self.k, [a - b for a, b in zip(self.coeffs, other.coeffs)],
                     self.backend)

    def __neg__(self) -> "KForm":
        return KForm(self.n, self.k, [-c for c in self.coeffs], self.backend)

    def __eq__(self, other) -> bool:
        if not isinstance(other, KForm):
            return NotImplemented
        return (self.n, self.k, self.backend) == (other.n, other.k, other.backend) \
            and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, self.k, self.backend, self.coeffs))

    def __repr__(self) -> str:
        return f"KForm(n={self.n}, k={self.k}, {self.as_dict()!r}, backend={self.backend!r})"

    def to_json(self) -> dict:
        basis = enumerate_multiindices(self.n, self.k)
        coeffs = {mi.text: scalars.scalar_to_json(c, self.backend)
                  for mi, c in zip(basis, self.coeffs) if c != 0}
        return {"n": self.n, "k": self.k, "coeffs": coeffs}

    @classmethod
    def from_json(cls, obj: Mapping, backend: str | None = None) -> "KForm":
        n, k = int(obj["n"]), int(obj["k"])
        raw = obj.get("coeffs", {})
        if backend is None:
            backend = scalars.FLOAT if any(isinstance(v, float) for v in raw.values()) \
                else scalars.EXACT
        entries = {MultiIndex.from_text(key, n): scalars.scalar_from_json(value, backend)
                   for key, value in raw.items()}
        return cls.from_dict(n, k, entries, backend)


def _check_same_space(a: KForm, b: KForm) -> None:
    if a.n != b.n or a.backend != b.backend:
        raise DomainError(f"mismatched forms: ({a.n},{a.backend}) vs ({b.n},{b.backend})")
    if a.k != b.k:
        raise DomainError(f"mismatched degrees: {a.k} vs {b.k}")


@lru_cache(maxsize=None)
def _wedge_pairs(n: int, k: int, l: int) -> tuple[tuple[int, int, int, int], ...]:
    """Structure table for degree (k,l) -> k+l: (rank_a, rank_b, sign, rank_out)."""
    left = enumerate_multiindices(n, k)
    right = enumerate_multiindices(n, l)
    out: list[tuple[int, int, int, int]] = []
    for ra, I in enumerate(left):
        I_set = set(I.indices)
        for rb, J in enumerate(right):
            if I_set & set(J.indices):
                continue
            sign = sign_of_string(I.indices + J.indices)
            target = MultiIndex(tuple(sorted(I.indices + J.indices)), n)
            out.append((ra, rb, sign, rank(target)))
    return tuple(out)


def wedge(a: KForm, b: KForm) -> KForm:
    """Exterior product; bilinear, e^I ∧ e^J = ±e^[I∪J] on disjoint strings."""
    if a.n != b.n or a.backend != b.backend:
        raise DomainError(f"mismatched forms: ({a.n},{a.backend}) vs ({b.n},{b.backend})")
    n, out_deg = a.n, a.k + b.k
    if out_deg > n:
        return KForm.zero(n, out_deg, a.backend)
    if a.k == 0:
        return b.scale(a.coeffs[0])
    if b.k == 0:
        return a.scale(b.coeffs[0])
    out = [scalars.zero(a.backend)] * math.comb(n, out_deg)
    ca, cb = a.coeffs, b.coeffs
    for ra, rb, sign, rt in _wedge_pairs(n, a.k, b.k):
        va = ca[ra]
        if va == 0:
            continue
        vb = cb[rb]
        if vb == 0:
            continue
        out[rt] += sign * va * vb if sign > 0 else -(va * vb)
    return KForm(n, out_deg, out, a.backend)


def wedge_power(x: KForm, s: int) -> KForm:
    """s-fold exterior power x ∧ ... ∧ x; x^0 is the unit 0-form."""
    if s < 0:
        raise DomainError(f"exponent must be nonnegative, got {s}")
    if s == 0:
        return KForm(x.n, 0, [scalars.one(x.backend)], x.backend)
    acc = x
    for _ in range(s - 1):
        acc = wedge(acc, x)
    return acc


def scalar_product(a: KForm, b: KForm):
    """Coefficientwise inner product (orthonormal basis convention)."""
    _check_same_space(a, b)
    total = scalars.zero(a.backend)
    for va, vb in zip(a.coeffs, b.coeffs):
        total += va * vb
    return total


def norm_squared(x: KForm):
    return scalar_product(x, x)


def hodge_star(x: KForm) -> KForm:
    """Hodge dual: on basis forms, *e^I = sign(I·I^c) e^(I^c)."""
    if x.k > x.n:
        raise DomainError(f"degree {x.k} exceeds dimension {x.n}")
    n = x.n
    out = [scalars.zero(x.backend)] * math.comb(n, n - x.k)
    for mi, c in zip(enumerate_multiindices(n, x.k), x.coeffs):
        if c == 0:
            continue
        comp = mi.complement()
        sign = sign_of_string(mi.indices + comp.indices)
        out[rank(comp)] += sign * c if sign > 0 else -c
    return KForm(n, n - x.k, out, x.backend)
