"""Scalar functions on forms as sandboxed expression trees.

A function f on degree-k forms is described by a JSON-able tree so the CLI can
accept user-defined functions without executing arbitrary code.  Scalar nodes:
constants, add, mul, neg, abs, pow, inner (pairing with a fixed form) and
norm_sq (pairing the argument with itself); form nodes: the argument "xi",
fixed-form literals and wedge powers.  Form literals are either a full form
JSON object or the shorthand "e" + digits ("e1234" for the basis form on
indices 1,2,3,4 — single digits, which covers every desk-scale dimension).

Evaluation follows the argument's backend, so one tree serves both exact and
float campaigns.
"""

from __future__ import annotations

from typing import Mapping

from . import scalars
from .errors import DomainError
from .exterior import KForm, scalar_product, wedge_power

_SCALAR_OPS = ("const", "add", "mul", "neg", "abs", "pow", "inner", "norm_sq")
_FORM_OPS = ("wedge_pow",)


class FormFunction:
    """Deterministic scalar-valued function on degree-k forms."""

    __slots__ = ("n", "k", "expr")

    def __init__(self, n: int, k: int, expr):
        self.n = n
        self.k = k
        self.expr = expr
        degree = _validate(expr, n, k)
        if degree is not None:
            raise DomainError("function expression must be scalar-valued, "
                              f"got a degree-{degree} form")

    def __call__(self, xi: KForm):
        if xi.n != self.n or xi.k != self.k:
            raise DomainError(f"argument lives in ({xi.n},{xi.k}), function expects "
                              f"({self.n},{self.k})")
        return _eval_scalar(self.expr, xi)

    def to_json(self) -> dict:
        return {"n": self.n, "k": self.k, "expr": self.expr}

    @classmethod
    def from_json(cls, obj: Mapping) -> "FormFunction":
        return cls(int(obj["n"]), int(obj["k"]), obj["expr"])

    # convenience constructors for the test/report corpus -------------------

    @classmethod
    def constant(cls, n: int, k: int, value) -> "FormFunction":
        return cls(n, k, {"op": "const", "value": _json_scalar(value)})

    @classmethod
    def norm_squared(cls, n: int, k: int) -> "FormFunction":
        return cls(n, k, {"op": "norm_sq", "arg": "xi"})

    @classmethod
    def neg_norm_squared(cls, n: int, k: int) -> "FormFunction":
        return cls(n, k, {"op": "neg", "arg": {"op": "norm_sq", "arg": "xi"}})

    @classmethod
    def linear(cls, c: KForm) -> "FormFunction":
        return cls(c.n, c.k, {"op": "inner", "form": c.to_json(), "arg": "xi"})

    @classmethod
    def inner_power(cls, c: KForm, k: int, s: int) -> "FormFunction":
        """ξ ↦ ⟨c, ξ^s⟩ for c of degree k·s."""
        if c.k != k * s:
            raise DomainError(f"pairing form has degree {c.k}, expected {k * s}")
        return cls(c.n, k, {"op": "inner", "form": c.to_json(),
                            "arg": {"op": "wedge_pow", "s": s, "arg": "xi"}})

    @classmethod
    def affine_combination(cls, n: int, k: int, coefficients) -> "FormFunction":
        """ξ ↦ c_0 + Σ_s ⟨c_s, ξ^s⟩ from [c_0 scalar, c_1, c_2, ...]."""
        parts = [{"op": "const", "value": _json_scalar(coefficients[0])}]
        for s, form in enumerate(coefficients[1:], start=1):
            parts.append({"op": "inner", "form": form.to_json(),
                          "arg": {"op": "wedge_pow", "s": s, "arg": "xi"}})
        return cls(n, k, {"op": "add", "args": parts})


def _json_scalar(value):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return value
    return scalars.format_rational(value)


def _parse_form_literal(node, n: int) -> KForm:
    if isinstance(node, str):
        if not node.startswith("e") or not node[1:].isdigit():
            raise DomainError(f"unknown form literal {node!r}")
        indices = tuple(int(ch) for ch in node[1:])
        return KForm.basis(n, indices)
    if isinstance(node, Mapping) and "coeffs" in node:
        form = KForm.from_json(node)
        if form.n != n:
            raise DomainError(f"form literal lives on R^{form.n}, expected R^{n}")
        return form
    raise DomainError(f"cannot read a form from {node!r}")


def _validate(node, n: int, k: int):
    """Return the node's form degree, or None for scalar nodes."""
    if node == "xi":
        return k
    if isinstance(node, (int, float)) and not isinstance(node, bool):
        return None
    if isinstance(node, str):
        return _parse_form_literal(node, n).k
    if not isinstance(node, Mapping) or "op" not in node:
        raise DomainError(f"malformed expression node {node!r}")
    op = node["op"]
    if op == "const":
        value = node.get("value")
        if isinstance(value, str):
            scalars.parse_rational(value)
        elif not isinstance(value, (int, float)) or isinstance(value, bool):
            raise DomainError(f"bad constant {value!r}")
        return None
    if op in ("add", "mul"):
        args = node.get("args", [])
        if not args:
            raise DomainError(f"{op} needs at least one argument")
        for arg in args:
            if _validate(arg, n, k) is not None:
                raise DomainError(f"{op} arguments must be scalars")
        return None
    if op in ("neg", "abs"):
        if _validate(node["arg"], n, k) is not None:
            raise DomainError(f"{op} argument must be a scalar")
        return None
    if op == "pow":
        exp = node.get("exp")
        if not isinstance(exp, int) or exp < 0:
            raise DomainError(f"pow exponent must be a nonnegative integer, got {exp!r}")
        if _validate(node["base"], n, k) is not None:
            raise DomainError("pow base must be a scalar")
        return None
    if op == "inner":
        fixed = _parse_form_literal(node["form"], n)
        arg_deg = _validate(node["arg"], n, k)
        if arg_deg is None:
            raise DomainError("inner needs a form-valued argument")
        if arg_deg != fixed.k:
            raise DomainError(f"inner pairs degree {fixed.k} with degree {arg_deg}")
        return None
    if op == "norm_sq":
        if _validate(node["arg"], n, k) is None:
            raise DomainError("norm_sq needs a form-valued argument")
        return None
    if op == "wedge_pow":
        s = node.get("s")
        if not isinstance(s, int) or s < 0:
            raise DomainError(f"wedge_pow exponent must be a nonnegative integer, got {s!r}")
        arg_deg = _validate(node["arg"], n, k)
        if arg_deg is None:
            raise DomainError("wedge_pow needs a form-valued argument")
        return arg_deg * s
    raise DomainError(f"unknown expression op {op!r}")


def _eval_form(node, xi: KForm) -> KForm:
    if node == "xi":
        return xi
    if isinstance(node, str) or (isinstance(node, Mapping) and "coeffs" in node):
        literal = _parse_form_literal(node, xi.n)
        if literal.backend != xi.backend:
            literal = KForm(literal.n, literal.k,
                            [scalars.coerce(c, xi.backend) for c in literal.coeffs],
                            xi.backend)
        return literal
    if isinstance(node, Mapping) and node.get("op") == "wedge_pow":
        return wedge_power(_eval_form(node["arg"], xi), node["s"])
    raise DomainError(f"expected a form node, got {node!r}")


def _eval_scalar(node, xi: KForm):
    if isinstance(node, (int, float)) and not isinstance(node, bool):
        return scalars.coerce(node, xi.backend)
    op = node["op"]
    if op == "const":
        value = node["value"]
        if isinstance(value, str):
            value = scalars.parse_rational(value)
        return scalars.coerce(value, xi.backend)
    if op == "add":
        total = scalars.zero(xi.backend)
        for arg in node["args"]:
            total += _eval_scalar(arg, xi)
        return total
    if op == "mul":
        total = scalars.one(xi.backend)
        for arg in node["args"]:
            total *= _eval_scalar(arg, xi)
        return total
    if op == "neg":
        return -_eval_scalar(node["arg"], xi)
    if op == "abs":
        return abs(_eval_scalar(node["arg"], xi))
    if op == "pow":
        return _eval_scalar(node["base"], xi) ** node["exp"]
    if op == "inner":
        return scalar_product(_eval_form(node["form"], xi), _eval_form(node["arg"], xi))
    if op == "norm_sq":
        value = _eval_form(node["arg"], xi)
        return scalar_product(value, value)
    raise DomainError(f"unknown expression op {op!r}")
