"""A small noncommutative expression language for quaternion-valued maps."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .ast import (
    POLAR_UNITS, VARIABLES, Ast, BinOp, Call, Const, EvalError, ExprTypeError, Neg, Num,
    Pow, Unit, Var, check_types, free_variables, is_real, to_source, uses_polar_units,
)
from .evaluate import Jet, eval_dual, eval_jet, evaluate
from .parser import ParseError, parse, tokenize

_CANONICAL_ORDER = ("t", "u", "v", "w", "x0", "x1", "x2", "x3", "rho", "theta", "phi", "xi")


class ValidationError(EvalError):
    """An expression does not fit the declared parameter signature."""


def validate(node: Ast, params: Sequence[str]) -> None:
    """Check free variables, polar-unit context and argument types against ``params``."""
    params = tuple(params)
    extra = free_variables(node) - set(params)
    if extra:
        raise ValidationError(
            f"variables {sorted(extra)} not in the parameter signature {list(params)}"
        )
    if uses_polar_units(node) and not {"phi", "xi"} <= set(params):
        raise ValidationError("polar units I, J, K need phi and xi in the parameter signature")
    check_types(node)


def default_params(node: Ast) -> tuple[str, ...]:
    """Free variables of ``node`` in canonical order (t, u, v, w, x0..x3, rho..xi)."""
    names = free_variables(node)
    return tuple(n for n in _CANONICAL_ORDER if n in names)


@dataclass(frozen=True)
class Expression:
    """Parsed source together with its parameter signature."""

    source: str
    ast: Ast
    params: tuple

    @classmethod
    def compile(cls, source: str, params: Sequence[str] | None = None) -> "Expression":
        node = parse(source)
        params = default_params(node) if params is None else tuple(params)
        validate(node, params)
        return cls(source, node, params)

    def env(self, point: Sequence[float]) -> dict:
        if len(point) != len(self.params):
            raise ValueError(f"expected {len(self.params)} coordinates, got {len(point)}")
        return dict(zip(self.params, map(float, point)))

    def __call__(self, *point: float):
        return evaluate(self.ast, self.env(point))


__all__ = [
    "Ast", "BinOp", "Call", "Const", "EvalError", "ExprTypeError", "Expression", "Jet", "Neg",
    "Num", "ParseError", "Pow", "Unit", "VARIABLES", "ValidationError", "Var", "check_types",
    "default_params", "eval_dual", "eval_jet", "evaluate", "free_variables", "is_real", "parse",
    "to_source", "tokenize", "uses_polar_units", "validate", "POLAR_UNITS",
]
