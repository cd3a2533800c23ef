"""Expression tree nodes, the canonical printer and static checks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from ..errors import HDGError
from ..quaternion import Quaternion

VARIABLES = frozenset(
    ["t", "u", "v", "w", "x0", "x1", "x2", "x3", "rho", "theta", "phi", "xi"]
)
CARTESIAN_UNITS = frozenset("ijk")
POLAR_UNITS = frozenset("IJK")
SCALAR_FUNCTIONS = {"sin": 1, "cos": 1, "exp": 1, "sqrt": 1, "atan2": 2}
QUATERNION_FUNCTIONS = {"conj": 1, "norm": 1}
FUNCTIONS = {**SCALAR_FUNCTIONS, **QUATERNION_FUNCTIONS}


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Unit:
    name: str


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    """Quaternion literal injected programmatically (never produced by the parser)."""

    value: Quaternion


@dataclass(frozen=True)
class Neg:
    arg: "Ast"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Ast"
    right: "Ast"


@dataclass(frozen=True)
class Pow:
    base: "Ast"
    exponent: int


@dataclass(frozen=True)
class Call:
    fn: str
    args: tuple


Ast = Union[Num, Unit, Var, Const, Neg, BinOp, Pow, Call]


class EvalError(HDGError):
    """Evaluation failed (unbound variable, bad domain, singular divisor, ...)."""


class ExprTypeError(EvalError, TypeError):
    """A scalar function was applied to a quaternion-valued subexpression."""


def is_real(node: Ast) -> bool:
    """Static realness: true when the node can only produce real values."""
    if isinstance(node, (Num, Var)):
        return True
    if isinstance(node, Unit):
        return False
    if isinstance(node, Const):
        return node.value.is_real()
    if isinstance(node, Neg):
        return is_real(node.arg)
    if isinstance(node, BinOp):
        return is_real(node.left) and is_real(node.right)
    if isinstance(node, Pow):
        return is_real(node.base)
    if isinstance(node, Call):
        if node.fn == "conj":
            return is_real(node.args[0])
        return True
    raise TypeError(f"not an expression node: {node!r}")


def check_types(node: Ast) -> None:
    """Raise ExprTypeError if any scalar function receives a quaternion argument."""
    for sub in walk(node):
        if isinstance(sub, Call) and sub.fn in SCALAR_FUNCTIONS:
            for arg in sub.args:
                if not is_real(arg):
                    raise ExprTypeError(
                        f"{sub.fn}() needs a real argument, got {to_source(arg)}"
                    )


def walk(node: Ast):
    yield node
    if isinstance(node, Neg):
        yield from walk(node.arg)
    elif isinstance(node, BinOp):
        yield from walk(node.left)
        yield from walk(node.right)
    elif isinstance(node, Pow):
        yield from walk(node.base)
    elif isinstance(node, Call):
        for arg in node.args:
            yield from walk(arg)


def free_variables(node: Ast) -> frozenset:
    return frozenset(n.name for n in walk(node) if isinstance(n, Var))


def uses_polar_units(node: Ast) -> bool:
    return any(isinstance(n, Unit) and n.name in POLAR_UNITS for n in walk(node))


def _fmt_float(x: float) -> str:
    return repr(float(x))


def to_source(node: Ast) -> str:
    """Canonical, fully parenthesised source text; ``parse(to_source(a)) == a``."""
    if isinstance(node, Num):
        return _fmt_float(node.value)
    if isinstance(node, (Unit, Var)):
        return node.name
    if isinstance(node, Const):
        q = node.value
        return "({} + {}*i + {}*j + {}*k)".format(*(_signed(c) for c in q.components))
    if isinstance(node, Neg):
        return f"(-{to_source(node.arg)})"
    if isinstance(node, BinOp):
        return f"({to_source(node.left)} {node.op} {to_source(node.right)})"
    if isinstance(node, Pow):
        return f"({to_source(node.base)}^{node.exponent})"
    if isinstance(node, Call):
        return f"{node.fn}({', '.join(to_source(a) for a in node.args)})"
    raise TypeError(f"not an expression node: {node!r}")


def _signed(x: float) -> str:
    return _fmt_float(x) if x >= 0 else f"(-{_fmt_float(-x)})"
