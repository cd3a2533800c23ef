"""Evaluation of expression trees, plain and with exact forward-mode derivatives.

Forward mode uses second-order hyper-dual quaternions (``Jet``): a value with
two independent first-derivative parts and their mixed second derivative.
All products keep the written order, so ``(f g)' = f' g + f g'``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from ..errors import NonFiniteError
from ..quaternion import ZERO, Quaternion, mul
from .ast import (
    POLAR_UNITS, Ast, BinOp, Call, Const, EvalError, Neg, Num, Pow, Unit, Var,
    check_types,
)

_UNITS = {
    "i": Quaternion(0.0, 1.0),
    "j": Quaternion(0.0, 0.0, 1.0),
    "k": Quaternion(0.0, 0.0, 0.0, 1.0),
}


@dataclass(frozen=True, slots=True)
class Jet:
    """Truncated expansion ``v + da e1 + db e2 + dab e1 e2`` with e1^2 = e2^2 = 0."""

    v: Quaternion
    da: Quaternion = ZERO
    db: Quaternion = ZERO
    dab: Quaternion = ZERO

    def __add__(self, other: "Jet") -> "Jet":
        return Jet(self.v + other.v, self.da + other.da, self.db + other.db, self.dab + other.dab)

    def __sub__(self, other: "Jet") -> "Jet":
        return Jet(self.v - other.v, self.da - other.da, self.db - other.db, self.dab - other.dab)

    def __neg__(self) -> "Jet":
        return Jet(-self.v, -self.da, -self.db, -self.dab)

    def __mul__(self, other: "Jet") -> "Jet":
        f, g = self, other
        return Jet(
            mul(f.v, g.v),
            mul(f.da, g.v) + mul(f.v, g.da),
            mul(f.db, g.v) + mul(f.v, g.db),
            mul(f.dab, g.v) + mul(f.da, g.db) + mul(f.db, g.da) + mul(f.v, g.dab),
        )

    def conj(self) -> "Jet":
        return Jet(self.v.conj(), self.da.conj(), self.db.conj(), self.dab.conj())

    def inverse(self) -> "Jet":
        c = self.v.inverse()
        ca = -mul(mul(c, self.da), c)
        cb = -mul(mul(c, self.db), c)
        cab = -(mul(mul(cb, self.da), c) + mul(mul(c, self.dab), c) + mul(mul(c, self.da), cb))
        return Jet(c, ca, cb, cab)

    def scale(self, s: float) -> "Jet":
        return Jet(s * self.v, s * self.da, s * self.db, s * self.dab)


def _real_jet(x: float, xa: float, xb: float, xab: float) -> Jet:
    return Jet(Quaternion(x), Quaternion(xa), Quaternion(xb), Quaternion(xab))


def _jet_scalar(fn: str, j: Jet) -> Jet:
    x, xa, xb, xab = j.v.x0, j.da.x0, j.db.x0, j.dab.x0
    if fn == "sin":
        f, d1, d2 = math.sin(x), math.cos(x), -math.sin(x)
    elif fn == "cos":
        f, d1, d2 = math.cos(x), -math.sin(x), -math.cos(x)
    elif fn == "exp":
        f = d1 = d2 = math.exp(x)
    elif fn == "sqrt":
        if x < 0:
            raise EvalError(f"sqrt of negative value {x}")
        f = math.sqrt(x)
        if f == 0.0:
            if xa or xb or xab:
                raise EvalError("sqrt is not differentiable at 0")
            return _real_jet(0.0, 0.0, 0.0, 0.0)
        d1 = 0.5 / f
        d2 = -0.25 / (f * x)
    else:
        raise EvalError(f"unknown scalar function {fn}")
    return _real_jet(f, d1 * xa, d1 * xb, d2 * xa * xb + d1 * xab)


def _jet_atan2(y: Jet, x: Jet) -> Jet:
    yv, ya, yb, yab = y.v.x0, y.da.x0, y.db.x0, y.dab.x0
    xv, xa, xb, xab = x.v.x0, x.da.x0, x.db.x0, x.dab.x0
    r2 = xv * xv + yv * yv
    if r2 == 0.0:
        if ya or yb or xa or xb:
            raise EvalError("atan2 is not differentiable at the origin")
        return _real_jet(0.0, 0.0, 0.0, 0.0)
    fy, fx = xv / r2, -yv / r2
    r4 = r2 * r2
    fyy, fxx, fxy = -2 * xv * yv / r4, 2 * xv * yv / r4, (yv * yv - xv * xv) / r4
    dab = (fy * yab + fx * xab + fyy * ya * yb + fxx * xa * xb + fxy * (ya * xb + xa * yb))
    return _real_jet(math.atan2(yv, xv), fy * ya + fx * xa, fy * yb + fx * xb, dab)


def _jet_norm(j: Jet) -> Jet:
    q = j.v
    n = q.norm()

    def dot(a, b):
        return a.x0 * b.x0 + a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3

    sa, sb = 2 * dot(q, j.da), 2 * dot(q, j.db)
    sab = 2 * dot(j.da, j.db) + 2 * dot(q, j.dab)
    if n == 0.0:
        if any(c != ZERO for c in (j.da, j.db, j.dab)):
            raise EvalError("norm is not differentiable at 0")
        return _real_jet(0.0, 0.0, 0.0, 0.0)
    return _real_jet(n, sa / (2 * n), sb / (2 * n), sab / (2 * n) - sa * sb / (4 * n ** 3))


def _quat_scalar(fn: str, x: float) -> float:
    if fn == "sin":
        return math.sin(x)
    if fn == "cos":
        return math.cos(x)
    if fn == "exp":
        return math.exp(x)
    if fn == "sqrt":
        if x < 0:
            raise EvalError(f"sqrt of negative value {x}")
        return math.sqrt(x)
    raise EvalError(f"unknown scalar function {fn}")


class _Algebra:
    """Operations for plain quaternion evaluation."""

    def const(self, q: Quaternion):
        return q

    def scalar(self, fn, x):
        return Quaternion(_quat_scalar(fn, x.x0))

    def atan2(self, y, x):
        return Quaternion(math.atan2(y.x0, x.x0))

    def norm(self, q):
        return Quaternion(q.norm())

    def one(self):
        return Quaternion(1.0)

    def inverse(self, q):
        if q.norm2() == 0.0:
            raise EvalError("division by a zero-norm quaternion")
        return q.inverse()


class _JetAlgebra(_Algebra):
    def const(self, q):
        return Jet(q)

    def scalar(self, fn, x):
        return _jet_scalar(fn, x)

    def atan2(self, y, x):
        return _jet_atan2(y, x)

    def norm(self, q):
        return _jet_norm(q)

    def one(self):
        return Jet(Quaternion(1.0))

    def inverse(self, q):
        if q.v.norm2() == 0.0:
            raise EvalError("division by a zero-norm quaternion")
        return q.inverse()


def _polar_units(env, alg: _Algebra):
    try:
        phi, xi = env["phi"], env["xi"]
    except KeyError:
        raise EvalError("polar units I, J, K need phi and xi bound") from None
    cp, sp = alg.scalar("cos", phi), alg.scalar("sin", phi)
    cx, sx = alg.scalar("cos", xi), alg.scalar("sin", xi)
    i, j, k = (alg.const(_UNITS[n]) for n in "ijk")
    e_xi_j = cx * j + sx * k
    return {
        "I": cp * i + sp * e_xi_j,
        "J": -(sp * i) + cp * e_xi_j,
        "K": -(sx * j) + cx * k,
    }


def _run(node: Ast, env, alg: _Algebra):
    cache = {}

    def go(n):
        if isinstance(n, Num):
            return alg.const(Quaternion(n.value))
        if isinstance(n, Var):
            try:
                return env[n.name]
            except KeyError:
                raise EvalError(f"unbound variable {n.name!r}") from None
        if isinstance(n, Unit):
            if n.name in POLAR_UNITS:
                if "polar" not in cache:
                    cache["polar"] = _polar_units(env, alg)
                return cache["polar"][n.name]
            return alg.const(_UNITS[n.name])
        if isinstance(n, Const):
            return alg.const(n.value)
        if isinstance(n, Neg):
            return -go(n.arg)
        if isinstance(n, BinOp):
            a, b = go(n.left), go(n.right)
            if n.op == "+":
                return a + b
            if n.op == "-":
                return a - b
            if n.op == "*":
                return a * b
            if n.op == "/":
                return a * alg.inverse(b)
            raise EvalError(f"unknown operator {n.op}")
        if isinstance(n, Pow):
            base = go(n.base)
            if n.exponent < 0:
                base = alg.inverse(base)
            result = alg.one()
            for _ in range(abs(n.exponent)):
                result = result * base
            return result
        if isinstance(n, Call):
            args = [go(a) for a in n.args]
            if n.fn == "conj":
                return args[0].conj()
            if n.fn == "norm":
                return alg.norm(args[0])
            if n.fn == "atan2":
                return alg.atan2(args[0], args[1])
            return alg.scalar(n.fn, args[0])
        raise TypeError(f"not an expression node: {n!r}")

    try:
        return go(node)
    except NonFiniteError as exc:
        raise EvalError(f"non-finite intermediate value: {exc}") from exc
    except OverflowError as exc:
        raise EvalError(f"overflow: {exc}") from exc


def _check_env(env: Mapping[str, float]) -> None:
    for name, value in env.items():
        if not math.isfinite(value):
            raise EvalError(f"variable {name!r} bound to non-finite value {value}")


def evaluate(node: Ast, env: Mapping[str, float]) -> Quaternion:
    """Evaluate ``node`` with real variable bindings."""
    check_types(node)
    _check_env(env)
    qenv = {name: Quaternion(float(value)) for name, value in env.items()}
    return _run(node, qenv, _Algebra())


def eval_jet(node: Ast, env: Mapping[str, float], seed_a: str | None, seed_b: str | None = None) -> Jet:
    """Value plus exact first partials along ``seed_a``/``seed_b`` and their mixed partial.

    Passing the same name twice yields the pure second derivative in ``dab``.
    """
    check_types(node)
    _check_env(env)
    one, zero = Quaternion(1.0), ZERO
    jenv = {}
    for name, value in env.items():
        jenv[name] = Jet(
            Quaternion(float(value)),
            one if name == seed_a else zero,
            one if name == seed_b else zero,
        )
    return _run(node, jenv, _JetAlgebra())


def eval_dual(node: Ast, env: Mapping[str, float], seed: str) -> tuple[Quaternion, Quaternion]:
    """Value and exact derivative with respect to the variable ``seed``."""
    j = eval_jet(node, env, seed)
    return j.v, j.da
