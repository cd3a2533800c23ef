"""Differentiation of quaternion-valued maps of several real variables.

Two schemes are available.  ``central`` uses central differences with step
``step * (1 + |x|)`` for first partials.  Second partials (pure and mixed)
use 3-point / symmetric 4-point stencils with step ``step2 * (1 + |x|)``
followed by one level of Richardson extrapolation; without it the rounding
floor of a plain second difference sits near 1e-8.  ``exact`` evaluates
hyper-dual jets of a DSL expression and is exact to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

from .errors import DifferentiationError, DomainError, NonFiniteError
from .expr import EvalError, Expression, eval_jet, evaluate
from .quaternion import Quaternion

SCHEMES = ("central", "exact")


@dataclass(frozen=True)
class DiffConfig:
    scheme: str = "central"
    step: float = 1e-5
    step2: float = 2e-3
    richardson: bool = False

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise DomainError(f"unknown differentiation scheme {self.scheme!r}")
        if not (self.step > 0 and self.step2 > 0):
            raise DomainError("differentiation steps must be positive")

    def with_(self, **changes) -> "DiffConfig":
        return replace(self, **changes)


DEFAULT = DiffConfig()
EXACT = DiffConfig(scheme="exact")
# Richardson on first partials too; used where 1e-9 accuracy is expected
ACCURATE = DiffConfig(richardson=True)


class QuaternionMap:
    """A quaternion-valued map of ``arity`` real variables.

    Built either from a Python callable (central differences only) or from an
    expression, which also enables exact forward-mode derivatives.
    """

    def __init__(self, fn: Callable[..., object] | None = None, arity: int | None = None,
                 names: Sequence[str] | None = None, expr: Expression | None = None):
        if fn is None and expr is None:
            raise ValueError("need a callable or an expression")
        if expr is not None:
            names = expr.params if names is None else tuple(names)
            if tuple(names) != tuple(expr.params):
                expr = Expression.compile(expr.source, names)
            arity = len(names)
        if arity is None:
            arity = len(names) if names is not None else None
        if arity is None:
            raise ValueError("arity could not be determined")
        self.fn = fn
        self.expr = expr
        self.arity = int(arity)
        self.names = tuple(names) if names is not None else tuple(f"s{n}" for n in range(self.arity))
        if len(self.names) != self.arity:
            raise ValueError("names must match arity")

    @classmethod
    def from_expr(cls, source: str, params: Sequence[str] | None = None, **kwargs):
        return cls(expr=Expression.compile(source, params), **kwargs)

    def index(self, a) -> int:
        """Resolve a parameter given by position or name."""
        if isinstance(a, str):
            try:
                return self.names.index(a)
            except ValueError:
                raise DomainError(f"unknown parameter {a!r}; have {self.names}") from None
        if not 0 <= a < self.arity:
            raise DomainError(f"parameter index {a} out of range for arity {self.arity}")
        return int(a)

    def _point(self, point) -> tuple:
        point = tuple(float(x) for x in point)
        if len(point) != self.arity:
            raise DomainError(f"expected {self.arity} coordinates, got {len(point)}")
        if not all(math.isfinite(x) for x in point):
            raise DomainError(f"non-finite point {point}")
        return point

    def __call__(self, *point: float) -> Quaternion:
        return self.value(point)

    def value(self, point) -> Quaternion:
        point = self._point(point)
        try:
            if self.fn is not None:
                return Quaternion.coerce(self.fn(*point))
            return evaluate(self.expr.ast, dict(zip(self.names, point)))
        except (NonFiniteError, EvalError, ZeroDivisionError, OverflowError, ValueError) as exc:
            raise DifferentiationError(f"evaluation failed ({exc})", point) from exc

    # derivatives ---------------------------------------------------------

    def _jet(self, point, a, b):
        if self.expr is None:
            raise DomainError("exact differentiation needs an expression-defined map")
        env = dict(zip(self.names, point))
        try:
            return eval_jet(self.expr.ast, env, self.names[a],
                            None if b is None else self.names[b])
        except (NonFiniteError, EvalError, OverflowError) as exc:
            raise DifferentiationError(f"exact evaluation failed ({exc})", point) from exc

    def _shifted(self, point, offsets) -> Quaternion:
        p = list(point)
        for idx, h in offsets:
            p[idx] += h
        return self.value(p)

    def d1(self, point, a, cfg: DiffConfig = DEFAULT) -> Quaternion:
        """First partial derivative along parameter ``a``."""
        point = self._point(point)
        a = self.index(a)
        if cfg.scheme == "exact":
            return self._jet(point, a, None).da
        h = cfg.step * (1.0 + abs(point[a]))

        def central(h):
            return (self._shifted(point, [(a, h)]) - self._shifted(point, [(a, -h)])) / (2.0 * h)

        d = central(h)
        if cfg.richardson:
            d = (4.0 * central(0.5 * h) - d) / 3.0
        return d

    def gradient_parts(self, point, cfg: DiffConfig = DEFAULT) -> list[Quaternion]:
        return [self.d1(point, a, cfg) for a in range(self.arity)]

    def d2(self, point, a, b, cfg: DiffConfig = DEFAULT) -> Quaternion:
        """Second partial derivative along ``a`` then ``b`` (pure when a == b)."""
        point = self._point(point)
        a, b = self.index(a), self.index(b)
        if cfg.scheme == "exact":
            return self._jet(point, a, b).dab
        ha = cfg.step2 * (1.0 + abs(point[a]))
        if a == b:
            f0 = self.value(point)

            def stencil(h):
                return (self._shifted(point, [(a, h)]) - 2.0 * f0 + self._shifted(point, [(a, -h)])) / (h * h)

            coarse = stencil(ha)
        else:
            hb = cfg.step2 * (1.0 + abs(point[b]))

            def stencil(h, k=None):
                k = h * hb / ha if k is None else k
                return (self._shifted(point, [(a, h), (b, k)]) - self._shifted(point, [(a, h), (b, -k)])
                        - self._shifted(point, [(a, -h), (b, k)]) + self._shifted(point, [(a, -h), (b, -k)])
                        ) / (4.0 * h * k)

            coarse = stencil(ha)
        fine = stencil(0.5 * ha)
        return (4.0 * fine - coarse) / 3.0

    def jet(self, point, a, b, cfg: DiffConfig = DEFAULT):
        """``(value, d_a, d_b, d_ab)`` in one call."""
        point = self._point(point)
        a, b = self.index(a), self.index(b)
        if cfg.scheme == "exact":
            j = self._jet(point, a, b)
            return j.v, j.da, j.db, j.dab
        return self.value(point), self.d1(point, a, cfg), self.d1(point, b, cfg), self.d2(point, a, b, cfg)
