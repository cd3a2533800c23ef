"""Quaternionic constraints: maps from 1 to 3 real parameters into H.

Curvature and torsion are pure-imaginary quaternions read off from second
derivatives projected on the orthogonal basis ``{t, i t, j t, k t}`` built
from the unit tangent ``t``::

    kappa_l = <q_aa, e_l t> / |q_a|^2,    tau^(ab)_l = <q_ab, e_l t^(a)> / |q_a|^2

With ``side="right"`` the coefficient sits to the right of the tangent and
``e_l t`` becomes ``t e_l``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import permutations
from typing import Callable, Sequence

import numpy as np

from .diff import ACCURATE, DiffConfig, QuaternionMap
from .errors import DomainError, NonRegularError, UndefinedFrameError
from .expr import BinOp, Const, Expression, to_source
from .quaternion import BASIS, Quaternion, inner, mul

PARAMS = {1: ("t",), 2: ("u", "v"), 3: ("u", "v", "w")}
SIDES = ("left", "right")

TANGENT_TOL = 1e-8
GRAM_TOL = 1e-10
FLAT_TOL = 1e-9

# curvature needs first partials accurate well below 1e-9 over periods of 2 pi
CONSTRAINT_DEFAULT = ACCURATE


class Constraint(QuaternionMap):
    """A smooth map ``q: U -> H`` with ``U`` in R^n, n in {1, 2, 3}."""

    def __init__(self, fn: Callable | None = None, n: int | None = None,
                 names: Sequence[str] | None = None, expr: Expression | None = None,
                 cfg: DiffConfig = CONSTRAINT_DEFAULT):
        if expr is not None and names is None:
            names = expr.params
        if names is None and n is not None:
            names = PARAMS.get(n)
        super().__init__(fn=fn, arity=n, names=names, expr=expr)
        if self.arity not in (1, 2, 3):
            raise DomainError(f"a constraint has 1 to 3 parameters, got {self.arity}")
        self.cfg = cfg

    @property
    def n(self) -> int:
        return self.arity

    @classmethod
    def from_expr(cls, source: str, params: Sequence[str] | None = None,
                  cfg: DiffConfig = CONSTRAINT_DEFAULT) -> "Constraint":
        expr = Expression.compile(source, params)
        if not expr.params:
            # a constant expression still needs a parameter
            expr = Expression.compile(source, ("t",))
        return cls(expr=expr, cfg=cfg)

    def __repr__(self):
        body = self.expr.source if self.expr is not None else getattr(self.fn, "__name__", "fn")
        return f"Constraint({body!r}, params={self.names})"


def _cfg(c: Constraint, cfg: DiffConfig | None) -> DiffConfig:
    return c.cfg if cfg is None else cfg


def _check_side(side: str) -> None:
    if side not in SIDES:
        raise DomainError(f"side must be 'left' or 'right', got {side!r}")


def _units(t: Quaternion, side: str) -> list[Quaternion]:
    """``e_l t`` (left) or ``t e_l`` (right) for l = 1, 2, 3."""
    if side == "left":
        return [mul(e, t) for e in BASIS[1:]]
    return [mul(t, e) for e in BASIS[1:]]


# tangent data ---------------------------------------------------------------------


def tangent(c: Constraint, a, point, cfg: DiffConfig | None = None) -> Quaternion:
    """``q_a`` at ``point``; raises NonRegularError when it (nearly) vanishes."""
    qa = c.d1(point, a, _cfg(c, cfg))
    if qa.norm() <= TANGENT_TOL:
        raise NonRegularError(f"|q_{c.names[c.index(a)]}| = {qa.norm():.3g} at {tuple(point)}")
    return qa


def unit_tangent(c: Constraint, a, point, cfg: DiffConfig | None = None) -> Quaternion:
    qa = tangent(c, a, point, cfg)
    return qa / qa.norm()


@dataclass(frozen=True)
class RegularityReport:
    regular: bool
    tangent_norms: tuple
    gram: np.ndarray = field(repr=False)
    eigenvalues: tuple
    normalized_det: float
    reason: str = ""


def check_regular(c: Constraint, point, cfg: DiffConfig | None = None,
                  tol: float = TANGENT_TOL, gram_tol: float = GRAM_TOL) -> RegularityReport:
    """Nonvanishing, linearly independent first partials at ``point``.

    Regular when every ``|q_a| > tol`` and ``det(G) / prod |q_a|^2 > gram_tol``
    for the Gram matrix ``G_ab = <q_a, q_b>``.  The normalized determinant
    lies in [0, 1] and equals 1 for mutually orthogonal tangents.
    """
    cfg = _cfg(c, cfg)
    parts = c.gradient_parts(point, cfg)
    jac = np.array([q.components for q in parts])  # n x 4
    gram = jac @ jac.T
    norms = tuple(float(math.sqrt(gram[a, a])) for a in range(c.n))
    eig = tuple(float(x) for x in np.linalg.eigvalsh(gram))
    scale = float(np.prod([g for g in np.diag(gram)]))
    ndet = float(np.linalg.det(gram)) / scale if scale > 0 else 0.0
    reason = ""
    if min(norms) <= tol:
        reason = f"vanishing tangent along {c.names[int(np.argmin(norms))]}"
    elif ndet <= gram_tol:
        reason = "linearly dependent tangents"
    return RegularityReport(not reason, norms, gram, eig, ndet, reason)


def _require_regular(c: Constraint, point, cfg: DiffConfig) -> None:
    report = check_regular(c, point, cfg)
    if not report.regular:
        raise NonRegularError(f"constraint not regular at {tuple(point)}: {report.reason}")


# curvature and torsion ------------------------------------------------------------


def _coefficient(second: Quaternion, qa: Quaternion, side: str) -> tuple[Quaternion, tuple]:
    n2 = qa.norm2()
    t = qa / math.sqrt(n2)
    comps = tuple(inner(second, u) / n2 for u in _units(t, side))
    return Quaternion(0.0, *comps), comps


def curvature(c: Constraint, a, point, cfg: DiffConfig | None = None,
              side: str = "left") -> tuple[Quaternion, tuple]:
    """``(kappa^(a), (kappa_1, kappa_2, kappa_3))`` at ``point``."""
    _check_side(side)
    cfg = _cfg(c, cfg)
    _require_regular(c, point, cfg)
    a = c.index(a)
    return _coefficient(c.d2(point, a, a, cfg), c.d1(point, a, cfg), side)


def torsion(c: Constraint, a, b, point, cfg: DiffConfig | None = None,
            side: str = "left") -> tuple[Quaternion, tuple]:
    """``(tau^(ab), components)``; ``tau^(ab)`` and ``tau^(ba)`` generally differ."""
    _check_side(side)
    cfg = _cfg(c, cfg)
    a, b = c.index(a), c.index(b)
    if a == b:
        raise DomainError("torsion needs two distinct parameters")
    _require_regular(c, point, cfg)
    return _coefficient(c.d2(point, a, b, cfg), c.d1(point, a, cfg), side)


def _direction(coef: Quaternion, t: Quaternion, side: str, what: str) -> Quaternion:
    size = coef.norm()
    if size <= FLAT_TOL:
        raise UndefinedFrameError(f"{what} undefined: coefficient magnitude {size:.3g}")
    prod = mul(coef, t) if side == "left" else mul(t, coef)
    return prod / size


def normal(c: Constraint, a, point, cfg: DiffConfig | None = None, side: str = "left") -> Quaternion:
    """``n^(a) = kappa t / |kappa|``."""
    kappa, _ = curvature(c, a, point, cfg, side)
    return _direction(kappa, unit_tangent(c, a, point, cfg), side, "normal")


def binormal(c: Constraint, a, b, point, cfg: DiffConfig | None = None, side: str = "left") -> Quaternion:
    """``b^(ab) = tau^(ab) t^(a) / |tau^(ab)|``."""
    tau, _ = torsion(c, a, b, point, cfg, side)
    return _direction(tau, unit_tangent(c, a, point, cfg), side, "binormal")


def _radius(size: float) -> float:
    return math.inf if size <= FLAT_TOL else 1.0 / size


def radii(c: Constraint, a, b=None, point=None, cfg: DiffConfig | None = None,
          side: str = "left") -> float:
    """Curvature radius ``1/|kappa^(a)|`` or, with ``b``, torsion radius ``1/|tau^(ab)|``.

    Flat directions give ``math.inf`` rather than an error.
    """
    if point is None:
        raise DomainError("radii needs a point")
    if b is None:
        return _radius(curvature(c, a, point, cfg, side)[0].norm())
    return _radius(torsion(c, a, b, point, cfg, side)[0].norm())


def frenet_residual(c: Constraint, a, b=None, point=None, cfg: DiffConfig | None = None,
                    side: str = "left") -> float | tuple[float, float]:
    """Decomposition residuals of second derivatives on the tangent frame.

    Without ``b``: ``|q_aa - |q_a|_a t - |q_a|^2 |kappa| n|``.  With ``b``:
    the pair of residuals of ``q_ab`` decomposed along ``t^(a)`` with
    ``tau^(ab)`` and along ``t^(b)`` with ``tau^(ba)``.  The derivative of
    ``|q_a|`` is taken by the chain rule, ``<q_a, q_ab> / |q_a|``.
    """
    if point is None:
        raise DomainError("frenet_residual needs a point")
    cfg = _cfg(c, cfg)
    _check_side(side)
    _require_regular(c, point, cfg)

    def residual(x, y):
        qx = c.d1(point, x, cfg)
        qxy = c.d2(point, x, y, cfg)
        size = qx.norm()
        t = qx / size
        coef, _ = _coefficient(qxy, qx, side)
        # |coef| * (unit normal) is coef t (or t coef); fine also when coef = 0
        lateral = mul(coef, t) if side == "left" else mul(t, coef)
        rate = inner(qx, qxy) / size
        return (qxy - rate * t - size * size * lateral).norm()

    a = c.index(a)
    if b is None:
        return residual(a, a)
    b = c.index(b)
    if a == b:
        raise DomainError("item ii needs two distinct parameters")
    return residual(a, b), residual(b, a)


# frame bundle ---------------------------------------------------------------------


@dataclass(frozen=True)
class FrenetData:
    """Frenet quantities of a constraint at one parameter point.

    Per-parameter entries are keyed by parameter name; torsion entries by
    ordered name pairs.  Undefined normals/binormals are ``None``.
    """

    point: tuple
    regular: bool
    tangent: dict
    unit_tangent: dict
    curvature: dict
    normal: dict
    radius: dict
    torsion: dict = field(default_factory=dict)
    binormal: dict = field(default_factory=dict)
    torsion_radius: dict = field(default_factory=dict)


def frenet(c: Constraint, point, cfg: DiffConfig | None = None, side: str = "left") -> FrenetData:
    """All Frenet data at ``point`` (regularity is checked once)."""
    cfg = _cfg(c, cfg)
    _check_side(side)
    point = tuple(float(x) for x in point)
    _require_regular(c, point, cfg)
    d1 = {a: c.d1(point, a, cfg) for a in range(c.n)}
    tan, utan, kap, nor, rad = {}, {}, {}, {}, {}
    for a, qa in d1.items():
        name = c.names[a]
        t = qa / qa.norm()
        kappa, _ = _coefficient(c.d2(point, a, a, cfg), qa, side)
        tan[name], utan[name], kap[name] = qa, t, kappa
        rad[name] = _radius(kappa.norm())
        nor[name] = None if kappa.norm() <= FLAT_TOL else _direction(kappa, t, side, "normal")
    tor, bin_, trad = {}, {}, {}
    mixed = {}
    for a, b in permutations(range(c.n), 2):
        key = (c.names[a], c.names[b])
        lo, hi = min(a, b), max(a, b)
        if (lo, hi) not in mixed:
            mixed[(lo, hi)] = c.d2(point, lo, hi, cfg)
        tau, _ = _coefficient(mixed[(lo, hi)], d1[a], side)
        tor[key] = tau
        trad[key] = _radius(tau.norm())
        bin_[key] = None if tau.norm() <= FLAT_TOL else _direction(tau, utan[c.names[a]], side, "binormal")
    return FrenetData(point, True, tan, utan, kap, nor, rad, tor, bin_, trad)


# rotation ---------------------------------------------------------------------------


def rotate_constraint(u: Quaternion, c: Constraint) -> Constraint:
    """The constraint ``u q`` for a constant unit quaternion ``u``."""
    u = Quaternion.coerce(u)
    if abs(u.norm() - 1.0) > 1e-12:
        raise DomainError(f"rotation needs a unit quaternion, |u| = {u.norm()!r}")
    if c.expr is not None:
        node = BinOp("*", Const(u), c.expr.ast)
        return Constraint(expr=Expression(to_source(node), node, c.expr.params), cfg=c.cfg)
    base = c.value
    return Constraint(lambda *p: mul(u, base(p)), n=c.n, names=c.names, cfg=c.cfg)


def transformed_curvature(u: Quaternion, kappa: Quaternion) -> Quaternion:
    """``u kappa conj(u)``."""
    return mul(mul(u, kappa), u.conj())


# built-in examples ------------------------------------------------------------------

EXAMPLES = {
    "circle": "cos(t) + i*sin(t)",
    "scaled-circle": "cos(2*t) + i*sin(2*t)",
    "line": "1 + 2*i - j + (0.5 + i + 3*k)*t",
    "helix": "cos(t) + i*sin(t) + 0.5*t*j",
    "tilted-circle": "(1 + j)*(cos(t) + k*sin(t))/2",
    "product-surface": "(cos(u) + i*sin(u))*(cos(v) + j*sin(v))",
    "plane": "u + i*v",
    "product-volume": "(cos(u) + i*sin(u))*(cos(v) + j*sin(v))*(cos(w) + k*sin(w))",
}


def example(name: str, cfg: DiffConfig = CONSTRAINT_DEFAULT) -> Constraint:
    """One of the built-in constraints in ``EXAMPLES``."""
    try:
        source = EXAMPLES[name]
    except KeyError:
        raise DomainError(f"unknown example {name!r}; have {sorted(EXAMPLES)}") from None
    return Constraint.from_expr(source, cfg=cfg)
