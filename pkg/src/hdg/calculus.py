"""Quaternionic gradient calculus on R^4 in Cartesian and polar coordinates.

The gradient is ``sum_mu conj(e_mu) d_mu f`` with the unit multiplying the
partial derivative from the left.  Its kernel is described by four real
Cauchy-Riemann-type conditions, and components of left-regular fields are
harmonic.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

from .diff import DEFAULT, DiffConfig, QuaternionMap
from .errors import CoordinateSingularityError, DomainError
from .exterior import OneForm
from .expr import Expression
from .notation import polar_frame, polar_frame_derivatives
from .quaternion import BASIS, ONE, Quaternion, inner, mul

CARTESIAN = ("x0", "x1", "x2", "x3")
POLAR = ("rho", "theta", "phi", "xi")

# tolerance below which a polar factor counts as vanishing
SINGULAR_TOL = 1e-12


class QuaternionField(QuaternionMap):
    """A quaternion-valued function of four real coordinates.

    ``coords`` is ``"cartesian"`` (x0..x3) or ``"polar"`` (rho, theta, phi,
    xi).  The field value is always an ordinary quaternion; ``components``
    projects it on ``{1, i, j, k}`` or, in polar mode, on ``{1, I, J, K}``.
    """

    def __init__(self, fn: Callable | None = None, coords: str = "cartesian",
                 expr: Expression | None = None):
        if coords not in ("cartesian", "polar"):
            raise DomainError(f"unknown coordinate system {coords!r}")
        names = CARTESIAN if coords == "cartesian" else POLAR
        super().__init__(fn=fn, arity=4, names=names, expr=expr)
        self.coords = coords

    @classmethod
    def from_expr(cls, source: str, coords: str = "cartesian") -> "QuaternionField":
        names = CARTESIAN if coords == "cartesian" else POLAR
        return cls(coords=coords, expr=Expression.compile(source, names))

    @classmethod
    def from_frame_components(cls, fn: Callable[..., Sequence[float]]) -> "QuaternionField":
        """Polar field ``g0 + g1 I + g2 J + g3 K`` from a callable returning (g0..g3)."""

        def value(rho, theta, phi, xi):
            g0, g1, g2, g3 = fn(rho, theta, phi, xi)
            f = polar_frame(phi, xi)
            return g0 + g1 * f.I + g2 * f.J + g3 * f.K

        return cls(value, coords="polar")

    def frame(self, point) -> tuple[Quaternion, ...]:
        if self.coords == "cartesian":
            return BASIS
        return polar_frame(point[2], point[3]).basis()

    def components(self, point) -> tuple[float, float, float, float]:
        """``f^(mu)`` at ``point``: projections on the field's own basis."""
        value = self.value(point)
        return tuple(inner(value, e) for e in self.frame(point))

    def component(self, mu: int) -> QuaternionMap:
        """The real map ``f^(mu)`` as a (callable-backed) quaternion map."""
        return QuaternionMap(lambda *p: self.components(p)[mu], arity=4, names=self.names)


def _require(f: QuaternionMap, coords: str):
    tag = getattr(f, "coords", "cartesian")
    if tag != coords or f.arity != 4:
        raise DomainError(f"expected a {coords} field on R^4")


# Cartesian operators -------------------------------------------------------------


def gradient(f: QuaternionField, point, cfg: DiffConfig = DEFAULT) -> Quaternion:
    """``sum_mu conj(e_mu) d_mu f`` at ``point``."""
    _require(f, "cartesian")
    total = Quaternion()
    for e, d in zip(BASIS, f.gradient_parts(point, cfg)):
        total = total + mul(e.conj(), d)
    return total


def cr_residual(f: QuaternionField, point, cfg: DiffConfig = DEFAULT) -> tuple[float, float, float, float]:
    """The four regularity conditions evaluated at ``point``.

    Rows (e0..e3), with ``f^(m)_n = d_n f^(m)``::

        f0_0 + f1_1 + f2_2 + f3_3
        f1_0 - f0_1 - f3_2 + f2_3
        f2_0 + f3_1 - f0_2 - f1_3
        f3_0 - f2_1 + f1_2 - f0_3
    """
    _require(f, "cartesian")
    d = [q.components for q in f.gradient_parts(point, cfg)]  # d[nu][mu] = f^(mu)_nu

    def c(mu, nu):
        return d[nu][mu]

    return (
        c(0, 0) + c(1, 1) + c(2, 2) + c(3, 3),
        c(1, 0) - c(0, 1) - c(3, 2) + c(2, 3),
        c(2, 0) + c(3, 1) - c(0, 2) - c(1, 3),
        c(3, 0) - c(2, 1) + c(1, 2) - c(0, 3),
    )


def laplacian(f: QuaternionField, point, cfg: DiffConfig = DEFAULT) -> Quaternion:
    """Componentwise 4D Laplacian."""
    _require(f, "cartesian")
    total = Quaternion()
    for mu in range(4):
        total = total + f.d2(point, mu, mu, cfg)
    return total


def conj_gradient_gradient(f: QuaternionField, point, cfg: DiffConfig = DEFAULT) -> Quaternion:
    """``conj(nabla) nabla f = sum_{mu,nu} e_mu conj(e_nu) d_mu d_nu f``, term by term."""
    _require(f, "cartesian")
    total = Quaternion()
    for mu in range(4):
        for nu in range(4):
            unit = mul(BASIS[mu], BASIS[nu].conj())
            total = total + mul(unit, f.d2(point, mu, nu, cfg))
    return total


def directional_derivative(q: Quaternion, f: QuaternionField, point, cfg: DiffConfig = DEFAULT) -> float:
    """``D_q f = <q, nabla f>`` at ``point``."""
    return inner(q, gradient(f, point, cfg))


def differential(f: QuaternionField, point, cfg: DiffConfig = DEFAULT) -> OneForm:
    """``df = sum_mu (nabla f)_mu dx_mu``."""
    return OneForm(gradient(f, point, cfg).components)


def product_rule_terms(f: QuaternionField, g: QuaternionField, point, cfg: DiffConfig = DEFAULT):
    """Terms of the product rule for the left-acting gradient.

    Returns ``((nabla f) g, f (nabla g), sum_mu conj(e_mu) f d_mu g)``.  The
    gradient of ``f g`` equals the first plus the third term; the second term
    replaces the third only when ``f`` commutes with every unit (real ``f``).
    """
    fv, gv = f.value(point), g.value(point)
    dg = g.gradient_parts(point, cfg)
    twisted = Quaternion()
    for e, d in zip(BASIS, dg):
        twisted = twisted + mul(mul(e.conj(), fv), d)
    return mul(gradient(f, point, cfg), gv), mul(fv, gradient(g, point, cfg)), twisted


# polar operators ------------------------------------------------------------------


def _check_polar_point(point) -> tuple[float, float, float, float]:
    rho, theta, phi, xi = (float(x) for x in point)
    if rho <= SINGULAR_TOL:
        raise CoordinateSingularityError("rho", point)
    if abs(math.sin(theta)) <= SINGULAR_TOL:
        raise CoordinateSingularityError("sin(theta)", point)
    if abs(math.sin(phi)) <= SINGULAR_TOL:
        raise CoordinateSingularityError("sin(phi)", point)
    return rho, theta, phi, xi


def gradient_polar(g: QuaternionField, point, cfg: DiffConfig = DEFAULT) -> Quaternion:
    """The gradient written in polar coordinates::

        (cos(theta) - I sin(theta)) (d_rho - (I / rho) d_theta)
            - J / (rho sin(theta)) d_phi - K / (rho sin(theta) sin(phi)) d_xi

    Partials of ``g`` include the motion of the ``{I, J, K}`` frame.
    """
    _require(g, "polar")
    rho, theta, phi, xi = _check_polar_point(point)
    f = polar_frame(phi, xi)
    g_rho, g_theta, g_phi, g_xi = g.gradient_parts(point, cfg)
    st, sp = math.sin(theta), math.sin(phi)
    lead = math.cos(theta) * ONE - st * f.I
    radial = mul(lead, g_rho - mul(f.I, g_theta) / rho)
    return radial - mul(f.J, g_phi) / (rho * st) - mul(f.K, g_xi) / (rho * st * sp)


def _frame_component_partials(g: QuaternionField, point, cfg: DiffConfig):
    """``g^(mu)`` and ``g^(mu)_nu`` over {1, I, J, K}, using the frame derivative table."""
    rho, theta, phi, xi = point
    value = g.value(point)
    parts = g.gradient_parts(point, cfg)
    frame = polar_frame(phi, xi).basis()
    fd = polar_frame_derivatives(phi, xi)
    zero = Quaternion()
    # d frame / d coordinate, coordinate order rho, theta, phi, xi
    dframe = [
        [zero] * 4,
        [zero] * 4,
        [zero, fd.I_phi, fd.J_phi, fd.K_phi],
        [zero, fd.I_xi, fd.J_xi, fd.K_xi],
    ]
    comp = [inner(value, e) for e in frame]
    dcomp = [[inner(parts[nu], frame[mu]) + inner(value, dframe[nu][mu]) for nu in range(4)]
             for mu in range(4)]
    return comp, dcomp


def cr_residual_polar(g: QuaternionField, point, cfg: DiffConfig = DEFAULT) -> tuple[float, float, float, float]:
    """The four polar regularity rows for ``g = g0 + g1 I + g2 J + g3 K``.

    They are the ``{1, I, J, K}`` components of
    ``rho (cos(theta) + I sin(theta)) nabla g``.
    """
    _require(g, "polar")
    rho, theta, phi, xi = _check_polar_point(point)
    (g0, g1, g2, g3), d = _frame_component_partials(g, (rho, theta, phi, xi), cfg)
    R, T, P, X = range(4)
    cot_t = math.cos(theta) / math.sin(theta)
    cot_p = math.cos(phi) / math.sin(phi)
    sp = math.sin(phi)
    a = 2 * g1 + cot_p * g2 + d[2][P] + d[3][X] / sp
    b = d[2][X] / sp - d[3][P] - cot_p * g3
    c = d[0][P] + d[1][X] / sp - g3
    e = d[0][X] / sp - d[1][P] + g2
    return (
        rho * d[0][R] + d[1][T] + cot_t * a - b,
        rho * d[1][R] - d[0][T] + a + cot_t * b,
        rho * d[2][R] + d[3][T] - cot_t * c + e,
        rho * d[3][R] - d[2][T] - c - cot_t * e,
    )


def laplacian_polar(u, point, cfg: DiffConfig = DEFAULT) -> float:
    """4D Laplacian of a real function in polar coordinates::

        (rho^3 u_rho)_rho / rho^3 + (sin^2(theta) u_theta)_theta / (rho^2 sin^2(theta))
          + (sin(phi) u_phi)_phi / (rho^2 sin^2(theta) sin(phi))
          + u_xixi / (rho^2 sin^2(theta) sin^2(phi))

    ``u`` is a polar map whose real part is used, or a plain callable of
    (rho, theta, phi, xi) returning a float.
    """
    if not isinstance(u, QuaternionMap):
        u = QuaternionMap(u, arity=4, names=POLAR)
    rho, theta, phi, xi = _check_polar_point(point)
    p = (rho, theta, phi, xi)
    d1 = [u.d1(p, a, cfg).x0 for a in range(4)]
    d2 = [u.d2(p, a, a, cfg).x0 for a in range(4)]
    st, sp = math.sin(theta), math.sin(phi)
    radial = d2[0] + 3.0 * d1[0] / rho
    polar = (d2[1] + 2.0 * math.cos(theta) / st * d1[1]) / rho ** 2
    azim = (d2[2] + math.cos(phi) / sp * d1[2]) / (rho * st) ** 2
    return radial + polar + azim + d2[3] / (rho * st * sp) ** 2


def cartesian_to_polar_field(f: QuaternionField) -> QuaternionField:
    """The same field expressed as a function of polar coordinates."""
    from .notation import polar_to_quaternion

    _require(f, "cartesian")

    def value(rho, theta, phi, xi):
        return f.value(polar_to_quaternion(rho, theta, phi, xi).components)

    return QuaternionField(value, coords="polar")
