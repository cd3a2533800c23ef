"""Polar and symplectic notations, the {1, I, J, K} frame, and angle addition.

Polar form: ``q = rho (cos(theta) + I sin(theta))`` with
``I = cos(phi) i + sin(phi) e^{i xi} j``.  Symplectic form:
``q = z0 + z1 j`` with complex ``z0 = x0 + x1 i`` and ``z1 = x2 + x3 i``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DomainError
from .quaternion import ONE, UNIT_I, UNIT_J, UNIT_K, Quaternion, mul

TWO_PI = 2.0 * math.pi
HALF_PI = 0.5 * math.pi


def _wrap(angle: float) -> float:
    """Map an atan2 result into [0, 2 pi)."""
    if angle < 0.0:
        angle += TWO_PI
    return 0.0 if angle >= TWO_PI else angle


# polar ----------------------------------------------------------------------


@dataclass(frozen=True)
class PolarQuaternion:
    """Polar coordinates of a quaternion.

    Undefined angles are stored as 0 and marked by a false ``*_defined`` flag:
    ``theta`` when rho = 0, ``phi`` when the vector part vanishes, ``xi`` when
    also ``x2 = x3 = 0``.
    """

    rho: float
    theta: float
    phi: float
    xi: float
    theta_defined: bool = True
    phi_defined: bool = True
    xi_defined: bool = True

    def __post_init__(self):
        if self.rho < 0:
            raise DomainError("rho must be nonnegative")
        if not 0.0 <= self.theta <= math.pi or not 0.0 <= self.phi <= math.pi:
            raise DomainError("theta and phi must lie in [0, pi]")
        if not 0.0 <= self.xi < TWO_PI:
            raise DomainError("xi must lie in [0, 2 pi)")

    @property
    def degenerate(self) -> bool:
        return not (self.theta_defined and self.phi_defined and self.xi_defined)

    def unit(self) -> Quaternion:
        """The imaginary unit ``I`` of this representation."""
        return polar_frame(self.phi, self.xi).I


@dataclass(frozen=True)
class PolarFrame:
    """Orthonormal imaginary units ``I, J, K`` obeying the i, j, k table."""

    I: Quaternion
    J: Quaternion
    K: Quaternion

    def basis(self) -> tuple[Quaternion, Quaternion, Quaternion, Quaternion]:
        return (ONE, self.I, self.J, self.K)


@dataclass(frozen=True)
class FrameDerivatives:
    I_phi: Quaternion
    I_xi: Quaternion
    J_phi: Quaternion
    J_xi: Quaternion
    K_phi: Quaternion
    K_xi: Quaternion


def to_polar(q: Quaternion) -> PolarQuaternion:
    rho = q.norm()
    v = math.hypot(q.x1, q.x2, q.x3)
    w = math.hypot(q.x2, q.x3)
    theta_defined = rho > 0.0
    phi_defined = v > 0.0
    xi_defined = w > 0.0
    theta = math.atan2(v, q.x0) if theta_defined else 0.0
    phi = math.atan2(w, q.x1) if phi_defined else 0.0
    xi = _wrap(math.atan2(q.x3, q.x2)) if xi_defined else 0.0
    return PolarQuaternion(rho, theta, phi, xi, theta_defined, phi_defined, xi_defined)


def from_polar(p: PolarQuaternion) -> Quaternion:
    return polar_to_quaternion(p.rho, p.theta, p.phi, p.xi)


def polar_to_quaternion(rho: float, theta: float, phi: float, xi: float) -> Quaternion:
    s = rho * math.sin(theta)
    sp = s * math.sin(phi)
    return Quaternion(rho * math.cos(theta), s * math.cos(phi), sp * math.cos(xi), sp * math.sin(xi))


def polar_frame(phi: float, xi: float) -> PolarFrame:
    """``I``, ``J = dI/dphi`` and ``K = e^{i xi} i j`` at the given angles.

    K uses the closed form, so it is defined at sin(phi) = 0 as well.
    """
    cp, sp = math.cos(phi), math.sin(phi)
    cx, sx = math.cos(xi), math.sin(xi)
    return PolarFrame(
        I=Quaternion(0.0, cp, sp * cx, sp * sx),
        J=Quaternion(0.0, -sp, cp * cx, cp * sx),
        K=Quaternion(0.0, 0.0, -sx, cx),
    )


def polar_frame_derivatives(phi: float, xi: float) -> FrameDerivatives:
    """Partial derivatives of I, J, K with respect to phi and xi.

    ``I_phi = J``, ``J_phi = -I``, ``K_phi = 0``, ``I_xi = sin(phi) K``,
    ``J_xi = cos(phi) K``, ``K_xi = (cos(phi) I - sin(phi) J) K``.
    """
    f = polar_frame(phi, xi)
    cp, sp = math.cos(phi), math.sin(phi)
    return FrameDerivatives(
        I_phi=f.J,
        I_xi=sp * f.K,
        J_phi=-f.I,
        J_xi=cp * f.K,
        K_phi=Quaternion(),
        K_xi=mul(cp * f.I - sp * f.J, f.K),
    )


def natural_units_from_frame(frame: PolarFrame, phi: float, xi: float) -> tuple[Quaternion, Quaternion, Quaternion]:
    """Rebuild ``i, j, k`` from ``I, J, K`` (inverse change of basis)."""
    cp, sp = math.cos(phi), math.sin(phi)
    cx, sx = math.cos(xi), math.sin(xi)
    ij_plane = sp * frame.I + cp * frame.J
    return (
        cp * frame.I - sp * frame.J,
        cx * ij_plane - sx * frame.K,
        sx * ij_plane + cx * frame.K,
    )


@dataclass(frozen=True)
class PolarAngleSum:
    """Result of adding two polar angles of a unit quaternion.

    ``theta1 + theta2 = n pi + theta0``.  The value is
    ``cos(angle) + s I sin(angle)`` with ``s = -1`` when ``flip`` is set.
    ``branch`` is ``"even"``, ``"odd-low"`` (theta0 <= pi/2) or ``"odd-high"``.
    In the odd-high row the table is written in terms of the excess
    ``theta0 - pi/2``, which gives the same angle ``pi - theta0`` as odd-low.
    """

    n: int
    theta0: float
    branch: str
    angle: float
    flip: bool

    def evaluate(self, unit: Quaternion, rho: float = 1.0) -> Quaternion:
        sign = -1.0 if self.flip else 1.0
        return rho * (math.cos(self.angle) + sign * math.sin(self.angle) * unit)


def polar_angle_branch(total: float) -> PolarAngleSum:
    """Reduce a nonnegative polar angle sum to the three-row table."""
    if total < 0 or not math.isfinite(total):
        raise DomainError("angle sum must be finite and nonnegative")
    n = int(math.floor(total / math.pi))
    theta0 = min(max(total - n * math.pi, 0.0), math.pi)
    if n % 2 == 0:
        return PolarAngleSum(n, theta0, "even", theta0, False)
    if theta0 <= HALF_PI:
        return PolarAngleSum(n, theta0, "odd-low", math.pi - theta0, True)
    excess = theta0 - HALF_PI
    return PolarAngleSum(n, theta0, "odd-high", HALF_PI - excess, True)


def add_polar_angles(theta1: float, theta2: float) -> PolarAngleSum:
    for t in (theta1, theta2):
        if not 0.0 <= t <= math.pi:
            raise DomainError(f"polar angle {t} outside [0, pi]")
    return polar_angle_branch(theta1 + theta2)


# symplectic ------------------------------------------------------------------


@dataclass(frozen=True)
class SymplecticQuaternion:
    """Complex pair with ``q = z0 + z1 j``."""

    z0: complex
    z1: complex

    @property
    def zeta(self) -> complex:
        """Alternate second component: ``q = z0 + conj(zeta) k`` with ``zeta = x3 + x2 i``."""
        return complex(self.z1.imag, self.z1.real)

    def to_quaternion(self) -> Quaternion:
        return from_symplectic(self)


@dataclass(frozen=True)
class SymplecticPolar:
    """``q = rho (cos(vartheta) e^{i phi} + sin(vartheta) e^{i psi} j)``."""

    rho: float
    vartheta: float
    phi: float
    psi: float
    phi_defined: bool = True
    psi_defined: bool = True

    def __post_init__(self):
        if self.rho < 0:
            raise DomainError("rho must be nonnegative")
        if not 0.0 <= self.vartheta <= HALF_PI:
            raise DomainError("vartheta must lie in [0, pi/2]")
        if not (0.0 <= self.phi < TWO_PI and 0.0 <= self.psi < TWO_PI):
            raise DomainError("phi and psi must lie in [0, 2 pi)")


def _complex_part(q: Quaternion) -> complex:
    return complex(q.x0, q.x1)


def extract_components(q: Quaternion) -> tuple[complex, complex]:
    """``z0 = (q - i q i) / 2`` and ``z1 = (conj(q) + i conj(q) i) j / 2``, computed literally."""
    z0 = 0.5 * (q - mul(mul(UNIT_I, q), UNIT_I))
    qb = q.conj()
    z1 = mul(0.5 * (qb + mul(mul(UNIT_I, qb), UNIT_I)), UNIT_J)
    return _complex_part(z0), _complex_part(z1)


def to_symplectic(q: Quaternion) -> SymplecticQuaternion:
    return SymplecticQuaternion(complex(q.x0, q.x1), complex(q.x2, q.x3))


def from_symplectic(s: SymplecticQuaternion) -> Quaternion:
    return Quaternion(s.z0.real, s.z0.imag) + mul(Quaternion(s.z1.real, s.z1.imag), UNIT_J)


def from_zeta(z0: complex, zeta: complex) -> Quaternion:
    return Quaternion(z0.real, z0.imag) + mul(Quaternion(zeta.real, -zeta.imag), UNIT_K)


def to_symplectic_polar(q: Quaternion) -> SymplecticPolar:
    z0, z1 = complex(q.x0, q.x1), complex(q.x2, q.x3)
    r0, r1 = abs(z0), abs(z1)
    return SymplecticPolar(
        rho=q.norm(),
        vartheta=math.atan2(r1, r0),
        phi=_wrap(cmath.phase(z0)) if r0 > 0 else 0.0,
        psi=_wrap(cmath.phase(z1)) if r1 > 0 else 0.0,
        phi_defined=r0 > 0,
        psi_defined=r1 > 0,
    )


def from_symplectic_polar(s: SymplecticPolar) -> Quaternion:
    return symplectic_polar_value(s.rho, s.vartheta, s.phi, s.psi)


def symplectic_polar_value(rho: float, vartheta: float, phi: float, psi: float) -> Quaternion:
    z0 = rho * math.cos(vartheta) * cmath.exp(1j * phi)
    z1 = rho * math.sin(vartheta) * cmath.exp(1j * psi)
    return from_symplectic(SymplecticQuaternion(z0, z1))


def _as_quaternion(alpha) -> Quaternion:
    if isinstance(alpha, Quaternion):
        return alpha
    alpha = complex(alpha)
    return Quaternion(alpha.real, alpha.imag)


def symplectic_inner(p: Quaternion, q: Quaternion) -> complex:
    """Complex inner product ``(p conj(q) - i p conj(q) i) / 2``."""
    pq = mul(p, q.conj())
    return _complex_part(0.5 * (pq - mul(mul(UNIT_I, pq), UNIT_I)))


def complex_left_multiply(alpha: complex, q: Quaternion) -> Quaternion:
    """``alpha q`` for a complex ``alpha`` (the only admissible order)."""
    return mul(_as_quaternion(alpha), q)


@dataclass(frozen=True)
class SymplecticAngleSum:
    """Result of adding two symplectic polar angles of a unit quaternion.

    ``vartheta1 + vartheta2 = vartheta0 + n pi/2``.  The value is
    ``cos(a) e^{i(phi + s0)} + sin(a) e^{i(psi + s1)} j`` with amplitude angle
    ``a`` in [0, pi/2] and phase shifts ``(s0, s1)`` taken from the four-row
    table (rows n = 1, 3 use ``a = pi/2 - vartheta0``).
    """

    n: int
    vartheta0: float
    amplitude: float
    shift_first: float
    shift_second: float

    @property
    def row(self) -> int:
        return self.n % 4

    def evaluate(self, phi: float, psi: float, rho: float = 1.0) -> Quaternion:
        return symplectic_polar_value(rho, self.amplitude, phi + self.shift_first, psi + self.shift_second)


_SYMPLECTIC_ROWS = {
    0: (False, 0.0, 0.0),
    1: (True, -math.pi, 0.0),
    2: (False, -math.pi, -math.pi),
    3: (True, 0.0, -math.pi),
}


def symplectic_angle_branch(total: float) -> SymplecticAngleSum:
    """Reduce a nonnegative symplectic angle sum to the four-row table."""
    if total < 0 or not math.isfinite(total):
        raise DomainError("angle sum must be finite and nonnegative")
    n = int(math.floor(total / HALF_PI))
    v0 = min(max(total - n * HALF_PI, 0.0), HALF_PI)
    complement, s0, s1 = _SYMPLECTIC_ROWS[n % 4]
    amplitude = HALF_PI - v0 if complement else v0
    return SymplecticAngleSum(n, v0, amplitude, s0, s1)


def add_symplectic_angles(vartheta1: float, vartheta2: float) -> SymplecticAngleSum:
    for t in (vartheta1, vartheta2):
        if not 0.0 <= t <= HALF_PI:
            raise DomainError(f"symplectic angle {t} outside [0, pi/2]")
    return symplectic_angle_branch(vartheta1 + vartheta2)


__all__ = [
    "PolarQuaternion", "PolarFrame", "FrameDerivatives", "PolarAngleSum",
    "SymplecticQuaternion", "SymplecticPolar", "SymplecticAngleSum",
    "to_polar", "from_polar", "polar_to_quaternion", "polar_frame", "polar_frame_derivatives",
    "natural_units_from_frame", "polar_angle_branch", "add_polar_angles",
    "extract_components", "to_symplectic", "from_symplectic", "from_zeta",
    "to_symplectic_polar", "from_symplectic_polar", "symplectic_polar_value",
    "symplectic_inner", "complex_left_multiply", "symplectic_angle_branch", "add_symplectic_angles",
]
