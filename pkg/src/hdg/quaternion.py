"""Quaternion arithmetic, inner-product geometry and the 4x4 component matrix.

Components are stored over the natural basis ``(1, i, j, k)`` and the
Hamilton product follows ``e_m e_n = -delta_mn + eps_mnl e_l``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Real
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateDirectionError, DomainError, NonFiniteError


@dataclass(frozen=True, slots=True)
class Quaternion:
    """Immutable quaternion ``x0 + x1 i + x2 j + x3 k``."""

    x0: float = 0.0
    x1: float = 0.0
    x2: float = 0.0
    x3: float = 0.0

    def __post_init__(self):
        for name in ("x0", "x1", "x2", "x3"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise NonFiniteError(f"non-finite quaternion component {name}={value}")
            object.__setattr__(self, name, value)

    @classmethod
    def from_iter(cls, values: Iterable[float]) -> "Quaternion":
        x0, x1, x2, x3 = values
        return cls(x0, x1, x2, x3)

    @classmethod
    def coerce(cls, value) -> "Quaternion":
        if isinstance(value, Quaternion):
            return value
        if isinstance(value, Real):
            return cls(float(value))
        if isinstance(value, complex):
            return cls(value.real, value.imag)
        return cls.from_iter(value)

    @property
    def components(self) -> tuple[float, float, float, float]:
        return (self.x0, self.x1, self.x2, self.x3)

    @property
    def scalar(self) -> float:
        return self.x0

    @property
    def vector(self) -> tuple[float, float, float]:
        return (self.x1, self.x2, self.x3)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, index: int) -> float:
        return self.components[index]

    def __len__(self) -> int:
        return 4

    def as_array(self) -> np.ndarray:
        return np.array(self.components)

    def __repr__(self) -> str:
        return f"Quaternion({self.x0!r}, {self.x1!r}, {self.x2!r}, {self.x3!r})"

    def __str__(self) -> str:
        return f"{self.x0:+.6g}{self.x1:+.6g}i{self.x2:+.6g}j{self.x3:+.6g}k"

    # arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Quaternion):
            return Quaternion(self.x0 + other.x0, self.x1 + other.x1,
                              self.x2 + other.x2, self.x3 + other.x3)
        if isinstance(other, Real):
            return Quaternion(self.x0 + other, self.x1, self.x2, self.x3)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Quaternion):
            return Quaternion(self.x0 - other.x0, self.x1 - other.x1,
                              self.x2 - other.x2, self.x3 - other.x3)
        if isinstance(other, Real):
            return Quaternion(self.x0 - other, self.x1, self.x2, self.x3)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, Real):
            return Quaternion(other - self.x0, -self.x1, -self.x2, -self.x3)
        return NotImplemented

    def __neg__(self):
        return Quaternion(-self.x0, -self.x1, -self.x2, -self.x3)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return mul(self, other)
        if isinstance(other, Real):
            return Quaternion(self.x0 * other, self.x1 * other, self.x2 * other, self.x3 * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Real):
            return Quaternion(self.x0 * other, self.x1 * other, self.x2 * other, self.x3 * other)
        return NotImplemented

    def __truediv__(self, other):
        # quaternion divisors act from the right: p / q == p * inverse(q)
        if isinstance(other, Quaternion):
            return mul(self, other.inverse())
        if isinstance(other, Real):
            if other == 0:
                raise DomainError("division by zero")
            return Quaternion(self.x0 / other, self.x1 / other, self.x2 / other, self.x3 / other)
        return NotImplemented

    def __abs__(self) -> float:
        return self.norm()

    def conj(self) -> "Quaternion":
        return Quaternion(self.x0, -self.x1, -self.x2, -self.x3)

    def norm2(self) -> float:
        return self.x0 * self.x0 + self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3

    def norm(self) -> float:
        return math.sqrt(self.norm2())

    def inverse(self) -> "Quaternion":
        n2 = self.norm2()
        if n2 == 0.0:
            raise DomainError("inverse of the zero quaternion")
        return Quaternion(self.x0 / n2, -self.x1 / n2, -self.x2 / n2, -self.x3 / n2)

    def is_real(self) -> bool:
        return self.x1 == 0.0 and self.x2 == 0.0 and self.x3 == 0.0

    def is_pure(self) -> bool:
        return self.x0 == 0.0

    def pure(self) -> "Quaternion":
        """Vector part as a pure-imaginary quaternion."""
        return Quaternion(0.0, self.x1, self.x2, self.x3)

    def isclose(self, other, tol: float = 1e-12) -> bool:
        return (self - Quaternion.coerce(other)).norm() <= tol


ZERO = Quaternion()
ONE = Quaternion(1.0)
UNIT_I = Quaternion(0.0, 1.0)
UNIT_J = Quaternion(0.0, 0.0, 1.0)
UNIT_K = Quaternion(0.0, 0.0, 0.0, 1.0)
BASIS = (ONE, UNIT_I, UNIT_J, UNIT_K)


def mul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product ``p q`` (order matters)."""
    a0, a1, a2, a3 = p.x0, p.x1, p.x2, p.x3
    b0, b1, b2, b3 = q.x0, q.x1, q.x2, q.x3
    return Quaternion(
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    )


def conj(q: Quaternion) -> Quaternion:
    return q.conj()


def norm(q: Quaternion) -> float:
    return q.norm()


def inverse(q: Quaternion) -> Quaternion:
    return q.inverse()


def inner(p: Quaternion, q: Quaternion) -> float:
    """Real scalar product ``Re[p conj(q)]``."""
    return p.x0 * q.x0 + p.x1 * q.x1 + p.x2 * q.x2 + p.x3 * q.x3


def is_orthogonal(p: Quaternion, q: Quaternion, tol: float = 1e-12) -> bool:
    """Scale-invariant orthogonality test; the zero quaternion is orthogonal to everything."""
    if tol <= 0:
        raise DomainError("tol must be positive")
    return abs(inner(p, q)) <= tol * p.norm() * q.norm()


def is_parallel(p: Quaternion, q: Quaternion, tol: float = 1e-12) -> bool:
    """True when ``p conj(q)`` is real, i.e. ``<p, q> == p conj(q)``.

    Only real multiples are parallel: ``q`` and ``(1 + i) q`` are not.
    The zero quaternion is parallel to everything.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    return mul(p, q.conj()).pure().norm() <= tol * p.norm() * q.norm()


def induced_basis(q: Quaternion) -> tuple[Quaternion, Quaternion, Quaternion, Quaternion]:
    """The orthogonal basis ``{q, i q, j q, k q}``, each of norm ``|q|``."""
    if q.norm2() == 0.0:
        raise DomainError("induced basis of the zero quaternion")
    return tuple(mul(e, q) for e in BASIS)


def omega_of(q: Quaternion) -> Quaternion:
    """Unit imaginary direction ``x / |x|`` of the vector part; squares to -1."""
    v = math.hypot(q.x1, q.x2, q.x3)
    if v == 0.0:
        raise DegenerateDirectionError(f"{q!r} is real; its imaginary unit is undefined")
    return Quaternion(0.0, q.x1 / v, q.x2 / v, q.x3 / v)


def component_matrix(p: Quaternion) -> np.ndarray:
    """4x4 component table of ``D_p x_{mu nu}`` with basis order (1, i, j, k).

    Row 0 is ``p`` itself and the matrix equals the transpose of left
    multiplication by ``p``, so ``M(p) M(q) = M(q p)`` and
    ``M(p) M(p)^T = |p|^2 I``.
    """
    p0, p1, p2, p3 = p.components
    return np.array([
        [p0, p1, p2, p3],
        [-p1, p0, p3, -p2],
        [-p2, -p3, p0, p1],
        [-p3, p2, -p1, p0],
    ])


def from_component_matrix(m: Sequence[Sequence[float]]) -> Quaternion:
    """Read the quaternion back from row 0 of a component matrix."""
    return Quaternion.from_iter(np.asarray(m, dtype=float)[0])
