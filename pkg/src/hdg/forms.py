"""Connections of unit-quaternion frames, dual 1-forms and structural equations.

A unit frame ``u(s)`` over parameters ``s_1..s_n`` has connection
quaternions ``omega^(a) = u_a conj(u)`` (pure imaginary).  The dual 1-forms
``phi_mu(p) = <p, e_mu u>`` have coefficient rows ``e_mu u``; stacked they
form ``basis_matrix(u)``, which satisfies ``basis_matrix(p q) =
basis_matrix(p) basis_matrix(q)``.  Structural residuals are computed with
this multiplicative representation on the product space of parameters
``s`` and points ``x`` of R^4.
"""

from __future__ import annotations

import inspect
from dataclasses import dataclass, field

import numpy as np

from .diff import ACCURATE, DiffConfig, QuaternionMap
from .errors import DomainError
from .exterior import OneForm, TwoForm, pairs, wedge_arrays
from .quaternion import BASIS, Quaternion, component_matrix, inner, mul

UNIT_TOL = 1e-9


def basis_matrix(q: Quaternion) -> np.ndarray:
    """Rows are the components of ``e_mu q``; multiplicative in ``q``."""
    return np.array([mul(e, q).components for e in BASIS])


def _frame(u) -> QuaternionMap:
    if isinstance(u, QuaternionMap):
        return u
    if callable(u):
        n = len(inspect.signature(u).parameters)
        return QuaternionMap(u, arity=n)
    raise DomainError("a frame is a QuaternionMap or a callable of its parameters")


def _unit_value(frame: QuaternionMap, point) -> Quaternion:
    value = frame.value(point)
    if abs(value.norm() - 1.0) > UNIT_TOL:
        raise DomainError(f"frame is not unit at {tuple(point)}: |u| = {value.norm()!r}")
    return value


# connection -------------------------------------------------------------------------


def connection(u, a, point, cfg: DiffConfig = ACCURATE) -> Quaternion:
    """``omega^(a) = u_a conj(u)`` at ``point``."""
    frame = _frame(u)
    value = _unit_value(frame, point)
    return mul(frame.d1(point, a, cfg), value.conj())


def connection_components(u, a, point, cfg: DiffConfig = ACCURATE) -> tuple[float, float, float]:
    """``omega^(a)_l = <u_a, e_l u>`` for l = 1, 2, 3."""
    frame = _frame(u)
    value = _unit_value(frame, point)
    ua = frame.d1(point, a, cfg)
    return tuple(inner(ua, mul(e, value)) for e in BASIS[1:])


@dataclass(frozen=True)
class Connection:
    """Connection quaternions of a frame at one parameter point."""

    point: tuple
    omegas: tuple

    def matrix(self, a: int) -> np.ndarray:
        """Matrix view of ``omega^(a)`` in the (1, i, j, k) component layout."""
        return component_matrix(self.omegas[a])

    def basis_matrix(self, a: int) -> np.ndarray:
        return basis_matrix(self.omegas[a])


def connection_field(u, point, cfg: DiffConfig = ACCURATE) -> Connection:
    frame = _frame(u)
    return Connection(tuple(float(x) for x in point),
                      tuple(connection(frame, a, point, cfg) for a in range(frame.arity)))


# dual forms -------------------------------------------------------------------------


@dataclass(frozen=True)
class DualForm:
    """``phi_mu(p) = <p, e_mu u>``."""

    u: Quaternion
    mu: int

    def __call__(self, p) -> float:
        return inner(Quaternion.coerce(p), mul(BASIS[self.mu], self.u))

    def as_one_form(self) -> OneForm:
        return OneForm(mul(BASIS[self.mu], self.u).components)


def _require_unit(u: Quaternion) -> Quaternion:
    u = Quaternion.coerce(u)
    if abs(u.norm() - 1.0) > UNIT_TOL:
        raise DomainError(f"dual forms need a unit quaternion, |u| = {u.norm()!r}")
    return u


def dual_form(u: Quaternion, mu: int) -> DualForm:
    if mu not in range(4):
        raise DomainError(f"index {mu} out of range")
    return DualForm(_require_unit(u), mu)


def dual_basis(u: Quaternion) -> tuple[DualForm, ...]:
    u = _require_unit(u)
    return tuple(DualForm(u, mu) for mu in range(4))


def expand_in_dual_basis(psi: OneForm, u: Quaternion) -> tuple[float, float, float, float]:
    """Coefficients ``psi(g_mu)`` with ``g_mu = e_mu u``, so that ``psi = sum psi(g_mu) phi_mu``."""
    u = _require_unit(u)
    return tuple(psi(mul(e, u)) for e in BASIS)


def reconstruct(coeffs, u: Quaternion) -> OneForm:
    """``sum_mu c_mu phi_mu`` as a OneForm over dx_0..dx_3."""
    total = OneForm([0.0] * 4)
    for c, phi in zip(coeffs, dual_basis(u)):
        total = total + float(c) * phi.as_one_form()
    return total


@dataclass(frozen=True)
class MatrixOneForm:
    """A matrix of 1-forms stored as an array of shape (rows, cols, dim)."""

    coeffs: np.ndarray

    def entry(self, r: int, c: int) -> OneForm:
        return OneForm(self.coeffs[r, c])

    def wedge(self, other: "MatrixOneForm") -> np.ndarray:
        """Matrix wedge; the result has shape (rows, cols, pairs)."""
        return wedge_arrays(self.coeffs, other.coeffs)


# structural equations ----------------------------------------------------------------


@dataclass(frozen=True)
class StructuralResiduals:
    """Pointwise residuals of the structural equations.

    ``first`` has shape (4, P) and holds ``d phi - omega ^ phi``;
    ``second`` and ``second_opposite`` have shape (4, 4, P) and hold
    ``d omega - omega ^ omega`` and ``d omega + omega ^ omega``.  P counts
    coordinate pairs on the product space (s_1..s_n, x_0..x_3), in the
    order given by ``labels``.
    """

    point: tuple
    first: np.ndarray
    second: np.ndarray
    second_opposite: np.ndarray
    labels: tuple = field(default=())

    @property
    def first_norm(self) -> float:
        return float(np.max(np.abs(self.first), initial=0.0))

    @property
    def second_norm(self) -> float:
        return float(np.max(np.abs(self.second), initial=0.0))

    @property
    def second_opposite_norm(self) -> float:
        return float(np.max(np.abs(self.second_opposite), initial=0.0))

    @property
    def dim(self) -> int:
        # P = dim (dim - 1) / 2
        return int(round((1 + (1 + 8 * self.first.shape[1]) ** 0.5) / 2))

    def first_forms(self) -> list[TwoForm]:
        dim = self.dim
        return [TwoForm(dim, row) for row in self.first]

    def second_forms(self) -> list[list[TwoForm]]:
        dim = self.dim
        return [[TwoForm(dim, c) for c in row] for row in self.second]


def structural_residuals(u, point, cfg: DiffConfig = ACCURATE) -> StructuralResiduals:
    """Residuals of ``d phi = omega ^ phi`` and ``d omega = omega ^ omega`` at ``point``.

    ``phi_mu = sum_nu A_mu,nu(s) dx_nu`` with ``A = basis_matrix(u(s))`` and
    ``omega = sum_a basis_matrix(omega^(a)) ds_a``.  Derivatives of
    ``omega^(a)`` come from ``u_ab conj(u) + u_a conj(u_b)``.
    """
    frame = _frame(u)
    point = tuple(float(x) for x in point)
    n = frame.arity
    dim = n + 4
    value = _unit_value(frame, point)
    ubar = value.conj()
    d1 = [frame.d1(point, a, cfg) for a in range(n)]
    omegas = [mul(d, ubar) for d in d1]

    A = basis_matrix(value)
    dA = [basis_matrix(d) for d in d1]
    Om = [basis_matrix(w) for w in omegas]
    # d_b omega^(a)
    dOm = [[basis_matrix(mul(frame.d2(point, a, b, cfg), ubar) + mul(d1[a], d1[b].conj()))
            for b in range(n)] for a in range(n)]

    # phi as a vector of 1-forms on the product space
    phi = np.zeros((4, dim))
    phi[:, n:] = A
    omega = np.zeros((4, 4, dim))
    for a in range(n):
        omega[:, :, a] = Om[a]

    idx = pairs(dim)
    dphi = np.zeros((4, len(idx)))
    domega = np.zeros((4, 4, len(idx)))
    for p, (i, j) in enumerate(idx):
        if i < n <= j:
            # d(A_mu,nu ds_i ^ dx_nu): coefficient of ds_i ^ dx_(j-n)
            dphi[:, p] = dA[i][:, j - n]
        elif j < n:
            domega[:, :, p] = dOm[j][i] - dOm[i][j]

    wphi = wedge_arrays(omega, phi)
    ww = wedge_arrays(omega, omega)
    labels = tuple(f"s{a}" for a in range(n)) + ("x0", "x1", "x2", "x3")
    return StructuralResiduals(point, dphi - wphi, domega - ww, domega + ww,
                               tuple(labels[i] + "^" + labels[j] for i, j in idx))
