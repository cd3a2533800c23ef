"""Constant-coefficient 1-forms and 2-forms on R^n (default n = 4)."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np


def pairs(dim: int) -> list[tuple[int, int]]:
    """Index pairs (mu, nu) with mu < nu in lexicographic order."""
    return list(combinations(range(dim), 2))


def _as_vector(p) -> np.ndarray:
    if hasattr(p, "components"):
        p = p.components
    return np.asarray(p, dtype=float)


@dataclass(frozen=True)
class OneForm:
    """``sum_mu c_mu dx_mu``."""

    coeffs: tuple

    def __init__(self, coeffs):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in coeffs))

    @classmethod
    def basis(cls, mu: int, dim: int = 4) -> "OneForm":
        c = [0.0] * dim
        c[mu] = 1.0
        return cls(c)

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def __call__(self, p) -> float:
        return float(np.dot(self.coeffs, _as_vector(p)))

    def __add__(self, other: "OneForm") -> "OneForm":
        return OneForm(np.add(self.coeffs, other.coeffs))

    def __sub__(self, other: "OneForm") -> "OneForm":
        return OneForm(np.subtract(self.coeffs, other.coeffs))

    def __mul__(self, s: float) -> "OneForm":
        return OneForm(np.multiply(self.coeffs, s))

    __rmul__ = __mul__

    def __neg__(self) -> "OneForm":
        return OneForm([-c for c in self.coeffs])

    def as_array(self) -> np.ndarray:
        return np.array(self.coeffs)


@dataclass(frozen=True)
class TwoForm:
    """``sum_{mu<nu} c_{mu nu} dx_mu ^ dx_nu``; only mu < nu is stored."""

    dim: int
    coeffs: tuple

    def __init__(self, dim: int, coeffs):
        coeffs = tuple(float(c) for c in coeffs)
        if len(coeffs) != dim * (dim - 1) // 2:
            raise ValueError(f"a 2-form on R^{dim} has {dim * (dim - 1) // 2} coefficients")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_matrix(cls, m) -> "TwoForm":
        """Take the strict upper triangle of an antisymmetric coefficient matrix."""
        m = np.asarray(m, dtype=float)
        return cls(m.shape[0], [m[i, j] for i, j in pairs(m.shape[0])])

    def component(self, mu: int, nu: int) -> float:
        if mu == nu:
            return 0.0
        if mu > nu:
            return -self.component(nu, mu)
        return self.coeffs[pairs(self.dim).index((mu, nu))]

    def as_matrix(self) -> np.ndarray:
        m = np.zeros((self.dim, self.dim))
        for c, (i, j) in zip(self.coeffs, pairs(self.dim)):
            m[i, j], m[j, i] = c, -c
        return m

    def __call__(self, x, y) -> float:
        x, y = _as_vector(x), _as_vector(y)
        return float(x @ self.as_matrix() @ y)

    def __add__(self, other: "TwoForm") -> "TwoForm":
        return TwoForm(self.dim, np.add(self.coeffs, other.coeffs))

    def __sub__(self, other: "TwoForm") -> "TwoForm":
        return TwoForm(self.dim, np.subtract(self.coeffs, other.coeffs))

    def __neg__(self) -> "TwoForm":
        return TwoForm(self.dim, [-c for c in self.coeffs])

    def norm(self) -> float:
        return float(np.max(np.abs(self.coeffs), initial=0.0))


def wedge(a: OneForm, b: OneForm) -> TwoForm:
    """``(a ^ b)_{mu nu} = a_mu b_nu - a_nu b_mu`` for mu < nu."""
    if a.dim != b.dim:
        raise ValueError("wedge of forms on spaces of different dimension")
    return TwoForm(a.dim, [a.coeffs[i] * b.coeffs[j] - a.coeffs[j] * b.coeffs[i]
                           for i, j in pairs(a.dim)])


def wedge_arrays(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix wedge of arrays of 1-form coefficients.

    ``a`` has shape (R, K, D) and ``b`` shape (K, C, D); the result has shape
    (R, C, P) over the P = D(D-1)/2 pairs: ``(a ^ b)_rc = sum_k a_rk ^ b_kc``.
    Vectors of forms (shape (K, D)) are accepted for ``b``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    vector = b.ndim == 2
    if vector:
        b = b[:, None, :]
    outer = np.einsum("rkp,kcq->rcpq", a, b)
    anti = outer - np.swapaxes(outer, 2, 3)
    idx = pairs(a.shape[-1])
    out = np.stack([anti[:, :, i, j] for i, j in idx], axis=-1) if idx else np.zeros(anti.shape[:2] + (0,))
    return out[:, 0, :] if vector else out
