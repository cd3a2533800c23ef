import math
import random

import numpy as np
import pytest

import oracles as o
from hdg import BASIS, OneForm, Quaternion, mul, wedge
from hdg.errors import DomainError
from hdg.forms import (
    basis_matrix, connection, connection_components, connection_field, dual_basis, dual_form,
    expand_in_dual_basis, reconstruct, structural_residuals,
)

rng = random.Random(99)


def circle(t):
    return Quaternion(math.cos(t), math.sin(t))


def product_frame(u, v):
    return mul(Quaternion(math.cos(u), math.sin(u)), Quaternion(math.cos(v), 0, math.sin(v)))


def random_frame():
    # exp of a random pure quaternion curve composed with a fixed unit
    a, b, c = (Quaternion(0, *[rng.gauss(0, 1) for _ in range(3)]) for _ in range(3))
    w = Quaternion(*[rng.gauss(0, 1) for _ in range(4)])
    w = w / w.norm()

    def u(s, r):
        v = s * a + math.sin(r) * b + s * r * c
        n = v.norm()
        e = Quaternion(math.cos(n)) + (math.sin(n) / n) * v if n > 0 else Quaternion(1)
        return mul(e, w)

    return u


def random_unit():
    q = Quaternion(*[rng.gauss(0, 1) for _ in range(4)])
    return q / q.norm()


def test_basis_matrix_is_multiplicative():
    for _ in range(50):
        p, q = Quaternion(*rand4()), Quaternion(*rand4())
        assert np.allclose(basis_matrix(mul(p, q)), basis_matrix(p) @ basis_matrix(q), atol=1e-12 * (1 + p.norm() * q.norm()))


def rand4():
    return [rng.uniform(-2, 2) for _ in range(4)]


def test_circle_connection():
    for t in np.linspace(0, 2 * math.pi, 32):
        w = connection(circle, 0, (t,))
        assert o.close(w.components, (0, 1, 0, 0), 1e-9)
        assert o.close(connection_components(circle, 0, (t,)), (1, 0, 0), 1e-9)
    assert connection(lambda t: Quaternion(1), 0, (0.3,)).norm() == 0.0
    with pytest.raises(DomainError):
        connection(lambda t: Quaternion(2), 0, (0.3,))


def test_connection_pure_and_antisymmetric():
    for _ in range(20):
        u = random_frame()
        p = (rng.uniform(-1, 1), rng.uniform(-1, 1))
        field = connection_field(u, p)
        for a in range(2):
            w = field.omegas[a]
            assert abs(w.x0) <= 1e-9
            M = field.matrix(a)
            assert np.max(np.abs(M + M.T)) <= 1e-9
            B = field.basis_matrix(a)
            assert np.max(np.abs(B + B.T)) <= 1e-9
            comps = connection_components(u, a, p)
            assert o.close(comps, w.components[1:], 1e-9)


def test_duality():
    for _ in range(20):
        u = random_unit()
        for mu, phi in enumerate(dual_basis(u)):
            for nu in range(4):
                assert phi(mul(BASIS[nu], u)) == pytest.approx(float(mu == nu), abs=1e-12)
    with pytest.raises(DomainError):
        dual_form(Quaternion(2), 0)
    with pytest.raises(DomainError):
        dual_form(Quaternion(1), 4)


def test_dual_expansion_reconstructs():
    for _ in range(50):
        u = random_unit()
        psi = OneForm(rand4())
        coeffs = expand_in_dual_basis(psi, u)
        back = reconstruct(coeffs, u)
        assert o.close(back.coeffs, psi.coeffs, 1e-12)


def test_wedge_antisymmetry_exact():
    for _ in range(50):
        a, b = OneForm(rand4()), OneForm(rand4())
        assert wedge(a, b).coeffs == (-wedge(b, a)).coeffs
        assert max(map(abs, wedge(a, a).coeffs)) == 0.0


def test_structural_residuals_constant_frame():
    r = structural_residuals(lambda t: Quaternion(0.6, 0, 0.8), (0.2,))
    assert r.first_norm == 0.0 and r.second_norm == 0.0


def test_structural_residuals_single_parameter():
    for t in np.linspace(0, 2 * math.pi, 8):
        r = structural_residuals(circle, (t,))
        assert r.first_norm <= 1e-6 and r.second_norm <= 1e-6


def test_structural_residuals_two_parameters():
    for _ in range(5):
        p = (rng.uniform(-1, 1), rng.uniform(-1, 1))
        r = structural_residuals(product_frame, p)
        assert r.first_norm <= 1e-6
        assert r.second_norm <= 1e-6
        # the opposite sign does not hold for a non-abelian frame
        assert r.second_opposite_norm > 1.0
        assert r.labels[0] == "s0^s1" and r.dim == 6


def test_structural_residuals_random_frames():
    for _ in range(5):
        u = random_frame()
        p = (rng.uniform(-1, 1), rng.uniform(-1, 1))
        r = structural_residuals(u, p)
        assert r.first_norm <= 1e-6 and r.second_norm <= 1e-6
        assert len(r.first_forms()) == 4 and len(r.second_forms()) == 4
