import math
import random

import numpy as np
import pytest

import oracles as o
from hdg import (
    BASIS, EXACT, OneForm, Quaternion, QuaternionField, conj_gradient_gradient, cr_residual,
    cr_residual_polar, differential, directional_derivative, gradient, gradient_polar, inner,
    laplacian, laplacian_polar, mul, wedge,
)
from hdg.calculus import cartesian_to_polar_field, product_rule_terms
from hdg.errors import CoordinateSingularityError, DifferentiationError, DomainError
from hdg.notation import polar_frame, polar_to_quaternion

rng = random.Random(1234)


def rand_point(scale=1.0):
    return tuple(rng.uniform(-scale, scale) for _ in range(4))


def rand_polar():
    return (rng.uniform(0.3, 2.0), rng.uniform(0.2, 2.9), rng.uniform(0.2, 2.9), rng.uniform(0, 6.2))


REGULAR = QuaternionField.from_expr("x2 - x3*i")


def test_gradient_examples():
    p = rand_point()
    assert gradient(QuaternionField.from_expr("3 + 2*k + 0*x0"), p).norm() < 1e-9
    assert gradient(REGULAR, p).norm() < 1e-9
    assert gradient(REGULAR, p, EXACT) == Quaternion()
    g = gradient(QuaternionField.from_expr("x0 + x1*i"), p)
    assert o.close(g.components, (2, 0, 0, 0), 1e-9)


def test_gradient_is_left_acting():
    # f = x1 j: d_1 f = j, conj(i) j = -k (a right-acting unit would give +k)
    g = gradient(QuaternionField.from_expr("x1*j"), (0.1, 0.2, 0.3, 0.4), EXACT)
    assert g == Quaternion(0, 0, 0, -1)


def test_cr_residual_examples():
    p = rand_point()
    assert max(map(abs, cr_residual(REGULAR, p))) < 1e-9
    assert o.close(cr_residual(QuaternionField.from_expr("x0"), p), (1, 0, 0, 0), 1e-9)
    assert max(map(abs, cr_residual(QuaternionField.from_expr("2 + 0*x0"), p))) == 0.0


def test_cr_rows_equal_gradient_components():
    # the four rows are the components of the gradient, for any field
    f = QuaternionField.from_expr("x0*x1 + sin(x2)*i - x3*x0*j + exp(x1)*k")
    for _ in range(20):
        p = rand_point()
        rows = cr_residual(f, p, EXACT)
        assert o.close(rows, gradient(f, p, EXACT).components, 1e-14)


def test_cr_zero_iff_gradient_zero():
    fields = [REGULAR, QuaternionField.from_expr("x0 - x1*i + 0*x2"),
              QuaternionField.from_expr("x1 + x0*i"), QuaternionField.from_expr("x0*x0 - x3*k")]
    for f in fields:
        for _ in range(10):
            p = rand_point()
            rows_zero = max(map(abs, cr_residual(f, p))) <= 1e-9
            assert rows_zero == (gradient(f, p).norm() <= 1e-9)


def test_exact_and_central_gradients_agree():
    f = QuaternionField.from_expr("x0*x1*i + cos(x2)*j - x3^3 + (x0 + i*x1)*(x2 - k*x3)")
    for _ in range(100):
        p = rand_point(2.0)
        assert o.close(gradient(f, p).components, gradient(f, p, EXACT).components, 1e-6)


def test_laplacian_examples():
    p = rand_point()
    assert laplacian(QuaternionField.from_expr("x0^2 - x1^2"), p).norm() < 1e-6
    assert laplacian(REGULAR, p).norm() < 1e-6
    assert laplacian(QuaternionField.from_expr("x0^2"), p).x0 == pytest.approx(2.0, abs=1e-6)


def test_harmonicity_and_literal_operator_agree():
    fields = [REGULAR, QuaternionField.from_expr("x0*x1 - x2*x3*i + (x0^2 - x3^2)*k")]
    for f in fields:
        for _ in range(20):
            p = rand_point()
            lap = laplacian(f, p)
            lit = conj_gradient_gradient(f, p)
            assert o.close(lap.components, lit.components, 1e-6)
    for _ in range(20):
        assert laplacian(REGULAR, rand_point()).norm() <= 1e-6


def test_directional_derivative_linearity():
    f = QuaternionField.from_expr("x0*x1 + x2*i - x3*x3*k")
    g = QuaternionField.from_expr("sin(x0) + x1*j")
    p = rand_point()
    for _ in range(10):
        q = Quaternion(*rand_point())
        a, b = rng.gauss(0, 1), rng.gauss(0, 1)
        h = QuaternionField(lambda *x: a * f.value(x) + b * g.value(x))
        lhs = directional_derivative(q, h, p)
        rhs = a * directional_derivative(q, f, p) + b * directional_derivative(q, g, p)
        assert lhs == pytest.approx(rhs, abs=1e-6)
        q2 = Quaternion(*rand_point())
        assert directional_derivative(a * q + q2, f, p) == pytest.approx(
            a * directional_derivative(q, f, p) + directional_derivative(q2, f, p), abs=1e-9)


def test_directional_derivative_table_definition():
    # D_p(x_m e_n) = <p, conj(e_m) e_n>: delta p0 - eps p_l off the diagonal
    p = Quaternion(0.3, -1.1, 0.7, 2.0)
    for m in range(4):
        for n in range(4):
            f = QuaternionField.from_expr(f"x{m}*{['1', 'i', 'j', 'k'][n]}")
            got = directional_derivative(p, f, (0.1, 0.2, 0.3, 0.4), EXACT)
            assert got == inner(p, mul(BASIS[m].conj(), BASIS[n]))
            if m == 0 or n == 0 or m == n:
                assert got == o.reference_directional_table(p.components, m, n)


def test_product_rule_general_form():
    f = QuaternionField.from_expr("x0*i + x1*x2*j + 1")
    g = QuaternionField.from_expr("x3*k - x0*x1 + sin(x2)*i")
    fg = QuaternionField(lambda *x: mul(f.value(x), g.value(x)))
    for _ in range(10):
        p = rand_point()
        left, naive, twisted = product_rule_terms(f, g, p, EXACT)
        assert o.close(gradient(fg, p).components, (left + twisted).components, 1e-6)


def test_leibniz_for_real_factor():
    f = QuaternionField.from_expr("x0*x1 + cos(x3)")
    g = QuaternionField.from_expr("x3*k - x0*x1 + sin(x2)*i")
    fg = QuaternionField(lambda *x: mul(f.value(x), g.value(x)))
    for _ in range(10):
        p, q = rand_point(), Quaternion(*rand_point())
        left, naive, _ = product_rule_terms(f, g, p, EXACT)
        assert directional_derivative(q, fg, p) == pytest.approx(inner(left, q) + inner(naive, q), abs=1e-6)


def test_differential_examples():
    p = (0.7, 0.1, -0.2, 0.4)
    df = differential(QuaternionField.from_expr("x0^2"), p, EXACT)
    assert df.coeffs == pytest.approx((1.4, 0, 0, 0))
    assert max(map(abs, differential(REGULAR, p).coeffs)) < 1e-9
    f = QuaternionField.from_expr("x0*x1 + x2*i")
    df = differential(f, p, EXACT)
    grad = gradient(f, p, EXACT)
    for mu, e in enumerate(BASIS):
        assert df(e) == grad.components[mu]
    q = Quaternion(1, 2, 3, 4)
    assert df(q) == pytest.approx(sum(c * x for c, x in zip(grad.components, q.components)))


def test_wedge_examples():
    dx = [OneForm.basis(mu) for mu in range(4)]
    assert wedge(dx[0], dx[0]).norm() == 0.0
    assert wedge(dx[0], dx[1])(BASIS[0], BASIS[1]) == 1.0
    for _ in range(20):
        a = OneForm(rand_point())
        b = OneForm(rand_point())
        assert wedge(a, b).coeffs == (-wedge(b, a)).coeffs


def test_polar_gradient_examples():
    P = rand_polar()
    assert gradient_polar(QuaternionField.from_expr("3 + 0*rho", "polar"), P).norm() < 1e-9
    cI = QuaternionField.from_expr("2*I", "polar")
    assert gradient_polar(cI, P).norm() > 0.1
    rows = cr_residual_polar(cI, P)
    assert rows[1] == pytest.approx(4.0, abs=1e-8)
    assert rows[0] == pytest.approx(4.0 / math.tan(P[1]), abs=1e-8)
    rows = cr_residual_polar(QuaternionField.from_expr("rho", "polar"), P)
    assert rows[0] == pytest.approx(P[0], abs=1e-8)
    assert max(map(abs, cr_residual_polar(QuaternionField.from_expr("1 + 0*rho", "polar"), P))) < 1e-9


def test_polar_rows_are_frame_components_of_scaled_gradient():
    g = QuaternionField.from_expr("rho*cos(theta) + sin(phi)*I + rho*cos(xi)*J + theta*K", "polar")
    for _ in range(10):
        P = rand_polar()
        rows = cr_residual_polar(g, P)
        frame = polar_frame(P[2], P[3])
        lead = P[0] * (Quaternion(math.cos(P[1])) + math.sin(P[1]) * frame.I)
        w = mul(lead, gradient_polar(g, P))
        assert o.close(rows, [inner(w, e) for e in frame.basis()], 1e-9)


def test_polar_gradient_matches_cartesian():
    f = QuaternionField.from_expr("x0*x1 + x2*x2*i - x3*k + x1*x3*j")
    fp = cartesian_to_polar_field(f)
    for _ in range(10):
        P = rand_polar()
        x = polar_to_quaternion(*P).components
        assert o.close(gradient_polar(fp, P).components, gradient(f, x).components, 1e-6)
        # regular fields stay regular in polar form
        assert max(map(abs, cr_residual_polar(cartesian_to_polar_field(REGULAR), P))) < 1e-8


def test_polar_laplacian():
    P = rand_polar()
    assert abs(laplacian_polar(lambda r, t, p, x: 5.0, P)) < 1e-9
    assert laplacian_polar(lambda r, t, p, x: r * r, P) == pytest.approx(o.FROZEN_LAPLACIAN_RHO2, abs=1e-6)
    u = QuaternionField.from_expr("x0^2 - x1^2 + x2*x3")
    for _ in range(5):
        P = rand_polar()
        x = polar_to_quaternion(*P).components
        assert laplacian_polar(cartesian_to_polar_field(u), P) == pytest.approx(laplacian(u, x).x0, abs=1e-6)


@pytest.mark.parametrize("point,factor", [
    ((0.0, 1.0, 1.0, 1.0), "rho"), ((1.0, 0.0, 1.0, 1.0), "sin(theta)"), ((1.0, 1.0, math.pi, 1.0), "sin(phi)"),
])
def test_polar_singularities_named(point, factor):
    g = QuaternionField.from_expr("rho*I", "polar")
    with pytest.raises(CoordinateSingularityError) as info:
        gradient_polar(g, point)
    assert info.value.factor == factor


def test_errors():
    with pytest.raises(DomainError):
        gradient(QuaternionField.from_expr("rho", "polar"), (1, 1, 1, 1))
    with pytest.raises(DifferentiationError) as info:
        gradient(QuaternionField.from_expr("1 / x0"), (0.0, 0, 0, 0))
    assert info.value.point is not None
    with pytest.raises(DomainError):
        gradient(QuaternionField(lambda *x: Quaternion(x[0])), (0, 0, 0, 0), EXACT)


def test_components_recombine():
    g = QuaternionField.from_expr("rho + theta*I - xi*J + phi*K", "polar")
    P = rand_polar()
    c = g.components(P)
    frame = polar_frame(P[2], P[3]).basis()
    total = sum((a * e for a, e in zip(c, frame)), Quaternion())
    assert o.close(total.components, g.value(P).components, 1e-14)
    assert np.allclose(c, (P[0], P[1], -P[3], P[2]), atol=1e-14)
