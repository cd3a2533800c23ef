"""Independent reference computations used by the test-suite.

Nothing here imports the package: products come from the index rule
``e_m e_n = -delta_mn + eps_mnl e_l`` and every other oracle is written out
in plain tuples, complex numbers or closed forms.  Frozen values at the
bottom were computed from these oracles and by hand.
"""

import cmath
import math

import numpy as np


def levi_civita(m, n, l):
    return {(1, 2, 3): 1, (2, 3, 1): 1, (3, 1, 2): 1,
            (1, 3, 2): -1, (3, 2, 1): -1, (2, 1, 3): -1}.get((m, n, l), 0)


def unit_product(m, n):
    """Components of e_m e_n over (1, i, j, k)."""
    out = [0, 0, 0, 0]
    if m == 0:
        out[n] = 1
    elif n == 0:
        out[m] = 1
    else:
        out[0] = -1 if m == n else 0
        for l in (1, 2, 3):
            out[l] += levi_civita(m, n, l)
    return tuple(out)


def qmul(p, q):
    """Hamilton product of 4-tuples by expanding over the unit table."""
    out = [0.0] * 4
    for m in range(4):
        for n in range(4):
            if p[m] == 0 or q[n] == 0:
                continue
            e = unit_product(m, n)
            for c in range(4):
                out[c] += p[m] * q[n] * e[c]
    return tuple(out)


def qconj(q):
    return (q[0], -q[1], -q[2], -q[3])


def qdot(p, q):
    return sum(a * b for a, b in zip(p, q))


def qnorm(q):
    return math.sqrt(qdot(q, q))


def left_matrix(p):
    """Matrix with L @ x = p x (column vectors)."""
    return np.array([qmul(p, e) for e in np.eye(4)]).T


def right_matrix(p):
    """Matrix with R @ x = x p."""
    return np.array([qmul(e, p) for e in np.eye(4)]).T


def reference_component_matrix(p):
    """Reference 4x4 layout of the component matrix, entry by entry."""
    p0, p1, p2, p3 = p
    return np.array([
        [p0, p1, p2, p3],
        [-p1, p0, p3, -p2],
        [-p2, -p3, p0, p1],
        [-p3, p2, -p1, p0],
    ])


def reference_directional_table(p, m, n):
    """``D_p(x_m e_n)`` from the reference table: row m, column n."""
    return reference_component_matrix(p)[m, n]


def polar_value(rho, theta, phi, xi):
    """rho (cos(theta) + I sin(theta)), I = cos(phi) i + sin(phi) e^{i xi} j."""
    s = math.sin(theta)
    return (rho * math.cos(theta), rho * s * math.cos(phi),
            rho * s * math.sin(phi) * math.cos(xi), rho * s * math.sin(phi) * math.sin(xi))


def polar_units(phi, xi):
    I = (0.0, math.cos(phi), math.sin(phi) * math.cos(xi), math.sin(phi) * math.sin(xi))
    # J = dI/dphi, K = (dI/dxi) / sin(phi)
    J = (0.0, -math.sin(phi), math.cos(phi) * math.cos(xi), math.cos(phi) * math.sin(xi))
    K = (0.0, 0.0, -math.sin(xi), math.cos(xi))
    return I, J, K


def symplectic_value(z0: complex, z1: complex):
    """z0 + z1 j with z1 j = (a + b i) j = a j + b k."""
    return (z0.real, z0.imag, z1.real, z1.imag)


def symplectic_polar(rho, vartheta, phi, psi):
    return symplectic_value(rho * math.cos(vartheta) * cmath.exp(1j * phi),
                            rho * math.sin(vartheta) * cmath.exp(1j * psi))


def polar_sum_direct(theta1, theta2, unit):
    """cos(t1 + t2) + I sin(t1 + t2) without any branch reduction."""
    t = theta1 + theta2
    return tuple(math.cos(t) * a + math.sin(t) * b for a, b in zip((1, 0, 0, 0), unit))


def symplectic_sum_direct(v1, v2, phi, psi):
    t = v1 + v2
    return symplectic_value(math.cos(t) * cmath.exp(1j * phi), math.sin(t) * cmath.exp(1j * psi))


def product_surface_torsion_uv(u, v):
    """Closed form of tau^(uv) for (cos u + i sin u)(cos v + j sin v)."""
    return (0.0, 0.0, -math.cos(2 * u), -math.sin(2 * u))


def close(a, b, tol):
    return max(abs(x - y) for x, y in zip(a, b)) <= tol


# frozen expected values -------------------------------------------------------

# (1+2i+3j+4k)(1-2i-3j-4k)
FROZEN_NORM_PRODUCT = (30.0, 0.0, 0.0, 0.0)
# (1+i)(1+j)
FROZEN_ONE_I_ONE_J = (1.0, 1.0, 1.0, 1.0)
# induced basis of j: j, ij, jj, kj
FROZEN_INDUCED_J = ((0, 0, 1, 0), (0, 0, 0, 1), (-1, 0, 0, 0), (0, -1, 0, 0))
# component matrix of i from the reference table
FROZEN_M_I = ((0, 1, 0, 0), (-1, 0, 0, 0), (0, 0, 0, 1), (0, 0, -1, 0))
# torsion of the product surface at the origin, both orders
FROZEN_TAU_UV_0 = (0.0, 0.0, -1.0, 0.0)
FROZEN_TAU_VU_0 = (0.0, 1.0, 0.0, 0.0)
# circle curvature, and after left rotation by j
FROZEN_KAPPA_CIRCLE = (0.0, 1.0, 0.0, 0.0)
FROZEN_KAPPA_CIRCLE_J = (0.0, -1.0, 0.0, 0.0)
# polar Laplacian of rho^2
FROZEN_LAPLACIAN_RHO2 = 8.0
# CLI golden output for `hdg eval --expr "i*j"`
FROZEN_EVAL_IJ = '{"x0":0,"x1":0,"x2":0,"x3":1}\n'
