"""Quaternionic differential geometry: algebra, gradient calculus, constraints and forms."""

from .calculus import (
    QuaternionField, conj_gradient_gradient, cr_residual, cr_residual_polar, differential,
    directional_derivative, gradient, gradient_polar, laplacian, laplacian_polar,
)
from .constraints import (
    Constraint, FrenetData, binormal, check_regular, curvature, frenet, frenet_residual,
    normal, radii, rotate_constraint, tangent, torsion, transformed_curvature, unit_tangent,
)
from .diff import ACCURATE, DEFAULT, EXACT, DiffConfig, QuaternionMap
from .errors import (
    CoordinateSingularityError, DegenerateDirectionError, DifferentiationError, DomainError,
    HDGError, NonFiniteError, NonRegularError, UndefinedFrameError,
)
from .exterior import OneForm, TwoForm, wedge
from .expr import Expression, ParseError, eval_dual, evaluate, parse
from .forms import (
    Connection, DualForm, basis_matrix, connection, connection_components, dual_form,
    expand_in_dual_basis, reconstruct, structural_residuals,
)
from .notation import (
    PolarFrame, PolarQuaternion, SymplecticPolar, SymplecticQuaternion, add_polar_angles,
    add_symplectic_angles, extract_components, from_polar, from_symplectic, polar_frame,
    polar_frame_derivatives, symplectic_inner, to_polar, to_symplectic,
)
from .quaternion import (
    BASIS, ONE, UNIT_I, UNIT_J, UNIT_K, ZERO, Quaternion, component_matrix, conj,
    induced_basis, inner, inverse, is_orthogonal, is_parallel, mul, norm, omega_of,
)

__version__ = "0.1.0"
