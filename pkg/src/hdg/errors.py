"""Exception hierarchy shared by every hdg module."""


class HDGError(Exception):
    """Base class for all library errors."""


class DomainError(HDGError, ValueError):
    """An argument lies outside the domain of an operation."""


class NonFiniteError(HDGError, ArithmeticError):
    """An operation produced NaN or an infinity."""


class DegenerateDirectionError(DomainError):
    """The imaginary direction of a real quaternion is undefined."""


class CoordinateSingularityError(DomainError):
    """A polar-coordinate factor (rho, sin theta or sin phi) vanishes."""

    def __init__(self, factor: str, point):
        self.factor = factor
        self.point = tuple(point)
        super().__init__(f"coordinate singularity: {factor} vanishes at {self.point}")


class DifferentiationError(HDGError, ArithmeticError):
    """Numerical differentiation met a non-finite evaluation."""

    def __init__(self, message: str, point=None):
        self.point = None if point is None else tuple(point)
        if point is not None:
            message = f"{message} at {self.point}"
        super().__init__(message)


class NonRegularError(DomainError):
    """A constraint is not regular at the requested point."""


class UndefinedFrameError(DomainError):
    """Normal or binormal requested where curvature or torsion vanishes."""
