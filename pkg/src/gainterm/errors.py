class DomainError(ValueError):
    """Input outside the domain of the operation (zero vector, negative radius...)."""


class PreconditionError(ValueError):
    """A documented precondition failed (non-unit direction, colinear pair...)."""


class PoleError(DomainError):
    """Spherical frame undefined at theta in {0, pi}."""


class ResolutionError(ValueError):
    """Quadrature too coarse for the requested oscillation scale."""

    def __init__(self, message: str, required: tuple[int, int]):
        super().__init__(message)
        self.required = required


class ValidityError(ValueError):
    """Asymptotic formula requested outside its validity region."""


class TruncationError(ValueError):
    """A test function is not negligible on the boundary of the velocity box."""


class MeanZeroError(ValueError):
    """Negative-order homogeneous operator applied to data with nonzero mean."""


class ConfigError(ValueError):
    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key
