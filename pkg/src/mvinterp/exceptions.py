"""Exception types shared across the package."""


class SizingError(OverflowError):
    """A requested problem size does not fit the supported integer range."""


class DegenerateInputError(ValueError):
    """Input data violates a non-degeneracy precondition (e.g. duplicate nodes)."""


class SingularMatrixError(ArithmeticError):
    """Pivoted elimination hit a pivot below the singularity threshold."""


class GeometryConfigError(RuntimeError):
    """Node/hyperplane geometry is ill-posed for the chosen lambda/kappa."""
