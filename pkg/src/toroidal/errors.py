"""Exception hierarchy.

Validation problems (bad arguments, malformed files) derive from
:class:`ValidationError`; failures of a numerical routine on valid input
derive from :class:`NumericalError`. The CLI maps these to exit codes 2 and 3.
"""


class ToroidalError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(ToroidalError, ValueError):
    pass


class NumericalError(ToroidalError, ArithmeticError):
    pass


class ClassDeadError(ValidationError):
    """A selected cohomology class is not alive at the requested scale."""


class CoverError(ValidationError):
    """Some data point is not covered by any landmark ball."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class LiftError(NumericalError):
    """Symmetric lift of a mod-p cocycle is not an integer cocycle."""


class IntegralityError(NumericalError):
    """A real cocycle does not represent an integral cohomology class."""


class DependentClassesError(NumericalError):
    """Cohomology classes are not linearly independent over the reals."""


class ConvergenceError(NumericalError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NerveEdgeError(NumericalError):
    """An edge required by sparse integration is missing from the complex."""
