"""Exception types shared across the library."""


class DomainError(ValueError):
    """A parameter lies outside its mathematical domain."""


class DegenerateFamilyError(ValueError):
    """An interval polynomial family whose leading interval contains zero."""


class RootFindingError(ArithmeticError):
    """The iterative root finder failed to reach its residual tolerance."""


class DivergenceError(ArithmeticError):
    """A vector-field or integrator evaluation produced non-finite values."""


class ContourSingularityError(ValueError):
    """A transfer-function pole lies on the requested Nyquist contour."""


class MarginalStabilityError(ArithmeticError):
    """A Nyquist curve passes too close to the critical point to classify."""


class PreconditionError(ValueError):
    """A caller-checkable hypothesis of a certification routine is violated."""


class SamplingError(RuntimeError):
    """Rejection sampling exhausted its attempt budget."""


class EstimationError(ValueError):
    """A trajectory does not carry enough usable samples for a rate fit."""
