"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """User-supplied parameters are inconsistent, incomplete, or out of range."""


class SystematicInfeasibleError(RuntimeError):
    """The systematic precoder form is numerically infeasible for this mask.

    Raised when the leading square block that the systematic construction
    must invert is singular or too ill-conditioned to trust.  The null-space
    form (``nslp_precoder``) never has this failure mode and should be used
    instead.
    """
