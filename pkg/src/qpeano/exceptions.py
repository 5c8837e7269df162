"""Exception and warning types raised across the package."""


class QDomainError(ValueError):
    """An argument lies outside the domain where an operation is defined."""


class NotAnnihilatingError(QDomainError):
    """A functional does not annihilate the polynomial space it is paired with."""


class SignChangeError(QDomainError):
    """A weight function or kernel required to be one-signed changes sign."""


class JacksonConvergenceWarning(RuntimeWarning):
    """A Jackson series hit ``max_terms`` before meeting its tolerance."""


class DegenerateWeightsWarning(RuntimeWarning):
    """The L2-optimal quadrature weights are not unique; a minimum-norm choice was made."""
