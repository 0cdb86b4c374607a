"""Exception hierarchy shared by all modules."""


class H0Error(Exception):
    """Base class for library errors."""


class ParseError(H0Error):
    """Malformed field manifest."""


class InvariantError(H0Error):
    """A field manifest parsed but violates a mathematical invariant."""


class PrecisionError(H0Error):
    """Root refinement failed to reach the requested certified radius."""


class InternalError(H0Error):
    """Inconsistent internal state, e.g. a non-integral product of integers."""


class SingularBasis(H0Error):
    pass


class DomainError(H0Error, ValueError):
    """Arguments outside the domain where a bound or formula is valid."""


class NotFound(H0Error):
    pass


class PreconditionFailed(H0Error):
    pass
