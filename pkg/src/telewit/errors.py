"""Exception hierarchy shared by all telewit modules."""


class ValidationError(ValueError):
    """Input failed a shape, dimension or tolerance check."""


class NotHermitianError(ValidationError):
    pass


class TraceError(ValidationError):
    pass


class NotPositiveError(ValidationError):
    pass


class DomainError(ValidationError):
    """A family parameter lies outside its documented domain."""


class ConsistencyError(RuntimeError):
    """An internal numerical identity was violated (a bug, not bad input)."""
