"""Exception hierarchy shared across the package."""


class TrustResError(Exception):
    """Base class for every error raised by trustres."""


class ValidationError(TrustResError, ValueError):
    """Input does not describe a valid network or table."""


class UnknownUser(ValidationError):
    pass


class SelfTrust(ValidationError):
    pass


class DuplicateMapping(ValidationError):
    pass


class DuplicateBelief(ValidationError):
    pass


class UserOverlap(ValidationError):
    pass


class NonEmptyTopologyBeliefs(ValidationError):
    pass


class ParseError(ValidationError):
    """A file could not be parsed according to its documented format."""


class DomainTooLarge(TrustResError):
    """The ground program exceeds the configured atom limit."""

    def __init__(self, size, limit):
        super().__init__(f"atom universe has {size} atoms, limit is {limit}")
        self.size = size
        self.limit = limit


class NotDefinite(TrustResError, ValueError):
    pass


class InsufficientData(TrustResError, ValueError):
    pass
