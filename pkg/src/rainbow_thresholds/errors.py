"""Semantic exception hierarchy shared by all modules."""


class RainbowError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(RainbowError, ValueError):
    """Inputs violate a contract: wrong ground set, bad labels, improper colored set."""


class DomainError(RainbowError):
    """The requested quantity is undefined for this object (empty or trivial family)."""


class EmptyFamilyError(DomainError):
    """The maximum minimal-edge size is undefined for an empty family."""


class PreconditionError(RainbowError):
    """A stated precondition of the operation does not hold (e.g. too few colors)."""


class CapacityError(RainbowError):
    """The instance exceeds a desk-scale enumeration guard."""


class NumericalError(RainbowError):
    """A numerical procedure failed to converge or certify its result."""
