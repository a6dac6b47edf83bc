"""Exception types raised by growdestroy."""


class GrowDestroyError(Exception):
    """Base class for all package errors."""


class ParameterError(GrowDestroyError, ValueError):
    """An input parameter violates its documented constraint."""


class DomainError(GrowDestroyError, ValueError):
    """A value lies outside the domain an operation is defined on."""


class PreconditionError(GrowDestroyError, RuntimeError):
    """A graph operation was called in a state that is a caller bug
    (self-loop, duplicate edge, dead node)."""
