"""Exception types shared across the package."""


class CondboundError(Exception):
    """Base class for all package errors."""


class PreconditionError(CondboundError, ValueError):
    """An operation was called outside its stated domain.

    The message names the violated precondition so CLI diagnostics can
    surface it verbatim.
    """


class CapacityError(CondboundError, RuntimeError):
    """A configured memory or work cap would be exceeded."""
