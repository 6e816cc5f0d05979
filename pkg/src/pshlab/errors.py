"""Exception types raised by the library."""


class PshlabError(Exception):
    """Base class for all library errors."""


class DomainError(PshlabError, ValueError):
    """An argument lies outside the region where an operation is defined."""


class InfiniteMassError(PshlabError, ValueError):
    """A weight has infinite total mass and so defines no exhaustion."""


class QuadratureError(PshlabError, RuntimeError):
    """An integral failed to converge within its budget."""


class NotNonvanishingError(PshlabError, ValueError):
    """A fractional power was requested of a function that may vanish."""


class UnsupportedFixtureError(PshlabError, ValueError):
    """A function's zero structure is not known in closed form."""


class BlaschkeConditionError(PshlabError, ValueError):
    """A zero sequence violates the Blaschke summability condition."""


class NonMemberError(PshlabError, ValueError):
    """A function is not in the weighted space required by an operation."""

    def __init__(self, message, diagnostic=None):
        super().__init__(message)
        self.diagnostic = diagnostic


class ConfigError(PshlabError, ValueError):
    """A configuration document or command line is malformed."""

    def __init__(self, message, line=None, column=None):
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line
        self.column = column
