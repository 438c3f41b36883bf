"""Exception hierarchy shared by every evoclass module."""


class EvoclassError(Exception):
    """Base class for all library errors."""


class ParseError(EvoclassError, ValueError):
    """Malformed textual input (field element, algebra literal, polynomial)."""


class NotPrimeError(EvoclassError, ValueError):
    pass


class InvalidDegreeError(EvoclassError, ValueError):
    pass


class FieldMismatchError(EvoclassError, TypeError):
    """Operands come from different fields."""


class ZeroInverseError(EvoclassError, ZeroDivisionError):
    pass


class ZeroElementError(EvoclassError, ValueError):
    """A nonzero field element was required."""


class DimensionMismatchError(EvoclassError, ValueError):
    pass


class ZeroScaleError(EvoclassError, ValueError):
    pass


class SingularMapError(EvoclassError, ValueError):
    """A component of a candidate map is not invertible."""


class RingMismatchError(EvoclassError, TypeError):
    pass


class ZeroPolynomialError(EvoclassError, ValueError):
    pass


class CapExceededError(EvoclassError):
    """A configured size cap would be exceeded.

    ``cap`` names the cap, ``value`` is the requested size and ``limit`` the
    configured bound.  ``alternatives`` lists feasible methods, if any.
    """

    def __init__(self, cap, value, limit, alternatives=()):
        self.cap = cap
        self.value = value
        self.limit = limit
        self.alternatives = tuple(alternatives)
        msg = f"cap '{cap}' exceeded: {value} > {limit}"
        if self.alternatives:
            msg += "; feasible alternatives: " + ", ".join(self.alternatives)
        super().__init__(msg)


class ResourceLimitError(EvoclassError):
    """An iterative computation hit its step limit."""


class OracleError(EvoclassError):
    """An oracle failed on a specific pair of algebras during classification."""

    def __init__(self, left, right, cause):
        self.left = left
        self.right = right
        self.cause = cause
        super().__init__(f"oracle failed on pair ({left}, {right}): {cause}")
