"""Exception hierarchy shared by all modules."""


class UnifreeError(Exception):
    """Base class for every error raised by this package."""


class ElementNotInMonoid(UnifreeError, ValueError):
    pass


class EmptyCarrier(UnifreeError, ValueError):
    pass


class BoundExceeded(UnifreeError, RuntimeError):
    pass


class MalformedTemplate(UnifreeError, ValueError):
    pass


class NoFixedPoint(UnifreeError, ValueError):
    pass


class NotEnoughNaturalComponents(UnifreeError, ValueError):
    pass


class PreconditionViolated(UnifreeError, ValueError):
    pass


class DoesNotGenerate(PreconditionViolated):
    pass


class IndexOutOfDomain(UnifreeError, KeyError):
    pass


class NotInUnitBall(UnifreeError, ValueError):
    pass


class SquareDoesNotCommuteAtSetLevel(UnifreeError, ValueError):
    pass


class InputError(UnifreeError, ValueError):
    """Malformed user input (bad JSON shape, unknown names)."""
