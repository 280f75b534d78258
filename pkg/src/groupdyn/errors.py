"""Exception types raised across the package."""


class GroupDynError(Exception):
    """Base class for all errors raised by groupdyn."""


class InvalidMetric(GroupDynError, ValueError):
    pass


class UnknownPoint(GroupDynError, KeyError):
    pass


class UnknownLabel(GroupDynError, KeyError):
    pass


class EmptySet(GroupDynError, ValueError):
    pass


class InvalidGenerators(GroupDynError, ValueError):
    pass


class InvalidAction(GroupDynError, ValueError):
    pass


class NotBijective(InvalidAction):
    pass


class ZeroPower(GroupDynError, ValueError):
    pass


class GeneratorMismatch(GroupDynError, ValueError):
    pass


class NotACover(GroupDynError, ValueError):
    pass


class IncompleteAssignment(GroupDynError, ValueError):
    pass


class IndexNotFiner(GroupDynError, ValueError):
    """The index ball does not determine the action being evaluated on it."""


class DeltaTooLarge(GroupDynError, ValueError):
    pass


class LiftObstruction(GroupDynError):
    """No preimage choice lifts the pseudo-orbit consistently around every cycle of the index ball."""


class HorizonExhausted(GroupDynError):
    pass


class HorizonLimited(GroupDynError):
    """The Cayley ball did not saturate within the allowed radius."""


class InexactSeparation(GroupDynError):
    pass


class BudgetExceeded(GroupDynError):
    """A search ran out of nodes.

    ``partial`` carries whatever certified partial result the search had
    reached (a lower bound for profiles, a bracket for distances).
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class SSPNotEstablished(GroupDynError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ShadowingMarginTooSmall(GroupDynError, ValueError):
    pass


class SpecError(GroupDynError, ValueError):
    """Malformed action-spec document."""
