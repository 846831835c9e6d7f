"""Exception types shared across the package."""


class GeoBatchError(Exception):
    pass


class NotPrimePower(GeoBatchError, ValueError):
    pass


class DivisionByZero(GeoBatchError, ZeroDivisionError):
    pass


class DimensionMismatch(GeoBatchError, ValueError):
    pass


class IndexOutOfRange(GeoBatchError, IndexError):
    pass


class InvalidParams(GeoBatchError, ValueError):
    pass


class BudgetExceeded(GeoBatchError):
    pass


class UncertifiedCollection(GeoBatchError):
    pass


class LengthMismatch(GeoBatchError, ValueError):
    pass


class AssignmentFailure(GeoBatchError):
    """Greedy assignment could not fill a request group.

    This says nothing about the batch property itself: the greedy scan is
    order dependent and only uses simple recovering sets.
    """

    def __init__(self, group: int, target: int, found: int, needed: int):
        self.group = group
        self.target = target
        self.found = found
        self.needed = needed
        super().__init__(
            f"group {group} (symbol {target}): found {found} of {needed} recovering sets"
        )
