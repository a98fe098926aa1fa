"""Shared exception types."""


class ForcingLabError(Exception):
    """Base class for all package errors."""


class UniverseMismatchError(ForcingLabError):
    """Two conditions from different universes were combined."""


class CapExceededError(ForcingLabError):
    """An operation would produce a condition longer than the universe cap."""


class IncompatibleError(ForcingLabError):
    """A common extension was requested for incompatible conditions."""


class BudgetExceededError(ForcingLabError):
    """An exhaustive enumeration hit its configured resource budget."""


class QueueExhaustedError(ForcingLabError):
    """A player's element queue ran dry before the move could complete."""


class StrategyContractError(ForcingLabError):
    """A strategy returned a condition that does not extend its input."""


class InternalInvariantError(ForcingLabError):
    """A construction-time invariant failed; signals an implementation bug."""


class ArrayInvariantError(ForcingLabError):
    """An array-size recomputation disagreed; some array axiom is violated."""
