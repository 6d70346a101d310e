"""Exception hierarchy shared by all pqlab modules."""

from __future__ import annotations


class PqlabError(Exception):
    """Base class for all library errors."""


class InvalidSpec(PqlabError):
    """A game, generator spec, or parameter set violates its invariants."""


class InvalidProfile(PqlabError):
    """A strategy profile or query payload is malformed for the given game."""


class LoadOutOfRange(PqlabError):
    """A congestion-query load falls outside {0..n}."""


class NotADag(PqlabError):
    """The network contains a directed cycle."""


class BudgetExhausted(PqlabError):
    """The oracle's query budget would be exceeded."""


class DegreeViolation(PqlabError):
    """A hidden graphical game is inconsistent with the promised degree bound."""


class AlgorithmInvariantViolated(PqlabError):
    """An internal invariant failed, e.g. a non-monotone hidden cost table."""


class PathSelectionFailed(PqlabError):
    """A path pair required by the learner's lemmas could not be constructed."""


class PotentialNotDecreasing(PqlabError):
    """Best-response dynamics failed to decrease the potential (broken input)."""


class TooLarge(PqlabError):
    """An exhaustive enumeration would exceed the configured cap."""
