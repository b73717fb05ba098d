"""Shared exception types."""

from __future__ import annotations


class ValidationError(ValueError):
    """A domain object or input document violates its invariants."""


class ConsistencyError(ValidationError):
    """Elicited preference answers admit no valid model.

    Carries the violated constraints so the elicitation dialogue can show
    the decision maker exactly which answers clash.
    """

    def __init__(self, message: str, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class SolverFailure(RuntimeError):
    """A solver run aborted; ``partial`` holds whatever results completed."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial
