"""Exception types and the validation-issue record shared across the package."""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Issue:
    """One validation problem, anchored to a path inside the offending document."""

    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message}" if self.path else self.message


class TriageError(Exception):
    """Base class for errors raised by this package."""


class ParseError(TriageError):
    """A source document is not well-formed (position carried in the message)."""


class ValidationFailure(TriageError):
    """A document violated its contract; every violation is collected, not just the first."""

    def __init__(self, issues: list[Issue], warnings: list[Issue] | None = None):
        self.issues = list(issues)
        self.warnings = list(warnings or [])
        lines = "; ".join(str(i) for i in self.issues)
        super().__init__(f"{len(self.issues)} validation error(s): {lines}")


class EvaluationError(TriageError):
    """A rule could not be applied to the data it references."""


class UnknownRecallWarning(UserWarning):
    """A recalled past symptom is outside the disease's declared symptom universe."""
