"""Clinical and diagnostic test results normalized to abnormality grades.

Raw results live on wildly different scales; each test's declared membership
function maps its result into the common [0, 1] abnormality continuum. A test
may instead declare several aspects, each with its own function, whose grades
are combined (maximum by default: the most abnormal aspect dominates, and the
knowledge base may declare otherwise per test).

A test that was never performed stays absent from the vector. Absent is not
zero: zero asserts a confirmed-normal result, which an unperformed test
cannot make.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .core import combine, eval_membership
from .errors import EvaluationError
from .kb import KnowledgeBase, TestDecl


@dataclass(frozen=True)
class TestResult:
    """A scalar result or a map of aspect values, per the test's declaration."""

    test: str
    value: float | None = None
    aspects: tuple[tuple[str, float], ...] = ()

    def __post_init__(self):
        if (self.value is None) == (not self.aspects):
            raise ValueError("a test result carries exactly one of value or aspects")


@dataclass(frozen=True)
class TestAbnormalityVector:
    """Abnormality grade per performed test, in declared test order."""

    declared: tuple[str, ...]
    grades: dict[str, float]  # performed tests only; absence is not 0

    def performed(self) -> tuple[str, ...]:
        return tuple(self.grades)

    def grade(self, test: str) -> float | None:
        return self.grades.get(test)


def _decl(kb: KnowledgeBase, test_id: str) -> TestDecl:
    try:
        return kb.test(test_id)
    except KeyError as exc:
        raise EvaluationError(str(exc)) from exc


def abnormality(kb: KnowledgeBase, result: TestResult) -> float:
    """Abnormality grade of a scalar test result."""
    decl = _decl(kb, result.test)
    if decl.multi_aspect:
        raise EvaluationError(f"test {result.test!r} is multi-aspect; pass aspect values")
    if result.value is None:
        raise EvaluationError(f"test {result.test!r} expects a scalar value")
    try:
        return eval_membership(decl.abnormality, result.value)
    except ValueError as exc:
        raise EvaluationError(f"test {result.test!r}: {exc}") from exc


def multi_aspect_abnormality(kb: KnowledgeBase, result: TestResult) -> float:
    """Abnormality grade of a multi-aspect result: per-aspect grades, combined."""
    decl = _decl(kb, result.test)
    if not decl.multi_aspect:
        raise EvaluationError(f"test {result.test!r} takes a single scalar value")
    if not result.aspects:
        raise EvaluationError(f"test {result.test!r} expects aspect values")
    given = dict(result.aspects)
    declared = [a.id for a in decl.aspects]
    missing = [a for a in declared if a not in given]
    extra = [a for a in given if a not in declared]
    if missing or extra:
        parts = []
        if missing:
            parts.append(f"missing aspects {missing}")
        if extra:
            parts.append(f"unknown aspects {extra}")
        raise EvaluationError(f"test {result.test!r}: " + ", ".join(parts))
    try:
        grades = [eval_membership(a.abnormality, given[a.id]) for a in decl.aspects]
    except ValueError as exc:
        raise EvaluationError(f"test {result.test!r}: {exc}") from exc
    return combine(decl.combine, grades)


def assemble_test_vector(kb: KnowledgeBase, results: Iterable[TestResult]) -> TestAbnormalityVector:
    """Vector of abnormality grades over the performed tests, canonical order."""
    by_test: dict[str, TestResult] = {}
    for result in results:
        _decl(kb, result.test)
        if result.test in by_test:
            raise EvaluationError(f"test {result.test!r} has more than one result")
        by_test[result.test] = result
    grades: dict[str, float] = {}
    for decl in kb.tests:
        if decl.id not in by_test:
            continue
        result = by_test[decl.id]
        if decl.multi_aspect:
            grades[decl.id] = multi_aspect_abnormality(kb, result)
        else:
            grades[decl.id] = abnormality(kb, result)
    return TestAbnormalityVector(tuple(t.id for t in kb.tests), grades)
