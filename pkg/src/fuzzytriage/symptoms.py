"""Problem reports to symptom severities.

What the patient relates ("chest pain, started two weeks ago, quite bad") is
captured verbatim into a problem matrix; the knowledge base's designation
rules then map each problem column onto the medically defined symptoms,
producing one severity grade per symptom. Several rules may target the same
symptom (a problem can bear on more than one symptom and vice versa); their
contributions combine by maximum, the conservative choice for accumulating
evidence of severity.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import EvaluationError
from .kb import KnowledgeBase, MappingRule
from .rules import Cells, apply_rule


@dataclass(frozen=True)
class ProblemReport:
    """One reported problem and whatever profile factors were related."""

    problem: str
    profile: dict[str, object]


@dataclass(frozen=True)
class ProblemColumn:
    problem: str
    cells: dict[str, object]


@dataclass(frozen=True)
class ProblemMatrix:
    """One column per reported problem, in canonical problem order."""

    columns: tuple[ProblemColumn, ...]

    def column(self, problem: str) -> ProblemColumn | None:
        for col in self.columns:
            if col.problem == problem:
                return col
        return None


@dataclass(frozen=True)
class SymptomMatrix:
    ids: tuple[str, ...]
    grades: tuple[float, ...]

    def grade(self, symptom: str) -> float:
        return self.grades[self.ids.index(symptom)]


def build_problem_matrix(kb: KnowledgeBase, reports: Iterable[ProblemReport]) -> ProblemMatrix:
    """Transcribe reports into columns; unreported problems get no column."""
    by_problem: dict[str, ProblemReport] = {}
    for report in reports:
        try:
            decl = kb.problem(report.problem)
        except KeyError as exc:
            raise EvaluationError(str(exc)) from exc
        if report.problem in by_problem:
            raise EvaluationError(f"problem {report.problem!r} reported more than once")
        declared = set(decl.factor_ids())
        for factor in report.profile:
            if factor not in declared:
                raise EvaluationError(
                    f"factor {factor!r} is not in the profile of problem {report.problem!r}"
                )
        by_problem[report.problem] = report
    columns = tuple(
        ProblemColumn(p.id, dict(by_problem[p.id].profile))
        for p in kb.problems
        if p.id in by_problem
    )
    return ProblemMatrix(columns)


def designate_symptom(rule: MappingRule, column: Cells | None) -> float:
    """Apply one designation rule to one problem column."""
    return apply_rule(rule, column)


def assemble_symptom_matrix(kb: KnowledgeBase, matrix: ProblemMatrix) -> SymptomMatrix:
    """Severity grade for every declared symptom, 0 where nothing was reported."""
    grades = []
    for symptom in kb.symptoms:
        contributions = []
        for rule in kb.symptom_rules:
            if rule.target != symptom.id:
                continue
            column = matrix.column(rule.problem)
            if column is None:
                continue  # source problem unreported
            contributions.append(designate_symptom(rule, column.cells))
        grades.append(max(contributions) if contributions else 0.0)
    return SymptomMatrix(tuple(s.id for s in kb.symptoms), tuple(grades))
