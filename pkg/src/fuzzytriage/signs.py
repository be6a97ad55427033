"""Physical-examination observables to sign severities.

Severity rules for signs are the same four kinds as symptom designation and
share the rule-evaluation implementation wholesale; the only structural
difference is that a sign's rules read the sign's own observables column
rather than a named problem column.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import EvaluationError
from .kb import KnowledgeBase, MappingRule
from .rules import Cells, apply_rule


@dataclass(frozen=True)
class SignColumn:
    sign: str
    cells: dict[str, object]


@dataclass(frozen=True)
class ObservablesMatrix:
    """One column per declared sign (unobserved columns are simply empty)."""

    columns: tuple[SignColumn, ...]

    def column(self, sign: str) -> SignColumn:
        for col in self.columns:
            if col.sign == sign:
                return col
        raise KeyError(f"unknown sign {sign!r}")


@dataclass(frozen=True)
class SignMatrix:
    ids: tuple[str, ...]
    grades: tuple[float, ...]

    def grade(self, sign: str) -> float:
        return self.grades[self.ids.index(sign)]


def build_observables_matrix(
    kb: KnowledgeBase, observations: Mapping[str, Mapping[str, object]]
) -> ObservablesMatrix:
    declared = {s.id for s in kb.signs}
    for sign, cells in observations.items():
        if sign not in declared:
            raise EvaluationError(f"unknown sign {sign!r}")
        allowed = {o.id for o in kb.sign_observables(sign)}
        for obs in cells:
            if obs not in allowed:
                raise EvaluationError(f"{obs!r} is not a declared observable of sign {sign!r}")
    return ObservablesMatrix(
        tuple(SignColumn(s.id, dict(observations.get(s.id, {}))) for s in kb.signs)
    )


def sign_severity(rule: MappingRule, column: Cells | None) -> float:
    """Apply one severity rule to one observables column (shared δ semantics)."""
    return apply_rule(rule, column)


def assemble_sign_matrix(kb: KnowledgeBase, matrix: ObservablesMatrix) -> SignMatrix:
    grades = []
    for sign in kb.signs:
        column = matrix.column(sign.id)
        contributions = [
            sign_severity(rule, column.cells) for rule in kb.sign_rules if rule.target == sign.id
        ]
        grades.append(max(contributions) if contributions else 0.0)
    return SignMatrix(tuple(s.id for s in kb.signs), tuple(grades))
