"""Shared evaluation of column rules.

Symptom designation and sign severity use the same four rule kinds with the
same empty-cell handling, so both models delegate here. A "column" is the
cell map of one problem report or one sign's observables; a column with no
recorded cells is absent evidence and always yields 0, before any rule
dispatch.
"""
from __future__ import annotations

import math
from typing import Mapping

from .core import GradeCombinator, as_grade, combine
from .errors import EvaluationError
from .kb import MappingRule

Cells = Mapping[str, object]


def _cell_grade(value: object, cell: str | None) -> float:
    try:
        return as_grade(value, f"cell {cell!r}")
    except ValueError as exc:
        raise EvaluationError(str(exc)) from exc


def _numeric(value: object, what: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise EvaluationError(f"{what} must be numeric, got {value!r}")
    if not math.isfinite(float(value)):
        raise EvaluationError(f"{what} must be finite, got {value!r}")
    return float(value)


def apply_rule(rule: MappingRule, cells: Cells | None) -> float:
    """Evaluate one rule against one column; returns a grade.

    Empty referenced cells are treated as absent evidence, never errors:
    location_match fails to match, weighted sums take no contribution,
    passthrough and combined skip them (all-empty gives 0).
    """
    if not cells:
        return 0.0
    if rule.kind == "location_match":
        return 1.0 if all(cells.get(k) == v for k, v in rule.match) else 0.0
    if rule.kind == "weighted_threshold":
        total = 0.0
        for key, weight in rule.weights:
            if key in cells:
                total += weight * _numeric(cells[key], f"cell {key!r}")
        return 1.0 if total >= rule.threshold else 0.0
    if rule.kind == "membership_passthrough":
        value = cells.get(rule.source)
        if value is None:
            return 0.0
        return _cell_grade(value, rule.source)
    if rule.kind == "combined":
        assert rule.combinator is not None
        present = [s for s in rule.sources if s in cells]
        if not present:
            return 0.0
        grades = [_cell_grade(cells[s], s) for s in present]
        c = rule.combinator
        if c.kind == "weighted_mean":
            by_source = dict(zip(rule.sources, c.weights))
            weights = tuple(by_source[s] for s in present)
            if sum(weights) <= 0.0:
                return 0.0  # every weighted cell absent: no evidence
            c = GradeCombinator("weighted_mean", weights)
        return combine(c, grades)
    raise EvaluationError(f"unknown rule kind {rule.kind!r}")
