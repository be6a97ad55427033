"""Evaluation reports: canonical structured JSON and a human-readable rendering.

The structured form is a pure function of (knowledge base, record) serialized
with sorted keys, so equal evaluations export byte-identical documents; it
round-trips back into the matrices exactly. The text form is presentational
only.
"""
from __future__ import annotations

import json

from .engine import EvaluationMatrices, Session, Unanswered, effective_alpha, evaluate
from .errors import ParseError
from .history import HistoryMatrix
from .kb import KnowledgeBase
from .labs import TestAbnormalityVector
from .record import PatientRecord
from .signs import SignMatrix
from .symptoms import SymptomMatrix

FORMATS = ("structured", "text")


def report_document(kb: KnowledgeBase, record: PatientRecord, matrices: EvaluationMatrices) -> dict:
    m = matrices
    return {
        "alpha": effective_alpha(kb, record),
        "history": {
            "aspects": list(m.history.aspect_ids),
            "entries": list(m.history.entries),
            "split": m.history.split_p,
        },
        "symptoms": {"ids": list(m.symptoms.ids), "grades": [float(g) for g in m.symptoms.grades]},
        "signs": {"ids": list(m.signs.ids), "grades": [float(g) for g in m.signs.grades]},
        "tests": {
            "declared": list(m.tests.declared),
            "grades": {t: float(g) for t, g in m.tests.grades.items()},
        },
        "unanswered": {
            "history_aspects": list(m.unanswered.history_aspects),
            "problems": list(m.unanswered.problems),
            "signs": list(m.unanswered.signs),
            "tests": list(m.unanswered.tests),
        },
    }


def render_structured(kb: KnowledgeBase, record: PatientRecord, matrices: EvaluationMatrices) -> str:
    doc = report_document(kb, record, matrices)
    return json.dumps(doc, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def parse_report(text: str) -> EvaluationMatrices:
    """Rebuild the matrices from a structured report document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"report is not valid JSON: {exc.msg}") from exc
    try:
        history = HistoryMatrix(
            tuple(doc["history"]["aspects"]),
            tuple(int(e) for e in doc["history"]["entries"]),
            int(doc["history"]["split"]),
        )
        symptoms = SymptomMatrix(
            tuple(doc["symptoms"]["ids"]), tuple(float(g) for g in doc["symptoms"]["grades"])
        )
        signs = SignMatrix(tuple(doc["signs"]["ids"]), tuple(float(g) for g in doc["signs"]["grades"]))
        tests = TestAbnormalityVector(
            tuple(doc["tests"]["declared"]),
            {t: float(g) for t, g in doc["tests"]["grades"].items()},
        )
        unanswered = Unanswered(
            tuple(doc["unanswered"]["history_aspects"]),
            tuple(doc["unanswered"]["problems"]),
            tuple(doc["unanswered"]["signs"]),
            tuple(doc["unanswered"]["tests"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"report document is missing or mistypes a field: {exc}") from exc
    return EvaluationMatrices(history, symptoms, signs, tests, unanswered)


def _label(decl) -> str:
    return f"{decl.id} ({decl.label})" if decl.label else decl.id


def render_text(kb: KnowledgeBase, record: PatientRecord, matrices: EvaluationMatrices) -> str:
    m = matrices
    lines = [f"evaluation at alpha = {effective_alpha(kb, record):g}", ""]

    lines.append(f"history (first {m.history.split_p} inferable from recalled symptoms):")
    for aspect, entry in zip(kb.history_aspects, m.history.entries):
        mark = "present" if entry else "absent"
        lines.append(f"  [{entry}] {_label(aspect)}: {mark}")

    lines.append("")
    lines.append("symptom severities (0 none .. 1 maximal):")
    for decl, grade in zip(kb.symptoms, m.symptoms.grades):
        lines.append(f"  {_label(decl)}: {grade:.3f}")

    lines.append("")
    lines.append("sign severities (0 none .. 1 maximal):")
    for decl, grade in zip(kb.signs, m.signs.grades):
        lines.append(f"  {_label(decl)}: {grade:.3f}")

    lines.append("")
    lines.append("test abnormality (0 normal .. 1 maximal; unperformed tests have no grade):")
    for decl in kb.tests:
        grade = m.tests.grade(decl.id)
        shown = f"{grade:.3f}" if grade is not None else "not performed"
        lines.append(f"  {_label(decl)}: {shown}")

    lines.append("")
    lines.append("unanswered:")
    for name, items in (
        ("history aspects", m.unanswered.history_aspects),
        ("problems", m.unanswered.problems),
        ("signs", m.unanswered.signs),
        ("tests", m.unanswered.tests),
    ):
        shown = ", ".join(items) if items else "none"
        lines.append(f"  {name}: {shown}")
    return "\n".join(lines) + "\n"


def export_report(session: Session, format: str = "structured") -> str:
    """Render the session's current evaluation; ``format`` is structured or text."""
    if format not in FORMATS:
        raise ValueError(f"unknown report format {format!r}")
    if format == "structured":
        return render_structured(session.kb, session.record, session.matrices)
    return render_text(session.kb, session.record, session.matrices)


def evaluate_to_report(kb: KnowledgeBase, record: PatientRecord, format: str = "structured") -> str:
    """Batch path: evaluate a whole record and render, without a session."""
    if format not in FORMATS:
        raise ValueError(f"unknown report format {format!r}")
    matrices = evaluate(kb, record)
    if format == "structured":
        return render_structured(kb, record, matrices)
    return render_text(kb, record, matrices)
