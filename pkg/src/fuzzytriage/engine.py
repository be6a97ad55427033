"""Orchestration: batch evaluation and the incremental intake session.

Evaluation composes the four models over one patient record and is a pure
function of (knowledge base, record). Sessions wrap that for live intake: a
session accumulates findings one at a time, fully re-evaluates after each
accepted finding (the matrices are tens of entries, so recomputing buys the
batch/incremental equivalence outright), and can snapshot every revision to
an append-only file.
"""
from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ValidationFailure
from .history import HistoryMatrix, assemble_history_matrix
from .kb import KnowledgeBase, prominent_symptom_set
from .labs import TestAbnormalityVector, assemble_test_vector
from .record import (
    PatientRecord,
    check_finding_shape,
    merge_finding,
    record_from_dict,
)
from .signs import SignMatrix, assemble_sign_matrix, build_observables_matrix
from .symptoms import SymptomMatrix, assemble_symptom_matrix, build_problem_matrix


@dataclass(frozen=True)
class Unanswered:
    """Universe elements the intake has not addressed yet, in canonical order."""

    history_aspects: tuple[str, ...] = ()
    problems: tuple[str, ...] = ()
    signs: tuple[str, ...] = ()
    tests: tuple[str, ...] = ()


@dataclass(frozen=True)
class EvaluationMatrices:
    history: HistoryMatrix
    symptoms: SymptomMatrix
    signs: SignMatrix
    tests: TestAbnormalityVector
    unanswered: Unanswered


def effective_alpha(kb: KnowledgeBase, record: PatientRecord) -> float:
    return record.alpha_override if record.alpha_override is not None else kb.alpha


def evaluate(kb: KnowledgeBase, record: PatientRecord) -> EvaluationMatrices:
    """Compute all four matrices for ``record``; deterministic and pure."""
    history = assemble_history_matrix(
        kb, record.direct_history, record.recalled_past_symptoms, record.alpha_override
    )
    problem_matrix = build_problem_matrix(kb, record.problem_reports)
    symptoms = assemble_symptom_matrix(kb, problem_matrix)
    observables = build_observables_matrix(kb, record.observations)
    signs = assemble_sign_matrix(kb, observables)
    tests = assemble_test_vector(kb, record.test_results)

    reported = {r.problem for r in record.problem_reports}
    observed = {s for s, cells in record.observations.items() if cells}
    performed = {r.test for r in record.test_results}
    unanswered = Unanswered(
        history_aspects=tuple(
            a.id
            for a in kb.history_aspects
            if a.id not in record.direct_history
            and not (a.undiagnosed and a.id in record.recalled_past_symptoms)
        ),
        problems=tuple(p.id for p in kb.problems if p.id not in reported),
        signs=tuple(s.id for s in kb.signs if s.id not in observed),
        tests=tuple(t.id for t in kb.tests if t.id not in performed),
    )
    return EvaluationMatrices(history, symptoms, signs, tests, unanswered)


def prominent_sets(
    kb: KnowledgeBase, alpha_override: float | None = None
) -> dict[str, list[str]]:
    """Prominent past-symptom set per inferable disease at the given threshold."""
    return {
        disease: list(prominent_symptom_set(kb, disease, alpha_override))
        for disease in kb.undiagnosed_ids()
    }


class SessionStore:
    """Append-only snapshot writer: one JSON document per accepted revision."""

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)

    def append(self, session: Session, replaced: list[dict]) -> None:
        snapshot = {
            "session_id": session.session_id,
            "revision": session.revision,
            "record": session.record_data(),
            "replaced": replaced,
        }
        path = self.data_dir / f"{session.session_id}.jsonl"
        with path.open("a", encoding="utf-8") as f:
            f.write(json.dumps(snapshot, ensure_ascii=False, sort_keys=True) + "\n")


@dataclass
class Session:
    """One live intake: an accumulating record plus its latest evaluation.

    Mutations are serialized by the session's own lock; reads of committed
    state need no coordination because commits replace whole objects.
    """

    kb: KnowledgeBase
    session_id: str
    store: SessionStore | None = None
    revision: int = 0
    record: PatientRecord = field(default_factory=PatientRecord)
    matrices: EvaluationMatrices = field(init=False)
    audit: list[dict] = field(default_factory=list)
    _data: dict = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self):
        self.matrices = evaluate(self.kb, self.record)
        if self.store is not None:
            self.store.append(self, [])

    def record_data(self) -> dict:
        return json.loads(json.dumps(self._data))

    @property
    def alpha(self) -> float:
        return effective_alpha(self.kb, self.record)

    def apply_finding(self, finding: dict) -> EvaluationMatrices:
        """Validate, merge, re-evaluate, and commit one finding.

        On any validation error the session is left untouched and the
        revision does not advance.
        """
        shape_issues = check_finding_shape(finding)
        if shape_issues:
            raise ValidationFailure(shape_issues)
        with self._lock:
            merged, replaced = merge_finding(self._data, finding)
            record = record_from_dict(self.kb, merged)  # raises ValidationFailure
            matrices = evaluate(self.kb, record)
            self._data = merged
            self.record = record
            self.matrices = matrices
            self.revision += 1
            for event in replaced:
                self.audit.append({"revision": self.revision, **event})
            if self.store is not None:
                self.store.append(self, replaced)
            return matrices

    def preview_alpha(self, alpha: float | None) -> EvaluationMatrices:
        """Evaluation at a hypothetical threshold; commits nothing."""
        trial = merge_finding(self._data, {"kind": "alpha_override", "alpha": alpha})[0]
        return evaluate(self.kb, record_from_dict(self.kb, trial))


def new_session(
    kb: KnowledgeBase,
    session_id: str | None = None,
    store: SessionStore | None = None,
) -> Session:
    return Session(kb, session_id or uuid.uuid4().hex[:12], store)


def get_evaluation(session: Session) -> EvaluationMatrices:
    return session.matrices
