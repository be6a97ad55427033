"""Fuzzy clinical-evaluation engine.

Evaluates a patient's intake (history answers, recalled past symptoms,
problem reports, examination observables, test results) against a declarative
knowledge base, producing four matrices: binary history H, symptom severities
A, sign severities S, and test abnormality grades Z.
"""
from .core import (
    FuzzySet,
    GradeCombinator,
    MembershipFunction,
    alpha_cut,
    as_grade,
    combine,
    eval_membership,
)
from .engine import (
    EvaluationMatrices,
    Session,
    SessionStore,
    Unanswered,
    evaluate,
    get_evaluation,
    new_session,
    prominent_sets,
)
from .errors import (
    EvaluationError,
    Issue,
    ParseError,
    TriageError,
    UnknownRecallWarning,
    ValidationFailure,
)
from .history import (
    HistoryMatrix,
    PastSymptomVector,
    assemble_history_matrix,
    build_past_symptom_vector,
    infer_history_entry,
)
from .kb import (
    KnowledgeBase,
    MappingRule,
    dump_knowledge_base,
    knowledge_base_to_dict,
    load_knowledge_base,
    load_knowledge_base_file,
    prominent_symptom_set,
)
from .labs import (
    TestAbnormalityVector,
    TestResult,
    abnormality,
    assemble_test_vector,
    multi_aspect_abnormality,
)
from .record import (
    PatientRecord,
    dump_record,
    load_record,
    load_record_file,
    record_from_dict,
    record_to_dict,
    record_to_findings,
)
from .report import evaluate_to_report, export_report, parse_report
from .signs import (
    ObservablesMatrix,
    SignMatrix,
    assemble_sign_matrix,
    build_observables_matrix,
    sign_severity,
)
from .symptoms import (
    ProblemMatrix,
    ProblemReport,
    SymptomMatrix,
    assemble_symptom_matrix,
    build_problem_matrix,
    designate_symptom,
)

__version__ = "0.1.0"

__all__ = [
    "EvaluationError",
    "EvaluationMatrices",
    "FuzzySet",
    "GradeCombinator",
    "HistoryMatrix",
    "Issue",
    "KnowledgeBase",
    "MappingRule",
    "MembershipFunction",
    "ObservablesMatrix",
    "ParseError",
    "PastSymptomVector",
    "PatientRecord",
    "ProblemMatrix",
    "ProblemReport",
    "Session",
    "SessionStore",
    "SignMatrix",
    "SymptomMatrix",
    "TestAbnormalityVector",
    "TestResult",
    "TriageError",
    "Unanswered",
    "UnknownRecallWarning",
    "ValidationFailure",
    "abnormality",
    "alpha_cut",
    "as_grade",
    "assemble_history_matrix",
    "assemble_sign_matrix",
    "assemble_symptom_matrix",
    "assemble_test_vector",
    "build_observables_matrix",
    "build_past_symptom_vector",
    "build_problem_matrix",
    "combine",
    "designate_symptom",
    "dump_knowledge_base",
    "dump_record",
    "eval_membership",
    "evaluate",
    "evaluate_to_report",
    "export_report",
    "get_evaluation",
    "infer_history_entry",
    "knowledge_base_to_dict",
    "load_knowledge_base",
    "load_knowledge_base_file",
    "load_record",
    "load_record_file",
    "multi_aspect_abnormality",
    "new_session",
    "parse_report",
    "prominent_sets",
    "prominent_symptom_set",
    "record_from_dict",
    "record_to_dict",
    "record_to_findings",
    "sign_severity",
]
