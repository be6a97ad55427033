"""Patient records: the raw intake document, validated against a knowledge base.

A record mirrors what the interview produced so far: direct yes/no history
answers, recalled past symptoms per possibly-undiagnosed disease, problem
reports with profile factors, examination observations, and test results.
Records arrive either whole (a JSON file) or as a stream of single findings
during a live session; both paths run the same validation, which checks the
whole document and reports every violation with its field path.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources

from jsonschema import Draft202012Validator

from .errors import Issue, ValidationFailure
from .kb import KnowledgeBase
from .labs import TestResult
from .symptoms import ProblemReport

FINDING_KINDS = (
    "direct_history",
    "recalled_past_symptoms",
    "problem_report",
    "problem_factor",
    "observation",
    "test_result",
    "alpha_override",
)


@dataclass(frozen=True)
class PatientRecord:
    record_id: str | None = None
    direct_history: dict[str, int] = field(default_factory=dict)
    recalled_past_symptoms: dict[str, frozenset[str]] = field(default_factory=dict)
    problem_reports: tuple[ProblemReport, ...] = ()
    observations: dict[str, dict[str, object]] = field(default_factory=dict)
    test_results: tuple[TestResult, ...] = ()
    alpha_override: float | None = None


def _record_schema() -> dict:
    text = resources.files("fuzzytriage.schemas").joinpath("record.schema.json").read_text("utf-8")
    return json.loads(text)


_RECORD_VALIDATOR = Draft202012Validator(_record_schema())


def _is_num(v: object) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(float(v))


def _check_grade(value: object, path: str, issues: list[Issue]) -> None:
    if not _is_num(value) or not 0.0 <= float(value) <= 1.0:
        issues.append(Issue(path, f"grade out of range [0, 1]: {value!r}"))


def validate_record_data(kb: KnowledgeBase, data: dict) -> list[Issue]:
    """Cross-check a structurally valid record document against ``kb``.

    Returns every violation; an empty list means the record can be built.
    """
    issues: list[Issue] = []

    aspects = set(kb.aspect_ids())
    for aspect, value in data.get("direct_history", {}).items():
        if aspect not in aspects:
            issues.append(Issue(f"direct_history.{aspect}", f"unknown history aspect {aspect!r}"))
        if value not in (0, 1):
            issues.append(Issue(f"direct_history.{aspect}", f"answer must be 0 or 1, got {value!r}"))

    inferable = set(kb.undiagnosed_ids())
    for disease, symptoms in data.get("recalled_past_symptoms", {}).items():
        if disease not in inferable:
            issues.append(
                Issue(
                    f"recalled_past_symptoms.{disease}",
                    f"{disease!r} is not an inferable (undiagnosed) history aspect",
                )
            )
            continue
        universe = set(kb.past_symptom_set(disease).symptom_ids)
        for i, sym in enumerate(symptoms):
            if sym not in universe:
                issues.append(
                    Issue(
                        f"recalled_past_symptoms.{disease}[{i}]",
                        f"unknown past symptom {sym!r} for {disease!r}",
                    )
                )

    seen_problems: set[str] = set()
    for i, report in enumerate(data.get("problem_reports", [])):
        problem_id = report["problem"]
        path = f"problem_reports[{i}]"
        try:
            decl = kb.problem(problem_id)
        except KeyError:
            issues.append(Issue(f"{path}.problem", f"unknown problem {problem_id!r}"))
            continue
        if problem_id in seen_problems:
            issues.append(Issue(f"{path}.problem", f"problem {problem_id!r} reported more than once"))
        seen_problems.add(problem_id)
        declared = set(decl.factor_ids())
        graded = set(decl.severity_factors())
        for factor, value in report.get("profile", {}).items():
            if factor not in declared:
                issues.append(
                    Issue(f"{path}.profile.{factor}", f"factor {factor!r} is not in this problem's profile")
                )
            elif factor in graded:
                _check_grade(value, f"{path}.profile.{factor}", issues)

    signs = {s.id for s in kb.signs}
    for sign, cells in data.get("observations", {}).items():
        if sign not in signs:
            issues.append(Issue(f"observations.{sign}", f"unknown sign {sign!r}"))
            continue
        declared_obs = {o.id: o.graded for o in kb.sign_observables(sign)}
        for obs, value in cells.items():
            if obs not in declared_obs:
                issues.append(
                    Issue(f"observations.{sign}.{obs}", f"{obs!r} is not an observable of {sign!r}")
                )
            elif declared_obs[obs]:
                _check_grade(value, f"observations.{sign}.{obs}", issues)

    seen_tests: set[str] = set()
    for i, result in enumerate(data.get("test_results", [])):
        test_id = result["test"]
        path = f"test_results[{i}]"
        try:
            decl = kb.test(test_id)
        except KeyError:
            issues.append(Issue(f"{path}.test", f"unknown test {test_id!r}"))
            continue
        if test_id in seen_tests:
            issues.append(Issue(f"{path}.test", f"test {test_id!r} has more than one result"))
        seen_tests.add(test_id)
        has_value, has_aspects = "value" in result, "aspects" in result
        if has_value == has_aspects:
            issues.append(Issue(path, "a result carries exactly one of 'value' or 'aspects'"))
            continue
        if decl.multi_aspect:
            if has_value:
                issues.append(Issue(f"{path}.value", f"test {test_id!r} expects aspect values"))
                continue
            declared_aspects = [a.id for a in decl.aspects]
            given = result["aspects"]
            for a in declared_aspects:
                if a not in given:
                    issues.append(Issue(f"{path}.aspects", f"missing aspect {a!r}"))
            for a, v in given.items():
                if a not in declared_aspects:
                    issues.append(Issue(f"{path}.aspects.{a}", f"unknown aspect {a!r}"))
                elif not _is_num(v):
                    issues.append(Issue(f"{path}.aspects.{a}", f"aspect value must be finite, got {v!r}"))
        else:
            if has_aspects:
                issues.append(Issue(f"{path}.aspects", f"test {test_id!r} takes a single scalar value"))
            elif not _is_num(result["value"]):
                issues.append(Issue(f"{path}.value", f"result must be finite, got {result['value']!r}"))

    alpha = data.get("alpha_override")
    if alpha is not None:
        _check_grade(alpha, "alpha_override", issues)

    return issues


def record_from_dict(kb: KnowledgeBase, data: dict, lenient: bool = False) -> PatientRecord:
    """Validate ``data`` (structure, then references) and build a record."""
    from .kb import schema_issues  # local import keeps module load order simple

    errors, warns = schema_issues(_RECORD_VALIDATOR, data, lenient)
    if errors:
        raise ValidationFailure(errors, warns)
    errors = validate_record_data(kb, data)
    if errors:
        raise ValidationFailure(errors, warns)
    return PatientRecord(
        record_id=data.get("record_id"),
        direct_history={a: int(v) for a, v in data.get("direct_history", {}).items()},
        recalled_past_symptoms={
            d: frozenset(syms) for d, syms in data.get("recalled_past_symptoms", {}).items()
        },
        problem_reports=tuple(
            ProblemReport(r["problem"], dict(r.get("profile", {})))
            for r in data.get("problem_reports", [])
        ),
        observations={s: dict(cells) for s, cells in data.get("observations", {}).items()},
        test_results=tuple(
            TestResult(
                r["test"],
                value=r.get("value"),
                aspects=tuple(r["aspects"].items()) if "aspects" in r else (),
            )
            for r in data.get("test_results", [])
        ),
        alpha_override=data.get("alpha_override"),
    )


def load_record(kb: KnowledgeBase, source: bytes | str) -> PatientRecord:
    from .kb import parse_document

    return record_from_dict(kb, parse_document(source, "patient record"))


def load_record_file(kb: KnowledgeBase, path: str) -> PatientRecord:
    with open(path, "rb") as f:
        return load_record(kb, f.read())


def record_to_dict(record: PatientRecord) -> dict:
    """JSON-ready form; loading it back yields an equal record."""
    out: dict = {}
    if record.record_id is not None:
        out["record_id"] = record.record_id
    if record.direct_history:
        out["direct_history"] = dict(record.direct_history)
    if record.recalled_past_symptoms:
        out["recalled_past_symptoms"] = {
            d: sorted(syms) for d, syms in record.recalled_past_symptoms.items()
        }
    if record.problem_reports:
        out["problem_reports"] = [
            {"problem": r.problem, "profile": dict(r.profile)} for r in record.problem_reports
        ]
    if record.observations:
        out["observations"] = {s: dict(cells) for s, cells in record.observations.items()}
    if record.test_results:
        results = []
        for r in record.test_results:
            entry: dict = {"test": r.test}
            if r.aspects:
                entry["aspects"] = dict(r.aspects)
            else:
                entry["value"] = r.value
            results.append(entry)
        out["test_results"] = results
    if record.alpha_override is not None:
        out["alpha_override"] = record.alpha_override
    return out


def dump_record(record: PatientRecord) -> str:
    return json.dumps(record_to_dict(record), ensure_ascii=False, indent=2) + "\n"


# ---------------------------------------------------------------------------
# Findings: the incremental-session vocabulary
# ---------------------------------------------------------------------------

_FINDING_FIELDS = {
    "direct_history": {"aspect", "value"},
    "recalled_past_symptoms": {"disease", "symptoms"},
    "problem_report": {"problem", "profile"},
    "problem_factor": {"problem", "factor", "value"},
    "observation": {"sign", "observable", "value"},
    "test_result": {"test", "value", "aspects"},
    "alpha_override": {"alpha"},
}


def check_finding_shape(finding: object) -> list[Issue]:
    """Shape-only validation of one finding document (no knowledge-base access)."""
    if not isinstance(finding, dict):
        return [Issue("", "a finding must be a JSON object")]
    kind = finding.get("kind")
    if kind not in FINDING_KINDS:
        return [Issue("kind", f"unknown finding kind {kind!r}")]
    issues = []
    allowed = _FINDING_FIELDS[kind] | {"kind"}
    for key in sorted(set(finding) - allowed):
        issues.append(Issue(key, f"{key!r} is not a field of a {kind} finding"))
    if kind == "test_result":
        required = {"test"}
        if ("value" in finding) == ("aspects" in finding):
            issues.append(Issue("", "a test_result finding carries exactly one of 'value' or 'aspects'"))
    elif kind == "alpha_override":
        required = set()  # alpha may be null/omitted to clear the override
    else:
        required = _FINDING_FIELDS[kind]
    for key in sorted(required - set(finding)):
        issues.append(Issue(key, f"a {kind} finding requires {key!r}"))
    return issues


def merge_finding(data: dict, finding: dict) -> tuple[dict, list[dict]]:
    """Merge one shape-checked finding into record data (a fresh copy).

    Returns the merged copy plus replacement events: one per key whose
    previously recorded value changed, for the session audit log.
    """
    merged = json.loads(json.dumps(data))
    replaced: list[dict] = []

    def note(key: str, old: object, new: object) -> None:
        if old is not None and old != new:
            replaced.append({"key": key, "old": old, "new": new})

    kind = finding["kind"]
    if kind == "direct_history":
        answers = merged.setdefault("direct_history", {})
        note(f"direct_history.{finding['aspect']}", answers.get(finding["aspect"]), finding["value"])
        answers[finding["aspect"]] = finding["value"]
    elif kind == "recalled_past_symptoms":
        recalled = merged.setdefault("recalled_past_symptoms", {})
        new = sorted(set(finding["symptoms"]))
        old = recalled.get(finding["disease"])
        note(f"recalled_past_symptoms.{finding['disease']}", sorted(old) if old else None, new)
        recalled[finding["disease"]] = new
    elif kind == "problem_report":
        reports = merged.setdefault("problem_reports", [])
        entry = {"problem": finding["problem"], "profile": finding["profile"]}
        for i, existing in enumerate(reports):
            if existing["problem"] == finding["problem"]:
                note(f"problem_reports.{finding['problem']}", existing.get("profile"), finding["profile"])
                reports[i] = entry
                break
        else:
            reports.append(entry)
    elif kind == "problem_factor":
        reports = merged.setdefault("problem_reports", [])
        for existing in reports:
            if existing["problem"] == finding["problem"]:
                profile = existing.setdefault("profile", {})
                break
        else:
            profile = {}
            reports.append({"problem": finding["problem"], "profile": profile})
        key = f"problem_reports.{finding['problem']}.profile.{finding['factor']}"
        note(key, profile.get(finding["factor"]), finding["value"])
        profile[finding["factor"]] = finding["value"]
    elif kind == "observation":
        observations = merged.setdefault("observations", {})
        cells = observations.setdefault(finding["sign"], {})
        key = f"observations.{finding['sign']}.{finding['observable']}"
        note(key, cells.get(finding["observable"]), finding["value"])
        cells[finding["observable"]] = finding["value"]
    elif kind == "test_result":
        results = merged.setdefault("test_results", [])
        entry = {"test": finding["test"]}
        if "aspects" in finding:
            entry["aspects"] = finding["aspects"]
        else:
            entry["value"] = finding["value"]
        for i, existing in enumerate(results):
            if existing["test"] == finding["test"]:
                old = {k: v for k, v in existing.items() if k != "test"}
                new = {k: v for k, v in entry.items() if k != "test"}
                note(f"test_results.{finding['test']}", old, new)
                results[i] = entry
                break
        else:
            results.append(entry)
    else:  # alpha_override
        alpha = finding.get("alpha")
        note("alpha_override", merged.get("alpha_override"), alpha)
        if alpha is None:
            merged.pop("alpha_override", None)
        else:
            merged["alpha_override"] = alpha
    return merged, replaced


def record_to_findings(data: dict) -> list[dict]:
    """Decompose record data into single findings; applying them in any order
    rebuilds the same record (no key is assigned two different values)."""
    findings: list[dict] = []
    for aspect, value in data.get("direct_history", {}).items():
        findings.append({"kind": "direct_history", "aspect": aspect, "value": value})
    for disease, symptoms in data.get("recalled_past_symptoms", {}).items():
        findings.append(
            {"kind": "recalled_past_symptoms", "disease": disease, "symptoms": list(symptoms)}
        )
    for report in data.get("problem_reports", []):
        findings.append(
            {"kind": "problem_report", "problem": report["problem"], "profile": report.get("profile", {})}
        )
    for sign, cells in data.get("observations", {}).items():
        for obs, value in cells.items():
            findings.append({"kind": "observation", "sign": sign, "observable": obs, "value": value})
    for result in data.get("test_results", []):
        finding = {"kind": "test_result", "test": result["test"]}
        if "aspects" in result:
            finding["aspects"] = result["aspects"]
        else:
            finding["value"] = result["value"]
        findings.append(finding)
    if data.get("alpha_override") is not None:
        findings.append({"kind": "alpha_override", "alpha": data["alpha_override"]})
    return findings
