"""Knowledge-base declarations, loading, validation, and serialization.

A knowledge base is a single JSON document declaring every universe the
engine evaluates against (diseases, history aspects, past-symptom sets,
problems with their five-part profiles, symptoms, signs with observables,
tests) plus the prominence threshold alpha and all mapping rules. Loading
validates the document in two passes: structure against the shipped JSON
schema, then semantics (uniqueness, cross-references, ranges, rule/target
compatibility), collecting every violation instead of stopping at the first.

History aspects are reordered once at load time so the undiagnosed-disease
aspects come first; that canonical order is what gives history-matrix columns
a stable meaning across patients.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from importlib import resources

from jsonschema import Draft202012Validator

from .core import FuzzySet, GradeCombinator, MembershipFunction, MAXIMUM, as_grade
from .errors import Issue, ParseError, ValidationFailure

PROFILE_SUBSETS = ("location", "longevity", "continuity", "intermittency", "severity")
RULE_KINDS = ("location_match", "weighted_threshold", "membership_passthrough", "combined")

# Per rule kind, the parameter fields that must be present (beyond target/problem).
_KIND_FIELDS = {
    "location_match": {"match"},
    "weighted_threshold": {"weights", "threshold"},
    "membership_passthrough": {"source"},
    "combined": {"sources", "combine"},
}
_PARAM_FIELDS = {"match", "weights", "threshold", "source", "sources", "combine"}


class LenientKeyWarning(UserWarning):
    """Unknown document keys tolerated because the loader ran in lenient mode."""


@dataclass(frozen=True)
class DiseaseDecl:
    id: str
    label: str | None = None


@dataclass(frozen=True)
class HistoryAspect:
    id: str
    undiagnosed: bool
    label: str | None = None


@dataclass(frozen=True)
class PastSymptomSet:
    """The symptom universe of one undiagnosed disease, with prominence grades."""

    disease: str
    grades: tuple[tuple[str, float], ...]
    alpha: float | None = None

    @property
    def symptom_ids(self) -> tuple[str, ...]:
        return tuple(s for s, _ in self.grades)

    def fuzzy_set(self) -> FuzzySet:
        return FuzzySet(f"past_symptoms:{self.disease}", dict(self.grades))


@dataclass(frozen=True)
class ProblemDecl:
    id: str
    profile: dict[str, tuple[str, ...]]  # subset name -> factor ids
    label: str | None = None

    def factor_ids(self) -> tuple[str, ...]:
        return tuple(f for subset in PROFILE_SUBSETS for f in self.profile.get(subset, ()))

    def severity_factors(self) -> tuple[str, ...]:
        return self.profile.get("severity", ())


@dataclass(frozen=True)
class FlaggedDecl:
    """A symptom or sign: graded by default, restricted to {0, 1} when binary."""

    id: str
    binary: bool
    label: str | None = None


@dataclass(frozen=True)
class ObservableDecl:
    id: str
    graded: bool = False


@dataclass(frozen=True)
class TestAspect:
    id: str
    abnormality: MembershipFunction


@dataclass(frozen=True)
class TestDecl:
    """A clinical/diagnostic test: scalar with one abnormality function, or
    multi-aspect with one function per aspect plus a combinator."""

    id: str
    label: str | None = None
    abnormality: MembershipFunction | None = None
    aspects: tuple[TestAspect, ...] = ()
    combine: GradeCombinator | None = None

    @property
    def multi_aspect(self) -> bool:
        return bool(self.aspects)


@dataclass(frozen=True)
class MappingRule:
    """One declarative mapping rule (history inference, symptom designation,
    or sign severity). The rule language is deliberately closed: four kinds,
    statically validatable against the knowledge base."""

    target: str
    kind: str
    problem: str | None = None  # symptom rules only: the source problem column
    match: tuple[tuple[str, object], ...] = ()
    weights: tuple[tuple[str, float], ...] = ()
    threshold: float = 0.0
    source: str | None = None
    sources: tuple[str, ...] = ()
    combinator: GradeCombinator | None = None

    def weight_map(self) -> dict[str, float]:
        return dict(self.weights)


@dataclass(frozen=True)
class KnowledgeBase:
    """Immutable, fully cross-checked declaration set; shareable across
    threads and sessions without locking."""

    alpha: float
    diseases: tuple[DiseaseDecl, ...]
    history_aspects: tuple[HistoryAspect, ...]  # canonical order, undiagnosed first
    split_p: int
    past_symptoms: tuple[PastSymptomSet, ...]  # canonical aspect order
    problems: tuple[ProblemDecl, ...]
    symptoms: tuple[FlaggedDecl, ...]
    signs: tuple[FlaggedDecl, ...]
    observables: dict[str, tuple[ObservableDecl, ...]] = field(default_factory=dict)
    tests: tuple[TestDecl, ...] = ()
    history_rules: dict[str, MappingRule] = field(default_factory=dict)
    symptom_rules: tuple[MappingRule, ...] = ()
    sign_rules: tuple[MappingRule, ...] = ()

    # -- lookups ---------------------------------------------------------

    def aspect_ids(self) -> tuple[str, ...]:
        return tuple(a.id for a in self.history_aspects)

    def undiagnosed_ids(self) -> tuple[str, ...]:
        return tuple(a.id for a in self.history_aspects[: self.split_p])

    def problem(self, problem_id: str) -> ProblemDecl:
        for p in self.problems:
            if p.id == problem_id:
                return p
        raise KeyError(f"unknown problem {problem_id!r}")

    def test(self, test_id: str) -> TestDecl:
        for t in self.tests:
            if t.id == test_id:
                return t
        raise KeyError(f"unknown test {test_id!r}")

    def past_symptom_set(self, disease: str) -> PastSymptomSet:
        for ps in self.past_symptoms:
            if ps.disease == disease:
                return ps
        raise KeyError(f"no past-symptom universe for disease {disease!r}")

    def sign_observables(self, sign_id: str) -> tuple[ObservableDecl, ...]:
        return self.observables.get(sign_id, ())

    def effective_alpha(self, disease: str, alpha_override: float | None = None) -> float:
        """Prominence threshold for one disease.

        A session-level override beats a per-disease knowledge-base override,
        which beats the global alpha; the session override must win for the
        what-if slider to mean one thing across all diseases.
        """
        if alpha_override is not None:
            return as_grade(alpha_override, "alpha override")
        ps = self.past_symptom_set(disease)
        return ps.alpha if ps.alpha is not None else self.alpha


def prominent_symptom_set(
    kb: KnowledgeBase, disease: str, alpha_override: float | None = None
) -> tuple[str, ...]:
    """Alpha-cut of a disease's past-symptom grades, in declaration order.

    The returned tuple is the canonical ordering for past-symptom vectors;
    treat it as a crisp set when order does not matter.
    """
    ps = kb.past_symptom_set(disease)
    alpha = kb.effective_alpha(disease, alpha_override)
    return tuple(s for s, g in ps.grades if g >= alpha)


# ---------------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------------

def _kb_schema() -> dict:
    text = resources.files("fuzzytriage.schemas").joinpath("kb.schema.json").read_text("utf-8")
    return json.loads(text)


_KB_VALIDATOR = Draft202012Validator(_kb_schema())


def parse_document(source: bytes | str, what: str = "document") -> dict:
    """Decode and JSON-parse ``source``, reporting position on failure."""
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"{what} is not valid UTF-8: {exc}") from exc
    try:
        data = json.loads(source)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"{what} is not valid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(data, dict):
        raise ParseError(f"{what} must be a JSON object at the top level")
    return data


def schema_issues(
    validator: Draft202012Validator, data: dict, lenient: bool = False
) -> tuple[list[Issue], list[Issue]]:
    """Structural issues from a JSON-schema pass.

    In lenient mode unknown-key violations are downgraded to warnings; every
    other violation stays an error.
    """
    errors: list[Issue] = []
    warns: list[Issue] = []
    for err in sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path)):
        path = ".".join(str(p) for p in err.absolute_path)
        issue = Issue(path, err.message)
        if lenient and err.validator == "additionalProperties":
            warns.append(issue)
        else:
            errors.append(issue)
    return errors, warns


def _is_num(v: object) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(float(v))


def _check_grade(value: object, path: str, issues: list[Issue], what: str = "grade") -> None:
    if not _is_num(value) or not 0.0 <= float(value) <= 1.0:
        issues.append(Issue(path, f"{what} out of range [0, 1]: {value!r}"))


def _check_unique(ids: list[str], path: str, issues: list[Issue], what: str) -> None:
    seen: set[str] = set()
    for i, ident in enumerate(ids):
        if ident in seen:
            issues.append(Issue(f"{path}[{i}].id", f"duplicate {what} id {ident!r}"))
        seen.add(ident)


def _check_membership(data: dict, path: str, issues: list[Issue]) -> None:
    prev = None
    for i, (x, g) in enumerate(data.get("breakpoints", [])):
        if not _is_num(x):
            issues.append(Issue(f"{path}.breakpoints[{i}]", f"breakpoint input must be finite, got {x!r}"))
        elif prev is not None and float(x) <= prev:
            issues.append(Issue(f"{path}.breakpoints[{i}]", "breakpoint inputs must be strictly increasing"))
        if _is_num(x):
            prev = float(x)
        _check_grade(g, f"{path}.breakpoints[{i}]", issues, "breakpoint grade")
    for side in ("below", "above"):
        if side in data:
            _check_grade(data[side], f"{path}.{side}", issues, side)


def _check_combinator(data: dict, path: str, issues: list[Issue], n_sources: int | None = None) -> None:
    kind = data.get("kind")
    weights = data.get("weights")
    if kind == "weighted_mean":
        if not weights:
            issues.append(Issue(path, "weighted_mean requires weights"))
            return
        if any(not _is_num(w) or w < 0 for w in weights):
            issues.append(Issue(f"{path}.weights", "weights must be finite and nonnegative"))
        elif sum(weights) <= 0:
            issues.append(Issue(f"{path}.weights", "weights must sum to a positive value"))
        if n_sources is not None and len(weights) != n_sources:
            issues.append(
                Issue(f"{path}.weights", f"expected {n_sources} weights, got {len(weights)}")
            )
    elif weights is not None:
        issues.append(Issue(f"{path}.weights", f"{kind} combinator takes no weights"))


def _check_rule_shape(rule: dict, path: str, issues: list[Issue]) -> bool:
    """Kind-specific parameter presence/absence; returns False when unusable."""
    kind = rule.get("kind")
    wanted = _KIND_FIELDS.get(kind)
    if wanted is None:
        return False  # schema already rejected the kind
    ok = True
    for f in sorted(wanted):
        if f not in rule:
            issues.append(Issue(path, f"{kind} rule requires {f!r}"))
            ok = False
    for f in sorted(_PARAM_FIELDS - wanted):
        if f in rule:
            issues.append(Issue(f"{path}.{f}", f"{f!r} is not allowed on a {kind} rule"))
            ok = False
    return ok


def _check_weights(weights: dict, path: str, issues: list[Issue]) -> None:
    for key, w in weights.items():
        if not _is_num(w) or w < 0:
            issues.append(Issue(f"{path}.{key}", f"weight must be finite and nonnegative, got {w!r}"))


def _semantic_issues(data: dict) -> list[Issue]:
    issues: list[Issue] = []

    _check_grade(data["alpha"], "alpha", issues, "alpha")

    disease_ids = [d["id"] for d in data["diseases"]]
    _check_unique(disease_ids, "diseases", issues, "disease")
    disease_set = set(disease_ids)

    aspects = data["history_aspects"]
    aspect_ids = [a["id"] for a in aspects]
    _check_unique(aspect_ids, "history_aspects", issues, "history aspect")
    undiagnosed = [a["id"] for a in aspects if a["undiagnosed"]]
    for i, a in enumerate(aspects):
        if a["undiagnosed"] and a["id"] not in disease_set:
            issues.append(
                Issue(
                    f"history_aspects[{i}].id",
                    f"undiagnosed aspect {a['id']!r} must reference a declared disease",
                )
            )

    past = data["past_symptoms"]
    undiagnosed_set = set(undiagnosed)
    for disease, decl in past.items():
        if disease not in undiagnosed_set:
            issues.append(
                Issue(
                    f"past_symptoms.{disease}",
                    f"{disease!r} is not an undiagnosed history aspect",
                )
            )
        for sym, g in decl["symptoms"].items():
            _check_grade(g, f"past_symptoms.{disease}.symptoms.{sym}", issues)
        if "alpha" in decl:
            _check_grade(decl["alpha"], f"past_symptoms.{disease}.alpha", issues, "alpha")
    for disease in undiagnosed:
        if disease not in past:
            issues.append(
                Issue("past_symptoms", f"undiagnosed aspect {disease!r} has no past-symptom universe")
            )

    problems = data["problems"]
    _check_unique([p["id"] for p in problems], "problems", issues, "problem")
    problem_factors: dict[str, dict[str, str]] = {}  # problem -> factor -> subset
    for i, p in enumerate(problems):
        factors: dict[str, str] = {}
        for subset in PROFILE_SUBSETS:
            for f in p["profile"].get(subset, []):
                if f in factors:
                    issues.append(
                        Issue(f"problems[{i}].profile.{subset}", f"duplicate factor id {f!r}")
                    )
                factors[f] = subset
        problem_factors[p["id"]] = factors

    _check_unique([s["id"] for s in data["symptoms"]], "symptoms", issues, "symptom")
    _check_unique([s["id"] for s in data["signs"]], "signs", issues, "sign")
    symptom_binary = {s["id"]: s["binary"] for s in data["symptoms"]}
    sign_binary = {s["id"]: s["binary"] for s in data["signs"]}

    observables = data["observables"]
    sign_observables: dict[str, dict[str, bool]] = {s: {} for s in sign_binary}
    for sign, obs_list in observables.items():
        if sign not in sign_binary:
            issues.append(Issue(f"observables.{sign}", f"{sign!r} is not a declared sign"))
            continue
        _check_unique([o["id"] for o in obs_list], f"observables.{sign}", issues, "observable")
        for o in obs_list:
            sign_observables[sign][o["id"]] = bool(o.get("graded", False))

    tests = data["tests"]
    _check_unique([t["id"] for t in tests], "tests", issues, "test")
    for i, t in enumerate(tests):
        path = f"tests[{i}]"
        scalar, multi = "abnormality" in t, "aspects" in t
        if scalar == multi:
            issues.append(
                Issue(path, "a test declares exactly one of 'abnormality' or 'aspects'")
            )
        if scalar:
            _check_membership(t["abnormality"], f"{path}.abnormality", issues)
            if "combine" in t:
                issues.append(Issue(f"{path}.combine", "'combine' applies only to multi-aspect tests"))
        if multi:
            _check_unique([a["id"] for a in t["aspects"]], f"{path}.aspects", issues, "aspect")
            if not t["aspects"]:
                issues.append(Issue(f"{path}.aspects", "a multi-aspect test needs at least one aspect"))
            for j, a in enumerate(t["aspects"]):
                _check_membership(a["abnormality"], f"{path}.aspects[{j}].abnormality", issues)
            if "combine" in t:
                _check_combinator(t["combine"], f"{path}.combine", issues, len(t["aspects"]))

    rules = data["rules"]

    history_rules = rules.get("history", {})
    for disease, rule in history_rules.items():
        path = f"rules.history.{disease}"
        if disease not in undiagnosed_set:
            issues.append(Issue(path, f"{disease!r} is not an undiagnosed history aspect"))
            continue
        if rule.get("kind") != "weighted_threshold":
            issues.append(Issue(path, "history rules must be weighted_threshold"))
            continue
        if not _check_rule_shape(rule, path, issues):
            continue
        if "target" in rule and rule["target"] != disease:
            issues.append(Issue(f"{path}.target", "target must match the rule's key"))
        _check_weights(rule["weights"], f"{path}.weights", issues)
        universe = set(past.get(disease, {}).get("symptoms", {}))
        for key in rule["weights"]:
            if key not in universe:
                issues.append(
                    Issue(f"{path}.weights.{key}", f"{key!r} is not a past symptom of {disease!r}")
                )
        if not _is_num(rule["threshold"]):
            issues.append(Issue(f"{path}.threshold", "threshold must be a finite number"))
    for disease in undiagnosed:
        if disease in undiagnosed_set and disease not in history_rules:
            issues.append(
                Issue("rules.history", f"undiagnosed aspect {disease!r} has no inference rule")
            )

    def check_column_rule(
        rule: dict,
        path: str,
        cells: dict[str, bool],  # cell id -> graded?
        target_binary: bool | None,
        where: str,
    ) -> None:
        kind = rule["kind"]
        if not _check_rule_shape(rule, path, issues):
            return
        if target_binary and kind not in ("location_match", "weighted_threshold"):
            issues.append(
                Issue(path, f"binary target may not carry a {kind} rule")
            )
        if kind == "location_match":
            for key in rule["match"]:
                if key not in cells:
                    issues.append(Issue(f"{path}.match.{key}", f"{key!r} is not declared in {where}"))
                elif cells[key]:
                    issues.append(
                        Issue(f"{path}.match.{key}", f"{key!r} is grade-valued; location_match wants discrete cells")
                    )
        elif kind == "weighted_threshold":
            _check_weights(rule["weights"], f"{path}.weights", issues)
            if not _is_num(rule["threshold"]):
                issues.append(Issue(f"{path}.threshold", "threshold must be a finite number"))
            for key in rule["weights"]:
                if key not in cells:
                    issues.append(Issue(f"{path}.weights.{key}", f"{key!r} is not declared in {where}"))
                elif not cells[key]:
                    issues.append(Issue(f"{path}.weights.{key}", f"{key!r} is not grade-valued"))
        elif kind == "membership_passthrough":
            src = rule["source"]
            if src not in cells:
                issues.append(Issue(f"{path}.source", f"{src!r} is not declared in {where}"))
            elif not cells[src]:
                issues.append(Issue(f"{path}.source", f"{src!r} is not grade-valued"))
        else:  # combined
            if not rule["sources"]:
                issues.append(Issue(f"{path}.sources", "combined rule needs at least one source"))
            for j, src in enumerate(rule["sources"]):
                if src not in cells:
                    issues.append(Issue(f"{path}.sources[{j}]", f"{src!r} is not declared in {where}"))
                elif not cells[src]:
                    issues.append(Issue(f"{path}.sources[{j}]", f"{src!r} is not grade-valued"))
            _check_combinator(rule["combine"], f"{path}.combine", issues, len(rule["sources"]))

    for i, rule in enumerate(rules.get("symptoms", [])):
        path = f"rules.symptoms[{i}]"
        target = rule.get("target")
        if target is None:
            issues.append(Issue(path, "symptom rule requires a target"))
            continue
        if target not in symptom_binary:
            issues.append(Issue(f"{path}.target", f"{target!r} is not a declared symptom"))
            continue
        problem = rule.get("problem")
        if problem is None:
            issues.append(Issue(path, "symptom rule requires a source problem"))
            continue
        if problem not in problem_factors:
            issues.append(Issue(f"{path}.problem", f"{problem!r} is not a declared problem"))
            continue
        cells = {f: subset == "severity" for f, subset in problem_factors[problem].items()}
        check_column_rule(rule, path, cells, symptom_binary[target], f"problem {problem!r}")

    for i, rule in enumerate(rules.get("signs", [])):
        path = f"rules.signs[{i}]"
        target = rule.get("target")
        if target is None:
            issues.append(Issue(path, "sign rule requires a target"))
            continue
        if target not in sign_binary:
            issues.append(Issue(f"{path}.target", f"{target!r} is not a declared sign"))
            continue
        if "problem" in rule:
            issues.append(Issue(f"{path}.problem", "sign rules read the sign's own observables"))
            continue
        check_column_rule(
            rule, path, dict(sign_observables.get(target, {})), sign_binary[target],
            f"observables of sign {target!r}",
        )

    return issues


def _build_membership(data: dict) -> MembershipFunction:
    return MembershipFunction(
        breakpoints=tuple((float(x), float(g)) for x, g in data["breakpoints"]),
        below=data.get("below"),
        above=data.get("above"),
    )


def _build_combinator(data: dict) -> GradeCombinator:
    weights = data.get("weights")
    return GradeCombinator(data["kind"], tuple(float(w) for w in weights) if weights else None)


def _build_rule(data: dict, target: str, problem: str | None = None) -> MappingRule:
    combinator = _build_combinator(data["combine"]) if "combine" in data else None
    return MappingRule(
        target=target,
        kind=data["kind"],
        problem=problem,
        match=tuple(data.get("match", {}).items()),
        weights=tuple((k, float(w)) for k, w in data.get("weights", {}).items()),
        threshold=float(data.get("threshold", 0.0)),
        source=data.get("source"),
        sources=tuple(data.get("sources", ())),
        combinator=combinator,
    )


def _build(data: dict) -> KnowledgeBase:
    declared = [
        HistoryAspect(a["id"], bool(a["undiagnosed"]), a.get("label")) for a in data["history_aspects"]
    ]
    # Stable partition: undiagnosed first, declaration order preserved inside
    # each group. This is the one reordering the load performs.
    canonical = [a for a in declared if a.undiagnosed] + [a for a in declared if not a.undiagnosed]
    split_p = sum(1 for a in declared if a.undiagnosed)

    past = tuple(
        PastSymptomSet(
            disease=a.id,
            grades=tuple((s, float(g)) for s, g in data["past_symptoms"][a.id]["symptoms"].items()),
            alpha=data["past_symptoms"][a.id].get("alpha"),
        )
        for a in canonical[:split_p]
    )

    tests = []
    for t in data["tests"]:
        if "abnormality" in t:
            tests.append(TestDecl(t["id"], t.get("label"), _build_membership(t["abnormality"])))
        else:
            aspects = tuple(TestAspect(a["id"], _build_membership(a["abnormality"])) for a in t["aspects"])
            combinator = _build_combinator(t["combine"]) if "combine" in t else MAXIMUM
            tests.append(TestDecl(t["id"], t.get("label"), None, aspects, combinator))

    rules = data["rules"]
    return KnowledgeBase(
        alpha=float(data["alpha"]),
        diseases=tuple(DiseaseDecl(d["id"], d.get("label")) for d in data["diseases"]),
        history_aspects=tuple(canonical),
        split_p=split_p,
        past_symptoms=past,
        problems=tuple(
            ProblemDecl(
                p["id"],
                {s: tuple(p["profile"].get(s, ())) for s in PROFILE_SUBSETS if p["profile"].get(s)},
                p.get("label"),
            )
            for p in data["problems"]
        ),
        symptoms=tuple(FlaggedDecl(s["id"], bool(s["binary"]), s.get("label")) for s in data["symptoms"]),
        signs=tuple(FlaggedDecl(s["id"], bool(s["binary"]), s.get("label")) for s in data["signs"]),
        observables={
            sign: tuple(ObservableDecl(o["id"], bool(o.get("graded", False))) for o in obs)
            for sign, obs in data["observables"].items()
        },
        tests=tuple(tests),
        history_rules={
            disease: _build_rule(rule, target=disease) for disease, rule in rules.get("history", {}).items()
        },
        symptom_rules=tuple(
            _build_rule(r, target=r["target"], problem=r["problem"]) for r in rules.get("symptoms", [])
        ),
        sign_rules=tuple(_build_rule(r, target=r["target"]) for r in rules.get("signs", [])),
    )


def load_knowledge_base(source: bytes | str, lenient: bool = False) -> KnowledgeBase:
    """Parse, validate, and build a knowledge base from a JSON document.

    Raises ParseError for malformed input and ValidationFailure carrying the
    full list of violations otherwise. In lenient mode unknown keys are
    reported as LenientKeyWarning instead of failing the load.
    """
    data = parse_document(source, "knowledge base")
    errors, warns = schema_issues(_KB_VALIDATOR, data, lenient)
    if errors:
        raise ValidationFailure(errors, warns)
    for w in warns:
        warnings.warn(f"unknown key ignored: {w}", LenientKeyWarning, stacklevel=2)
    if warns:
        data = _strip_unknown_keys(data)
    errors = _semantic_issues(data)
    if errors:
        raise ValidationFailure(errors, warns)
    return _build(data)


def load_knowledge_base_file(path: str, lenient: bool = False) -> KnowledgeBase:
    with open(path, "rb") as f:
        return load_knowledge_base(f.read(), lenient=lenient)


def _strip_unknown_keys(data: dict) -> dict:
    """Drop lenient-mode extras so the build only sees declared structure."""
    pruned = json.loads(json.dumps(data))  # deep copy

    def prune(obj: dict, allowed: set[str]) -> None:
        for key in [k for k in obj if k not in allowed]:
            del obj[key]

    prune(pruned, {"alpha", "diseases", "history_aspects", "past_symptoms", "problems",
                   "symptoms", "signs", "observables", "tests", "rules"})
    for d in pruned.get("diseases", []):
        prune(d, {"id", "label"})
    for a in pruned.get("history_aspects", []):
        prune(a, {"id", "label", "undiagnosed"})
    for decl in pruned.get("past_symptoms", {}).values():
        prune(decl, {"alpha", "symptoms"})
    for p in pruned.get("problems", []):
        prune(p, {"id", "label", "profile"})
        prune(p.get("profile", {}), set(PROFILE_SUBSETS))
    for s in pruned.get("symptoms", []) + pruned.get("signs", []):
        prune(s, {"id", "label", "binary"})
    for obs in pruned.get("observables", {}).values():
        for o in obs:
            prune(o, {"id", "graded"})
    for t in pruned.get("tests", []):
        prune(t, {"id", "label", "abnormality", "aspects", "combine"})
    rules = pruned.get("rules", {})
    prune(rules, {"history", "symptoms", "signs"})
    rule_keys = {"target", "problem", "kind"} | _PARAM_FIELDS
    for r in rules.get("history", {}).values():
        prune(r, rule_keys)
    for r in list(rules.get("symptoms", [])) + list(rules.get("signs", [])):
        prune(r, rule_keys)
    return pruned


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def _membership_to_dict(mf: MembershipFunction) -> dict:
    out: dict = {"breakpoints": [[x, g] for x, g in mf.breakpoints]}
    if mf.below is not None:
        out["below"] = mf.below
    if mf.above is not None:
        out["above"] = mf.above
    return out


def _combinator_to_dict(c: GradeCombinator) -> dict:
    out: dict = {"kind": c.kind}
    if c.weights is not None:
        out["weights"] = list(c.weights)
    return out


def _rule_to_dict(rule: MappingRule, with_target: bool) -> dict:
    out: dict = {}
    if with_target:
        out["target"] = rule.target
        if rule.problem is not None:
            out["problem"] = rule.problem
    out["kind"] = rule.kind
    if rule.kind == "location_match":
        out["match"] = dict(rule.match)
    elif rule.kind == "weighted_threshold":
        out["weights"] = dict(rule.weights)
        out["threshold"] = rule.threshold
    elif rule.kind == "membership_passthrough":
        out["source"] = rule.source
    else:
        out["sources"] = list(rule.sources)
        out["combine"] = _combinator_to_dict(rule.combinator)
    return out


def knowledge_base_to_dict(kb: KnowledgeBase) -> dict:
    """JSON-ready form of ``kb`` in canonical ordering; reloading it yields an
    equal knowledge base."""

    def decl(d) -> dict:
        out = {"id": d.id}
        if d.label is not None:
            out["label"] = d.label
        return out

    past: dict = {}
    for ps in kb.past_symptoms:
        entry: dict = {"symptoms": {s: g for s, g in ps.grades}}
        if ps.alpha is not None:
            entry["alpha"] = ps.alpha
        past[ps.disease] = entry

    tests = []
    for t in kb.tests:
        entry = {"id": t.id}
        if t.label is not None:
            entry["label"] = t.label
        if t.multi_aspect:
            entry["aspects"] = [
                {"id": a.id, "abnormality": _membership_to_dict(a.abnormality)} for a in t.aspects
            ]
            entry["combine"] = _combinator_to_dict(t.combine)
        else:
            entry["abnormality"] = _membership_to_dict(t.abnormality)
        tests.append(entry)

    return {
        "alpha": kb.alpha,
        "diseases": [decl(d) for d in kb.diseases],
        "history_aspects": [
            {**decl(a), "undiagnosed": a.undiagnosed} for a in kb.history_aspects
        ],
        "past_symptoms": past,
        "problems": [
            {**decl(p), "profile": {s: list(fs) for s, fs in p.profile.items()}} for p in kb.problems
        ],
        "symptoms": [{**decl(s), "binary": s.binary} for s in kb.symptoms],
        "signs": [{**decl(s), "binary": s.binary} for s in kb.signs],
        "observables": {
            sign: [{"id": o.id, "graded": o.graded} for o in obs] for sign, obs in kb.observables.items()
        },
        "tests": tests,
        "rules": {
            "history": {
                disease: _rule_to_dict(rule, with_target=False)
                for disease, rule in kb.history_rules.items()
            },
            "symptoms": [_rule_to_dict(r, with_target=True) for r in kb.symptom_rules],
            "signs": [_rule_to_dict(r, with_target=True) for r in kb.sign_rules],
        },
    }


def dump_knowledge_base(kb: KnowledgeBase) -> str:
    """Serialize preserving declaration order (object key order is meaning-bearing)."""
    return json.dumps(knowledge_base_to_dict(kb), ensure_ascii=False, indent=2) + "\n"
