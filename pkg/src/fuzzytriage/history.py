"""Patient-history matrix: direct answers plus inference from recalled symptoms.

The history matrix is binary and totally ordered by the knowledge base's
canonical aspect ordering; its first ``split_p`` entries are the aspects that
stand for possibly-undiagnosed past diseases. Those entries can be inferred
from the symptoms the patient still recalls, via a weighted-threshold rule
over the disease's prominent-symptom set. A direct answer from the physician
always wins over inference; inference only fills gaps.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import EvaluationError, UnknownRecallWarning
from .kb import KnowledgeBase, MappingRule, prominent_symptom_set


@dataclass(frozen=True)
class PastSymptomVector:
    """Presence/absence of each prominent symptom of one past disease."""

    disease: str
    prominent: tuple[str, ...]  # canonical (declaration) order
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.prominent) != len(self.entries):
            raise ValueError("one entry per prominent symptom required")
        if any(e not in (0, 1) for e in self.entries):
            raise ValueError("past-symptom entries are binary")


@dataclass(frozen=True)
class HistoryMatrix:
    aspect_ids: tuple[str, ...]
    entries: tuple[int, ...]
    split_p: int

    def __post_init__(self):
        if len(self.aspect_ids) != len(self.entries):
            raise ValueError("one entry per history aspect required")
        if any(e not in (0, 1) for e in self.entries):
            raise ValueError("history entries are binary")
        if not 0 <= self.split_p <= len(self.entries):
            raise ValueError("split index out of range")

    @property
    def inferable(self) -> tuple[int, ...]:
        """First block: aspects determinable from recalled past symptoms."""
        return self.entries[: self.split_p]

    @property
    def direct(self) -> tuple[int, ...]:
        return self.entries[self.split_p :]


def build_past_symptom_vector(
    kb: KnowledgeBase,
    disease: str,
    recalled: Iterable[str],
    alpha_override: float | None = None,
) -> PastSymptomVector:
    """Indicator vector of ``recalled`` over the disease's prominent symptoms.

    Recalled symptoms that are declared but not prominent are ignored (they
    carry no weight by definition). Identifiers outside the disease's symptom
    universe raise UnknownRecallWarning and are skipped.
    """
    try:
        universe = set(kb.past_symptom_set(disease).symptom_ids)
    except KeyError as exc:
        raise EvaluationError(str(exc)) from exc
    recalled = set(recalled)
    for unknown in sorted(recalled - universe):
        warnings.warn(
            f"recalled symptom {unknown!r} is not a declared past symptom of {disease!r}",
            UnknownRecallWarning,
            stacklevel=2,
        )
    prominent = prominent_symptom_set(kb, disease, alpha_override)
    return PastSymptomVector(
        disease=disease,
        prominent=prominent,
        entries=tuple(1 if s in recalled else 0 for s in prominent),
    )


def threshold_vote(weights: Iterable[float], entries: Iterable[int], threshold: float) -> int:
    """1 iff the weighted sum of ``entries`` meets ``threshold`` (inclusive)."""
    weights = list(weights)
    entries = list(entries)
    if len(weights) != len(entries):
        raise EvaluationError(
            f"rule carries {len(weights)} weights for a vector of length {len(entries)}"
        )
    return 1 if sum(w * v for w, v in zip(weights, entries)) >= threshold else 0


def infer_history_entry(rule: MappingRule, vector: PastSymptomVector) -> int:
    """Apply a history inference rule to a past-symptom vector; binary result.

    The rule's weights are keyed by symptom id over the disease's full symptom
    universe; symptoms outside the current prominent set simply contribute
    nothing, so the same rule works at any prominence threshold.
    """
    if rule.kind != "weighted_threshold":
        raise EvaluationError(f"history rules must be weighted_threshold, got {rule.kind!r}")
    weight_map = rule.weight_map()
    weights = [weight_map.get(s, 0.0) for s in vector.prominent]
    return threshold_vote(weights, vector.entries, rule.threshold)


def assemble_history_matrix(
    kb: KnowledgeBase,
    direct_answers: Mapping[str, int],
    recalled_by_disease: Mapping[str, Iterable[str]],
    alpha_override: float | None = None,
) -> HistoryMatrix:
    """Complete binary history matrix in canonical aspect order.

    Direct answers take precedence everywhere. An inferable aspect with no
    direct answer is inferred only when the interview addressed it (its
    disease appears as a key in ``recalled_by_disease``, possibly with an
    empty recall); anything left unaddressed defaults to 0.
    """
    known = set(kb.aspect_ids())
    for aspect, value in direct_answers.items():
        if aspect not in known:
            raise EvaluationError(f"unknown history aspect {aspect!r}")
        if value not in (0, 1):
            raise EvaluationError(f"history answer for {aspect!r} must be 0 or 1, got {value!r}")
    inferable = set(kb.undiagnosed_ids())
    for disease in recalled_by_disease:
        if disease not in inferable:
            raise EvaluationError(f"{disease!r} is not an inferable (undiagnosed) history aspect")

    entries = []
    for aspect in kb.history_aspects:
        if aspect.id in direct_answers:
            entries.append(direct_answers[aspect.id])
        elif aspect.undiagnosed and aspect.id in recalled_by_disease:
            vector = build_past_symptom_vector(
                kb, aspect.id, recalled_by_disease[aspect.id], alpha_override
            )
            entries.append(infer_history_entry(kb.history_rules[aspect.id], vector))
        else:
            entries.append(0)
    return HistoryMatrix(kb.aspect_ids(), tuple(entries), kb.split_p)
