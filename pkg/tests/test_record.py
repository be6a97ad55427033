import copy
import json

import pytest

from fuzzytriage.errors import ValidationFailure
from fuzzytriage.record import (
    PatientRecord,
    check_finding_shape,
    dump_record,
    load_record,
    merge_finding,
    record_from_dict,
    record_to_dict,
    record_to_findings,
)


class TestValidation:
    def test_empty_record_is_valid(self, demo_kb):
        assert record_from_dict(demo_kb, {}) == PatientRecord()

    def test_demo_record_loads(self, demo_kb, demo_record):
        assert demo_record.record_id == "demo-patient-001"
        assert demo_record.direct_history == {"hypertension": 1, "diabetes": 0, "smoking": 1}
        assert demo_record.recalled_past_symptoms["asthma"] == frozenset({"wheezing"})

    def test_unknown_recalled_symptom_is_an_error_with_path(self, demo_kb, demo_record_data):
        data = copy.deepcopy(demo_record_data)
        data["recalled_past_symptoms"]["asthma"].append("rash")
        with pytest.raises(ValidationFailure) as exc:
            record_from_dict(demo_kb, data)
        assert any(
            i.path == "recalled_past_symptoms.asthma[1]" and "rash" in i.message
            for i in exc.value.issues
        )

    def test_every_violation_reported(self, demo_kb, demo_record_data):
        data = copy.deepcopy(demo_record_data)
        data["direct_history"]["gout"] = 1
        data["direct_history"]["smoking"] = 3
        data["problem_reports"][0]["profile"]["pain_grade"] = 1.5
        data["test_results"][0]["value"] = float("inf")
        data["alpha_override"] = -0.2
        with pytest.raises(ValidationFailure) as exc:
            record_from_dict(demo_kb, json.loads(json.dumps(data).replace("Infinity", "1e999")))
        paths = {i.path for i in exc.value.issues}
        assert {"direct_history.gout", "direct_history.smoking",
                "problem_reports[0].profile.pain_grade", "alpha_override"} <= paths

    def test_unknown_top_level_key_rejected(self, demo_kb):
        with pytest.raises(ValidationFailure):
            record_from_dict(demo_kb, {"narrative": "feels unwell"})

    def test_boolean_history_answer_rejected(self, demo_kb):
        with pytest.raises(ValidationFailure):
            record_from_dict(demo_kb, {"direct_history": {"smoking": True}})

    def test_graded_observable_range_checked(self, demo_kb):
        data = {"observations": {"heart_murmur": {"loudness_grade": 2.0}}}
        with pytest.raises(ValidationFailure, match="out of range"):
            record_from_dict(demo_kb, data)

    def test_scalar_for_multi_aspect_test_rejected(self, demo_kb):
        with pytest.raises(ValidationFailure, match="aspect"):
            record_from_dict(demo_kb, {"test_results": [{"test": "blood_pressure", "value": 120}]})

    def test_duplicate_problem_report(self, demo_kb):
        data = {"problem_reports": [{"problem": "dizziness"}, {"problem": "dizziness"}]}
        with pytest.raises(ValidationFailure, match="more than once"):
            record_from_dict(demo_kb, data)


class TestRoundTrip:
    def test_load_dump_load_equality(self, demo_kb, demo_record):
        again = load_record(demo_kb, dump_record(demo_record))
        assert again == demo_record

    def test_dump_deterministic(self, demo_kb, demo_record_data):
        text = json.dumps(demo_record_data)
        first = dump_record(record_from_dict(demo_kb, json.loads(text)))
        second = dump_record(record_from_dict(demo_kb, json.loads(text)))
        assert first == second

    def test_empty_record_round_trip(self, demo_kb):
        record = record_from_dict(demo_kb, {})
        assert load_record(demo_kb, dump_record(record)) == record


class TestFindings:
    def test_shape_check(self):
        assert check_finding_shape({"kind": "direct_history", "aspect": "smoking", "value": 1}) == []
        assert check_finding_shape({"kind": "teleport"}) != []
        assert check_finding_shape(["not", "an", "object"]) != []
        assert check_finding_shape({"kind": "direct_history", "aspect": "smoking"}) != []
        assert check_finding_shape({"kind": "test_result", "test": "t"}) != []
        assert (
            check_finding_shape({"kind": "test_result", "test": "t", "value": 1, "aspects": {}}) != []
        )

    def test_merge_replaces_and_audits(self):
        data = {"direct_history": {"smoking": 0}}
        merged, replaced = merge_finding(data, {"kind": "direct_history", "aspect": "smoking", "value": 1})
        assert merged["direct_history"]["smoking"] == 1
        assert replaced == [{"key": "direct_history.smoking", "old": 0, "new": 1}]
        # idempotent re-entry is not a replacement
        merged2, replaced2 = merge_finding(merged, {"kind": "direct_history", "aspect": "smoking", "value": 1})
        assert replaced2 == []
        assert merged2 == merged

    def test_merge_does_not_mutate_input(self):
        data = {"direct_history": {"smoking": 0}}
        merge_finding(data, {"kind": "direct_history", "aspect": "smoking", "value": 1})
        assert data == {"direct_history": {"smoking": 0}}

    def test_problem_factor_creates_report(self):
        merged, _ = merge_finding(
            {}, {"kind": "problem_factor", "problem": "dizziness", "factor": "dizziness_grade", "value": 0.6}
        )
        assert merged["problem_reports"] == [
            {"problem": "dizziness", "profile": {"dizziness_grade": 0.6}}
        ]

    def test_alpha_clear(self):
        merged, _ = merge_finding({"alpha_override": 0.4}, {"kind": "alpha_override", "alpha": None})
        assert "alpha_override" not in merged

    def test_decomposition_rebuilds_record(self, demo_kb, demo_record_data):
        data = {k: v for k, v in demo_record_data.items() if k != "record_id"}
        rebuilt: dict = {}
        for finding in record_to_findings(data):
            assert check_finding_shape(finding) == []
            rebuilt, _ = merge_finding(rebuilt, finding)
        assert record_from_dict(demo_kb, rebuilt) == record_from_dict(demo_kb, data)

    def test_record_to_dict_sorts_recalled_sets(self, demo_kb, demo_record):
        data = record_to_dict(demo_record)
        assert data["recalled_past_symptoms"]["rheumatic_fever"] == [
            "fever_episodes",
            "joint_pain",
        ]
