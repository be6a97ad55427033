import json

import pytest

from fuzzytriage.engine import evaluate, new_session
from fuzzytriage.errors import ParseError
from fuzzytriage.record import record_to_findings
from fuzzytriage.report import (
    evaluate_to_report,
    export_report,
    parse_report,
    render_structured,
)


class TestStructured:
    def test_matches_committed_golden(self, demo_kb, demo_record, golden_report):
        assert evaluate_to_report(demo_kb, demo_record, "structured") == golden_report

    def test_round_trip_to_equal_matrices(self, demo_kb, demo_record):
        matrices = evaluate(demo_kb, demo_record)
        text = render_structured(demo_kb, demo_record, matrices)
        assert parse_report(text) == matrices

    def test_empty_session_round_trip(self, demo_kb):
        s = new_session(demo_kb)
        assert parse_report(export_report(s, "structured")) == s.matrices

    def test_empty_session_lists_all_universes_unanswered(self, demo_kb):
        doc = json.loads(export_report(new_session(demo_kb), "structured"))
        assert doc["unanswered"]["history_aspects"] == list(demo_kb.aspect_ids())
        assert doc["unanswered"]["problems"] == [p.id for p in demo_kb.problems]
        assert doc["unanswered"]["signs"] == [s.id for s in demo_kb.signs]
        assert doc["unanswered"]["tests"] == [t.id for t in demo_kb.tests]

    def test_parse_errors(self):
        with pytest.raises(ParseError):
            parse_report("{nope")
        with pytest.raises(ParseError):
            parse_report('{"history": {}}')

    def test_session_export_matches_batch(self, demo_kb, demo_record, demo_record_data, golden_report):
        s = new_session(demo_kb)
        for finding in record_to_findings(
            {k: v for k, v in demo_record_data.items() if k != "record_id"}
        ):
            s.apply_finding(finding)
        assert export_report(s, "structured") == golden_report


class TestText:
    def test_matches_committed_golden(self, demo_kb, demo_record, golden_report_text):
        assert evaluate_to_report(demo_kb, demo_record, "text") == golden_report_text

    def test_labels_and_unanswered_present(self, demo_kb, demo_record):
        text = evaluate_to_report(demo_kb, demo_record, "text")
        assert "Angina pectoris" in text
        assert "unanswered:" in text
        assert "family_heart_disease" in text

    def test_unknown_format(self, demo_kb, demo_record):
        with pytest.raises(ValueError):
            evaluate_to_report(demo_kb, demo_record, "xml")
        with pytest.raises(ValueError):
            export_report(new_session(demo_kb), "xml")
