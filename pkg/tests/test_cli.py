import json
from pathlib import Path

import pytest

from fuzzytriage.cli import main

ROOT = Path(__file__).resolve().parent.parent
DEMO_KB = ROOT / "demo" / "demo.kb.json"
DEMO_RECORD = ROOT / "demo" / "demo.record.json"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestValidate:
    def test_valid_kb(self, capsys):
        code, out, _ = run(capsys, "validate", "--kb", str(DEMO_KB))
        assert code == 0
        assert out.startswith("OK:")

    def test_invalid_kb_lists_errors(self, capsys, tmp_path, demo_kb_data):
        data = json.loads(json.dumps(demo_kb_data))
        data["alpha"] = 1.2
        data["symptoms"].append({"id": "angina", "binary": True})
        bad = tmp_path / "bad.kb.json"
        bad.write_text(json.dumps(data), "utf-8")
        code, _, err = run(capsys, "validate", "--kb", str(bad))
        assert code == 1
        assert "alpha out of range" in err
        assert "angina" in err

    def test_lenient_unknown_key(self, capsys, tmp_path, demo_kb_data):
        data = json.loads(json.dumps(demo_kb_data))
        data["notes"] = "extra"
        kb_file = tmp_path / "extra.kb.json"
        kb_file.write_text(json.dumps(data), "utf-8")
        code, _, err = run(capsys, "validate", "--kb", str(kb_file))
        assert code == 1
        code, out, err = run(capsys, "validate", "--kb", str(kb_file), "--lenient")
        assert code == 0
        assert "warning:" in err

    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "validate", "--kb", "nowhere.kb.json")
        assert code == 2
        assert "cannot read" in err


class TestEvaluate:
    def test_golden_to_stdout(self, capsys, golden_report):
        code, out, _ = run(
            capsys, "evaluate", "--kb", str(DEMO_KB), "--record", str(DEMO_RECORD), "--out", "-"
        )
        assert code == 0
        assert out == golden_report

    def test_golden_to_file(self, capsys, tmp_path, golden_report):
        out_path = tmp_path / "report.json"
        code, _, _ = run(
            capsys, "evaluate", "--kb", str(DEMO_KB), "--record", str(DEMO_RECORD),
            "--out", str(out_path),
        )
        assert code == 0
        assert out_path.read_text("utf-8") == golden_report

    def test_text_format(self, capsys, golden_report_text):
        code, out, _ = run(
            capsys, "evaluate", "--kb", str(DEMO_KB), "--record", str(DEMO_RECORD),
            "--out", "-", "--format", "text",
        )
        assert code == 0
        assert out == golden_report_text

    def test_missing_record_file(self, capsys):
        code, _, err = run(
            capsys, "evaluate", "--kb", str(DEMO_KB), "--record", "missing.rec", "--out", "-"
        )
        assert code == 2
        assert "cannot read" in err

    def test_invalid_record_content(self, capsys, tmp_path):
        bad = tmp_path / "bad.rec.json"
        bad.write_text(json.dumps({"direct_history": {"gout": 1}}), "utf-8")
        code, _, err = run(
            capsys, "evaluate", "--kb", str(DEMO_KB), "--record", str(bad), "--out", "-"
        )
        assert code == 1
        assert "gout" in err

    def test_alpha_flag_overrides(self, capsys):
        code, out, _ = run(
            capsys, "evaluate", "--kb", str(DEMO_KB), "--record", str(DEMO_RECORD),
            "--out", "-", "--alpha", "0.99",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["alpha"] == 0.99
        # at 0.99 nothing is prominent, so the recalled symptoms infer nothing
        assert doc["history"]["entries"][:2] == [0, 0]


class TestUsage:
    def test_bad_flags_exit_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["evaluate", "--frobnicate"])
        assert exc.value.code == 2

    def test_no_command_exit_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2


class TestServe:
    def test_port_bind_failure_nonzero_exit(self, tmp_path):
        import socket
        import subprocess
        import sys

        with socket.socket() as blocker:
            blocker.bind(("127.0.0.1", 0))
            blocker.listen(1)
            port = blocker.getsockname()[1]
            result = subprocess.run(
                [sys.executable, "-m", "fuzzytriage.cli", "serve", "--kb", str(DEMO_KB),
                 "--port", str(port), "--data-dir", str(tmp_path)],
                capture_output=True, text=True, timeout=30,
            )
        assert result.returncode != 0

    def test_no_data_dir_exit_2(self, capsys, monkeypatch):
        monkeypatch.delenv("TRIAGE_DATA_DIR", raising=False)
        code = main(["serve", "--kb", str(DEMO_KB), "--port", "1"])
        captured = capsys.readouterr()
        assert code == 2
        assert "data directory" in captured.err
