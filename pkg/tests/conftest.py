import json
from pathlib import Path

import pytest

from fuzzytriage import load_knowledge_base_file, load_record_file

ROOT = Path(__file__).resolve().parent.parent
DEMO_KB = ROOT / "demo" / "demo.kb.json"
DEMO_RECORD = ROOT / "demo" / "demo.record.json"
GOLDEN = Path(__file__).resolve().parent / "golden"


@pytest.fixture(scope="session")
def demo_kb():
    return load_knowledge_base_file(str(DEMO_KB))


@pytest.fixture(scope="session")
def demo_record(demo_kb):
    return load_record_file(demo_kb, str(DEMO_RECORD))


@pytest.fixture(scope="session")
def demo_record_data():
    return json.loads(DEMO_RECORD.read_text("utf-8"))


@pytest.fixture(scope="session")
def demo_kb_data():
    return json.loads(DEMO_KB.read_text("utf-8"))


@pytest.fixture(scope="session")
def golden_report() -> str:
    return (GOLDEN / "demo_report.json").read_text("utf-8")


@pytest.fixture(scope="session")
def golden_report_text() -> str:
    return (GOLDEN / "demo_report.txt").read_text("utf-8")
