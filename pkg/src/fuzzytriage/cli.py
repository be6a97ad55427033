"""Command-line interface: validate, evaluate, serve.

Exit codes: 0 success, 1 invalid content (knowledge base or record fails
validation), 2 usage problems (bad flags, unreadable files).
"""
from __future__ import annotations

import argparse
import os
import sys
import warnings

from .errors import ParseError, TriageError, ValidationFailure
from .kb import LenientKeyWarning, load_knowledge_base_file
from .record import load_record_file
from .report import FORMATS, evaluate_to_report


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fuzzytriage",
        description="Evaluate patient findings against a declarative fuzzy knowledge base.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check a knowledge-base file")
    p_validate.add_argument("--kb", required=True, help="knowledge-base file")
    p_validate.add_argument(
        "--lenient", action="store_true", help="downgrade unknown document keys to warnings"
    )

    p_eval = sub.add_parser("evaluate", help="evaluate one record file")
    p_eval.add_argument("--kb", required=True, help="knowledge-base file")
    p_eval.add_argument("--record", required=True, help="patient-record file")
    p_eval.add_argument("--out", required=True, help="output path, or - for stdout")
    p_eval.add_argument("--format", choices=FORMATS, default="structured")
    p_eval.add_argument("--alpha", type=float, default=None, help="override the prominence threshold")

    p_serve = sub.add_parser("serve", help="run the session HTTP API")
    p_serve.add_argument("--kb", required=True, help="knowledge-base file")
    p_serve.add_argument("--port", type=int, required=True)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--data-dir", default=None, help="session snapshot directory")
    p_serve.add_argument("--ui", default=None, help="built frontend directory to serve at /")
    return parser


def _load_kb(path: str, lenient: bool = False):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", LenientKeyWarning)
        kb = load_knowledge_base_file(path, lenient=lenient)
    for w in caught:
        if issubclass(w.category, LenientKeyWarning):
            print(f"warning: {w.message}", file=sys.stderr)
    return kb


def _cmd_validate(args) -> int:
    kb = _load_kb(args.kb, args.lenient)
    print(
        f"OK: {len(kb.history_aspects)} history aspects ({kb.split_p} inferable), "
        f"{len(kb.problems)} problems, {len(kb.symptoms)} symptoms, "
        f"{len(kb.signs)} signs, {len(kb.tests)} tests, alpha={kb.alpha:g}"
    )
    return 0


def _cmd_evaluate(args) -> int:
    kb = _load_kb(args.kb)
    record = load_record_file(kb, args.record)
    if args.alpha is not None:
        from dataclasses import replace

        from .core import as_grade

        record = replace(record, alpha_override=as_grade(args.alpha, "alpha"))
    text = evaluate_to_report(kb, record, args.format)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .engine import SessionStore
    from .server import create_app

    kb = _load_kb(args.kb)
    data_dir = os.environ.get("TRIAGE_DATA_DIR") or args.data_dir
    if data_dir is None:
        print("error: no data directory (use --data-dir or TRIAGE_DATA_DIR)", file=sys.stderr)
        return 2
    app = create_app(kb, SessionStore(data_dir), ui_dir=args.ui)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except (OSError, SystemExit) as exc:  # port bind failure and friends
        print(f"error: server failed to start: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "validate":
            return _cmd_validate(args)
        if args.command == "evaluate":
            return _cmd_evaluate(args)
        return _cmd_serve(args)
    except FileNotFoundError as exc:
        print(f"error: cannot read {exc.filename}", file=sys.stderr)
        return 2
    except ValidationFailure as exc:
        print(f"invalid: {len(exc.issues)} error(s)", file=sys.stderr)
        for issue in exc.issues:
            print(f"  {issue}", file=sys.stderr)
        return 1
    except (ParseError, TriageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
