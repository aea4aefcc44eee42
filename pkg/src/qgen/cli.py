"""Command-line interface.

Exit codes: 0 success, 1 non-compliant finding (validate), 2 usage or I/O
error. `--json` switches every subcommand to machine-readable output.
"""
from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone

from .blueprint import BlueprintRequirement, assemble, coverage_matrix, offline_filler
from .config import load_config, load_taxonomy
from .errors import QgenError
from .files import (
    build_report_doc,
    load_bank,
    load_course,
    matrix_csv,
    matrix_to_dict,
    question_to_dict,
    report_to_dict,
    serialize_report,
)
from .generation import (
    ClientParams,
    GenerationRequest,
    HttpCompletionClient,
    generate,
    offline_result,
)
from .validation import validate_bank


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _print_json(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False))


def _taxonomy(args):
    return load_taxonomy(load_config(getattr(args, "config", None)))


def _summary_dict(summary) -> dict:
    return {
        sp: {"compliant": t.compliant, "non_compliant": t.non_compliant}
        for sp, t in sorted(summary.per_subpoint.items())
    }


def cmd_validate(args) -> int:
    tax = _taxonomy(args)
    bank = load_bank(args.bank)
    course = load_course(args.course, tax)
    reports, summary = validate_bank(bank, tax, subpoint_id=args.subpoint)
    failures = sum(1 for r in reports if not r.compliant)
    if args.json:
        _print_json({
            "course": course.code,
            "reports": [report_to_dict(r) for r in reports],
            "summary": _summary_dict(summary),
        })
    else:
        for r in reports:
            verb = r.primary_verb.lemma if r.primary_verb else "-"
            status = "ok  " if r.compliant else "FAIL"
            print(f"{status} {r.question_id} -> {r.target_subpoint} verb={verb}")
            if not r.compliant and r.suggestions:
                print(f"     suggestions: {', '.join(r.suggestions)}")
        print(f"{len(reports)} check(s), {failures} non-compliant")
    return 1 if failures else 0


def cmd_suggest(args) -> int:
    tax = _taxonomy(args)
    verbs = tax.verbs_for_subpoint(args.subpoint)
    if args.json:
        _print_json({"subpoint": args.subpoint, "verbs": list(verbs)})
    else:
        for verb in verbs:
            print(verb)
    return 0


def _http_client(args) -> HttpCompletionClient:
    config = load_config(getattr(args, "config", None))
    if not config.client.endpoint:
        raise QgenError("http client requires an endpoint in the config file "
                        "(QGEN_CONFIG or --config)")
    return HttpCompletionClient(
        endpoint=config.client.endpoint,
        profile=config.client.profile,
        model=config.client.model,
    )


def cmd_generate(args) -> int:
    config = load_config(getattr(args, "config", None))
    tax = load_taxonomy(config)
    course = load_course(args.course, tax)
    request = GenerationRequest(
        course_code=course.code,
        topic=args.topic or course.default_topic(),
        subpoint=args.subpoint,
        count=args.count,
        client_params=ClientParams(
            timeout=config.client.timeout,
            max_retries=config.client.max_retries,
        ),
    )
    if args.client == "offline":
        result = offline_result(request, tax, seed=args.seed)
    else:
        result = generate(request, _http_client(args), tax)
    if args.json:
        _print_json({
            "questions": [question_to_dict(q) for q in result.questions],
            "rejected": [{"raw": raw, "report": report_to_dict(r)} for raw, r in result.rejected],
            "attempts_used": result.attempts_used,
            "prompt_transcript": list(result.prompt_transcript),
            "diagnostics": list(result.diagnostics),
        })
    else:
        for question in result.questions:
            print(question.text)
        for note in result.diagnostics:
            print(f"# {note}", file=sys.stderr)
    return 0


def cmd_blueprint(args) -> int:
    config = load_config(getattr(args, "config", None))
    tax = load_taxonomy(config)
    course = load_course(args.course, tax)
    bank = load_bank(args.bank)
    requirement = BlueprintRequirement(
        {sp: args.per_subpoint for sp in course.covered_subpoints}
    )
    filler = None
    if args.fill == "offline":
        filler = offline_filler(course, tax, seed=args.seed)
    elif args.fill == "http":
        client = _http_client(args)

        def filler(subpoint: str, count: int):
            request = GenerationRequest(
                course_code=course.code,
                topic=course.default_topic(),
                subpoint=subpoint,
                count=count,
                client_params=ClientParams(
                    timeout=config.client.timeout,
                    max_retries=config.client.max_retries,
                ),
            )
            return generate(request, client, tax).questions

    assembled = assemble(course, requirement, bank, tax, filler=filler)
    if args.json:
        _print_json({
            "exam": [question_to_dict(q) for q in assembled.exam],
            "matrix": matrix_to_dict(assembled.matrix),
            "deficits": dict(sorted(assembled.deficits.items())),
        })
    else:
        for question in assembled.exam:
            print(question.text)
        if assembled.deficits:
            gaps = ", ".join(f"{sp}:{n}" for sp, n in sorted(assembled.deficits.items()))
            print(f"# deficits: {gaps}", file=sys.stderr)
    return 0


def cmd_report(args) -> int:
    tax = _taxonomy(args)
    bank = load_bank(args.bank)
    course = load_course(args.course, tax)
    reports, _ = validate_bank(bank, tax)
    matrix = coverage_matrix(reports, course)
    doc = build_report_doc(course, reports, matrix, generated_at=_now())
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(serialize_report(doc))
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(matrix_csv(matrix, course, tax))
    if args.json:
        _print_json({"out": args.out, "csv": args.csv, "matrix": matrix_to_dict(matrix)})
    else:
        print(f"report written to {args.out} (total compliant checks: {matrix.total})")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    config = load_config(getattr(args, "config", None))
    banks_dir = args.banks or config.banks_dir
    app = create_app(tax=load_taxonomy(config), banks_dir=banks_dir, config=config,
                     ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qgen",
        description="Validate, repair and generate accreditation-compliant exam questions.",
    )
    parser.add_argument("--config", help="config file path (overrides QGEN_CONFIG)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="lint a question bank against its targets")
    p.add_argument("--bank", required=True)
    p.add_argument("--course", required=True)
    p.add_argument("--subpoint", help="restrict checks to one subpoint")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("suggest", help="print the approved verbs for a subpoint")
    p.add_argument("--subpoint", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_suggest)

    p = sub.add_parser("generate", help="generate compliant questions")
    p.add_argument("--course", required=True)
    p.add_argument("--subpoint", required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--client", choices=["offline", "http"], required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--topic")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("blueprint", help="assemble an exam meeting per-outcome counts")
    p.add_argument("--course", required=True)
    p.add_argument("--bank", required=True)
    p.add_argument("--per-subpoint", type=int, required=True, dest="per_subpoint")
    p.add_argument("--fill", choices=["offline", "http"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_blueprint)

    p = sub.add_parser("report", help="write a report.v1 document for a bank")
    p.add_argument("--bank", required=True)
    p.add_argument("--course", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--csv")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--banks", help="bank store directory")
    p.add_argument("--ui", help="directory with the built workbench to host at /")
    p.set_defaults(func=cmd_serve)

    return parser


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else int(exc.code or 0)
    try:
        return args.func(args)
    except QgenError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
