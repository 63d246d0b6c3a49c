"""Batch and interactive front-end.

Subcommands:

* ``run``    -- execute a batch script (initial prompt, change prompts,
                provider) end to end: generate, export, check.
* ``chat``   -- interactive REPL against a stored session.
* ``check``  -- navigation-check an exported project against a storyboard.
* ``export`` -- re-export a stored session's generated code.
* ``serve``  -- run the HTTP session service.

Exit codes: 0 ok, 1 pipeline failure, 2 navigation findings present,
3 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any

from .analysis import summarize
from .analysis import check_navigation
from .codegen import archive_export, export_project, generate_code, initial_generate
from .design import GeneratedProject, GeneratedView
from .errors import EngineError
from .gateway import Provider, load_providers, provider_from_config
from .ir.serialize import dumps_canonical, loads_strict, serialize_ir, storyboard_from_value
from .planning import ExecutedStep, execute_plan, now_iso, plan_request

EXIT_OK = 0
EXIT_PIPELINE = 1
EXIT_FINDINGS = 2
EXIT_BAD_INPUT = 3


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _load_script(path: str) -> dict[str, Any]:
    try:
        value = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise EngineError("io_error", f"cannot read script {path}: {exc}", path=path)
    except json.JSONDecodeError as exc:
        raise EngineError("parse_error", f"script is not valid JSON: {exc.msg}", offset=exc.pos)
    if not isinstance(value, dict) or not str(value.get("initialPrompt", "")).strip():
        raise EngineError("schema_error", "script needs a non-empty initialPrompt", path="initialPrompt")
    return value


def _resolve_provider(args: argparse.Namespace, script: dict[str, Any] | None = None) -> Provider:
    if script is not None and isinstance(script.get("provider"), dict):
        return provider_from_config("script", script["provider"])
    providers_path = getattr(args, "providers", None)
    if not providers_path:
        raise EngineError("provider_error", "no provider configured (use --providers or an inline script provider)")
    providers, default = load_providers(providers_path)
    name = getattr(args, "provider", None) or (script or {}).get("providerRef") or default
    if not name or name not in providers:
        raise EngineError("provider_error", f"provider {name!r} not found in {providers_path}")
    return providers[name]


def _write_step_log(path: Path, steps: tuple[ExecutedStep, ...]) -> None:
    with path.open("w", encoding="utf-8") as fh:
        for step in steps:
            fh.write(json.dumps(step.to_json_value(), ensure_ascii=False) + "\n")


def cmd_run(args: argparse.Namespace) -> int:
    try:
        script = _load_script(args.script)
        provider = _resolve_provider(args, script)
    except EngineError as exc:
        return _fail(exc.message, EXIT_BAD_INPUT)

    out_dir = Path(args.out or script.get("outDir") or "out")
    out_dir.mkdir(parents=True, exist_ok=True)
    app_name = str(script.get("appName", "App"))
    try:
        project = initial_generate(provider, str(script["initialPrompt"]))
        for change in script.get("changePrompts", []):
            plan = plan_request(str(change), project, provider)
            project, _ = execute_plan(plan, project, provider)
        started = now_iso()
        gp = generate_code(provider, project)
        codegen_step = ExecutedStep("codegen", "-", started, now_iso(), provider.transcript[-1].call_id)
        history = project.history + (codegen_step,)
        export_project(gp, out_dir, app_name=app_name, data_model=project.data_model)
        (out_dir / "export.zip").write_bytes(archive_export(out_dir))
    except EngineError as exc:
        return _fail(f"pipeline failed ({exc.code}): {exc.message}", EXIT_PIPELINE)

    findings = check_navigation(gp, project.storyboard)
    report = summarize(findings)
    (out_dir / "storyboard.json").write_text(serialize_ir(project.storyboard), encoding="utf-8")
    (out_dir / "datamodel.json").write_text(serialize_ir(project.data_model), encoding="utf-8")
    (out_dir / "report.json").write_text(dumps_canonical(report.to_json_value()), encoding="utf-8")
    metrics = {"viewCount": gp.metrics.view_count, "linesOfCode": gp.metrics.lines_of_code}
    (out_dir / "metrics.json").write_text(dumps_canonical(metrics), encoding="utf-8")
    _write_step_log(out_dir / "session.log.jsonl", history)

    summary = {
        "outDir": str(out_dir),
        "metrics": metrics,
        "navigationFindings": report.navigation_total,
    }
    if args.json:
        print(json.dumps(summary))
    else:
        print(f"exported {metrics['viewCount']} views ({metrics['linesOfCode']} lines) to {out_dir}")
        print(f"navigation findings: {report.navigation_total}")
    return EXIT_FINDINGS if findings else EXIT_OK


def _views_from_export(project_dir: Path) -> list[GeneratedView]:
    views = []
    for path in sorted(project_dir.glob("**/Sources/Views/*.swift")):
        views.append(
            GeneratedView(
                id=0,
                name=path.stem,
                swift_ui_view_name=path.stem,
                view_code=path.read_text(encoding="utf-8"),
            )
        )
    return views


def cmd_check(args: argparse.Namespace) -> int:
    project_dir = Path(args.project_dir)
    storyboard_path = Path(args.storyboard)
    if not project_dir.is_dir():
        return _fail(f"project directory {project_dir} not found", EXIT_BAD_INPUT)
    try:
        sb, _ = storyboard_from_value(loads_strict(storyboard_path.read_text(encoding="utf-8")))
    except OSError as exc:
        return _fail(f"cannot read storyboard: {exc}", EXIT_BAD_INPUT)
    except EngineError as exc:
        return _fail(exc.message, EXIT_BAD_INPUT)

    views = _views_from_export(project_dir)
    if not views:
        return _fail(f"no view sources under {project_dir}", EXIT_BAD_INPUT)
    gp = GeneratedProject(views=tuple(views))

    compile_log = None
    if args.compile_log:
        try:
            compile_log = Path(args.compile_log).read_text(encoding="utf-8")
        except OSError as exc:
            return _fail(f"cannot read compile log: {exc}", EXIT_BAD_INPUT)
    try:
        findings = check_navigation(gp, sb)
        report = summarize(findings, compile_log)
    except EngineError as exc:
        return _fail(exc.message, EXIT_BAD_INPUT)

    out_path = Path(args.out) if args.out else project_dir / "report.json"
    out_path.write_text(dumps_canonical(report.to_json_value()), encoding="utf-8")
    if args.json:
        print(json.dumps(report.to_json_value()))
    else:
        for finding in findings:
            location = f":{finding.line}" if finding.line else ""
            print(f"{finding.source_view}{location}: {finding.category} ({finding.evidence})")
        print(f"navigation findings: {report.navigation_total} (report at {out_path})")
    return EXIT_FINDINGS if findings else EXIT_OK


def cmd_export(args: argparse.Namespace) -> int:
    from .service import SessionStore

    session_dir = Path(args.session_dir)
    store = SessionStore(session_dir.parent)
    state = store.get(session_dir.name)
    if state is None:
        return _fail(f"no session at {session_dir}", EXIT_BAD_INPUT)
    if state.generated is None:
        return _fail("session has no generated code to export", EXIT_BAD_INPUT)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        manifest = export_project(
            state.generated, out_dir, data_model=state.project.data_model
        )
    except EngineError as exc:
        return _fail(exc.message, EXIT_PIPELINE)
    print(f"wrote {len(manifest['files'])} files to {out_dir}")
    return EXIT_OK


def cmd_chat(args: argparse.Namespace) -> int:
    from .planning import diff_project
    from .service import SessionStore

    try:
        provider = _resolve_provider(args)
    except EngineError as exc:
        return _fail(exc.message, EXIT_BAD_INPUT)
    store = SessionStore(args.data_dir)
    state = store.get(args.session) if args.session else None
    if state is None:
        state = store.create()
        print(f"session {state.id}")
    print("type a request, or :quit")
    for line in sys.stdin:
        text = line.strip()
        if not text:
            continue
        if text in {":quit", ":q"}:
            break
        before = state.project
        try:
            if state.phase == "empty":
                state.project = initial_generate(provider, text)
            else:
                plan = plan_request(text, state.project, provider)
                state.project, _ = execute_plan(plan, state.project, provider)
            state.generated = None
            store.persist(state)
            print(diff_project(before, state.project).summary())
        except EngineError as exc:
            print(f"error ({exc.code}): {exc.message}", file=sys.stderr)
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import SessionStore, create_app

    try:
        provider = _resolve_provider(args)
    except EngineError as exc:
        return _fail(exc.message, EXIT_BAD_INPUT)
    app = create_app(SessionStore(args.data_dir), provider)
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="appforge", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a batch script end to end")
    run.add_argument("--script", required=True, help="batch script JSON")
    run.add_argument("--out", help="output directory (default from script, else ./out)")
    run.add_argument("--providers", help="providers.json path")
    run.add_argument("--provider", help="provider name from providers.json")
    run.add_argument("--json", action="store_true", help="machine-readable summary on stdout")
    run.set_defaults(func=cmd_run)

    check = sub.add_parser("check", help="navigation-check an exported project")
    check.add_argument("project_dir", help="exported project directory")
    check.add_argument("storyboard", help="storyboard.json path")
    check.add_argument("--compile-log", help="external compiler log to ingest")
    check.add_argument("--out", help="report.json path (default <project_dir>/report.json)")
    check.add_argument("--json", action="store_true", help="print the report JSON on stdout")
    check.set_defaults(func=cmd_check)

    export = sub.add_parser("export", help="export a stored session's generated code")
    export.add_argument("--session-dir", required=True, help="per-session data directory")
    export.add_argument("--out", required=True, help="output directory")
    export.set_defaults(func=cmd_export)

    chat = sub.add_parser("chat", help="interactive REPL against a session")
    chat.add_argument("--data-dir", required=True, help="session data directory")
    chat.add_argument("--providers", help="providers.json path")
    chat.add_argument("--provider", help="provider name")
    chat.add_argument("--session", help="resume an existing session id")
    chat.set_defaults(func=cmd_chat)

    serve = sub.add_parser("serve", help="run the HTTP session service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--data-dir", required=True, help="session data directory")
    serve.add_argument("--providers", help="providers.json path")
    serve.add_argument("--provider", help="provider name")
    serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
