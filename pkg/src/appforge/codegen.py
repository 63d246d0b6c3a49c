"""Lowering the IRs to a multi-file SwiftUI source project.

One call generates everything: the prompt carries all three IRs plus the
design scaffold, and the response is a complete set of view and utility
files. Structural invariants (one view per screen, matching type names)
are enforced with bounded repair re-prompts. Export writes the standard
source layout plus a manifest with content hashes, deterministically.
"""

from __future__ import annotations

import hashlib
import io
import re
import shutil
import zipfile
from dataclasses import replace
from pathlib import Path
from typing import Any, Callable

from .design import (
    DesignScaffold,
    GeneratedProject,
    GeneratedUtility,
    GeneratedView,
    NavigationPlan,
    ViewDesignSpec,
    compute_metrics,
    parse_design_scaffold,
    parse_generated_project,
    parse_navigation_plan,
    parse_view_design_spec,
    validate_navigation_plan,
)
from .errors import EngineError
from .gateway import Provider, complete_json, load_template, render_prompt
from .ir.model import DataModel, Finding, SEVERITY_ERROR, Storyboard, ValidationReport
from .ir.serialize import (
    data_model_from_value,
    dumps_canonical,
    serialize_ir,
    skeleton_from_value,
    storyboard_from_value,
)
from .ir.validate import validate_data_model, validate_storyboard
from .planning import (
    ExecutedStep,
    Project,
    StepCallback,
    now_iso,
    run_skeleton_calls,
)

MANIFEST_NAME = "athena.manifest.json"

_DECL_TEMPLATE = r"\b(?:struct|class|enum)\s+{name}\b"


def generate_design_scaffold(provider: Provider, initial_request_text: str) -> DesignScaffold:
    """One app-wide style record derived from the initial request."""
    if not initial_request_text.strip():
        raise EngineError("empty_request", "request text is empty")
    template = load_template("design_scaffold")
    prompt = render_prompt(template, {"request": initial_request_text})
    scaffold, _ = complete_json(provider, prompt, parse_design_scaffold)
    return scaffold


def generate_navigation_plan(provider: Provider, storyboard: Storyboard) -> NavigationPlan:
    """Transition design for every edge; validated against the storyboard.

    A plan whose transitions do not line up with the edges gets one repair
    re-prompt before failing with ``plan_edge_mismatch``.
    """
    report = validate_storyboard(storyboard)
    if not report.ok:
        raise EngineError("plan_edge_mismatch", f"storyboard invalid: {report.summary()}", report=report)
    template = load_template("navigation_plan")
    prompt = render_prompt(template, {"storyboard": serialize_ir(storyboard)})
    plan, _ = complete_json(provider, prompt, parse_navigation_plan)
    nav_report = validate_navigation_plan(plan, storyboard)
    if nav_report.ok:
        return plan
    repair = prompt + f"\n\nThe previous plan was rejected:\n{nav_report.summary()}\nReply with corrected JSON only."
    try:
        plan2, _ = complete_json(provider, repair, parse_navigation_plan, retries=0)
    except EngineError:
        raise EngineError(
            "plan_edge_mismatch", f"navigation plan rejected: {nav_report.summary()}", report=nav_report
        )
    report2 = validate_navigation_plan(plan2, storyboard)
    if report2.ok:
        return plan2
    raise EngineError(
        "plan_edge_mismatch", f"navigation plan rejected after repair: {report2.summary()}", report=report2
    )


def generate_view_design_specs(provider: Provider, project: Project) -> dict[str, ViewDesignSpec]:
    """Optional per-view style notes appended to the codegen prompt."""
    scaffold_text = dumps_canonical(project.design_scaffold.to_json_value()) if project.design_scaffold else "{}"
    template = load_template("view_design_spec")
    specs: dict[str, ViewDesignSpec] = {}
    for skel in project.skeleton_list():
        prompt = render_prompt(
            template,
            {
                "viewName": skel.view_name,
                "skeleton": serialize_ir(skel),
                "designScaffold": scaffold_text,
            },
        )
        spec, _ = complete_json(provider, prompt, parse_view_design_spec)
        specs[skel.view_name] = spec
    return specs


def _check_generated(gp: GeneratedProject, sb: Storyboard) -> ValidationReport:
    findings: list[Finding] = []
    expected = {n.swift_ui_view_name for n in sb.nodes}
    produced = [v.swift_ui_view_name for v in gp.views]
    produced_set = set(produced)
    for name in sorted(expected - produced_set):
        findings.append(
            Finding(SEVERITY_ERROR, "missing_view", f"views[{name}]", f"no code generated for {name!r}")
        )
    for name in sorted(produced_set - expected):
        findings.append(
            Finding(SEVERITY_ERROR, "extra_view", f"views[{name}]", f"{name!r} is not a storyboard screen")
        )
    seen: set[str] = set()
    for i, view in enumerate(gp.views):
        if view.swift_ui_view_name in seen:
            findings.append(
                Finding(
                    SEVERITY_ERROR,
                    "extra_view",
                    f"views[{i}]",
                    f"duplicate code entry for {view.swift_ui_view_name!r}",
                )
            )
        seen.add(view.swift_ui_view_name)
        if view.swift_ui_view_name in expected:
            pattern = _DECL_TEMPLATE.format(name=re.escape(view.swift_ui_view_name))
            if not re.search(pattern, view.view_code):
                findings.append(
                    Finding(
                        SEVERITY_ERROR,
                        "type_name_mismatch",
                        f"views[{i}].viewCode",
                        f"code does not declare a type named {view.swift_ui_view_name!r}",
                    )
                )
    return ValidationReport(tuple(findings))


def _normalize_generated(gp: GeneratedProject, sb: Storyboard, scaffold: DesignScaffold | None) -> GeneratedProject:
    """Align ids and ordering with the storyboard and compute metrics."""
    by_name = {v.swift_ui_view_name: v for v in gp.views}
    views = []
    for node in sorted(sb.nodes, key=lambda n: n.id):
        view = by_name[node.swift_ui_view_name]
        views.append(replace(view, id=node.id, name=view.name or node.name))
    views_t = tuple(views)
    return GeneratedProject(
        views=views_t,
        utilities=gp.utilities,
        scaffold_used=scaffold,
        metrics=compute_metrics(views_t, gp.utilities),
    )


def _codegen_bindings(project: Project, specs: dict[str, ViewDesignSpec] | None) -> dict[str, str]:
    skeleton_texts = [serialize_ir(s) for s in project.skeleton_list()]
    scaffold = project.design_scaffold
    spec_text = "(none)"
    if specs:
        spec_text = "\n".join(
            f"{name}:\n{dumps_canonical(spec.to_json_value())}" for name, spec in sorted(specs.items())
        )
    return {
        "storyboard": serialize_ir(project.storyboard),
        "dataModel": serialize_ir(project.data_model),
        "skeletons": "\n".join(skeleton_texts) if skeleton_texts else "(none)",
        "designScaffold": dumps_canonical(scaffold.to_json_value()) if scaffold else "{}",
        "viewDesignSpecs": spec_text,
    }


def generate_code(
    provider: Provider,
    project: Project,
    *,
    per_view: bool = False,
    with_view_specs: bool = False,
) -> GeneratedProject:
    """Lower the whole project to source files in a single model call.

    Structural violations (a screen without code, code not declaring the
    right type) each earn one repair re-prompt per violation class; if a
    class repeats after its repair the call fails with ``codegen_invalid``.
    ``per_view`` switches to one call per screen, for experiments only.
    """
    report = project.validate()
    if not report.ok:
        raise EngineError("codegen_invalid", f"project invalid: {report.summary()}", report=report)
    if project.design_scaffold is None:
        raise EngineError("missing_scaffold", "code generation needs a design scaffold")

    specs = generate_view_design_specs(provider, project) if with_view_specs else None
    if per_view:
        return _generate_per_view(provider, project, specs)

    template = load_template("code_gen")
    prompt = render_prompt(template, _codegen_bindings(project, specs))
    gp, _ = complete_json(provider, prompt, parse_generated_project)

    retried: set[str] = set()
    while True:
        check = _check_generated(gp, project.storyboard)
        if check.ok:
            break
        classes = {f.code for f in check.errors}
        if classes & retried:
            raise EngineError("codegen_invalid", check.summary(), report=check)
        retried |= classes
        repair = prompt + f"\n\nThe previous output was rejected:\n{check.summary()}\nReply with corrected JSON only."
        gp, _ = complete_json(provider, repair, parse_generated_project, retries=0)
    return _normalize_generated(gp, project.storyboard, project.design_scaffold)


def _generate_per_view(
    provider: Provider, project: Project, specs: dict[str, ViewDesignSpec] | None
) -> GeneratedProject:
    template = load_template("code_gen")
    views: list[GeneratedView] = []
    utilities: dict[str, GeneratedUtility] = {}
    for skel in project.skeleton_list():
        bindings = _codegen_bindings(project, specs)
        bindings["skeletons"] = serialize_ir(skel)
        prompt = render_prompt(template, bindings)
        gp, _ = complete_json(provider, prompt, parse_generated_project)
        view = gp.view_by_name(skel.view_name)
        if view is None:
            raise EngineError(
                "codegen_invalid",
                f"per-view generation returned no code for {skel.view_name!r}",
                report=ValidationReport(
                    (Finding(SEVERITY_ERROR, "missing_view", f"views[{skel.view_name}]", "missing"),)
                ),
            )
        views.append(view)
        for util in gp.utilities:
            utilities.setdefault(util.name, util)
    gp = GeneratedProject(views=tuple(views), utilities=tuple(utilities.values()))
    check = _check_generated(gp, project.storyboard)
    if not check.ok:
        raise EngineError("codegen_invalid", check.summary(), report=check)
    return _normalize_generated(gp, project.storyboard, project.design_scaffold)


# --------------------------------------------------------------------------
# Export
# --------------------------------------------------------------------------


def _safe_file_name(name: str) -> str:
    cleaned = re.sub(r"[^A-Za-z0-9+_.-]", "", name.replace(" ", ""))
    return cleaned or "File"


def export_project(
    gp: GeneratedProject,
    out_dir: str | Path,
    *,
    app_name: str = "App",
    data_model: DataModel | None = None,
) -> dict[str, Any]:
    """Write the source layout and manifest under ``out_dir``.

    Views land in ``<App>/Sources/Views``, entity declarations (when a data
    model is supplied) in ``<App>/Sources/Models``, utilities in
    ``<App>/Sources/Utilities``. Re-export of the same input overwrites to
    byte-identical results; the manifest lists every file with its sha-256.
    """
    out = Path(out_dir)
    app_root = out / _safe_file_name(app_name)
    try:
        if app_root.exists():
            shutil.rmtree(app_root)
        files: list[tuple[str, str]] = []
        for view in gp.views:
            files.append((f"{app_root.name}/Sources/Views/{_safe_file_name(view.swift_ui_view_name)}.swift", view.view_code))
        if data_model is not None:
            for entity in data_model.entities:
                files.append(
                    (
                        f"{app_root.name}/Sources/Models/{_safe_file_name(entity.name)}.swift",
                        entity.rendered_source(),
                    )
                )
        for util in gp.utilities:
            files.append((f"{app_root.name}/Sources/Utilities/{_safe_file_name(util.name)}.swift", util.code))

        manifest_files = []
        for rel_path, content in sorted(files):
            target = out / rel_path
            target.parent.mkdir(parents=True, exist_ok=True)
            data = content.encode("utf-8")
            target.write_bytes(data)
            manifest_files.append(
                {"path": rel_path, "sha256": hashlib.sha256(data).hexdigest(), "bytes": len(data)}
            )
        manifest = {"schemaVersion": 1, "appName": app_root.name, "files": manifest_files}
        (out / MANIFEST_NAME).write_text(dumps_canonical(manifest), encoding="utf-8")
    except OSError as exc:
        raise EngineError("io_error", f"cannot write export to {out}: {exc}", path=str(out)) from exc
    return manifest


def archive_export(out_dir: str | Path) -> bytes:
    """Deterministic zip of an exported directory (fixed timestamps)."""
    out = Path(out_dir)
    buffer = io.BytesIO()
    with zipfile.ZipFile(buffer, "w", zipfile.ZIP_DEFLATED) as zf:
        for path in sorted(p for p in out.rglob("*") if p.is_file()):
            info = zipfile.ZipInfo(str(path.relative_to(out)), date_time=(1980, 1, 1, 0, 0, 0))
            info.external_attr = 0o644 << 16
            zf.writestr(info, path.read_bytes())
    return buffer.getvalue()


# --------------------------------------------------------------------------
# Initial generation
# --------------------------------------------------------------------------


def initial_generate(
    provider: Provider,
    first_message: str,
    *,
    parallel: bool = True,
    on_step: StepCallback | None = None,
) -> Project:
    """Build the first project from the first chat message.

    Sequence: storyboard, design scaffold, data model, navigation plan,
    then every skeleton concurrently (each given the navigation plan). The
    navigation plan steers only this step; it is recorded in the step log
    and then dropped. Any stage failure aborts with no partial project.
    """
    if not first_message.strip():
        raise EngineError("empty_request", "first message is empty")

    steps: list[ExecutedStep] = []

    def record(stage: str, target: str, call_id: str | None, started: str, ended: str | None = None) -> None:
        step = ExecutedStep(stage, target, started, ended or now_iso(), call_id)
        steps.append(step)
        if on_step is not None:
            on_step(step)

    started = now_iso()
    template = load_template("initial_storyboard")
    prompt = render_prompt(template, {"request": first_message})

    def parse_sb(value: Any) -> Storyboard:
        candidate, _ = storyboard_from_value(value, lenient=True)
        report = validate_storyboard(candidate)
        if not report.ok:
            raise EngineError("schema_error", report.summary(), report=report)
        return candidate

    sb, calls = complete_json(provider, prompt, parse_sb)
    record("storyboard", "-", calls[-1].call_id, started)

    started = now_iso()
    scaffold = generate_design_scaffold(provider, first_message)
    record("plan", "design_scaffold", provider.transcript[-1].call_id, started)

    started = now_iso()
    dm_template = load_template("data_model_mod")
    dm_prompt = render_prompt(
        dm_template,
        {
            "storyboard": serialize_ir(sb),
            "dataModel": serialize_ir(DataModel()),
            "change": f"Create the initial data model for this app.\nThe app: {first_message}",
        },
    )

    def parse_dm(value: Any) -> DataModel:
        candidate = data_model_from_value(value)
        report = validate_data_model(candidate)
        if not report.ok:
            raise EngineError("schema_error", report.summary(), report=report)
        return candidate

    dm, calls = complete_json(provider, dm_prompt, parse_dm)
    record("data_model", "-", calls[-1].call_id, started)

    started = now_iso()
    nav_plan = generate_navigation_plan(provider, sb)
    record("plan", "navigation_plan", provider.transcript[-1].call_id, started)

    nav_text = dumps_canonical(nav_plan.to_json_value())
    skeleton_template = load_template("skeleton_mod")
    jobs = []
    for node in sorted(sb.nodes, key=lambda n: n.swift_ui_view_name):
        view_name = node.swift_ui_view_name

        def job(v: str = view_name, n: int = node.id):
            prompt = render_prompt(
                skeleton_template,
                {
                    "storyboard": serialize_ir(sb),
                    "dataModel": serialize_ir(dm),
                    "skeleton": "(none - create this skeleton from scratch)",
                    "navigationPlan": nav_text,
                    "change": f"Create the initial GUI skeleton for screen {v}.",
                },
            )

            def parse(value: Any):
                skel = skeleton_from_value(value, lenient=True)
                if skel.view_name != v:
                    raise EngineError("schema_error", f"skeleton must be for {v!r}, got {skel.view_name!r}")
                return replace(skel, node_id=n)

            parsed, calls = complete_json(provider, prompt, parse)
            return parsed, calls[-1].call_id

        jobs.append((view_name, job))

    skeletons = {}
    for view_name, skel, call_id, job_started, job_ended in run_skeleton_calls(jobs, parallel):
        skeletons[skel.node_id] = skel
        record("skeleton", view_name, call_id, job_started, job_ended)

    project = Project(
        storyboard=sb,
        data_model=dm,
        skeletons=skeletons,
        design_scaffold=scaffold,
        history=tuple(steps),
    )
    report = project.validate()
    if not report.ok:
        raise EngineError(
            "stage_output_invalid",
            f"initial generation produced an invalid project: {report.summary()}",
            stage="commit",
            report=report,
        )
    return project
