"""Request decomposition and cascading plan execution.

A user request becomes a :class:`ChangePlan` of atomic operations, which is
validated before anything runs. Execution then walks the dependency order:
storyboard first, then the data model, then the affected GUI skeletons
(independent skeletons run concurrently and are joined). Commits are
all-or-nothing: any stage failure raises and the caller's project value is
untouched.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from typing import Any, Callable, Mapping

from .design import DesignScaffold
from .errors import EngineError
from .gateway import Provider, complete_json, load_template, render_prompt
from .ir.changes import (
    AddConnection,
    AddScreen,
    RemoveConnection,
    RemoveScreen,
    apply_storyboard_change,
)
from .ir.model import (
    DataModel,
    Finding,
    GuiSkeleton,
    SEVERITY_ERROR,
    Storyboard,
    ValidationReport,
    is_valid_view_name,
)
from .ir.serialize import (
    data_model_from_value,
    serialize_ir,
    skeleton_from_value,
    storyboard_from_value,
)
from .ir.validate import validate_data_model, validate_project, validate_storyboard

CHANGE_TYPES = ("storyboard", "dataModel", "guiSkeleton", "mixed")

StepCallback = Callable[["ExecutedStep"], None]


def now_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="microseconds")


# --------------------------------------------------------------------------
# Change plan
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ScreenRef:
    id: int
    name: str = ""


@dataclass(frozen=True)
class ViewFileRef:
    view_name: str
    id: int = 0


@dataclass(frozen=True)
class Connection:
    from_id: int
    to_id: int


@dataclass(frozen=True)
class StoryboardChanges:
    add_screens: tuple[ScreenRef, ...] = ()
    remove_screens: tuple[ScreenRef, ...] = ()
    add_connections: tuple[Connection, ...] = ()
    remove_connections: tuple[Connection, ...] = ()

    @property
    def empty(self) -> bool:
        return not (
            self.add_screens or self.remove_screens or self.add_connections or self.remove_connections
        )


@dataclass(frozen=True)
class GuiSkeletonChanges:
    files_to_modify: tuple[ViewFileRef, ...] = ()
    new_files_to_create: tuple[ViewFileRef, ...] = ()
    files_to_delete: tuple[ViewFileRef, ...] = ()

    @property
    def empty(self) -> bool:
        return not (self.files_to_modify or self.new_files_to_create or self.files_to_delete)


@dataclass(frozen=True)
class DataModelChanges:
    files_to_modify: tuple[ViewFileRef, ...] = ()


@dataclass(frozen=True)
class ChangePlan:
    """Decomposition of one request into atomic IR operations."""

    change_type: str = "mixed"
    storyboard_changes: StoryboardChanges = StoryboardChanges()
    gui_skeleton_changes: GuiSkeletonChanges = GuiSkeletonChanges()
    data_model_changes: DataModelChanges = DataModelChanges()
    summary: str = ""

    @property
    def empty(self) -> bool:
        return (
            self.storyboard_changes.empty
            and self.gui_skeleton_changes.empty
            and not self.data_model_changes.files_to_modify
        )

    def to_json_value(self) -> dict[str, Any]:
        return {
            "changeType": self.change_type,
            "storyboardChanges": {
                "addScreens": [{"id": s.id, "name": s.name} for s in self.storyboard_changes.add_screens],
                "removeScreens": [
                    {"id": s.id, "name": s.name} for s in self.storyboard_changes.remove_screens
                ],
                "addConnections": [
                    {"from": c.from_id, "to": c.to_id} for c in self.storyboard_changes.add_connections
                ],
                "removeConnections": [
                    {"from": c.from_id, "to": c.to_id} for c in self.storyboard_changes.remove_connections
                ],
            },
            "guiSkeletonChanges": {
                "filesToModify": [
                    {"swiftUIViewName": f.view_name, "id": f.id}
                    for f in self.gui_skeleton_changes.files_to_modify
                ],
                "newFilesToCreate": [
                    {"swiftUIViewName": f.view_name, "id": f.id}
                    for f in self.gui_skeleton_changes.new_files_to_create
                ],
                "filesToDelete": [
                    {"swiftUIViewName": f.view_name, "id": f.id}
                    for f in self.gui_skeleton_changes.files_to_delete
                ],
            },
            "dataModelChanges": {
                "filesToModify": [
                    {"swiftUIViewName": f.view_name, "id": f.id}
                    for f in self.data_model_changes.files_to_modify
                ]
            },
            "technicalDescription": {"summary": self.summary},
        }


def _schema_error(path: str, message: str) -> EngineError:
    return EngineError("schema_error", f"{path}: {message}", path=path)


def _screen_refs(raw: Any, path: str) -> tuple[ScreenRef, ...]:
    if raw is None:
        return ()
    if not isinstance(raw, list):
        raise _schema_error(path, "expected a list")
    refs = []
    for i, item in enumerate(raw):
        if not isinstance(item, dict) or not isinstance(item.get("id"), int):
            raise _schema_error(f"{path}[{i}]", "expected an object with an integer id")
        refs.append(ScreenRef(id=item["id"], name=str(item.get("name", ""))))
    return tuple(refs)


def _file_refs(raw: Any, path: str) -> tuple[ViewFileRef, ...]:
    if raw is None:
        return ()
    if not isinstance(raw, list):
        raise _schema_error(path, "expected a list")
    refs = []
    for i, item in enumerate(raw):
        if not isinstance(item, dict):
            raise _schema_error(f"{path}[{i}]", "expected a file reference object")
        name = item.get("swiftUIViewName", item.get("name", ""))
        ref_id = item.get("id", 0)
        if isinstance(ref_id, bool) or not isinstance(ref_id, int):
            ref_id = 0
        refs.append(ViewFileRef(view_name=str(name), id=ref_id))
    return tuple(refs)


def _connections(raw: Any, path: str) -> tuple[Connection, ...]:
    if raw is None:
        return ()
    if not isinstance(raw, list):
        raise _schema_error(path, "expected a list")
    conns = []
    for i, item in enumerate(raw):
        if (
            not isinstance(item, dict)
            or not isinstance(item.get("from"), int)
            or not isinstance(item.get("to"), int)
        ):
            raise _schema_error(f"{path}[{i}]", "expected an object with integer from/to ids")
        conns.append(Connection(from_id=item["from"], to_id=item["to"]))
    return tuple(conns)


def _normalize_change_type(raw: Any) -> str:
    text = str(raw).replace("_", "").replace("-", "").lower()
    for known in CHANGE_TYPES:
        if text == known.lower():
            return known
    raise _schema_error("changeType", f"{raw!r} is not one of {CHANGE_TYPES}")


def parse_change_plan(value: Any) -> ChangePlan:
    if not isinstance(value, dict):
        raise _schema_error("$", "expected a plan object")
    sc = value.get("storyboardChanges", {}) or {}
    gc = value.get("guiSkeletonChanges", {}) or {}
    dc = value.get("dataModelChanges", {}) or {}
    tech = value.get("technicalDescription", {}) or {}
    if not isinstance(sc, dict) or not isinstance(gc, dict) or not isinstance(dc, dict):
        raise _schema_error("$", "change sections must be objects")
    return ChangePlan(
        change_type=_normalize_change_type(value.get("changeType", "mixed")),
        storyboard_changes=StoryboardChanges(
            add_screens=_screen_refs(sc.get("addScreens"), "storyboardChanges.addScreens"),
            remove_screens=_screen_refs(sc.get("removeScreens"), "storyboardChanges.removeScreens"),
            add_connections=_connections(sc.get("addConnections"), "storyboardChanges.addConnections"),
            remove_connections=_connections(
                sc.get("removeConnections"), "storyboardChanges.removeConnections"
            ),
        ),
        gui_skeleton_changes=GuiSkeletonChanges(
            files_to_modify=_file_refs(gc.get("filesToModify"), "guiSkeletonChanges.filesToModify"),
            new_files_to_create=_file_refs(
                gc.get("newFilesToCreate"), "guiSkeletonChanges.newFilesToCreate"
            ),
            files_to_delete=_file_refs(gc.get("filesToDelete"), "guiSkeletonChanges.filesToDelete"),
        ),
        data_model_changes=DataModelChanges(
            files_to_modify=_file_refs(dc.get("filesToModify"), "dataModelChanges.filesToModify")
        ),
        summary=str(tech.get("summary", "")) if isinstance(tech, dict) else str(tech),
    )


# --------------------------------------------------------------------------
# Project and step log
# --------------------------------------------------------------------------

STAGES = ("plan", "storyboard", "data_model", "skeleton", "codegen")


@dataclass(frozen=True)
class ExecutedStep:
    stage: str
    target: str = "-"
    started_at: str = ""
    ended_at: str = ""
    provider_call_id: str | None = None

    def to_json_value(self) -> dict[str, Any]:
        return {
            "stage": self.stage,
            "target": self.target,
            "startedAt": self.started_at,
            "endedAt": self.ended_at,
            "providerCallId": self.provider_call_id,
        }

    @staticmethod
    def from_json_value(value: dict[str, Any]) -> "ExecutedStep":
        return ExecutedStep(
            stage=str(value.get("stage", "")),
            target=str(value.get("target", "-")),
            started_at=str(value.get("startedAt", "")),
            ended_at=str(value.get("endedAt", "")),
            provider_call_id=value.get("providerCallId"),
        )


@dataclass(frozen=True)
class Project:
    """The full IR set plus execution history. Treat as immutable: every
    mutation path builds a new value and never touches ``skeletons``."""

    storyboard: Storyboard = Storyboard()
    data_model: DataModel = DataModel()
    skeletons: Mapping[int, GuiSkeleton] = field(default_factory=dict)
    design_scaffold: DesignScaffold | None = None
    history: tuple[ExecutedStep, ...] = ()

    def skeleton_list(self) -> list[GuiSkeleton]:
        return [self.skeletons[k] for k in sorted(self.skeletons)]

    def validate(self) -> ValidationReport:
        return validate_project(self.storyboard, self.data_model, self.skeleton_list())

    def content(self) -> tuple:
        """Structural content, ignoring the timestamped history."""
        return (
            self.storyboard,
            self.data_model,
            tuple(sorted(self.skeletons.items())),
            self.design_scaffold,
        )


@dataclass(frozen=True)
class ProjectDiff:
    added_nodes: tuple[str, ...] = ()
    removed_nodes: tuple[str, ...] = ()
    modified_nodes: tuple[str, ...] = ()
    added_entities: tuple[str, ...] = ()
    removed_entities: tuple[str, ...] = ()
    modified_entities: tuple[str, ...] = ()
    added_skeletons: tuple[str, ...] = ()
    removed_skeletons: tuple[str, ...] = ()
    modified_skeletons: tuple[str, ...] = ()
    scaffold_changed: bool = False

    @property
    def empty(self) -> bool:
        return not any(
            (
                self.added_nodes,
                self.removed_nodes,
                self.modified_nodes,
                self.added_entities,
                self.removed_entities,
                self.modified_entities,
                self.added_skeletons,
                self.removed_skeletons,
                self.modified_skeletons,
                self.scaffold_changed,
            )
        )

    def to_json_value(self) -> dict[str, Any]:
        return {
            "nodes": {
                "added": list(self.added_nodes),
                "removed": list(self.removed_nodes),
                "modified": list(self.modified_nodes),
            },
            "entities": {
                "added": list(self.added_entities),
                "removed": list(self.removed_entities),
                "modified": list(self.modified_entities),
            },
            "skeletons": {
                "added": list(self.added_skeletons),
                "removed": list(self.removed_skeletons),
                "modified": list(self.modified_skeletons),
            },
            "scaffoldChanged": self.scaffold_changed,
        }

    def summary(self) -> str:
        if self.empty:
            return "no changes"
        parts = []
        for label, added, removed, modified in (
            ("screens", self.added_nodes, self.removed_nodes, self.modified_nodes),
            ("entities", self.added_entities, self.removed_entities, self.modified_entities),
            ("skeletons", self.added_skeletons, self.removed_skeletons, self.modified_skeletons),
        ):
            bits = []
            if added:
                bits.append(f"added {', '.join(added)}")
            if removed:
                bits.append(f"removed {', '.join(removed)}")
            if modified:
                bits.append(f"modified {', '.join(modified)}")
            if bits:
                parts.append(f"{label}: " + "; ".join(bits))
        if self.scaffold_changed:
            parts.append("design scaffold updated")
        return " | ".join(parts)


def diff_project(before: Project, after: Project) -> ProjectDiff:
    """What changed between two project states, by screen and entity name."""

    def names(ids: set[int], sb_a: Storyboard, sb_b: Storyboard) -> tuple[str, ...]:
        out = []
        for node_id in sorted(ids):
            node = sb_a.node_by_id(node_id) or sb_b.node_by_id(node_id)
            out.append(node.swift_ui_view_name if node else str(node_id))
        return tuple(out)

    before_nodes = {n.id: n for n in before.storyboard.nodes}
    after_nodes = {n.id: n for n in after.storyboard.nodes}
    added_ids = set(after_nodes) - set(before_nodes)
    removed_ids = set(before_nodes) - set(after_nodes)
    modified_ids = {
        i for i in set(before_nodes) & set(after_nodes) if before_nodes[i] != after_nodes[i]
    }

    before_entities = {e.name: e for e in before.data_model.entities}
    after_entities = {e.name: e for e in after.data_model.entities}

    before_skels = {s.view_name: s for s in before.skeletons.values()}
    after_skels = {s.view_name: s for s in after.skeletons.values()}

    return ProjectDiff(
        added_nodes=names(added_ids, after.storyboard, before.storyboard),
        removed_nodes=names(removed_ids, before.storyboard, after.storyboard),
        modified_nodes=names(modified_ids, after.storyboard, before.storyboard),
        added_entities=tuple(sorted(set(after_entities) - set(before_entities))),
        removed_entities=tuple(sorted(set(before_entities) - set(after_entities))),
        modified_entities=tuple(
            sorted(
                n
                for n in set(before_entities) & set(after_entities)
                if before_entities[n] != after_entities[n]
            )
        ),
        added_skeletons=tuple(sorted(set(after_skels) - set(before_skels))),
        removed_skeletons=tuple(sorted(set(before_skels) - set(after_skels))),
        modified_skeletons=tuple(
            sorted(
                n for n in set(before_skels) & set(after_skels) if before_skels[n] != after_skels[n]
            )
        ),
        scaffold_changed=before.design_scaffold != after.design_scaffold,
    )


# --------------------------------------------------------------------------
# Plan validation
# --------------------------------------------------------------------------


def validate_plan(plan: ChangePlan, project: Project) -> ValidationReport:
    """Guard a plan before execution.

    Checks id references against the current storyboard (plus the screens
    the plan itself adds), create/delete conflicts, and the closure rules:
    removed screens must have their skeleton deleted, added screens must
    get a skeleton created or modified.
    """
    findings: list[Finding] = []
    sb = project.storyboard
    existing_ids = sb.node_ids()
    existing_views = sb.view_names()
    sc = plan.storyboard_changes
    gc = plan.gui_skeleton_changes
    added_ids = {s.id for s in sc.add_screens}
    added_names = {s.name for s in sc.add_screens if s.name}
    known_ids = existing_ids | added_ids

    def err(code: str, path: str, message: str) -> None:
        findings.append(Finding(SEVERITY_ERROR, code, path, message))

    for i, ref in enumerate(sc.remove_screens):
        if ref.id not in existing_ids:
            err(
                "unknown_node",
                f"storyboardChanges.removeScreens[{i}]",
                f"screen id {ref.id} does not exist",
            )
    for label, conns in (
        ("addConnections", sc.add_connections),
        ("removeConnections", sc.remove_connections),
    ):
        for i, conn in enumerate(conns):
            path = f"storyboardChanges.{label}[{i}]"
            if conn.from_id == conn.to_id:
                err("self_edge", path, f"connection {conn.from_id}->{conn.to_id} loops onto itself")
            for endpoint in (conn.from_id, conn.to_id):
                if endpoint not in known_ids:
                    err("unknown_node", path, f"node id {endpoint} does not exist")

    delete_names = {f.view_name for f in gc.files_to_delete}
    delete_ids = {f.id for f in gc.files_to_delete if f.id}
    create_names = {f.view_name for f in gc.new_files_to_create}
    modify_names = {f.view_name for f in gc.files_to_modify}
    modify_ids = {f.id for f in gc.files_to_modify if f.id}
    create_ids = {f.id for f in gc.new_files_to_create if f.id}

    for name in sorted(create_names & delete_names):
        err(
            "create_delete_conflict",
            "guiSkeletonChanges",
            f"view {name!r} appears in both newFilesToCreate and filesToDelete",
        )

    for i, ref in enumerate(sc.remove_screens):
        if ref.id not in delete_ids and ref.name not in delete_names:
            err(
                "closure_violation",
                f"storyboardChanges.removeScreens[{i}]",
                f"removed screen {ref.name or ref.id} is not listed in filesToDelete",
            )
    for i, ref in enumerate(sc.add_screens):
        covered = (
            ref.id in create_ids
            or ref.id in modify_ids
            or ref.name in create_names
            or ref.name in modify_names
        )
        if not covered:
            err(
                "closure_violation",
                f"storyboardChanges.addScreens[{i}]",
                f"added screen {ref.name or ref.id} has no skeleton in newFilesToCreate or filesToModify",
            )

    removed_names = {s.name for s in sc.remove_screens if s.name}
    removed_ids = {s.id for s in sc.remove_screens}
    for label, refs in (
        ("filesToModify", gc.files_to_modify),
        ("newFilesToCreate", gc.new_files_to_create),
        ("filesToDelete", gc.files_to_delete),
    ):
        for i, ref in enumerate(refs):
            known = (
                ref.view_name in existing_views
                or ref.view_name in added_names
                or ref.id in known_ids
                or (label == "filesToDelete" and (ref.view_name in removed_names or ref.id in removed_ids))
            )
            if not known:
                err(
                    "unknown_view",
                    f"guiSkeletonChanges.{label}[{i}]",
                    f"view {ref.view_name!r} (id {ref.id}) is not a screen",
                )

    return ValidationReport(tuple(findings))


# --------------------------------------------------------------------------
# Planning and execution
# --------------------------------------------------------------------------

_REPAIR_SUFFIX = (
    "\n\nThe previous plan was rejected:\n{findings}\nReply with a corrected plan as JSON only."
)


def _ir_bindings(project: Project) -> dict[str, str]:
    skeleton_texts = [serialize_ir(s) for s in project.skeleton_list()]
    return {
        "storyboard": serialize_ir(project.storyboard),
        "dataModel": serialize_ir(project.data_model),
        "skeletons": "\n".join(skeleton_texts) if skeleton_texts else "(none yet)",
    }


def plan_request(request_text: str, project: Project, provider: Provider) -> ChangePlan:
    """Decompose a request into a validated change plan.

    An invalid plan triggers one repair re-prompt carrying the findings; a
    second failure raises ``plan_invalid`` with the report attached.
    """
    if not request_text.strip():
        raise EngineError("empty_request", "request text is empty")
    template = load_template("plan")
    bindings = dict(_ir_bindings(project))
    bindings["request"] = request_text
    prompt = render_prompt(template, bindings)
    plan, _ = complete_json(provider, prompt, parse_change_plan)
    report = validate_plan(plan, project)
    if report.ok:
        return plan
    repair_prompt = prompt + _REPAIR_SUFFIX.format(findings=report.summary())
    try:
        plan2, _ = complete_json(provider, repair_prompt, parse_change_plan, retries=0)
    except EngineError:
        raise EngineError("plan_invalid", f"plan rejected: {report.summary()}", report=report)
    report2 = validate_plan(plan2, project)
    if report2.ok:
        return plan2
    raise EngineError("plan_invalid", f"plan rejected after repair: {report2.summary()}", report=report2)


def _stage_error(stage: str, report: ValidationReport, detail: str) -> EngineError:
    return EngineError(
        "stage_output_invalid", f"{stage} stage produced invalid output: {detail}", stage=stage, report=report
    )


def _wrap_stage(stage: str, exc: EngineError) -> EngineError:
    """Stage failures surface as stage_output_invalid; provider faults and
    timeouts pass through untouched."""
    if exc.code in ("provider_error", "timeout", "stage_output_invalid"):
        return exc
    report = exc.report if isinstance(exc.report, ValidationReport) else ValidationReport()
    return EngineError(
        "stage_output_invalid",
        f"{stage} stage produced invalid output: {exc.message}",
        stage=stage,
        report=report,
    )


def _apply_storyboard_stage(
    sb: Storyboard, plan: ChangePlan, provider: Provider
) -> tuple[Storyboard, dict[int, int], str | None]:
    sc = plan.storyboard_changes
    id_map: dict[int, int] = {}

    for conn in sc.remove_connections:
        if sb.node_by_id(conn.from_id) is not None and sb.node_by_id(conn.to_id) is not None:
            sb = apply_storyboard_change(sb, RemoveConnection(conn.from_id, conn.to_id))
    for ref in sc.remove_screens:
        sb = apply_storyboard_change(sb, RemoveScreen(ref.id))
    for ref in sc.add_screens:
        view_name = ref.name if is_valid_view_name(ref.name) else None
        sb = apply_storyboard_change(sb, AddScreen(name=ref.name, view_name=view_name))
        id_map[ref.id] = sb.nodes[-1].id
    for conn in sc.add_connections:
        from_id = id_map.get(conn.from_id, conn.from_id)
        to_id = id_map.get(conn.to_id, conn.to_id)
        source = sb.node_by_id(from_id)
        if source is not None and to_id in source.outgoing_edges:
            continue
        sb = apply_storyboard_change(sb, AddConnection(from_id, to_id))

    call_id: str | None = None
    if sc.add_screens:
        # Content-bearing addition: the model fills in names, descriptions,
        # and any edge adjustments for the new screens.
        template = load_template("storyboard_mod")
        added = ", ".join(s.name or str(id_map[s.id]) for s in sc.add_screens)
        prompt = render_prompt(
            template,
            {
                "storyboard": serialize_ir(sb),
                "change": f"{plan.summary}\nNew screens needing names and descriptions: {added}.",
            },
        )
        expected_ids = sb.node_ids()

        def parse(value: Any) -> Storyboard:
            candidate, _ = storyboard_from_value(value, lenient=True)
            report = validate_storyboard(candidate)
            if not report.ok:
                raise EngineError("schema_error", report.summary(), report=report)
            if candidate.node_ids() != expected_ids:
                raise EngineError(
                    "schema_error",
                    f"storyboard must keep node ids {sorted(expected_ids)}, got {sorted(candidate.node_ids())}",
                )
            return candidate

        sb, calls = complete_json(provider, prompt, parse)
        call_id = calls[-1].call_id
    return sb, id_map, call_id


def _run_data_model_stage(
    sb: Storyboard, dm: DataModel, plan: ChangePlan, provider: Provider
) -> tuple[DataModel, str]:
    template = load_template("data_model_mod")
    refs = ", ".join(f.view_name for f in plan.data_model_changes.files_to_modify) or "(unspecified)"
    prompt = render_prompt(
        template,
        {
            "storyboard": serialize_ir(sb),
            "dataModel": serialize_ir(dm),
            "change": f"{plan.summary}\nEntities to create or modify: {refs}.",
        },
    )

    def parse(value: Any) -> DataModel:
        candidate = data_model_from_value(value)
        report = validate_data_model(candidate)
        if not report.ok:
            raise EngineError("schema_error", report.summary(), report=report)
        return candidate

    parsed, calls = complete_json(provider, prompt, parse)
    return parsed, calls[-1].call_id


def _skeleton_change_text(summary: str, view_name: str, creating: bool) -> str:
    verb = "Create" if creating else "Update"
    return f"{summary}\n{verb} the GUI skeleton for screen {view_name}."


def _run_skeleton_call(
    sb: Storyboard,
    dm: DataModel,
    current: GuiSkeleton | None,
    view_name: str,
    node_id: int,
    change_text: str,
    navigation_plan_text: str,
    provider: Provider,
) -> tuple[GuiSkeleton, str]:
    template = load_template("skeleton_mod")
    prompt = render_prompt(
        template,
        {
            "storyboard": serialize_ir(sb),
            "dataModel": serialize_ir(dm),
            "skeleton": serialize_ir(current) if current else "(none - create this skeleton from scratch)",
            "navigationPlan": navigation_plan_text,
            "change": change_text,
        },
    )

    def parse(value: Any) -> GuiSkeleton:
        skel = skeleton_from_value(value, lenient=True)
        if skel.view_name != view_name:
            raise EngineError(
                "schema_error", f"skeleton must be for {view_name!r}, got {skel.view_name!r}"
            )
        return GuiSkeleton(
            view_name=view_name,
            node_id=node_id,
            state_variables=skel.state_variables,
            layout=skel.layout,
        )

    parsed, calls = complete_json(provider, prompt, parse)
    return parsed, calls[-1].call_id


def run_skeleton_calls(
    jobs: list[tuple[str, Callable[[], tuple[GuiSkeleton, str]]]],
    parallel: bool,
) -> list[tuple[str, GuiSkeleton, str, str, str]]:
    """Run per-view skeleton jobs, concurrently when allowed.

    Results come back sorted by view name so the committed step log is
    deterministic regardless of scheduling.
    """
    results: list[tuple[str, GuiSkeleton, str, str, str]] = []
    if parallel and len(jobs) > 1:
        def run(job: tuple[str, Callable[[], tuple[GuiSkeleton, str]]]):
            started = now_iso()
            skel, call_id = job[1]()
            return (job[0], skel, call_id, started, now_iso())

        with ThreadPoolExecutor(max_workers=min(8, len(jobs))) as pool:
            futures = [pool.submit(run, job) for job in jobs]
            errors: list[tuple[str, EngineError]] = []
            for job, future in zip(jobs, futures):
                try:
                    results.append(future.result())
                except EngineError as exc:
                    errors.append((job[0], exc))
            if errors:
                errors.sort(key=lambda e: e[0])
                raise errors[0][1]
    else:
        for view_name, job in jobs:
            started = now_iso()
            skel, call_id = job()
            results.append((view_name, skel, call_id, started, now_iso()))
    results.sort(key=lambda r: r[0])
    return results


def execute_plan(
    plan: ChangePlan,
    project: Project,
    provider: Provider,
    *,
    parallel: bool = True,
    on_step: StepCallback | None = None,
) -> tuple[Project, list[ExecutedStep]]:
    """Run a validated plan through the cascade and commit atomically.

    Stage order is fixed: storyboard, then data model, then skeletons.
    Any failure raises and leaves the input project value untouched; the
    committed project always validates with zero errors.
    """
    report = validate_plan(plan, project)
    if not report.ok:
        raise EngineError("plan_invalid", f"plan rejected: {report.summary()}", report=report)

    steps: list[ExecutedStep] = []

    def record(stage: str, target: str, call_id: str | None, started: str, ended: str | None = None) -> None:
        step = ExecutedStep(stage, target, started, ended or now_iso(), call_id)
        steps.append(step)
        if on_step is not None:
            on_step(step)

    record("plan", "-", None, now_iso())

    sb = project.storyboard
    dm = project.data_model
    id_map: dict[int, int] = {}

    if not plan.storyboard_changes.empty:
        started = now_iso()
        try:
            sb, id_map, call_id = _apply_storyboard_stage(sb, plan, provider)
        except EngineError as exc:
            raise _wrap_stage("storyboard", exc)
        record("storyboard", "-", call_id, started)

    if plan.data_model_changes.files_to_modify or plan.change_type == "dataModel":
        started = now_iso()
        try:
            dm, call_id = _run_data_model_stage(sb, dm, plan, provider)
        except EngineError as exc:
            raise _wrap_stage("data_model", exc)
        record("data_model", "-", call_id, started)

    skeletons = dict(project.skeletons)
    gc = plan.gui_skeleton_changes
    deleted_names = {f.view_name for f in gc.files_to_delete}
    skeletons = {
        node_id: skel
        for node_id, skel in skeletons.items()
        if skel.view_name not in deleted_names and sb.node_by_id(node_id) is not None
    }

    targets: dict[str, tuple[int, bool]] = {}
    for creating, refs in ((True, gc.new_files_to_create), (False, gc.files_to_modify)):
        for ref in refs:
            node = sb.node_by_view_name(ref.view_name)
            if node is None and ref.id:
                node = sb.node_by_id(id_map.get(ref.id, ref.id))
            if node is None:
                raise _stage_error(
                    "skeleton",
                    ValidationReport(),
                    f"view {ref.view_name!r} does not resolve to a screen after the storyboard stage",
                )
            if node.swift_ui_view_name not in targets:
                has_current = node.id in skeletons
                targets[node.swift_ui_view_name] = (node.id, creating and not has_current)

    jobs = []
    for view_name in sorted(targets):
        node_id, creating = targets[view_name]
        current = skeletons.get(node_id)
        jobs.append(
            (
                view_name,
                (
                    lambda v=view_name, n=node_id, cur=current, cr=creating: _run_skeleton_call(
                        sb,
                        dm,
                        cur,
                        v,
                        n,
                        _skeleton_change_text(plan.summary, v, cr),
                        "(not provided)",
                        provider,
                    )
                ),
            )
        )
    try:
        results = run_skeleton_calls(jobs, parallel)
    except EngineError as exc:
        raise _wrap_stage("skeleton", exc)
    for view_name, skel, call_id, started, ended in results:
        skeletons[skel.node_id] = skel
        record("skeleton", view_name, call_id, started, ended)

    result = replace(
        project,
        storyboard=sb,
        data_model=dm,
        skeletons=skeletons,
        history=project.history + tuple(steps),
    )
    final_report = result.validate()
    if not final_report.ok:
        raise _stage_error("commit", final_report, final_report.summary())
    return result, steps
