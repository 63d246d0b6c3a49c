"""HTTP session service: chat, IR access, generation, export, reporting.

Each session is persisted as a directory of the canonical IR files plus
``chat.jsonl`` and ``session.log.jsonl``, written after every mutation, so
a restart reloads the exact pre-crash state. One mutating operation runs
per session at a time (concurrent attempts get 409); reads return the last
committed state without blocking. Progress is pushed per executed step
over a server-sent-event channel.
"""

from __future__ import annotations

import json
import shutil
import threading
import uuid
from dataclasses import dataclass, replace
from difflib import unified_diff
from pathlib import Path
from tempfile import TemporaryDirectory
from typing import Any, Iterator

import anyio
from fastapi import FastAPI, HTTPException, Request, Response
from fastapi.responses import StreamingResponse

from .analysis import check_navigation, summarize
from .codegen import archive_export, export_project, generate_code, initial_generate
from .design import GeneratedProject, parse_design_scaffold, parse_generated_project
from .errors import EngineError
from .gateway import Provider
from .ir.changes import reachable_nodes
from .ir.model import DataModel, GuiSkeleton, Storyboard
from .ir.serialize import (
    data_model_from_value,
    dumps_canonical,
    loads_strict,
    serialize_ir,
    skeleton_from_value,
    storyboard_from_value,
)
from .ir.validate import validate_data_model, validate_storyboard
from .planning import (
    ExecutedStep,
    Project,
    diff_project,
    execute_plan,
    now_iso,
    plan_request,
)

PHASE_EMPTY = "empty"
PHASE_EDITING = "editing"
PHASE_GENERATED = "generated"


@dataclass(frozen=True)
class ChatMessage:
    role: str
    text: str
    timestamp: str

    def to_json_value(self) -> dict[str, str]:
        return {"role": self.role, "text": self.text, "timestamp": self.timestamp}


class SessionState:
    """In-memory session: committed project state plus operation guards."""

    def __init__(self, session_id: str, created_at: str | None = None) -> None:
        self.id = session_id
        self.created_at = created_at or now_iso()
        self.project = Project()
        self.chat: list[ChatMessage] = []
        self.generated: GeneratedProject | None = None
        self.op_lock = threading.Lock()
        self.events: list[dict[str, Any]] = []
        self.events_cond = threading.Condition()
        self.busy = False

    @property
    def phase(self) -> str:
        if self.generated is not None:
            return PHASE_GENERATED
        if not self.project.storyboard.nodes:
            return PHASE_EMPTY
        return PHASE_EDITING

    def emit_step(self, step: ExecutedStep) -> None:
        with self.events_cond:
            self.events.append({"type": "step", "data": step.to_json_value()})
            self.events_cond.notify_all()

    def set_busy(self, value: bool) -> None:
        with self.events_cond:
            self.busy = value
            self.events_cond.notify_all()

    def summary(self) -> dict[str, Any]:
        sb = self.project.storyboard
        entry = sb.effective_entry_node_id
        reachable = reachable_nodes(sb, entry) if entry is not None else set()
        return {
            "id": self.id,
            "phase": self.phase,
            "createdAt": self.created_at,
            "nodeCount": len(sb.nodes),
            "entityCount": len(self.project.data_model.entities),
            "skeletonCount": len(self.project.skeletons),
            "entryNodeId": entry,
            "unreachableNodes": sorted(
                n.swift_ui_view_name for n in sb.nodes if n.id not in reachable
            ),
            "chat": [m.to_json_value() for m in self.chat],
        }


class SessionStore:
    """Directory-backed session persistence; one subdirectory per session."""

    def __init__(self, data_dir: str | Path) -> None:
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._sessions: dict[str, SessionState] = {}
        self._lock = threading.Lock()

    def create(self) -> SessionState:
        state = SessionState(uuid.uuid4().hex[:12])
        with self._lock:
            self._sessions[state.id] = state
        self.persist(state)
        return state

    def get(self, session_id: str) -> SessionState | None:
        with self._lock:
            if session_id in self._sessions:
                return self._sessions[session_id]
        state = self.load(session_id)
        if state is not None:
            with self._lock:
                self._sessions.setdefault(session_id, state)
                return self._sessions[session_id]
        return None

    def _dir(self, session_id: str) -> Path:
        return self.data_dir / session_id

    def persist(self, state: SessionState) -> None:
        root = self._dir(state.id)
        root.mkdir(parents=True, exist_ok=True)
        (root / "session.json").write_text(
            dumps_canonical(
                {"schemaVersion": 1, "id": state.id, "phase": state.phase, "createdAt": state.created_at}
            ),
            encoding="utf-8",
        )
        (root / "storyboard.json").write_text(serialize_ir(state.project.storyboard), encoding="utf-8")
        (root / "datamodel.json").write_text(serialize_ir(state.project.data_model), encoding="utf-8")
        skel_dir = root / "skeletons"
        if skel_dir.exists():
            shutil.rmtree(skel_dir)
        skel_dir.mkdir()
        for skel in state.project.skeleton_list():
            (skel_dir / f"{skel.view_name}.json").write_text(serialize_ir(skel), encoding="utf-8")
        scaffold_path = root / "scaffold.json"
        if state.project.design_scaffold is not None:
            scaffold_path.write_text(
                dumps_canonical(state.project.design_scaffold.to_json_value()), encoding="utf-8"
            )
        elif scaffold_path.exists():
            scaffold_path.unlink()
        generated_path = root / "generated.json"
        if state.generated is not None:
            generated_path.write_text(dumps_canonical(state.generated.to_json_value()), encoding="utf-8")
        elif generated_path.exists():
            generated_path.unlink()
        with (root / "chat.jsonl").open("w", encoding="utf-8") as fh:
            for message in state.chat:
                fh.write(json.dumps(message.to_json_value(), ensure_ascii=False) + "\n")
        with (root / "session.log.jsonl").open("w", encoding="utf-8") as fh:
            for step in state.project.history:
                fh.write(json.dumps(step.to_json_value(), ensure_ascii=False) + "\n")

    def load(self, session_id: str) -> SessionState | None:
        root = self._dir(session_id)
        meta_path = root / "session.json"
        if not meta_path.exists():
            return None
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        state = SessionState(session_id, created_at=meta.get("createdAt"))

        storyboard, _ = storyboard_from_value(
            json.loads((root / "storyboard.json").read_text(encoding="utf-8"))
        )
        data_model = data_model_from_value(
            json.loads((root / "datamodel.json").read_text(encoding="utf-8"))
        )
        skeletons: dict[int, GuiSkeleton] = {}
        skel_dir = root / "skeletons"
        if skel_dir.exists():
            for path in sorted(skel_dir.glob("*.json")):
                skel = skeleton_from_value(json.loads(path.read_text(encoding="utf-8")))
                skeletons[skel.node_id] = skel
        scaffold = None
        if (root / "scaffold.json").exists():
            scaffold = parse_design_scaffold(
                json.loads((root / "scaffold.json").read_text(encoding="utf-8"))
            )
        history: list[ExecutedStep] = []
        log_path = root / "session.log.jsonl"
        if log_path.exists():
            for line in log_path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    history.append(ExecutedStep.from_json_value(json.loads(line)))
        state.project = Project(
            storyboard=storyboard,
            data_model=data_model,
            skeletons=skeletons,
            design_scaffold=scaffold,
            history=tuple(history),
        )
        if (root / "generated.json").exists():
            value = json.loads((root / "generated.json").read_text(encoding="utf-8"))
            gp = parse_generated_project(value)
            if isinstance(value.get("scaffoldUsed"), dict):
                gp = replace(gp, scaffold_used=parse_design_scaffold(value["scaffoldUsed"]))
            state.generated = gp
        chat_path = root / "chat.jsonl"
        if chat_path.exists():
            for line in chat_path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    value = json.loads(line)
                    state.chat.append(
                        ChatMessage(
                            role=value.get("role", "user"),
                            text=value.get("text", ""),
                            timestamp=value.get("timestamp", ""),
                        )
                    )
        return state


# --------------------------------------------------------------------------
# HTTP app
# --------------------------------------------------------------------------


def _http_error(status: int, exc: EngineError) -> HTTPException:
    return HTTPException(status_code=status, detail=exc.to_json_value())


def _require_session(store: SessionStore, session_id: str) -> SessionState:
    state = store.get(session_id)
    if state is None:
        raise HTTPException(status_code=404, detail={"error": "unknown_session", "id": session_id})
    return state


class _OpGuard:
    """One in-flight mutating operation per session; 409 otherwise."""

    def __init__(self, state: SessionState) -> None:
        self.state = state

    def __enter__(self) -> SessionState:
        if not self.state.op_lock.acquire(blocking=False):
            raise HTTPException(
                status_code=409, detail={"error": "operation_in_progress", "id": self.state.id}
            )
        self.state.set_busy(True)
        return self.state

    def __exit__(self, *exc_info: Any) -> None:
        self.state.set_busy(False)
        self.state.op_lock.release()


def create_app(store: SessionStore, provider: Provider) -> FastAPI:
    app = FastAPI(title="appforge session service")

    def run_request(state: SessionState, text: str) -> dict[str, Any]:
        before = state.project
        try:
            if state.phase == PHASE_EMPTY:
                project = initial_generate(provider, text, on_step=state.emit_step)
            else:
                plan = plan_request(text, state.project, provider)
                project, _ = execute_plan(plan, state.project, provider, on_step=state.emit_step)
        except EngineError as exc:
            raise _http_error(422, exc)
        state.project = project
        state.generated = None
        diff = diff_project(before, project)
        reply = diff.summary()
        now = now_iso()
        state.chat.append(ChatMessage("user", text, now))
        state.chat.append(ChatMessage("assistant", reply, now_iso()))
        store.persist(state)
        new_steps = project.history[len(before.history) :]
        return {
            "reply": reply,
            "diff": diff.to_json_value(),
            "steps": [s.to_json_value() for s in new_steps],
            "phase": state.phase,
        }

    @app.post("/sessions")
    def create_session() -> dict[str, Any]:
        state = store.create()
        return state.summary()

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> dict[str, Any]:
        return _require_session(store, session_id).summary()

    @app.post("/sessions/{session_id}/messages")
    async def post_message(session_id: str, request: Request) -> dict[str, Any]:
        body = await request.json()
        text = str(body.get("text", "")) if isinstance(body, dict) else ""
        state = _require_session(store, session_id)

        def work() -> dict[str, Any]:
            with _OpGuard(state):
                if not text.strip():
                    raise _http_error(422, EngineError("empty_request", "message text is empty"))
                return run_request(state, text)

        return await anyio.to_thread.run_sync(work)

    def _ir_text(state: SessionState, kind: str, view: str | None = None) -> str:
        if kind == "storyboard":
            return serialize_ir(state.project.storyboard)
        if kind == "datamodel":
            return serialize_ir(state.project.data_model)
        if kind == "skeletons":
            for skel in state.project.skeletons.values():
                if skel.view_name == view:
                    return serialize_ir(skel)
            raise HTTPException(status_code=404, detail={"error": "unknown_skeleton", "view": view})
        raise HTTPException(status_code=404, detail={"error": "unknown_ir_kind", "kind": kind})

    @app.get("/sessions/{session_id}/ir/skeletons/{view}")
    def get_skeleton(session_id: str, view: str) -> Response:
        state = _require_session(store, session_id)
        return Response(content=_ir_text(state, "skeletons", view), media_type="application/json")

    @app.get("/sessions/{session_id}/ir/{kind}")
    def get_ir(session_id: str, kind: str) -> Response:
        state = _require_session(store, session_id)
        return Response(content=_ir_text(state, kind), media_type="application/json")

    def _parse_edit(state: SessionState, kind: str, body_text: str, view: str | None) -> str:
        """Validate an edited IR document; returns its canonical text."""
        try:
            value = loads_strict(body_text)
            if kind == "storyboard":
                sb, _ = storyboard_from_value(value)
                report = validate_storyboard(sb)
                if not report.ok:
                    raise EngineError("validation_failed", report.summary(), report=report)
                return serialize_ir(sb)
            if kind == "datamodel":
                dm = data_model_from_value(value)
                report = validate_data_model(dm)
                if not report.ok:
                    raise EngineError("validation_failed", report.summary(), report=report)
                return serialize_ir(dm)
            if kind == "skeletons":
                skel = skeleton_from_value(value)
                if view is not None and skel.view_name != view:
                    raise EngineError(
                        "validation_failed", f"skeleton must keep view name {view!r}", path="viewName"
                    )
                return serialize_ir(skel)
        except EngineError as exc:
            raise _http_error(422, exc)
        raise HTTPException(status_code=404, detail={"error": "unknown_ir_kind", "kind": kind})

    async def _put_ir(session_id: str, kind: str, request: Request, view: str | None) -> dict[str, Any]:
        state = _require_session(store, session_id)
        body_text = (await request.body()).decode("utf-8")

        def work() -> dict[str, Any]:
            with _OpGuard(state):
                edited = _parse_edit(state, kind, body_text, view)
                current = _ir_text(state, kind, view)
                if edited == current:
                    return {"reply": "no changes", "diff": diff_project(state.project, state.project).to_json_value(), "steps": [], "phase": state.phase}
                diff_text = "".join(
                    unified_diff(
                        current.splitlines(keepends=True),
                        edited.splitlines(keepends=True),
                        fromfile=f"current/{kind}",
                        tofile=f"edited/{kind}",
                    )
                )
                request_text = (
                    f"The user directly edited the {kind} IR text. "
                    f"Apply exactly these provided changes:\n{diff_text}"
                )
                return run_request(state, request_text)

        return await anyio.to_thread.run_sync(work)

    @app.put("/sessions/{session_id}/ir/skeletons/{view}")
    async def put_skeleton(session_id: str, view: str, request: Request) -> dict[str, Any]:
        return await _put_ir(session_id, "skeletons", request, view)

    @app.put("/sessions/{session_id}/ir/{kind}")
    async def put_ir(session_id: str, kind: str, request: Request) -> dict[str, Any]:
        return await _put_ir(session_id, kind, request, None)

    @app.post("/sessions/{session_id}/generate")
    def generate(session_id: str) -> dict[str, Any]:
        state = _require_session(store, session_id)
        with _OpGuard(state):
            if state.phase == PHASE_EMPTY:
                raise _http_error(422, EngineError("empty_project", "nothing to generate yet"))
            started = now_iso()
            try:
                gp = generate_code(provider, state.project)
            except EngineError as exc:
                raise _http_error(422, exc)
            step = ExecutedStep("codegen", "-", started, now_iso(), provider.transcript[-1].call_id)
            state.emit_step(step)
            state.project = Project(
                storyboard=state.project.storyboard,
                data_model=state.project.data_model,
                skeletons=state.project.skeletons,
                design_scaffold=state.project.design_scaffold,
                history=state.project.history + (step,),
            )
            state.generated = gp
            store.persist(state)
            return {
                "views": [
                    {
                        "id": v.id,
                        "name": v.name,
                        "swiftUIViewName": v.swift_ui_view_name,
                        "lines": len(v.view_code.splitlines()),
                    }
                    for v in gp.views
                ],
                "utilities": [u.name for u in gp.utilities],
                "metrics": {"viewCount": gp.metrics.view_count, "linesOfCode": gp.metrics.lines_of_code},
                "phase": state.phase,
            }

    @app.get("/sessions/{session_id}/export")
    def export(session_id: str) -> Response:
        state = _require_session(store, session_id)
        if state.generated is None:
            raise _http_error(422, EngineError("not_generated", "generate code before exporting"))
        with TemporaryDirectory() as tmp:
            export_project(state.generated, tmp, data_model=state.project.data_model)
            payload = archive_export(tmp)
        return Response(
            content=payload,
            media_type="application/zip",
            headers={"Content-Disposition": f'attachment; filename="{session_id}.zip"'},
        )

    @app.get("/sessions/{session_id}/report")
    def report(session_id: str) -> dict[str, Any]:
        state = _require_session(store, session_id)
        if state.generated is None:
            raise _http_error(422, EngineError("not_generated", "generate code before checking"))
        findings = check_navigation(state.generated, state.project.storyboard)
        return summarize(findings).to_json_value()

    @app.get("/sessions/{session_id}/events")
    def events(session_id: str) -> StreamingResponse:
        state = _require_session(store, session_id)

        def stream() -> Iterator[str]:
            cursor = 0
            while True:
                with state.events_cond:
                    while cursor >= len(state.events) and state.busy:
                        state.events_cond.wait(timeout=0.5)
                    pending = state.events[cursor:]
                    cursor = len(state.events)
                    still_busy = state.busy
                for event in pending:
                    yield f"event: {event['type']}\ndata: {json.dumps(event['data'])}\n\n"
                if not still_busy and cursor >= len(state.events):
                    return

        return StreamingResponse(stream(), media_type="text/event-stream")

    return app
