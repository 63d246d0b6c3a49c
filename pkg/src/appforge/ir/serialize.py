"""Canonical JSON for the three IRs.

The canonical form is what gets persisted (``storyboard.json``,
``datamodel.json``, ``skeletons/<viewName>.json``): schemaVersion 1, fixed
key order, two-space indent, sorted element attributes. Serialization of
equal values is byte-equal, so text diffs track structural diffs.

Parsing is shape-tolerant where model output is known to wander (wrapper
envelopes, shorthand elements, fields given as a name->type map) but always
lands on the same in-memory value, so serialize(parse(text)) is a fixed
point. Hard violations raise ``parse_error`` / ``schema_error``.
"""

from __future__ import annotations

import json
from typing import Any, Union

from ..errors import EngineError
from .changes import derive_view_name
from .model import (
    DataEntity,
    DataModel,
    EntityField,
    Finding,
    GuiSkeleton,
    NavigateAction,
    SEVERITY_WARNING,
    SkeletonElement,
    Storyboard,
    StoryboardNode,
    is_valid_view_name,
)

SCHEMA_VERSION = 1

IRValue = Union[Storyboard, DataModel, GuiSkeleton]


def dumps_canonical(value: Any) -> str:
    return json.dumps(value, indent=2, ensure_ascii=False) + "\n"


def loads_strict(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise EngineError(
            "parse_error",
            f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}",
            offset=exc.pos,
            path="$",
        ) from exc


def _schema_error(path: str, message: str) -> EngineError:
    return EngineError("schema_error", f"{path}: {message}", path=path)


def _require(value: Any, kind: type, path: str, what: str) -> Any:
    if kind is int and isinstance(value, bool):
        raise _schema_error(path, f"expected {what}, got a boolean")
    if not isinstance(value, kind):
        raise _schema_error(path, f"expected {what}, got {type(value).__name__}")
    return value


# --------------------------------------------------------------------------
# Storyboard
# --------------------------------------------------------------------------


def storyboard_to_value(sb: Storyboard) -> dict[str, Any]:
    value: dict[str, Any] = {
        "schemaVersion": SCHEMA_VERSION,
        "description": sb.description,
    }
    if sb.entry_node_id is not None:
        value["entryNodeId"] = sb.entry_node_id
    value["nodes"] = [
        {
            "id": n.id,
            "name": n.name,
            "description": n.description,
            "swiftUIViewName": n.swift_ui_view_name,
            "outgoingEdges": list(n.outgoing_edges),
        }
        for n in sb.nodes
    ]
    return value


def _unwrap(value: Any, key: str) -> Any:
    if isinstance(value, dict) and key in value and isinstance(value[key], dict):
        return value[key]
    return value


def storyboard_from_value(value: Any, *, lenient: bool = False) -> tuple[Storyboard, list[Finding]]:
    """Build a storyboard from parsed JSON.

    With ``lenient`` set, ids of 0 (or missing) are allocated fresh and
    colliding or invalid view names are rewritten, each with a warning;
    strict parsing reports those as schema errors instead.
    """
    value = _unwrap(value, "storyboard")
    _require(value, dict, "$", "a storyboard object")
    version = value.get("schemaVersion", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise _schema_error("schemaVersion", f"unsupported schema version {version!r}")
    if "nodes" not in value:
        raise _schema_error("nodes", "missing required field")
    raw_nodes = _require(value["nodes"], list, "nodes", "a list of nodes")
    description = _require(value.get("description", ""), str, "description", "a string")

    warnings: list[Finding] = []
    nodes: list[StoryboardNode] = []
    used_ids: set[int] = set()
    for raw in raw_nodes:
        if isinstance(raw, dict) and isinstance(raw.get("id"), int) and raw["id"] > 0:
            used_ids.add(raw["id"])

    for i, raw in enumerate(raw_nodes):
        path = f"nodes[{i}]"
        _require(raw, dict, path, "a node object")
        node_id = raw.get("id", 0 if lenient else None)
        if node_id is None:
            raise _schema_error(f"{path}.id", "missing required field")
        node_id = _require(node_id, int, f"{path}.id", "an integer id")
        if node_id <= 0:
            if not lenient:
                raise _schema_error(f"{path}.id", f"id must be positive, got {node_id}")
            node_id = max(used_ids, default=0) + 1
            used_ids.add(node_id)
            warnings.append(
                Finding(SEVERITY_WARNING, "assigned_node_id", f"{path}.id", f"assigned fresh id {node_id}")
            )
        name = _require(raw.get("name", ""), str, f"{path}.name", "a string")
        node_description = _require(raw.get("description", ""), str, f"{path}.description", "a string")
        view_name = _require(
            raw.get("swiftUIViewName", ""), str, f"{path}.swiftUIViewName", "a string"
        )
        edges_raw = _require(raw.get("outgoingEdges", []), list, f"{path}.outgoingEdges", "a list")
        edges = tuple(
            _require(t, int, f"{path}.outgoingEdges[{j}]", "an integer node id")
            for j, t in enumerate(edges_raw)
        )
        nodes.append(
            StoryboardNode(
                id=node_id,
                name=name,
                description=node_description,
                swift_ui_view_name=view_name,
                outgoing_edges=edges,
            )
        )

    if lenient:
        taken: set[str] = set()
        for i, node in enumerate(nodes):
            view_name = node.swift_ui_view_name
            if not is_valid_view_name(view_name) or view_name in taken:
                fixed = derive_view_name(view_name or node.name, taken)
                warnings.append(
                    Finding(
                        SEVERITY_WARNING,
                        "renamed_view",
                        f"nodes[{i}].swiftUIViewName",
                        f"view name {view_name!r} rewritten to {fixed!r}",
                    )
                )
                nodes[i] = StoryboardNode(
                    id=node.id,
                    name=node.name,
                    description=node.description,
                    swift_ui_view_name=fixed,
                    outgoing_edges=node.outgoing_edges,
                )
                view_name = fixed
            taken.add(view_name)

    entry = value.get("entryNodeId")
    if entry is not None:
        entry = _require(entry, int, "entryNodeId", "an integer node id")
    return Storyboard(description=description, nodes=tuple(nodes), entry_node_id=entry), warnings


# --------------------------------------------------------------------------
# Data model
# --------------------------------------------------------------------------


def data_model_to_value(dm: DataModel) -> dict[str, Any]:
    return {
        "schemaVersion": SCHEMA_VERSION,
        "entities": [
            {
                "name": e.name,
                "doc": e.doc,
                "fields": [{"name": f.name, "type": f.type_text} for f in e.fields],
                "sourceText": e.source_text,
            }
            for e in dm.entities
        ],
    }


def _fields_from_value(raw: Any, path: str) -> tuple[EntityField, ...]:
    fields: list[EntityField] = []
    if isinstance(raw, dict):
        for name, type_text in raw.items():
            fields.append(EntityField(str(name), str(type_text)))
        return tuple(fields)
    _require(raw, list, path, "a list of fields")
    for j, item in enumerate(raw):
        fpath = f"{path}[{j}]"
        if isinstance(item, dict):
            name = _require(item.get("name", ""), str, f"{fpath}.name", "a string")
            type_text = item.get("type", item.get("fieldType", ""))
            fields.append(EntityField(name, str(type_text)))
        elif isinstance(item, (list, tuple)) and len(item) == 2:
            fields.append(EntityField(str(item[0]), str(item[1])))
        else:
            raise _schema_error(fpath, "expected a field object or [name, type] pair")
    return tuple(fields)


def data_model_from_value(value: Any) -> DataModel:
    value = _unwrap(value, "dataModel")
    _require(value, dict, "$", "a data model object")
    version = value.get("schemaVersion", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise _schema_error("schemaVersion", f"unsupported schema version {version!r}")
    if "entities" not in value:
        raise _schema_error("entities", "missing required field")
    raw_entities = _require(value["entities"], list, "entities", "a list of entities")
    entities: list[DataEntity] = []
    for i, raw in enumerate(raw_entities):
        path = f"entities[{i}]"
        _require(raw, dict, path, "an entity object")
        name = _require(raw.get("name", ""), str, f"{path}.name", "a string")
        doc = str(raw.get("doc", raw.get("description", "")))
        fields = _fields_from_value(raw.get("fields", []), f"{path}.fields")
        source = str(raw.get("sourceText", raw.get("source", "")))
        entities.append(DataEntity(name=name, doc=doc, fields=fields, source_text=source))
    return DataModel(entities=tuple(entities))


# --------------------------------------------------------------------------
# GUI skeletons
# --------------------------------------------------------------------------

_ACTION_KEYS = ("OnTap", "Action")


def _action_to_value(action: str | NavigateAction) -> Any:
    if isinstance(action, NavigateAction):
        return {"Navigate": {"Destination": action.destination}}
    return action


def element_to_value(el: SkeletonElement) -> dict[str, Any]:
    body: dict[str, Any] = {}
    for key in sorted(el.attributes):
        body[key] = el.attributes[key]
    if el.action is not None:
        body["OnTap"] = _action_to_value(el.action)
    if el.children:
        body["Elements"] = [element_to_value(c) for c in el.children]
    return {el.kind: body}


def _action_from_value(raw: Any, path: str) -> str | NavigateAction:
    if isinstance(raw, str):
        return raw
    if isinstance(raw, dict) and "Navigate" in raw:
        nav = raw["Navigate"]
        if isinstance(nav, str):
            return NavigateAction(nav)
        if isinstance(nav, dict) and isinstance(nav.get("Destination"), str):
            return NavigateAction(nav["Destination"])
    raise _schema_error(path, "action must be a string or a Navigate record")


def _attr_text(raw: Any) -> str:
    if isinstance(raw, str):
        return raw
    if isinstance(raw, bool):
        return "true" if raw else "false"
    if isinstance(raw, (int, float)):
        return json.dumps(raw)
    return json.dumps(raw, ensure_ascii=False, sort_keys=True)


def element_from_value(value: Any, path: str = "layout") -> SkeletonElement:
    _require(value, dict, path, "an element object")
    if len(value) != 1:
        raise _schema_error(path, f"expected one element kind, got {sorted(value)!r}")
    kind, body = next(iter(value.items()))
    if isinstance(body, str):
        return SkeletonElement(kind=kind, attributes={"Value": body})
    _require(body, dict, f"{path}.{kind}", "an element body")

    attributes: dict[str, str] = {}
    action: str | NavigateAction | None = None
    children: list[SkeletonElement] = []
    for key, raw in body.items():
        kpath = f"{path}.{kind}.{key}"
        if key == "Elements":
            _require(raw, list, kpath, "a list of elements")
            children.extend(element_from_value(c, f"{kpath}[{j}]") for j, c in enumerate(raw))
        elif key in _ACTION_KEYS:
            action = _action_from_value(raw, kpath)
        elif isinstance(raw, dict):
            # Nested kind-keyed object: a child element written without an
            # Elements wrapper (the common shorthand for Navigation bars).
            children.append(element_from_value({key: raw}, kpath))
        elif isinstance(raw, list):
            attributes[key] = _attr_text(raw)
        else:
            attributes[key] = _attr_text(raw)
    return SkeletonElement(kind=kind, attributes=attributes, action=action, children=tuple(children))


def skeleton_to_value(skel: GuiSkeleton) -> dict[str, Any]:
    return {
        "schemaVersion": SCHEMA_VERSION,
        "viewName": skel.view_name,
        "nodeId": skel.node_id,
        "stateVariables": list(skel.state_variables),
        "layout": element_to_value(skel.layout),
    }


def skeleton_from_value(value: Any, *, lenient: bool = False) -> GuiSkeleton:
    _require(value, dict, "$", "a skeleton object")
    body = value.get("guiSkeleton")
    if isinstance(body, dict):
        # Wrapper form: viewName and id outside, StateVariables/Layout inside.
        view_name = _require(value.get("viewName", ""), str, "viewName", "a string")
        node_id = value.get("id", 0)
        state_raw = body.get("StateVariables", body.get("stateVariables", []))
        layout_raw = body.get("Layout", body.get("layout"))
    else:
        version = value.get("schemaVersion", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise _schema_error("schemaVersion", f"unsupported schema version {version!r}")
        view_name = _require(
            value.get("viewName", value.get("view_name", "")), str, "viewName", "a string"
        )
        node_id = value.get("nodeId", value.get("id", 0))
        state_raw = value.get("stateVariables", value.get("StateVariables", []))
        layout_raw = value.get("layout", value.get("Layout"))

    if not view_name:
        raise _schema_error("viewName", "missing required field")
    node_id = _require(node_id, int, "nodeId", "an integer node id")
    if node_id <= 0 and not lenient:
        raise _schema_error("nodeId", f"id must be positive, got {node_id}")
    _require(state_raw, list, "stateVariables", "a list of names")
    state = tuple(str(s) for s in state_raw)
    if layout_raw is None:
        raise _schema_error("layout", "missing required field")
    _require(layout_raw, dict, "layout", "an element object")
    if len(layout_raw) == 1:
        layout = element_from_value(layout_raw, "layout")
    else:
        # Several top-level kinds: wrap them under one main container.
        layout = SkeletonElement(
            kind="MainContainer",
            children=tuple(
                element_from_value({k: v}, f"layout.{k}") for k, v in layout_raw.items()
            ),
        )
    return GuiSkeleton(view_name=view_name, node_id=node_id, state_variables=state, layout=layout)


# --------------------------------------------------------------------------
# Dispatch
# --------------------------------------------------------------------------

KIND_STORYBOARD = "storyboard"
KIND_DATAMODEL = "datamodel"
KIND_SKELETON = "skeleton"


def serialize_ir(x: IRValue) -> str:
    """Canonical JSON text for any of the three IR value types."""
    if isinstance(x, Storyboard):
        return dumps_canonical(storyboard_to_value(x))
    if isinstance(x, DataModel):
        return dumps_canonical(data_model_to_value(x))
    if isinstance(x, GuiSkeleton):
        return dumps_canonical(skeleton_to_value(x))
    raise EngineError("schema_error", f"not an IR value: {type(x).__name__}")


def deserialize_ir(text: str, kind: str) -> IRValue:
    """Parse canonical (or response-shaped) JSON text into an IR value."""
    value = loads_strict(text)
    if kind == KIND_STORYBOARD:
        sb, _ = storyboard_from_value(value)
        return sb
    if kind == KIND_DATAMODEL:
        return data_model_from_value(value)
    if kind == KIND_SKELETON:
        return skeleton_from_value(value)
    raise EngineError("schema_error", f"unknown IR kind {kind!r}")
