"""Structural validation for the three IRs, alone and as a set.

Validators never raise on malformed content: every violated invariant
becomes a finding, errors for broken invariants and warnings for hygiene
issues. Finding order is deterministic (owning node id, then code, then
path) so reports are diffable.
"""

from __future__ import annotations

import re
from typing import Iterable, Sequence

from .changes import reachable_nodes
from .model import (
    CONTAINER_KINDS,
    DataModel,
    Finding,
    GuiSkeleton,
    NavigateAction,
    SEVERITY_ERROR,
    SEVERITY_WARNING,
    SkeletonElement,
    Storyboard,
    ValidationReport,
    is_valid_view_name,
)

# Dotted data reference as written in element Value attributes:
# lowercase-first instance name, then a field name.
DATA_REF_RE = re.compile(r"^[a-z][A-Za-z0-9_]*\.[A-Za-z_][A-Za-z0-9_]*$")


def _sorted_report(entries: Iterable[tuple[int, Finding]]) -> ValidationReport:
    ordered = sorted(entries, key=lambda e: (e[0], e[1].code, e[1].path))
    return ValidationReport(tuple(f for _, f in ordered))


def validate_storyboard(sb: Storyboard) -> ValidationReport:
    """Check node ids, view names, and edge targets of one storyboard."""
    entries: list[tuple[int, Finding]] = []

    def err(node_id: int, code: str, path: str, message: str) -> None:
        entries.append((node_id, Finding(SEVERITY_ERROR, code, path, message)))

    def warn(node_id: int, code: str, path: str, message: str) -> None:
        entries.append((node_id, Finding(SEVERITY_WARNING, code, path, message)))

    if not sb.nodes:
        warn(-1, "empty_storyboard", "nodes", "storyboard has no screens")
        return _sorted_report(entries)

    ids = [n.id for n in sb.nodes]
    id_set = set(ids)
    seen_ids: set[int] = set()
    seen_views: dict[str, int] = {}
    for i, node in enumerate(sb.nodes):
        if node.id in seen_ids:
            err(node.id, "duplicate_node_id", f"nodes[{i}].id", f"node id {node.id} used more than once")
        seen_ids.add(node.id)

        if not is_valid_view_name(node.swift_ui_view_name):
            err(
                node.id,
                "invalid_view_name",
                f"nodes[{i}].swiftUIViewName",
                f"{node.swift_ui_view_name!r} is not a valid view type name",
            )
        elif node.swift_ui_view_name in seen_views:
            err(
                node.id,
                "duplicate_view_name",
                f"nodes[{i}].swiftUIViewName",
                f"view name {node.swift_ui_view_name!r} already used by node {seen_views[node.swift_ui_view_name]}",
            )
        else:
            seen_views[node.swift_ui_view_name] = node.id

        seen_targets: set[int] = set()
        for j, target in enumerate(node.outgoing_edges):
            path = f"nodes[{i}].outgoingEdges[{j}]"
            if target == node.id:
                err(node.id, "self_edge", path, f"node {node.id} navigates to itself")
            elif target not in id_set:
                err(node.id, "dangling_edge", path, f"edge target {target} does not exist")
            elif target in seen_targets:
                warn(node.id, "duplicate_edge", path, f"edge {node.id}->{target} listed twice")
            seen_targets.add(target)

    if sb.entry_node_id is not None and sb.entry_node_id not in id_set:
        err(-1, "unknown_entry_node", "entryNodeId", f"entry node {sb.entry_node_id} does not exist")

    entry = sb.effective_entry_node_id
    if entry is not None and entry in id_set and len(seen_ids) == len(sb.nodes):
        reachable = reachable_nodes(sb, entry)
        for i, node in enumerate(sb.nodes):
            if node.id not in reachable:
                warn(
                    node.id,
                    "unreachable_screen",
                    f"nodes[{i}]",
                    f"screen {node.swift_ui_view_name!r} cannot be reached from the entry screen",
                )

    return _sorted_report(entries)


def validate_data_model(dm: DataModel) -> ValidationReport:
    """Check entity and field naming rules of one data model."""
    entries: list[tuple[int, Finding]] = []
    seen: set[str] = set()
    for i, entity in enumerate(dm.entities):
        if not entity.name:
            entries.append(
                (i, Finding(SEVERITY_ERROR, "empty_entity_name", f"entities[{i}].name", "entity has no name"))
            )
        elif entity.name in seen:
            entries.append(
                (
                    i,
                    Finding(
                        SEVERITY_ERROR,
                        "duplicate_entity_name",
                        f"entities[{i}].name",
                        f"entity {entity.name!r} declared more than once",
                    ),
                )
            )
        seen.add(entity.name)

        field_names: set[str] = set()
        for j, fld in enumerate(entity.fields):
            path = f"entities[{i}].fields[{j}]"
            if fld.name in field_names:
                entries.append(
                    (
                        i,
                        Finding(
                            SEVERITY_ERROR,
                            "duplicate_field_name",
                            path,
                            f"field {fld.name!r} declared twice in {entity.name!r}",
                        ),
                    )
                )
            field_names.add(fld.name)
            if not fld.type_text.strip():
                entries.append(
                    (
                        i,
                        Finding(SEVERITY_ERROR, "empty_field_type", path, f"field {fld.name!r} has no type"),
                    )
                )
    return _sorted_report(entries)


def _skeleton_structure_findings(skel: GuiSkeleton, base: str) -> list[Finding]:
    findings: list[Finding] = []
    for path, el in skel.layout.walk(f"{base}.layout"):
        if el.kind not in CONTAINER_KINDS and el.children:
            findings.append(
                Finding(
                    SEVERITY_ERROR,
                    "leaf_with_children",
                    path,
                    f"{el.kind!r} is a leaf element and cannot hold children",
                )
            )
        if el.kind == "List" and "DataSource" not in el.attributes:
            findings.append(
                Finding(SEVERITY_ERROR, "list_missing_datasource", path, "List element has no DataSource")
            )
    return findings


def _data_ref_findings(skel: GuiSkeleton, dm: DataModel, base: str) -> list[Finding]:
    findings: list[Finding] = []
    for path, el in skel.layout.walk(f"{base}.layout"):
        value = el.attributes.get("Value")
        if not value or not DATA_REF_RE.match(value):
            continue
        instance, field_name = value.split(".", 1)
        entity = dm.entity_by_name(instance)
        if entity is None or all(f.name != field_name for f in entity.fields):
            findings.append(
                Finding(
                    SEVERITY_ERROR,
                    "unresolved_data_ref",
                    f"{path}.Value",
                    f"{value!r} does not resolve to an entity field",
                )
            )
    return findings


def validate_project(
    sb: Storyboard, dm: DataModel, skels: Sequence[GuiSkeleton]
) -> ValidationReport:
    """Validate the IR set as a whole: per-IR checks plus cross-IR rules.

    Cross-IR rules: one skeleton per screen, Navigate destinations must be
    real screens reachable over a declared edge, data references must
    resolve, and every storyboard edge should be backed by some Navigate in
    its source skeleton (warning otherwise).
    """
    entries: list[tuple[int, Finding]] = []
    for f in validate_storyboard(sb).findings:
        entries.append((-2, f))
    for f in validate_data_model(dm).findings:
        entries.append((-2, f))

    by_node: dict[int, GuiSkeleton] = {}
    for skel in skels:
        base = f"skeletons[{skel.view_name}]"
        node = sb.node_by_id(skel.node_id)
        if skel.node_id in by_node:
            entries.append(
                (
                    skel.node_id,
                    Finding(
                        SEVERITY_ERROR,
                        "duplicate_skeleton",
                        base,
                        f"node {skel.node_id} already has a skeleton",
                    ),
                )
            )
            continue
        by_node[skel.node_id] = skel

        if node is None:
            entries.append(
                (
                    skel.node_id,
                    Finding(
                        SEVERITY_ERROR,
                        "unknown_node",
                        f"{base}.nodeId",
                        f"skeleton {skel.view_name!r} references absent node {skel.node_id}",
                    ),
                )
            )
            continue
        if node.swift_ui_view_name != skel.view_name:
            entries.append(
                (
                    skel.node_id,
                    Finding(
                        SEVERITY_ERROR,
                        "view_name_mismatch",
                        f"{base}.viewName",
                        f"skeleton is named {skel.view_name!r} but node {node.id} is {node.swift_ui_view_name!r}",
                    ),
                )
            )

        for f in _skeleton_structure_findings(skel, base):
            entries.append((skel.node_id, f))
        for f in _data_ref_findings(skel, dm, base):
            entries.append((skel.node_id, f))

        edge_views = {
            n.swift_ui_view_name for n in sb.nodes if n.id in node.outgoing_edges
        }
        navigated: set[str] = set()
        for path, el in skel.layout.walk(f"{base}.layout"):
            if not isinstance(el.action, NavigateAction):
                continue
            dest = el.action.destination
            navigated.add(dest)
            if sb.node_by_view_name(dest) is None:
                entries.append(
                    (
                        skel.node_id,
                        Finding(
                            SEVERITY_ERROR,
                            "unknown_destination",
                            path,
                            f"Navigate destination {dest!r} is not a screen",
                        ),
                    )
                )
            elif dest not in edge_views:
                entries.append(
                    (
                        skel.node_id,
                        Finding(
                            SEVERITY_ERROR,
                            "unlinked_destination",
                            path,
                            f"Navigate destination {dest!r} is not an outgoing edge of {skel.view_name!r}",
                        ),
                    )
                )
        for view in sorted(edge_views - navigated):
            entries.append(
                (
                    skel.node_id,
                    Finding(
                        SEVERITY_WARNING,
                        "edge_without_nav",
                        base,
                        f"edge to {view!r} has no Navigate action in {skel.view_name!r}",
                    ),
                )
            )

    for node in sb.nodes:
        if node.id not in by_node:
            entries.append(
                (
                    node.id,
                    Finding(
                        SEVERITY_ERROR,
                        "missing_skeleton",
                        f"skeletons[{node.swift_ui_view_name}]",
                        f"screen {node.swift_ui_view_name!r} has no GUI skeleton",
                    ),
                )
            )

    return _sorted_report(entries)
