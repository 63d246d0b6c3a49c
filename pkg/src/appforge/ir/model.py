"""Domain types for the three intermediate representations.

All values are frozen dataclasses: mutation operations return new values, so
IRs can be shared across threads without locking. Collections are stored as
tuples; the skeleton map on a project is rebuilt, never mutated in place.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Union

VIEW_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

CONTAINER_KINDS = frozenset({"MainContainer", "List", "HStack", "VStack", "Navigation"})
LEAF_KINDS = frozenset({"Text", "Button", "Image", "TextField"})


def is_valid_view_name(name: str) -> bool:
    """True when ``name`` is usable as a target-language type identifier."""
    return bool(VIEW_NAME_RE.match(name))


# --------------------------------------------------------------------------
# Storyboard
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class StoryboardNode:
    """One screen: a node of the navigation graph.

    ``outgoing_edges`` holds the ids of screens navigable from this one.
    Edges are stored only on the source node; incoming-edge queries are
    computed by callers.
    """

    id: int
    name: str
    description: str = ""
    swift_ui_view_name: str = ""
    outgoing_edges: tuple[int, ...] = ()


@dataclass(frozen=True)
class Storyboard:
    """Directed graph of screens; the app's structural IR."""

    description: str = ""
    nodes: tuple[StoryboardNode, ...] = ()
    entry_node_id: int | None = None

    def node_ids(self) -> set[int]:
        return {n.id for n in self.nodes}

    def node_by_id(self, node_id: int) -> StoryboardNode | None:
        for node in self.nodes:
            if node.id == node_id:
                return node
        return None

    def node_by_view_name(self, view_name: str) -> StoryboardNode | None:
        for node in self.nodes:
            if node.swift_ui_view_name == view_name:
                return node
        return None

    def view_names(self) -> set[str]:
        return {n.swift_ui_view_name for n in self.nodes}

    @property
    def effective_entry_node_id(self) -> int | None:
        """Explicit entry node, else the lowest node id, else None."""
        if self.entry_node_id is not None:
            return self.entry_node_id
        if not self.nodes:
            return None
        return min(n.id for n in self.nodes)

    def edges(self) -> list[tuple[int, int]]:
        return [(n.id, t) for n in self.nodes for t in n.outgoing_edges]


# --------------------------------------------------------------------------
# Data model
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class EntityField:
    name: str
    type_text: str


@dataclass(frozen=True)
class DataEntity:
    """One named record type the app displays or manipulates."""

    name: str
    doc: str = ""
    fields: tuple[EntityField, ...] = ()
    source_text: str = ""

    def rendered_source(self) -> str:
        """The stored declaration text, or one rendered from the fields."""
        if self.source_text:
            return self.source_text
        lines = [f"struct {self.name} {{"]
        lines += [f"    var {f.name}: {f.type_text}" for f in self.fields]
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class DataModel:
    """The set of entity declarations; the app's data IR."""

    entities: tuple[DataEntity, ...] = ()

    def entity_by_name(self, name: str) -> DataEntity | None:
        """Case-insensitive lookup, matching instance-name conventions."""
        lowered = name.lower()
        for entity in self.entities:
            if entity.name.lower() == lowered:
                return entity
        return None


# --------------------------------------------------------------------------
# GUI skeletons
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class NavigateAction:
    """Navigation trigger naming a destination view."""

    destination: str


Action = Union[str, NavigateAction]


@dataclass(frozen=True)
class SkeletonElement:
    """One node of a screen's pseudocode tree.

    Kinds outside :data:`CONTAINER_KINDS` are treated as leaves (custom
    element names included) and may not carry children. Action handlers are
    descriptive strings or :class:`NavigateAction` records, never code.
    """

    kind: str
    attributes: dict[str, str] = field(default_factory=dict)
    action: Action | None = None
    children: tuple[SkeletonElement, ...] = ()

    @property
    def is_container(self) -> bool:
        return self.kind in CONTAINER_KINDS

    def walk(self, path: str = "layout") -> Iterator[tuple[str, SkeletonElement]]:
        """Yield (path, element) pairs depth-first, this element included."""
        yield path, self
        for i, child in enumerate(self.children):
            yield from child.walk(f"{path}.children[{i}]")


@dataclass(frozen=True)
class GuiSkeleton:
    """Per-screen UI pseudocode; the app's view IR."""

    view_name: str
    node_id: int
    state_variables: tuple[str, ...] = ()
    layout: SkeletonElement = field(default_factory=lambda: SkeletonElement("MainContainer"))

    def navigate_destinations(self) -> list[str]:
        """Destination view names of every Navigate action in the tree."""
        return [
            el.action.destination
            for _, el in self.layout.walk()
            if isinstance(el.action, NavigateAction)
        ]


# --------------------------------------------------------------------------
# Validation reporting
# --------------------------------------------------------------------------

SEVERITY_ERROR = "error"
SEVERITY_WARNING = "warning"


@dataclass(frozen=True)
class Finding:
    severity: str
    code: str
    path: str
    message: str

    def to_json_value(self) -> dict[str, str]:
        return {
            "severity": self.severity,
            "code": self.code,
            "path": self.path,
            "message": self.message,
        }


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of a validation pass; zero error findings means well-formed."""

    findings: tuple[Finding, ...] = ()

    @property
    def errors(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.severity == SEVERITY_ERROR)

    @property
    def warnings(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.severity == SEVERITY_WARNING)

    @property
    def ok(self) -> bool:
        return not self.errors

    def codes(self) -> list[str]:
        return [f.code for f in self.findings]

    def merged(self, other: ValidationReport) -> ValidationReport:
        return ValidationReport(self.findings + other.findings)

    def to_json_value(self) -> dict[str, object]:
        return {"findings": [f.to_json_value() for f in self.findings]}

    def summary(self) -> str:
        if not self.findings:
            return "no findings"
        return "; ".join(f"{f.severity} {f.code} at {f.path}: {f.message}" for f in self.findings)
