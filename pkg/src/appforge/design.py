"""Code-generation inputs and outputs.

The design scaffold and navigation plan steer generation; the generated
project is what comes back. All parsers take extracted JSON values and
raise ``schema_error`` so the gateway retry loop can re-prompt with the
findings.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any

from .errors import EngineError
from .ir.model import (
    Finding,
    SEVERITY_ERROR,
    Storyboard,
    ValidationReport,
)

HEX_COLOR_RE = re.compile(r"^#[0-9A-Fa-f]{6}$")
TRANSITION_TYPES = ("push", "sheet", "fullScreen")

# Keys whose numeric values must be strictly positive wherever they appear.
_SIZE_KEYS = frozenset({"size", "fontSize", "labelFontSize", "radius"})


def _schema_error(path: str, message: str) -> EngineError:
    return EngineError("schema_error", f"{path}: {message}", path=path)


# --------------------------------------------------------------------------
# Design scaffold
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DesignScaffold:
    """App-wide style record handed to the code generation call."""

    colors: dict[str, Any] = field(default_factory=dict)
    typography: dict[str, Any] = field(default_factory=dict)
    components: dict[str, Any] = field(default_factory=dict)
    icons: dict[str, Any] = field(default_factory=dict)
    animations: dict[str, Any] = field(default_factory=dict)

    def to_json_value(self) -> dict[str, Any]:
        return {
            "colors": self.colors,
            "typography": self.typography,
            "components": self.components,
            "icons": self.icons,
            "animations": self.animations,
        }


def _check_style_values(value: Any, path: str, in_colors: bool) -> list[str]:
    """Collect violations of the color and size rules, recursively."""
    problems: list[str] = []
    if isinstance(value, dict):
        for key, sub in value.items():
            sub_path = f"{path}.{key}"
            if isinstance(sub, str) and (key.lower().endswith("color") or in_colors):
                if not HEX_COLOR_RE.match(sub):
                    problems.append(f"{sub_path}: color {sub!r} is not #RRGGBB")
            elif isinstance(sub, bool):
                continue
            elif isinstance(sub, (int, float)) and key in _SIZE_KEYS:
                if sub <= 0:
                    problems.append(f"{sub_path}: size must be positive, got {sub}")
            else:
                problems.extend(_check_style_values(sub, sub_path, in_colors))
    elif isinstance(value, list):
        for i, sub in enumerate(value):
            problems.extend(_check_style_values(sub, f"{path}[{i}]", in_colors))
    return problems


def parse_design_scaffold(value: Any) -> DesignScaffold:
    if not isinstance(value, dict):
        raise _schema_error("$", "expected a design scaffold object")
    if "colors" not in value or not isinstance(value["colors"], dict):
        raise _schema_error("colors", "missing or not an object")
    problems = _check_style_values(value.get("colors"), "colors", in_colors=True)
    for section in ("typography", "components", "icons", "animations"):
        problems.extend(_check_style_values(value.get(section, {}), section, in_colors=False))
    sizes = value.get("icons", {}).get("sizes", []) if isinstance(value.get("icons"), dict) else []
    for i, size in enumerate(sizes):
        if isinstance(size, (int, float)) and not isinstance(size, bool) and size <= 0:
            problems.append(f"icons.sizes[{i}]: size must be positive, got {size}")
    if problems:
        raise _schema_error(problems[0].split(":", 1)[0], "; ".join(problems))
    return DesignScaffold(
        colors=value.get("colors", {}),
        typography=value.get("typography", {}),
        components=value.get("components", {}),
        icons=value.get("icons", {}),
        animations=value.get("animations", {}),
    )


# --------------------------------------------------------------------------
# Per-view design specs
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ViewDesignSpec:
    """Free-text style notes for one view, appended to the codegen prompt."""

    purpose: str
    layout: str = ""
    interactions: dict[str, Any] = field(default_factory=dict)
    navigation: dict[str, Any] = field(default_factory=dict)
    actions: dict[str, Any] = field(default_factory=dict)
    visual: dict[str, Any] = field(default_factory=dict)
    inputs: dict[str, Any] = field(default_factory=dict)
    errors: dict[str, Any] = field(default_factory=dict)
    loading: dict[str, Any] = field(default_factory=dict)

    def to_json_value(self) -> dict[str, Any]:
        return {
            "purpose": self.purpose,
            "layout": self.layout,
            "interactions": self.interactions,
            "navigation": self.navigation,
            "actions": self.actions,
            "visual": self.visual,
            "inputs": self.inputs,
            "errors": self.errors,
            "loading": self.loading,
        }


def parse_view_design_spec(value: Any) -> ViewDesignSpec:
    if not isinstance(value, dict):
        raise _schema_error("$", "expected a view design object")
    purpose = value.get("purpose", "")
    if not isinstance(purpose, str) or not purpose.strip():
        raise _schema_error("purpose", "must be non-empty text")
    dict_of = lambda key: value.get(key, {}) if isinstance(value.get(key, {}), dict) else {}
    return ViewDesignSpec(
        purpose=purpose,
        layout=str(value.get("layout", "")),
        interactions=dict_of("interactions"),
        navigation=dict_of("navigation"),
        actions=dict_of("actions"),
        visual=dict_of("visual"),
        inputs=dict_of("inputs"),
        errors=dict_of("errors"),
        loading=dict_of("loading"),
    )


# --------------------------------------------------------------------------
# Navigation plan
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class NavTransition:
    destination: str
    type: str
    trigger: str = ""
    data_pass: tuple[str, ...] = ()


@dataclass(frozen=True)
class NavViewPlan:
    node_id: int
    name: str
    swift_ui_view_name: str
    transitions: tuple[NavTransition, ...] = ()


@dataclass(frozen=True)
class NavigationPlan:
    """Per-view transition design used only while creating the first
    skeletons; kept in the step log, never on the project."""

    views: tuple[NavViewPlan, ...] = ()

    def to_json_value(self) -> dict[str, Any]:
        return {
            "views": [
                {
                    "id": v.node_id,
                    "name": v.name,
                    "swiftUIViewName": v.swift_ui_view_name,
                    "transitions": [
                        {
                            "destination": t.destination,
                            "type": t.type,
                            "trigger": t.trigger,
                            "dataPass": {"items": list(t.data_pass)},
                        }
                        for t in v.transitions
                    ],
                }
                for v in self.views
            ]
        }


def _normalize_transition_type(raw: Any, path: str) -> str:
    text = str(raw)
    for known in TRANSITION_TYPES:
        if text.replace("_", "").lower() == known.lower():
            return known
    raise _schema_error(path, f"transition type {raw!r} is not one of {TRANSITION_TYPES}")


def parse_navigation_plan(value: Any) -> NavigationPlan:
    if not isinstance(value, dict) or not isinstance(value.get("views"), list):
        raise _schema_error("views", "expected an object with a views list")
    views: list[NavViewPlan] = []
    for i, raw in enumerate(value["views"]):
        path = f"views[{i}]"
        if not isinstance(raw, dict):
            raise _schema_error(path, "expected a view object")
        transitions: list[NavTransition] = []
        for j, t in enumerate(raw.get("transitions", []) or []):
            tpath = f"{path}.transitions[{j}]"
            if not isinstance(t, dict) or not isinstance(t.get("destination"), str):
                raise _schema_error(tpath, "transition needs a destination view name")
            data_pass_raw = t.get("dataPass", {})
            items = data_pass_raw.get("items", []) if isinstance(data_pass_raw, dict) else data_pass_raw
            transitions.append(
                NavTransition(
                    destination=t["destination"],
                    type=_normalize_transition_type(t.get("type", "push"), f"{tpath}.type"),
                    trigger=str(t.get("trigger", "")),
                    data_pass=tuple(str(x) for x in (items or [])),
                )
            )
        node_id = raw.get("id", 0)
        if isinstance(node_id, bool) or not isinstance(node_id, int):
            raise _schema_error(f"{path}.id", "expected an integer node id")
        views.append(
            NavViewPlan(
                node_id=node_id,
                name=str(raw.get("name", "")),
                swift_ui_view_name=str(raw.get("swiftUIViewName", "")),
                transitions=tuple(transitions),
            )
        )
    return NavigationPlan(views=tuple(views))


def validate_navigation_plan(plan: NavigationPlan, sb: Storyboard) -> ValidationReport:
    """Every transition must follow an edge that exists in the storyboard."""
    findings: list[Finding] = []
    for i, view in enumerate(plan.views):
        source = sb.node_by_view_name(view.swift_ui_view_name) or sb.node_by_id(view.node_id)
        for j, t in enumerate(view.transitions):
            path = f"views[{i}].transitions[{j}]"
            dest = sb.node_by_view_name(t.destination)
            if dest is None:
                findings.append(
                    Finding(
                        SEVERITY_ERROR,
                        "plan_edge_mismatch",
                        path,
                        f"destination {t.destination!r} is not a screen",
                    )
                )
            elif source is None or dest.id not in source.outgoing_edges:
                findings.append(
                    Finding(
                        SEVERITY_ERROR,
                        "plan_edge_mismatch",
                        path,
                        f"{view.swift_ui_view_name} -> {t.destination} is not a storyboard edge",
                    )
                )
    return ValidationReport(tuple(findings))


# --------------------------------------------------------------------------
# Generated project
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class GeneratedView:
    id: int
    name: str
    swift_ui_view_name: str
    view_code: str


@dataclass(frozen=True)
class GeneratedUtility:
    name: str
    code: str


@dataclass(frozen=True)
class ProjectMetrics:
    view_count: int = 0
    lines_of_code: int = 0


@dataclass(frozen=True)
class GeneratedProject:
    """The lowered source project: one view per screen plus utilities."""

    views: tuple[GeneratedView, ...] = ()
    utilities: tuple[GeneratedUtility, ...] = ()
    scaffold_used: DesignScaffold | None = None
    metrics: ProjectMetrics = ProjectMetrics()

    def view_by_name(self, view_name: str) -> GeneratedView | None:
        for view in self.views:
            if view.swift_ui_view_name == view_name:
                return view
        return None

    def to_json_value(self) -> dict[str, Any]:
        value: dict[str, Any] = {
            "views": [
                {
                    "id": v.id,
                    "name": v.name,
                    "swiftUIViewName": v.swift_ui_view_name,
                    "viewCode": v.view_code,
                }
                for v in self.views
            ],
            "utilities": [{"name": u.name, "code": u.code} for u in self.utilities],
            "metrics": {"viewCount": self.metrics.view_count, "linesOfCode": self.metrics.lines_of_code},
        }
        if self.scaffold_used is not None:
            value["scaffoldUsed"] = self.scaffold_used.to_json_value()
        return value


def count_lines(text: str) -> int:
    return len(text.splitlines())


def compute_metrics(views: tuple[GeneratedView, ...], utilities: tuple[GeneratedUtility, ...]) -> ProjectMetrics:
    loc = sum(count_lines(v.view_code) for v in views) + sum(count_lines(u.code) for u in utilities)
    return ProjectMetrics(view_count=len(views), lines_of_code=loc)


def parse_generated_project(value: Any) -> GeneratedProject:
    if not isinstance(value, dict) or not isinstance(value.get("views"), list):
        raise _schema_error("views", "expected an object with a views list")
    views: list[GeneratedView] = []
    for i, raw in enumerate(value["views"]):
        path = f"views[{i}]"
        if not isinstance(raw, dict):
            raise _schema_error(path, "expected a view object")
        view_name = raw.get("swiftUIViewName", "")
        if not isinstance(view_name, str) or not view_name:
            raise _schema_error(f"{path}.swiftUIViewName", "missing view type name")
        code = raw.get("viewCode", raw.get("code", ""))
        if not isinstance(code, str):
            raise _schema_error(f"{path}.viewCode", "expected source text")
        node_id = raw.get("id", 0)
        if isinstance(node_id, bool) or not isinstance(node_id, int):
            node_id = 0
        views.append(
            GeneratedView(
                id=node_id, name=str(raw.get("name", "")), swift_ui_view_name=view_name, view_code=code
            )
        )
    utilities: list[GeneratedUtility] = []
    for i, raw in enumerate(value.get("utilities", []) or []):
        path = f"utilities[{i}]"
        if not isinstance(raw, dict) or not isinstance(raw.get("name"), str):
            raise _schema_error(path, "expected a named utility object")
        code = raw.get("code", "")
        if not isinstance(code, str):
            raise _schema_error(f"{path}.code", "expected source text")
        utilities.append(GeneratedUtility(name=raw["name"], code=code))
    views_t = tuple(views)
    utilities_t = tuple(utilities)
    return GeneratedProject(
        views=views_t, utilities=utilities_t, metrics=compute_metrics(views_t, utilities_t)
    )
