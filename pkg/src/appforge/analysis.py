"""Static navigation-conformance checking over generated source.

For every storyboard edge the checker scans the source view's code for a
navigation construct reaching the destination, and classifies misses into
one of seven categories. The scan is lexical, not parsed: comments are
split off each line, construct and container tokens are matched as text,
and "adjacent" means the destination appears within a three-line window of
a construct token. That keeps the checker fast and deterministic at the
cost of borderline cases; the rules below are this tool's
operationalization of the categories.

Classification of an edge A -> B with no adjacent construct match:

* API Misuse: B appears in A's code and constructs exist, but never next
  to one.
* Navigation Closure Empty: an empty ``{ }`` handler on a line mentioning
  B or navigation.
* Navigation Comment: a comment line names B, or a navigation-keyword
  comment names no screen at all.
* Missing Navigation View: the file has no navigation container; reported
  once per file.
* Missing Navigation Link: containers and other constructs exist, the link
  for this edge does not.
* No Navigation Logic: a container exists but the file has no navigation
  constructs at all.

Wrong Destination View is evidence-driven rather than edge-driven: any
construct whose adjacent screen name is not an outgoing edge of the source.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Iterable

from .design import GeneratedProject
from .errors import EngineError
from .ir.model import Storyboard

NAV_CATEGORIES = (
    "Missing Navigation Link",
    "Navigation Comment",
    "Navigation Closure Empty",
    "Missing Navigation View",
    "API Misuse",
    "No Navigation Logic",
    "Wrong Destination View",
)

COMPILATION_CATEGORIES = (
    "Missing Required Parameter",
    "Invalid Property Access",
    "Invalid Argument Type",
    "Immutability Violation",
    "Protocol Conformance Error",
    "Missing Import",
    "Malformed Member Access",
    "Access Control Violations",
    "Undeclared Identifier",
    "Type Usage Violation",
    "Generic Inference Failure",
    "Invalid Parameter Usage",
)
UNCLASSIFIED = "Unclassified"

CONTAINER_TOKENS = ("NavigationView", "NavigationStack", "NavigationSplitView")
CONSTRUCT_TOKENS = (
    "NavigationLink",
    "navigationDestination",
    ".sheet",
    ".fullScreenCover",
    "fullScreenCover(",
    "NavigationPath",
)
_EMPTY_CLOSURE_RE = re.compile(r"\{\s*\}")
_NAV_KEYWORD_RE = re.compile(r"navigat", re.IGNORECASE)
_ADJACENCY_WINDOW = 3


@dataclass(frozen=True)
class NavigationFinding:
    category: str
    source_view: str
    expected_destination: str | None = None
    line: int | None = None
    evidence: str = ""

    def to_json_value(self) -> dict[str, Any]:
        return {
            "category": self.category,
            "sourceView": self.source_view,
            "expectedDestination": self.expected_destination,
            "line": self.line,
            "evidence": self.evidence,
        }


@dataclass(frozen=True)
class ErrorReport:
    """Navigation findings plus externally ingested compilation counts."""

    navigation_findings: tuple[NavigationFinding, ...] = ()
    navigation_counts: dict[str, int] = field(default_factory=dict)
    compilation_counts: dict[str, int] = field(default_factory=dict)

    @property
    def navigation_total(self) -> int:
        return sum(self.navigation_counts.values())

    @property
    def compilation_total(self) -> int:
        return sum(self.compilation_counts.values())

    def to_json_value(self) -> dict[str, Any]:
        return {
            "schemaVersion": 1,
            "navigation": {
                "counts": dict(self.navigation_counts),
                "total": self.navigation_total,
                "findings": [f.to_json_value() for f in self.navigation_findings],
            },
            "compilation": {
                "counts": dict(self.compilation_counts),
                "total": self.compilation_total,
            },
            "totals": {
                "navigation": self.navigation_total,
                "compilation": self.compilation_total,
                "all": self.navigation_total + self.compilation_total,
            },
        }


def _split_comment(line: str) -> tuple[str, str]:
    """Split one line into code and comment at a ``//`` outside strings."""
    in_string = False
    i = 0
    while i < len(line) - 1:
        ch = line[i]
        if ch == '"' and (i == 0 or line[i - 1] != "\\"):
            in_string = not in_string
        elif not in_string and ch == "/" and line[i + 1] == "/":
            return line[:i], line[i + 2 :]
        i += 1
    return line, ""


class _ViewScan:
    """Per-file lexical facts the edge classifier works from."""

    def __init__(self, code: str) -> None:
        self.lines = code.splitlines()
        self.code_parts: list[str] = []
        self.comment_parts: list[str] = []
        for line in self.lines:
            code_part, comment_part = _split_comment(line)
            self.code_parts.append(code_part)
            self.comment_parts.append(comment_part)
        self.construct_lines = [
            i for i, part in enumerate(self.code_parts) if any(t in part for t in CONSTRUCT_TOKENS)
        ]
        self.has_container = any(
            t in part for part in self.code_parts for t in CONTAINER_TOKENS
        )
        self.has_construct = bool(self.construct_lines)

    def window_code(self, start: int) -> str:
        return "\n".join(self.code_parts[start : start + _ADJACENCY_WINDOW])


def _word_in(name: str, text: str) -> bool:
    return re.search(rf"\b{re.escape(name)}\b", text) is not None


def check_navigation(gp: GeneratedProject, sb: Storyboard) -> list[NavigationFinding]:
    """Findings for every storyboard edge the generated code fails to
    implement, ordered by (source view, line)."""
    all_views = sb.view_names()
    findings: list[NavigationFinding] = []

    for node in sb.nodes:
        view = gp.view_by_name(node.swift_ui_view_name)
        if view is None:
            continue
        scan = _ViewScan(view.view_code)
        dest_views = [
            sb.node_by_id(t).swift_ui_view_name  # type: ignore[union-attr]
            for t in node.outgoing_edges
            if sb.node_by_id(t) is not None
        ]

        # Constructs pointing at screens this node does not connect to.
        seen_wrong: set[tuple[int, str]] = set()
        for i in scan.construct_lines:
            window = scan.window_code(i)
            for name in sorted(all_views):
                if name == node.swift_ui_view_name or name in dest_views:
                    continue
                if _word_in(name, window) and (i, name) not in seen_wrong:
                    seen_wrong.add((i, name))
                    findings.append(
                        NavigationFinding(
                            category="Wrong Destination View",
                            source_view=node.swift_ui_view_name,
                            expected_destination=name,
                            line=i + 1,
                            evidence=scan.lines[i].strip(),
                        )
                    )

        missing_view_edges: list[str] = []
        for dest in dest_views:
            finding = _classify_edge(scan, node.swift_ui_view_name, dest, all_views)
            if finding == "covered":
                continue
            if finding == "no_container":
                missing_view_edges.append(dest)
                continue
            assert isinstance(finding, NavigationFinding)
            findings.append(finding)

        if missing_view_edges:
            findings.append(
                NavigationFinding(
                    category="Missing Navigation View",
                    source_view=node.swift_ui_view_name,
                    expected_destination=None,
                    line=None,
                    evidence=f"no navigation container; unreached: {', '.join(missing_view_edges)}",
                )
            )

    findings.sort(
        key=lambda f: (f.source_view, f.line or 0, f.category, f.expected_destination or "")
    )
    return findings


def _classify_edge(
    scan: _ViewScan, source_view: str, dest: str, all_views: set[str]
) -> NavigationFinding | str:
    for i in scan.construct_lines:
        if _word_in(dest, scan.window_code(i)):
            return "covered"

    def finding(category: str, line: int | None, evidence: str) -> NavigationFinding:
        return NavigationFinding(
            category=category,
            source_view=source_view,
            expected_destination=dest,
            line=line,
            evidence=evidence.strip(),
        )

    if scan.has_construct:
        for i, part in enumerate(scan.code_parts):
            if _word_in(dest, part):
                return finding("API Misuse", i + 1, scan.lines[i])

    for i, part in enumerate(scan.code_parts):
        if _EMPTY_CLOSURE_RE.search(part) and (
            _word_in(dest, scan.lines[i]) or _NAV_KEYWORD_RE.search(scan.lines[i])
        ):
            return finding("Navigation Closure Empty", i + 1, scan.lines[i])

    for i, comment in enumerate(scan.comment_parts):
        if comment and _word_in(dest, comment):
            return finding("Navigation Comment", i + 1, scan.lines[i])
    for i, comment in enumerate(scan.comment_parts):
        if (
            comment
            and _NAV_KEYWORD_RE.search(comment)
            and not any(_word_in(v, comment) for v in all_views)
        ):
            return finding("Navigation Comment", i + 1, scan.lines[i])

    if not scan.has_container:
        return "no_container"
    if scan.has_construct:
        return finding("Missing Navigation Link", None, f"no navigation construct reaches {dest}")
    return finding("No Navigation Logic", None, f"no navigation logic for {dest}")


# --------------------------------------------------------------------------
# Report assembly
# --------------------------------------------------------------------------

_COMPILATION_RULES: tuple[tuple[str, tuple[str, ...]], ...] = (
    ("Undeclared Identifier", ("cannot find",)),
    ("Missing Required Parameter", ("missing argument",)),
    ("Protocol Conformance Error", ("does not conform to",)),
    ("Immutability Violation", ("is a 'let' constant", "cannot assign to")),
    ("Missing Import", ("no such module",)),
    ("Access Control Violations", ("inaccessible due to",)),
    ("Generic Inference Failure", ("could not be inferred", "generic parameter")),
    ("Invalid Argument Type", ("cannot convert value of type", "cannot convert")),
    ("Malformed Member Access", ("cannot infer contextual base", "member access")),
    ("Invalid Property Access", ("has no member", "no dynamic member")),
    ("Type Usage Violation", ("cannot be used as a type", "used as a type")),
    ("Invalid Parameter Usage", ("extra argument", "argument passed to call")),
)


def classify_compiler_line(message: str) -> str:
    lowered = message.lower()
    for category, needles in _COMPILATION_RULES:
        if any(needle in lowered for needle in needles):
            return category
    return UNCLASSIFIED


def parse_compilation_log(log_text: str) -> dict[str, int]:
    """Count compiler diagnostics by category from a line-oriented log.

    Only lines containing ``error:`` count; anything unmatched by the
    keyword rules lands in Unclassified. A diagnostics line with no
    message raises ``log_parse_error``.
    """
    counts = {category: 0 for category in COMPILATION_CATEGORIES}
    counts[UNCLASSIFIED] = 0
    for line_no, line in enumerate(log_text.splitlines(), start=1):
        if "error:" not in line:
            continue
        message = line.split("error:", 1)[1].strip()
        if not message:
            raise EngineError("log_parse_error", f"diagnostic without message at line {line_no}", offset=line_no)
        counts[classify_compiler_line(message)] += 1
    return counts


def summarize(
    findings: Iterable[NavigationFinding], compilation_log: str | None = None
) -> ErrorReport:
    """Roll findings (and an optional external compiler log) into a report."""
    findings_t = tuple(findings)
    nav_counts = {category: 0 for category in NAV_CATEGORIES}
    for f in findings_t:
        if f.category not in nav_counts:
            raise EngineError("schema_error", f"unknown navigation category {f.category!r}")
        nav_counts[f.category] += 1
    comp_counts = (
        parse_compilation_log(compilation_log)
        if compilation_log is not None
        else {category: 0 for category in (*COMPILATION_CATEGORIES, UNCLASSIFIED)}
    )
    return ErrorReport(
        navigation_findings=findings_t,
        navigation_counts=nav_counts,
        compilation_counts=comp_counts,
    )
