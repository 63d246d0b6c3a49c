"""Error type shared by every stage of the pipeline.

A single exception class with a stable ``code`` string keeps error handling
uniform across the IR layer, the planner, code generation, and the HTTP
service: callers branch on ``code``, and the optional payload fields carry
whatever a stage can usefully attach (a validation report, a byte offset, a
stage name).
"""

from __future__ import annotations

from typing import Any


class EngineError(Exception):
    """Pipeline failure with a stable machine-readable code."""

    def __init__(
        self,
        code: str,
        message: str,
        *,
        report: Any = None,
        stage: str | None = None,
        path: str | None = None,
        offset: int | None = None,
    ) -> None:
        super().__init__(message)
        self.code = code
        self.message = message
        self.report = report
        self.stage = stage
        self.path = path
        self.offset = offset

    def to_json_value(self) -> dict[str, Any]:
        value: dict[str, Any] = {"error": self.code, "message": self.message}
        if self.stage is not None:
            value["stage"] = self.stage
        if self.path is not None:
            value["path"] = self.path
        if self.offset is not None:
            value["offset"] = self.offset
        if self.report is not None and hasattr(self.report, "to_json_value"):
            value["report"] = self.report.to_json_value()
        return value

    def __repr__(self) -> str:  # pragma: no cover
        return f"EngineError({self.code!r}, {self.message!r})"
