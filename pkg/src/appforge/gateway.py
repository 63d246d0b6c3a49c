"""Provider abstraction, prompt templating, and JSON recovery.

Providers are stateless request executors behind a two-method surface:
``complete`` runs one prompt and records a transcript entry. The scripted
provider replays fixture responses (FIFO queue plus optional match rules)
so every pipeline test is deterministic and offline; the HTTP provider
speaks the ubiquitous chat-completion wire shape.

``complete_json`` is the single entry point the rest of the engine uses: it
extracts the first top-level JSON value from a completion (code fences and
surrounding prose stripped, trailing commas tolerated), parses it against a
caller-supplied schema parser, and re-prompts with the findings when the
response cannot be used, up to the provider's retry budget.
"""

from __future__ import annotations

import json
import logging
import os
import re
import threading
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Callable

import requests

from .errors import EngineError

logger = logging.getLogger(__name__)

PLACEHOLDER_RE = re.compile(r"\{\{([a-zA-Z_][a-zA-Z0-9_]*)\}\}")
_FENCE_RE = re.compile(r"```[a-zA-Z]*\s*\n?(.*?)```", re.DOTALL)
_TRAILING_COMMA_RE = re.compile(r",(\s*[}\]])")


# --------------------------------------------------------------------------
# Providers
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ProviderLimits:
    max_tokens: int = 4096
    timeout_s: float = 60.0
    retries: int = 2


@dataclass(frozen=True)
class ProviderCall:
    call_id: str
    prompt: str
    response: str


class Provider:
    """Base executor: runs prompts, keeps an auditable transcript."""

    def __init__(self, name: str = "provider", limits: ProviderLimits | None = None) -> None:
        self.name = name
        self.limits = limits or ProviderLimits()
        self._transcript: list[ProviderCall] = []
        self._lock = threading.Lock()
        self._counter = 0

    def _complete(self, prompt: str) -> str:
        raise NotImplementedError

    def complete(self, prompt: str) -> ProviderCall:
        response = self._complete(prompt)
        with self._lock:
            self._counter += 1
            call = ProviderCall(f"{self.name}:{self._counter}", prompt, response)
            self._transcript.append(call)
        return call

    @property
    def transcript(self) -> list[ProviderCall]:
        with self._lock:
            return list(self._transcript)


@dataclass
class ScriptRule:
    """Fixture response selected when every match token appears in the prompt."""

    match: list[str]
    response: str
    delay_s: float = 0.0
    once: bool = False
    used: int = 0


class ScriptedProvider(Provider):
    """Deterministic stand-in for a model.

    Match rules are checked first (in order, skipping exhausted ``once``
    rules); prompts matching no rule consume the FIFO queue. Queue
    consumption is serialized; injected delays run outside the lock so
    concurrent callers can overlap.
    """

    def __init__(
        self,
        responses: list[str] | None = None,
        rules: list[ScriptRule] | None = None,
        name: str = "scripted",
        limits: ProviderLimits | None = None,
    ) -> None:
        super().__init__(name=name, limits=limits)
        self._queue: list[str] = list(responses or [])
        self._rules: list[ScriptRule] = list(rules or [])
        self._queue_lock = threading.Lock()

    def _complete(self, prompt: str) -> str:
        delay = 0.0
        with self._queue_lock:
            chosen: ScriptRule | None = None
            for rule in self._rules:
                if rule.once and rule.used:
                    continue
                if all(token in prompt for token in rule.match):
                    chosen = rule
                    break
            if chosen is not None:
                chosen.used += 1
                response = chosen.response
                delay = chosen.delay_s
            elif self._queue:
                response = self._queue.pop(0)
            else:
                raise EngineError("provider_error", "scripted provider has no response for this prompt")
        if delay:
            time.sleep(delay)
        return response

    @property
    def remaining(self) -> int:
        with self._queue_lock:
            return len(self._queue)


class HttpChatProvider(Provider):
    """Chat-completion HTTP provider; the credential comes from the
    environment variable named by ``auth_ref`` and is never logged."""

    def __init__(
        self,
        endpoint: str,
        model_name: str,
        auth_ref: str,
        name: str = "http",
        limits: ProviderLimits | None = None,
    ) -> None:
        super().__init__(name=name, limits=limits)
        if not endpoint or not auth_ref:
            raise EngineError("provider_error", "http provider requires an endpoint and an auth_ref")
        self.endpoint = endpoint
        self.model_name = model_name
        self.auth_ref = auth_ref

    def _complete(self, prompt: str) -> str:
        token = os.environ.get(self.auth_ref, "")
        if not token:
            raise EngineError("provider_error", f"credential variable {self.auth_ref} is not set")
        payload = {
            "model": self.model_name,
            "messages": [{"role": "user", "content": prompt}],
            "max_tokens": self.limits.max_tokens,
        }
        try:
            resp = requests.post(
                self.endpoint,
                json=payload,
                headers={"Authorization": f"Bearer {token}"},
                timeout=self.limits.timeout_s,
            )
        except requests.Timeout as exc:
            raise EngineError("timeout", f"provider call exceeded {self.limits.timeout_s}s") from exc
        except requests.RequestException as exc:
            raise EngineError("provider_error", f"provider request failed: {exc.__class__.__name__}") from exc
        if resp.status_code != 200:
            raise EngineError("provider_error", f"provider returned status {resp.status_code}")
        try:
            return resp.json()["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise EngineError("provider_error", "provider response missing message content") from exc


def provider_from_config(name: str, config: dict[str, Any]) -> Provider:
    limits_cfg = config.get("limits", {})
    limits = ProviderLimits(
        max_tokens=int(limits_cfg.get("maxTokens", 4096)),
        timeout_s=float(limits_cfg.get("timeoutSeconds", 60.0)),
        retries=int(limits_cfg.get("retries", 2)),
    )
    kind = config.get("kind", "http_chat")
    if kind == "scripted":
        responses = [str(r) for r in config.get("responses", [])]
        rules = [
            ScriptRule(
                match=[str(t) for t in (r["match"] if isinstance(r["match"], list) else [r["match"]])],
                response=str(r["response"]),
                delay_s=float(r.get("delaySeconds", 0.0)),
                once=bool(r.get("once", False)),
            )
            for r in config.get("rules", [])
        ]
        if not responses and not rules:
            raise EngineError("provider_error", f"scripted provider {name!r} has an empty response queue")
        return ScriptedProvider(responses=responses, rules=rules, name=name, limits=limits)
    if kind == "http_chat":
        return HttpChatProvider(
            endpoint=str(config.get("endpoint", "")),
            model_name=str(config.get("model", "")),
            auth_ref=str(config.get("authRef", "")),
            name=name,
            limits=limits,
        )
    raise EngineError("provider_error", f"unknown provider kind {kind!r}")


def load_providers(path: str | Path) -> tuple[dict[str, Provider], str | None]:
    """Read ``providers.json``: a name->config map plus optional default."""
    path = Path(path)
    try:
        config = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise EngineError("provider_error", f"cannot read provider config {path}") from exc
    except json.JSONDecodeError as exc:
        raise EngineError("parse_error", f"invalid provider config: {exc.msg}", offset=exc.pos) from exc
    providers = {
        name: provider_from_config(name, cfg) for name, cfg in config.get("providers", {}).items()
    }
    return providers, config.get("default")


# --------------------------------------------------------------------------
# Prompt templates
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PromptTemplate:
    id: str
    text: str
    expected_schema: str

    def placeholders(self) -> set[str]:
        return set(PLACEHOLDER_RE.findall(self.text))


TEMPLATE_SCHEMAS = {
    "plan": "change_plan",
    "storyboard_mod": "storyboard",
    "data_model_mod": "data_model",
    "skeleton_mod": "gui_skeleton",
    "navigation_plan": "navigation_plan",
    "design_scaffold": "design_scaffold",
    "code_gen": "generated_project",
    "initial_storyboard": "storyboard",
    "view_design_spec": "view_design_spec",
}

_template_cache: dict[str, PromptTemplate] = {}


def load_template(template_id: str) -> PromptTemplate:
    if template_id not in TEMPLATE_SCHEMAS:
        raise EngineError("unknown_template", f"no prompt template named {template_id!r}")
    if template_id not in _template_cache:
        text = (
            resources.files("appforge.prompts").joinpath(f"{template_id}.txt").read_text("utf-8")
        )
        _template_cache[template_id] = PromptTemplate(
            id=template_id, text=text, expected_schema=TEMPLATE_SCHEMAS[template_id]
        )
    return _template_cache[template_id]


def render_prompt(template: PromptTemplate, bindings: dict[str, str]) -> str:
    """Substitute every ``{{name}}`` placeholder.

    Unbound placeholders are an error; bindings without a placeholder are
    ignored with a warning.
    """
    names = template.placeholders()
    missing = sorted(names - set(bindings))
    if missing:
        raise EngineError(
            "unbound_placeholder",
            f"template {template.id!r} has no binding for {missing[0]!r}",
            path=missing[0],
        )
    extra = sorted(set(bindings) - names)
    if extra:
        logger.warning("template %s ignoring extra bindings: %s", template.id, ", ".join(extra))
    return PLACEHOLDER_RE.sub(lambda m: bindings[m.group(1)], template.text)


# --------------------------------------------------------------------------
# JSON extraction and repair
# --------------------------------------------------------------------------


def _scan_balanced(text: str, start: int) -> str | None:
    """Return the balanced JSON object/array starting at ``start``."""
    opener = text[start]
    closer = "}" if opener == "{" else "]"
    depth = 0
    in_string = False
    escaped = False
    for i in range(start, len(text)):
        ch = text[i]
        if in_string:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == '"':
                in_string = False
            continue
        if ch == '"':
            in_string = True
        elif ch in "{[":
            depth += 1
        elif ch in "}]":
            depth -= 1
            if depth == 0:
                if ch != closer and opener in "{[":
                    return None
                return text[start : i + 1]
    return None


def _try_parse(candidate: str) -> Any | None:
    try:
        return json.loads(candidate)
    except json.JSONDecodeError:
        pass
    repaired = _TRAILING_COMMA_RE.sub(r"\1", candidate)
    if repaired != candidate:
        try:
            return json.loads(repaired)
        except json.JSONDecodeError:
            return None
    return None


def extract_json(raw: str) -> Any:
    """Pull the first top-level JSON value out of a model completion.

    Tolerates code fences, leading/trailing prose, and trailing commas;
    already-bare JSON is returned unchanged (extraction is idempotent).
    """
    text = raw.strip()
    parsed = _try_parse(text)
    if parsed is not None:
        return parsed

    for fence in _FENCE_RE.findall(text):
        parsed = _try_parse(fence.strip())
        if parsed is not None:
            return parsed

    for i, ch in enumerate(text):
        if ch in "{[":
            candidate = _scan_balanced(text, i)
            if candidate is not None:
                parsed = _try_parse(candidate)
                if parsed is not None:
                    return parsed
    raise EngineError("parse_error", "completion contains no parseable JSON value", path="$")


_REPAIR_SUFFIX = (
    "\n\nYour previous response could not be used:\n{findings}\n"
    "Reply again with only the corrected JSON document."
)


def complete_json(
    provider: Provider,
    prompt: str,
    parse: Callable[[Any], Any],
    retries: int | None = None,
) -> tuple[Any, list[ProviderCall]]:
    """Run a prompt and parse its completion as schema-checked JSON.

    ``parse`` takes the extracted JSON value and returns the typed result,
    raising :class:`EngineError` when the value violates its schema. Each
    failure re-prompts with the findings appended, up to ``retries``
    re-prompts (provider limit by default). Returns the parsed value and
    the provider calls consumed.
    """
    budget = provider.limits.retries if retries is None else retries
    calls: list[ProviderCall] = []
    current = prompt
    last_error: EngineError | None = None
    for _ in range(budget + 1):
        call = provider.complete(current)
        calls.append(call)
        try:
            value = extract_json(call.response)
            return parse(value), calls
        except EngineError as exc:
            if exc.code == "provider_error":
                raise
            last_error = exc
            findings = exc.message
            if exc.report is not None and hasattr(exc.report, "summary"):
                findings = exc.report.summary()
            current = prompt + _REPAIR_SUFFIX.format(findings=findings)
    assert last_error is not None
    raise EngineError(
        "schema_error_after_retries",
        f"response still invalid after {budget} retries: {last_error.message}",
        report=last_error.report,
    )
