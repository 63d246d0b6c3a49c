"""Atomic storyboard mutations and graph reachability.

Each change atom is applied functionally: the input storyboard is never
touched and the result is guaranteed to validate with zero errors.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, replace
from typing import Union

from ..errors import EngineError
from .model import Storyboard, StoryboardNode, is_valid_view_name


@dataclass(frozen=True)
class AddScreen:
    name: str
    description: str = ""
    view_name: str | None = None


@dataclass(frozen=True)
class RemoveScreen:
    node_id: int


@dataclass(frozen=True)
class AddConnection:
    from_id: int
    to_id: int


@dataclass(frozen=True)
class RemoveConnection:
    from_id: int
    to_id: int


StoryboardChange = Union[AddScreen, RemoveScreen, AddConnection, RemoveConnection]


def derive_view_name(name: str, taken: set[str]) -> str:
    """Build a unique, valid view type name from a human screen name.

    Words are camel-cased and suffixed with ``View``; collisions get a
    numeric suffix (``2``, ``3``, ...).
    """
    words = re.findall(r"[A-Za-z0-9]+", name)
    base = "".join(w[:1].upper() + w[1:] for w in words)
    if not base:
        base = "Screen"
    if base[0].isdigit():
        base = "Screen" + base
    if not base.endswith("View"):
        base += "View"
    candidate = base
    suffix = 2
    while candidate in taken:
        candidate = f"{base[: -len('View')]}{suffix}View"
        suffix += 1
    return candidate


def _fresh_id(sb: Storyboard) -> int:
    return max((n.id for n in sb.nodes), default=0) + 1


def apply_storyboard_change(sb: Storyboard, change: StoryboardChange) -> Storyboard:
    """Apply one atom, returning a new storyboard.

    Raises :class:`EngineError` with code ``unknown_node``, ``self_edge`` or
    ``duplicate_edge``; removing an absent connection is a no-op.
    """
    if isinstance(change, AddScreen):
        taken = sb.view_names()
        view_name = change.view_name
        if not view_name or not is_valid_view_name(view_name) or view_name in taken:
            view_name = derive_view_name(change.view_name or change.name, taken)
        node = StoryboardNode(
            id=_fresh_id(sb),
            name=change.name,
            description=change.description,
            swift_ui_view_name=view_name,
        )
        return replace(sb, nodes=sb.nodes + (node,))

    if isinstance(change, RemoveScreen):
        if sb.node_by_id(change.node_id) is None:
            raise EngineError("unknown_node", f"no node with id {change.node_id}")
        nodes = tuple(
            replace(n, outgoing_edges=tuple(t for t in n.outgoing_edges if t != change.node_id))
            for n in sb.nodes
            if n.id != change.node_id
        )
        entry = sb.entry_node_id if sb.entry_node_id != change.node_id else None
        return replace(sb, nodes=nodes, entry_node_id=entry)

    if isinstance(change, AddConnection):
        if change.from_id == change.to_id:
            raise EngineError("self_edge", f"edge {change.from_id}->{change.to_id} loops onto itself")
        source = sb.node_by_id(change.from_id)
        if source is None:
            raise EngineError("unknown_node", f"no node with id {change.from_id}")
        if sb.node_by_id(change.to_id) is None:
            raise EngineError("unknown_node", f"no node with id {change.to_id}")
        if change.to_id in source.outgoing_edges:
            raise EngineError("duplicate_edge", f"edge {change.from_id}->{change.to_id} already present")
        nodes = tuple(
            replace(n, outgoing_edges=n.outgoing_edges + (change.to_id,)) if n.id == change.from_id else n
            for n in sb.nodes
        )
        return replace(sb, nodes=nodes)

    if isinstance(change, RemoveConnection):
        source = sb.node_by_id(change.from_id)
        if source is None or sb.node_by_id(change.to_id) is None:
            raise EngineError(
                "unknown_node", f"connection {change.from_id}->{change.to_id} names an absent node"
            )
        nodes = tuple(
            replace(n, outgoing_edges=tuple(t for t in n.outgoing_edges if t != change.to_id))
            if n.id == change.from_id
            else n
            for n in sb.nodes
        )
        return replace(sb, nodes=nodes)

    raise EngineError("unknown_change", f"unsupported change atom {change!r}")


def reachable_nodes(sb: Storyboard, start: int) -> set[int]:
    """Transitive closure along outgoing edges, the start node included.

    Edge targets that do not exist are skipped; the start id must exist.
    """
    if sb.node_by_id(start) is None:
        raise EngineError("unknown_node", f"no node with id {start}")
    seen = {start}
    frontier = deque([start])
    while frontier:
        node = sb.node_by_id(frontier.popleft())
        if node is None:
            continue
        for target in node.outgoing_edges:
            if target not in seen and sb.node_by_id(target) is not None:
                seen.add(target)
                frontier.append(target)
    return seen
