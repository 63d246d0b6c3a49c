"""Plain-text rendering of a GUI skeleton for reading and editing."""

from __future__ import annotations

from .model import GuiSkeleton, NavigateAction, SkeletonElement


def _element_lines(el: SkeletonElement, depth: int) -> list[str]:
    pad = "    " * depth
    attrs = ", ".join(f'{k}: "{v}"' for k, v in sorted(el.attributes.items()))
    head = f"{pad}{el.kind}"
    if attrs:
        head += f"({attrs})"
    if isinstance(el.action, NavigateAction):
        head += f" -> {el.action.destination}"
    elif isinstance(el.action, str):
        head += f' on tap: "{el.action}"'
    if not el.children:
        return [head]
    lines = [head + " {"]
    for child in el.children:
        lines.extend(_element_lines(child, depth + 1))
    lines.append("    " * depth + "}")
    return lines


def skeleton_pseudocode(skel: GuiSkeleton) -> str:
    """Indented pseudocode text view of one skeleton."""
    lines = [f"screen {skel.view_name} (node {skel.node_id})"]
    if skel.state_variables:
        lines.append("state: " + ", ".join(skel.state_variables))
    lines.extend(_element_lines(skel.layout, 0))
    return "\n".join(lines) + "\n"
