"""Deterministic serialization of verdicts and trees: JSON payloads that
are byte-identical across runs, and DOT output for small trees."""

from __future__ import annotations

import dataclasses
import json

from .ends_tree import ComponentTree
from .errors import Exceeds

DOT_NODE_LIMIT = 5000


def _sort_key(value) -> str:
    return json.dumps(value, sort_keys=True)


def to_jsonable(obj):
    """Recursively convert to plain JSON types.

    Sets are emitted as sorted lists and dict keys become sorted strings,
    so equal values always serialize identically. Anything unrecognized
    falls back to str().
    """
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if isinstance(obj, Exceeds):
        return {"exceeds": obj.cap}
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {
            f.name: to_jsonable(getattr(obj, f.name))
            for f in dataclasses.fields(obj)
        }
    if isinstance(obj, dict):
        items = {str(k): to_jsonable(v) for k, v in obj.items()}
        return dict(sorted(items.items()))
    if isinstance(obj, (set, frozenset)):
        return sorted((to_jsonable(x) for x in obj), key=_sort_key)
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    return str(obj)


def render_report(payload: dict) -> str:
    """Canonical JSON text: sorted keys, two-space indent, one trailing
    newline."""
    return json.dumps(to_jsonable(payload), sort_keys=True, indent=2) + "\n"


def tree_to_dot(tree: ComponentTree) -> str:
    """DOT digraph of a component tree: one node per component, labeled
    with its cut radius, representative and size; edges run child to
    parent. Intended for trees under DOT_NODE_LIMIT nodes."""
    lines = ["digraph component_tree {", "  rankdir=BT;"]
    for li, level in enumerate(tree.levels):
        for ni, node in enumerate(level.nodes):
            shape = "box" if node.horizon_touching else "ellipse"
            label = f"cut {level.cut}: {node.rep} ({node.size})"
            lines.append(f'  n{li}_{ni} [label="{label}", shape={shape}];')
    for li, level in enumerate(tree.levels[1:], start=1):
        for ni, node in enumerate(level.nodes):
            for p in node.parents:
                lines.append(f"  n{li}_{ni} -> n{li - 1}_{p};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def tree_level_table(tree: ComponentTree) -> str:
    """Plain-text per-level summary used when a tree is too large to
    draw."""
    lines = [
        f"# component tree for {tree.group_name}: "
        f"{tree.total_nodes()} nodes (DOT limit {DOT_NODE_LIMIT})",
        "cut\thorizon\tcomponents\thorizon_touching",
    ]
    for level in tree.levels:
        lines.append(
            f"{level.cut}\t{level.horizon}\t{len(level.nodes)}\t{level.horizon_count()}"
        )
    return "\n".join(lines) + "\n"
