"""Prompt template loading and rendering.

Template bodies ship as data files with `[VARIABLE]` slots and must never be
edited in place: rendered text differs from the stored body only at
substituted slots. The attribute template contains a repeating per-parameter
block marked by a `[FOR EACH PARAMETER:]` line; rendering expands the line
that follows the marker once per supplied item.
"""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources
from typing import Mapping, Sequence

from .errors import RenderError

TEMPLATE_IDS = (
    "add_edit",
    "brush_system",
    "brush_user",
    "intent_decomposition",
    "concept_ui",
    "attribute_ui",
    "default_value",
)
CONDITIONAL_BLOCK_IDS = ("sketch_context", "brush_context")

REPEAT_MARKER = "[FOR EACH PARAMETER:]"
_SLOT_RE = re.compile(r"\[([A-Z][A-Z0-9_]{2,})\]")


@lru_cache(maxsize=None)
def load_template(template_id: str) -> str:
    if template_id not in TEMPLATE_IDS and template_id not in CONDITIONAL_BLOCK_IDS:
        raise RenderError(f"unknown template id {template_id!r}")
    return (
        resources.files("vfxcontrol.data.prompts").joinpath(f"{template_id}.txt").read_text()
    )


def _substitute(text: str, slots: Mapping[str, str]) -> str:
    for key, value in slots.items():
        text = text.replace(f"[{key}]", str(value))
    return text


def _check_slots(template_id: str, text: str, provided: Mapping[str, str]) -> None:
    required = set(_SLOT_RE.findall(text))
    missing = sorted(required - set(provided))
    if missing:
        raise RenderError(f"template {template_id!r} missing slot(s): {', '.join(missing)}")


def render(
    template_id: str,
    slots: Mapping[str, str],
    repeat_items: Sequence[Mapping[str, str]] | None = None,
) -> str:
    """Render a template body. Raises RenderError naming any slot the
    caller failed to provide."""
    body = load_template(template_id)

    if REPEAT_MARKER in body:
        if repeat_items is None:
            raise RenderError(
                f"template {template_id!r} has a per-parameter block but no items were given"
            )
        lines = body.split("\n")
        marker_index = lines.index(REPEAT_MARKER)
        item_template = lines[marker_index + 1]
        rendered_items = []
        for item in repeat_items:
            _check_slots(template_id, item_template, item)
            rendered_items.append(_substitute(item_template, item))
        # slots in the repeated line come from the items; check the rest of the body
        fixed_part = "\n".join(lines[:marker_index] + lines[marker_index + 2 :])
        _check_slots(template_id, fixed_part, slots)
        lines[marker_index : marker_index + 2] = rendered_items
        body = "\n".join(lines)
    elif repeat_items is not None:
        raise RenderError(f"template {template_id!r} has no per-parameter block")
    else:
        _check_slots(template_id, body, slots)

    return _substitute(body, slots)
