"""Technical-parameter catalog: the vocabulary every other layer validates against.

Each entry carries a natural-language description, a numeric range with a
default, and an engine path template. The bundled document is the canonical
catalog; alternate engines can ship richer documents in the same format.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

from .errors import CatalogError, UnknownParameterError

EMITTER_PLACEHOLDER = "{emitterIndex}"
GROUP_SENTINEL_PREFIX = "__group_"

_REQUIRED_FIELDS = ("name", "description", "min", "max", "default", "path")


@dataclass(frozen=True)
class ParamSpec:
    """One catalog entry. Range is canonical: min < max always."""

    name: str
    description: str
    min: float
    max: float
    default: float
    path_template: str

    def clamp(self, value: float) -> float:
        if value < self.min:
            return self.min
        if value > self.max:
            return self.max
        return value

    def contains(self, value: float) -> bool:
        return self.min <= value <= self.max


@dataclass(frozen=True)
class ParamPath:
    """A resolved engine path. `group` is set for grouped writes (e.g. emitter position)."""

    segments: str
    group: str | None = None


@dataclass(frozen=True)
class Violation:
    """Failed assignment check: which parameter and which bound."""

    parameter: str
    reason: str


class Catalog:
    """Ordered, immutable collection of ParamSpecs with name lookup."""

    def __init__(self, specs: tuple[ParamSpec, ...], version: str):
        self.specs = specs
        self.version = version
        self._by_name = {s.name: s for s in specs}

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def __iter__(self):
        return iter(self.specs)

    def __len__(self) -> int:
        return len(self.specs)

    def get(self, name: str) -> ParamSpec:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownParameterError(f"unknown parameter {name!r}") from None

    def names(self) -> list[str]:
        return [s.name for s in self.specs]

    def descriptions(self) -> dict[str, str]:
        return {s.name: s.description for s in self.specs}

    def defaults(self) -> dict[str, float]:
        return {s.name: s.default for s in self.specs}


def _parse_entry(raw: Mapping[str, Any], index: int) -> ParamSpec:
    missing = [f for f in _REQUIRED_FIELDS if f not in raw]
    if missing:
        raise CatalogError(f"entry {index} missing fields {missing}: {dict(raw)!r}")
    name = raw["name"]
    try:
        lo, hi, default = float(raw["min"]), float(raw["max"]), float(raw["default"])
    except (TypeError, ValueError) as exc:
        raise CatalogError(f"entry {index} ({name!r}) has non-numeric bounds") from exc
    if not lo < hi:
        raise CatalogError(f"entry {index} ({name!r}) has inverted or empty range {lo}..{hi}")
    # The range table is authoritative; a default outside it is pulled to the
    # nearest bound rather than rejected.
    default = min(max(default, lo), hi)
    return ParamSpec(
        name=name,
        description=str(raw["description"]),
        min=lo,
        max=hi,
        default=default,
        path_template=str(raw["path"]),
    )


def load_catalog(source: str | Path | Mapping[str, Any] | None = None) -> Catalog:
    """Load a catalog document. `source` may be a path, a parsed mapping, or
    None for the bundled catalog."""
    if source is None:
        doc = json.loads(
            resources.files("vfxcontrol.data").joinpath("catalog.json").read_text()
        )
    elif isinstance(source, Mapping):
        doc = source
    else:
        path = Path(source)
        try:
            doc = json.loads(path.read_text())
        except FileNotFoundError:
            raise CatalogError(f"catalog file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise CatalogError(f"catalog is not valid JSON: {exc}") from exc
    if not isinstance(doc, Mapping) or "parameters" not in doc:
        raise CatalogError("catalog document must be an object with a 'parameters' list")
    raw_entries = doc["parameters"]
    if not isinstance(raw_entries, list) or not raw_entries:
        raise CatalogError("catalog 'parameters' must be a non-empty list")
    specs: list[ParamSpec] = []
    seen: set[str] = set()
    for i, raw in enumerate(raw_entries):
        spec = _parse_entry(raw, i)
        if spec.name in seen:
            raise CatalogError(f"duplicate parameter name {spec.name!r}")
        seen.add(spec.name)
        specs.append(spec)
    return Catalog(specs=tuple(specs), version=str(doc.get("version", "1")))


def clamp_to_range(catalog: Catalog, name: str, value: float) -> float:
    return catalog.get(name).clamp(value)


def resolve_path(catalog: Catalog, name: str, emitter_index: int = 0) -> ParamPath:
    """Substitute the emitter index into the entry's path template.

    Group sentinels (paths starting with `__group_`) resolve to themselves and
    carry the group name so the engine can route the write.
    """
    spec = catalog.get(name)
    template = spec.path_template
    if template.startswith(GROUP_SENTINEL_PREFIX):
        return ParamPath(segments=template, group=template)
    if emitter_index < 0:
        raise CatalogError(f"emitter index must be >= 0, got {emitter_index}")
    return ParamPath(segments=template.replace(EMITTER_PLACEHOLDER, str(emitter_index)))


def validate_assignment(catalog: Catalog, name: str, value: float) -> Violation | None:
    """None when the assignment is valid; otherwise a Violation naming the bound."""
    if name not in catalog:
        return Violation(parameter=name, reason="unknown parameter")
    spec = catalog.get(name)
    if value < spec.min:
        return Violation(parameter=name, reason=f"value {value} below min {spec.min}")
    if value > spec.max:
        return Violation(parameter=name, reason=f"value {value} above max {spec.max}")
    return None
