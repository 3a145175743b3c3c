"""Structured-output schemas for everything the model returns.

Field names match the wire JSON exactly (camelCase where the prompts demand
it). Shape constraints live here; rules that need the catalog or the live
system state (name membership, channel grouping, range clipping, the
current-to-goal anchor) live in the sanitize/validate helpers below.
"""

from __future__ import annotations

import re
from typing import Sequence

from pydantic import BaseModel, Field, field_validator

from .catalog import Catalog
from .errors import GenerationValidationError

HEX_COLOR_RE = re.compile(r"^#(?:[0-9a-fA-F]{3}|[0-9a-fA-F]{6})$")

# Parameters that only make sense as a full channel/axis group under one attribute.
CHANNEL_GROUPS: tuple[tuple[str, ...], ...] = (
    ("color_start_red", "color_start_green", "color_start_blue"),
    ("color_end_red", "color_end_green", "color_end_blue"),
    ("position_x", "position_y", "position_z"),
    ("force_x", "force_y", "force_z"),
)


class AddEditDecision(BaseModel):
    """Whether the user's intent adds a new particle system or edits the current one."""

    should_add_particle: bool
    particle_type: str = ""
    reason: str = ""


class BrushSpec(BaseModel):
    """One scene-grounded sketch tool."""

    brushid: int = Field(ge=1, le=7)
    functionality: str
    color: str
    icon: str

    @field_validator("functionality")
    @classmethod
    def _short_phrase(cls, v: str) -> str:
        if not v.strip():
            raise ValueError("functionality must be non-empty")
        if len(v.split()) > 5:
            raise ValueError(f"functionality must be at most 5 words, got {v!r}")
        return v

    @field_validator("color")
    @classmethod
    def _hex_color(cls, v: str) -> str:
        if not HEX_COLOR_RE.match(v):
            raise ValueError(f"color must be a hex color, got {v!r}")
        return v


class BrushPalette(BaseModel):
    brushes: list[BrushSpec]


class TechParamRef(BaseModel):
    name: str
    description: str = ""


class AttributeSpec(BaseModel):
    name: str
    description: str = ""
    technical_parameters: list[TechParamRef]


class ConceptSpec(BaseModel):
    name: str
    description: str = ""
    attributes: list[AttributeSpec]


class HierarchySpec(BaseModel):
    """Validated three-level decomposition of the user's intent."""

    panel_name: str
    concepts: list[ConceptSpec]


class DropdownPreset(BaseModel):
    label: str
    value: dict[str, float]


class ConceptUiConfig(BaseModel):
    """UI configuration for a concept or attribute node over named children."""

    parameter_name: str
    min: float = 0
    max: float = 100
    sliderStepLabels: list[str]
    dropDownOptions: list[DropdownPreset]
    childWeights: dict[str, float] = Field(default_factory=dict)

    @field_validator("sliderStepLabels")
    @classmethod
    def _label_count(cls, v: list[str]) -> list[str]:
        if not 3 <= len(v) <= 5:
            raise ValueError(f"expected 3-5 slider step labels, got {len(v)}")
        return v


class TechDropdownOption(BaseModel):
    label: str
    value: float


class TechnicalUiConfig(BaseModel):
    """UI configuration for one technical parameter (current-to-goal range)."""

    parameter_name: str
    min: float
    max: float
    sliderStepLabels: list[str] = Field(default_factory=list)
    dropDownOptions: list[TechDropdownOption] = Field(default_factory=list)


class AttributeUiConfig(BaseModel):
    attributeConfig: ConceptUiConfig
    technicalParameterConfigs: list[TechnicalUiConfig]


class DefaultValue(BaseModel):
    defaultValue: float


# -- hierarchy validation ------------------------------------------------------


def validate_hierarchy(spec: HierarchySpec, catalog: Catalog) -> None:
    """Enforce catalog membership, three-level name uniqueness, non-empty
    levels, and channel grouping. Raises with every offender listed."""
    problems: list[str] = []
    seen: dict[str, str] = {}
    if not spec.concepts:
        problems.append("hierarchy has no concepts")

    def claim(name: str, kind: str) -> None:
        if name in seen:
            problems.append(f"duplicate name {name!r} ({seen[name]} vs {kind})")
        seen[name] = kind

    for concept in spec.concepts:
        claim(concept.name, "concept")
        if not concept.attributes:
            problems.append(f"concept {concept.name!r} has no attributes")
        for attribute in concept.attributes:
            claim(attribute.name, "attribute")
            tech_names = [t.name for t in attribute.technical_parameters]
            if not tech_names:
                problems.append(f"attribute {attribute.name!r} has no technical parameters")
            for tech in tech_names:
                claim(tech, "technical parameter")
                if tech not in catalog:
                    problems.append(f"unknown technical parameter {tech!r}")
            present = set(tech_names)
            for group in CHANNEL_GROUPS:
                hit = present.intersection(group)
                if hit and hit != set(group):
                    missing = sorted(set(group) - hit)
                    problems.append(
                        f"attribute {attribute.name!r} includes {sorted(hit)} but not {missing};"
                        " grouped channels must appear together"
                    )
    if problems:
        raise GenerationValidationError("intent_decomposition", "; ".join(problems))


# -- UI config sanitation -------------------------------------------------------


def sanitize_concept_ui(
    config: ConceptUiConfig, child_names: Sequence[str], stage: str = "concept_ui"
) -> ConceptUiConfig:
    """Check child-key agreement and preset bounds. Weight normalization and
    the 1/n fallback happen at assembly via normalize_weights."""
    expected = set(child_names)
    if config.childWeights and set(config.childWeights) != expected:
        raise GenerationValidationError(
            stage,
            f"childWeights keys {sorted(config.childWeights)} != children {sorted(expected)}",
        )
    if len(config.dropDownOptions) != 3:
        raise GenerationValidationError(
            stage, f"expected exactly 3 dropdown presets, got {len(config.dropDownOptions)}"
        )
    for preset in config.dropDownOptions:
        if set(preset.value) != expected:
            raise GenerationValidationError(
                stage,
                f"preset {preset.label!r} keys {sorted(preset.value)} != children {sorted(expected)}",
            )
    if not 0 <= config.min <= 100 or not 0 <= config.max <= 100 or config.min == config.max:
        raise GenerationValidationError(
            stage, f"concept/attribute range must be within 0-100, got {config.min}..{config.max}"
        )
    return config


def sanitize_technical_ui(
    config: TechnicalUiConfig,
    current_value: float,
    catalog: Catalog,
    stage: str = "attribute_ui",
) -> TechnicalUiConfig:
    """Apply the current-to-goal rules: min is coerced to the live current
    value, both ends are clipped into catalog bounds, inverted order is
    preserved, and a collapsed range is re-opened deterministically."""
    spec = catalog.get(config.parameter_name)
    lo = spec.clamp(current_value)
    hi = spec.clamp(config.max)
    if hi == lo:
        # collapsed after clipping; aim at the far catalog bound so the
        # slider still spans something
        hi = spec.max if lo != spec.max else spec.min
    if config.sliderStepLabels and not 3 <= len(config.sliderStepLabels) <= 5:
        raise GenerationValidationError(
            stage, f"{config.parameter_name}: expected 3-5 slider step labels"
        )
    return TechnicalUiConfig(
        parameter_name=config.parameter_name,
        min=lo,
        max=hi,
        sliderStepLabels=list(config.sliderStepLabels),
        dropDownOptions=[
            TechDropdownOption(label=o.label, value=spec.clamp(o.value))
            for o in config.dropDownOptions
        ],
    )


def choose_default(candidate: float | None, lo: float, hi: float) -> float:
    """A generated default must sit inside the generated (possibly inverted)
    range; otherwise, and on failure, the midpoint wins."""
    low, high = min(lo, hi), max(lo, hi)
    if candidate is not None and low <= candidate <= high:
        return candidate
    return (lo + hi) / 2.0


def validate_palette(palette: BrushPalette, icon_vocabulary: Sequence[str]) -> BrushPalette:
    problems = []
    if len(palette.brushes) != 7:
        problems.append(f"expected exactly 7 brushes, got {len(palette.brushes)}")
    ids = [b.brushid for b in palette.brushes]
    if len(set(ids)) != len(ids):
        problems.append(f"brush ids must be distinct, got {ids}")
    vocabulary = set(icon_vocabulary)
    for brush in palette.brushes:
        if brush.icon not in vocabulary:
            problems.append(f"brush {brush.brushid}: icon {brush.icon!r} not in vocabulary")
    if problems:
        raise GenerationValidationError("brush_generation", "; ".join(problems))
    return palette
