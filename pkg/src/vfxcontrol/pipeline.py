"""Intent-to-panel generation pipeline.

Renders the prompt bundle, calls the provider, validates every structured
output against its schema and the catalog, applies the documented fallback
rules, and assembles control panels and brush palettes. Request construction
is split out per prompt so transcripts recorded offline replay against the
exact requests the runtime builds.
"""

from __future__ import annotations

import json
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable, Mapping, Sequence

from pydantic import ValidationError

from .catalog import Catalog
from .errors import GenerationValidationError, PipelineError, ProviderError
from .prompts import load_template, render
from .provider import ImagePart, Message, Provider, ProviderRequest
from .schemas import (
    AddEditDecision,
    AttributeSpec,
    AttributeUiConfig,
    BrushPalette,
    BrushSpec,
    ConceptSpec,
    ConceptUiConfig,
    DefaultValue,
    HierarchySpec,
    TechnicalUiConfig,
    choose_default,
    sanitize_concept_ui,
    sanitize_technical_ui,
    validate_hierarchy,
    validate_palette,
)
from .tree import ControlNode, ControlRange, PanelConfig, ControlTree, normalize_weights

# Display names for the add/edit prompt's allowed-type list.
_TYPE_DISPLAY = {"trail": "trail-effect"}
_TYPE_ALIASES = {"trail-effect": "trail"}

# Per-prompt provider settings (temperature, max_tokens, structured-output).
CALL_SETTINGS: dict[str, tuple[float, int, bool]] = {
    "add_edit": (0.1, 4000, True),
    "brush": (0.1, 1000, False),
    "intent_decomposition": (0.1, 4000, True),
    "concept_ui": (0.2, 1200, False),
    "attribute_ui": (0.1, 3000, False),
    "default_value": (0.1, 300, False),
}

SKETCH_GUIDANCE = (
    "Analyze the sketch thoroughly for direction and position of the intended "
    "modifications relative to the particle system in the scene"
)
SCENE_GUIDANCE = (
    "Ground the concepts, attributes, and technical parameters in the visible scene context"
)


def fmt_num(value: float) -> str:
    """Integral floats print without the trailing .0 so prompts stay readable."""
    f = float(value)
    return str(int(f)) if f.is_integer() else repr(f)


def available_types_text(kinds: Sequence[str]) -> str:
    return ", ".join(_TYPE_DISPLAY.get(k, k) for k in kinds)


def normalize_template_kind(name: str) -> str:
    cleaned = name.strip().lower()
    return _TYPE_ALIASES.get(cleaned, cleaned)


def load_icon_vocabulary(path: str | None = None) -> list[str]:
    if path is None:
        doc = json.loads(resources.files("vfxcontrol.data").joinpath("icons.json").read_text())
    else:
        doc = json.loads(open(path).read())
    return list(doc["icons"])


@dataclass
class SketchStroke:
    points: list[tuple[float, float]]
    brush_id: int | None = None  # None marks an untagged annotation stroke


@dataclass
class SketchData:
    strokes: list[SketchStroke] = field(default_factory=list)
    used_brushes: list[dict] = field(default_factory=list)  # {color, functionality}
    overlay_image: bytes | None = None

    @property
    def has_brush_context(self) -> bool:
        return bool(self.used_brushes)


@dataclass
class GenerationContext:
    """Everything one generation needs to know about the session."""

    particle_type: str
    user_prompt: str
    scene_objects: list[dict] = field(default_factory=list)  # {name, position}
    emitter_position: tuple[float, float, float] = (0.0, 0.0, 0.0)
    screenshot: bytes | None = None
    sketch: SketchData | None = None
    current_values: dict[str, float] = field(default_factory=dict)

    def scene_text(self) -> str:
        if not self.scene_objects:
            return "empty scene"
        return ", ".join(
            f"{obj['name']} at [{', '.join(fmt_num(c) for c in obj['position'])}]"
            for obj in self.scene_objects
        )

    def sketch_text(self) -> str:
        if self.sketch is None or not self.sketch.strokes:
            return "no sketch provided"
        used = "; ".join(
            f"{b['functionality']!r} ({b['color']})" for b in self.sketch.used_brushes
        )
        n = len(self.sketch.strokes)
        summary = f"{n} stroke(s) drawn over the scene"
        return f"{summary}; brushes used: {used}" if used else summary

    def images(self) -> tuple[ImagePart, ...]:
        parts = []
        if self.screenshot is not None:
            parts.append(ImagePart(data=self.screenshot))
        if self.sketch is not None and self.sketch.overlay_image is not None:
            parts.append(ImagePart(data=self.sketch.overlay_image))
        return tuple(parts)


def _request(kind: str, messages: Sequence[Message], stream: bool = False) -> ProviderRequest:
    temperature, max_tokens, structured = CALL_SETTINGS[kind]
    return ProviderRequest(
        messages=tuple(messages),
        temperature=temperature,
        max_tokens=max_tokens,
        structured_output=structured,
        stream=stream,
    )


def parse_json_response(text: str, stage: str) -> dict:
    """Strict parse with one bounded repair attempt (strip non-JSON framing)."""
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        pass
    stripped = re.sub(r"^```(?:json)?\s*|\s*```$", "", text.strip())
    start, end = stripped.find("{"), stripped.rfind("}")
    if start != -1 and end > start:
        try:
            return json.loads(stripped[start : end + 1])
        except json.JSONDecodeError:
            pass
    raise PipelineError(stage, f"response is not valid JSON: {text[:200]!r}")


# -- add/edit decision --------------------------------------------------------


def build_add_edit_request(
    context: GenerationContext, template_kinds: Sequence[str]
) -> ProviderRequest:
    text = render(
        "add_edit",
        {
            "USER_PROMPT": context.user_prompt,
            "AVAILABLE_TYPES": available_types_text(template_kinds),
            "CURRENT_TYPE": context.particle_type,
        },
    )
    return _request("add_edit", [Message(role="user", text=text, images=context.images())])


def decide_add_or_edit(
    provider: Provider, context: GenerationContext, template_kinds: Sequence[str]
) -> AddEditDecision:
    request = build_add_edit_request(context, template_kinds)
    response = provider.send(request)
    doc = parse_json_response(response.text, "add_edit")
    try:
        decision = AddEditDecision.model_validate(doc)
    except ValidationError as exc:
        raise GenerationValidationError("add_edit", str(exc)) from exc
    if decision.should_add_particle:
        kind = normalize_template_kind(decision.particle_type)
        if kind not in template_kinds:
            raise GenerationValidationError(
                "add_edit", f"particle_type {decision.particle_type!r} is not in the template library"
            )
        decision.particle_type = kind
    return decision


# -- brush palette --------------------------------------------------------------


def build_brush_request(context: GenerationContext, catalog: Catalog, stream: bool = False) -> ProviderRequest:
    details = "\n".join(f"- {s.name}: {s.description}" for s in catalog)
    system_text = render(
        "brush_system",
        {"PARTICLE_SYSTEM_TYPE": context.particle_type, "PARAMETER_DETAILS": details},
    )
    user_text = render("brush_user", {})
    return _request(
        "brush",
        [
            Message(role="system", text=system_text),
            Message(role="user", text=user_text, images=context.images()),
        ],
        stream=stream,
    )


_BRUSH_OBJECT_RE = re.compile(r"\{[^{}]*\"brushid\"[^{}]*\}", re.DOTALL)


def scan_complete_brushes(buffer: str) -> list[BrushSpec]:
    """Parse every complete brush object in a (possibly partial) response.

    Used to surface brushes progressively while a palette streams in; invalid
    fragments are skipped here and caught by the final full-palette validation.
    """
    brushes = []
    for match in _BRUSH_OBJECT_RE.finditer(buffer):
        try:
            brushes.append(BrushSpec.model_validate(json.loads(match.group(0))))
        except (json.JSONDecodeError, ValidationError):
            continue
    return brushes


def generate_brushes(
    provider: Provider,
    context: GenerationContext,
    catalog: Catalog,
    icon_vocabulary: Sequence[str],
    on_brush: Callable[[BrushSpec], None] | None = None,
    stream: bool = False,
) -> list[BrushSpec]:
    request = build_brush_request(context, catalog, stream=stream)
    surfaced = 0

    if on_brush is not None:
        buffer_parts: list[str] = []

        def on_delta(delta: str) -> None:
            nonlocal surfaced
            buffer_parts.append(delta)
            complete = scan_complete_brushes("".join(buffer_parts))
            for brush in complete[surfaced:]:
                on_brush(brush)
            surfaced = max(surfaced, len(complete))

        response = provider.send(request, on_delta=on_delta)
    else:
        response = provider.send(request)
    doc = parse_json_response(response.text, "brush_generation")
    try:
        palette = BrushPalette.model_validate(doc)
    except ValidationError as exc:
        raise GenerationValidationError("brush_generation", str(exc)) from exc
    validate_palette(palette, icon_vocabulary)
    return palette.brushes


# -- intent decomposition ---------------------------------------------------------


def _sketch_slots(context: GenerationContext) -> dict[str, str]:
    sketch = context.sketch
    if sketch is not None and sketch.strokes and sketch.has_brush_context:
        descriptors = json.dumps(
            [
                {"color": b["color"], "functionality": b["functionality"]}
                for b in sketch.used_brushes
            ]
        )
        return {
            "SKETCH_CONTEXT_BLOCK": load_template("sketch_context").rstrip("\n"),
            "BRUSH_CONTEXT_IF_SKETCH": render(
                "brush_context", {"BRUSH_DESCRIPTIONS_JSON": descriptors}
            ).rstrip("\n"),
            "AND_SKETCH_IF_PRESENT": "and the sketch overlay",
            "VISUAL_CONTEXT_GUIDANCE": SKETCH_GUIDANCE,
        }
    return {
        "SKETCH_CONTEXT_BLOCK": "",
        "BRUSH_CONTEXT_IF_SKETCH": "",
        "AND_SKETCH_IF_PRESENT": "" if sketch is None or not sketch.strokes else "and the sketch overlay",
        "VISUAL_CONTEXT_GUIDANCE": SCENE_GUIDANCE,
    }


def build_intent_request(context: GenerationContext, catalog: Catalog) -> ProviderRequest:
    slots = {
        "PARTICLE_SYSTEM_TYPE": context.particle_type,
        "USER_PROMPT": context.user_prompt,
        "TECHNICAL_PARAMETERS": ", ".join(catalog.names()),
        "PARAMETER_DESCRIPTIONS_JSON": json.dumps(catalog.descriptions(), indent=2),
    }
    slots.update(_sketch_slots(context))
    text = render("intent_decomposition", slots)
    return _request(
        "intent_decomposition", [Message(role="user", text=text, images=context.images())]
    )


def decompose_intent(
    provider: Provider, context: GenerationContext, catalog: Catalog
) -> HierarchySpec:
    request = build_intent_request(context, catalog)
    response = provider.send(request)
    doc = parse_json_response(response.text, "intent_decomposition")
    try:
        spec = HierarchySpec.model_validate(doc)
    except ValidationError as exc:
        raise GenerationValidationError("intent_decomposition", str(exc)) from exc
    validate_hierarchy(spec, catalog)
    return spec


# -- concept UI --------------------------------------------------------------------


def build_concept_ui_request(
    context: GenerationContext, concept: ConceptSpec, sibling_names: Sequence[str]
) -> ProviderRequest:
    child_names = ", ".join(a.name for a in concept.attributes)
    text = render(
        "concept_ui",
        {
            "CONCEPT_NAME": concept.name,
            "PARTICLE_SYSTEM_TYPE": context.particle_type,
            "USER_INTENT": context.user_prompt,
            "RELEVANCE_EXPLANATION": concept.description,
            "DESCRIPTION": concept.description,
            "SIBLING_PARAMETERS": ", ".join(sibling_names) or "none",
            "SCENE_INFO": context.scene_text(),
            "SKETCH_INFO": context.sketch_text(),
            "CHILD_ATTRIBUTE_NAMES": child_names,
        },
    )
    return _request("concept_ui", [Message(role="user", text=text)])


def generate_concept_ui(
    provider: Provider,
    context: GenerationContext,
    concept: ConceptSpec,
    sibling_names: Sequence[str],
) -> ConceptUiConfig:
    request = build_concept_ui_request(context, concept, sibling_names)
    response = provider.send(request)
    doc = parse_json_response(response.text, "concept_ui")
    try:
        config = ConceptUiConfig.model_validate(doc)
    except ValidationError as exc:
        raise GenerationValidationError("concept_ui", str(exc)) from exc
    return sanitize_concept_ui(config, [a.name for a in concept.attributes], "concept_ui")


# -- attribute + technical UI ---------------------------------------------------------


def _parameter_items(
    attribute: AttributeSpec, context: GenerationContext, catalog: Catalog
) -> list[dict[str, str]]:
    items = []
    for ref in attribute.technical_parameters:
        spec = catalog.get(ref.name)
        current = float(context.current_values.get(ref.name, spec.default))
        items.append(
            {
                "PARAM_NAME": ref.name,
                "RELEVANCE": ref.description or spec.description,
                "DESCRIPTION": spec.description,
                "MIN": fmt_num(spec.min),
                "MAX": fmt_num(spec.max),
                "INFO_JSON": json.dumps(
                    {"current_value": int(current) if current.is_integer() else current}
                ),
            }
        )
    return items


def build_attribute_ui_request(
    context: GenerationContext,
    concept: ConceptSpec,
    attribute: AttributeSpec,
    catalog: Catalog,
) -> ProviderRequest:
    slots = {
        "ATTRIBUTE_NAME": attribute.name,
        "PARTICLE_SYSTEM_TYPE": context.particle_type,
        "USER_PROMPT": context.user_prompt,
        "CONCEPT_CONTEXT": concept.name,
        "ATTRIBUTE_DESCRIPTION": attribute.description,
        "SCENE_INFO": context.scene_text(),
        "SKETCH_INFO": context.sketch_text(),
        "POSITION_JSON": "[" + ", ".join(fmt_num(c) for c in context.emitter_position) + "]",
        "TECH_PARAM_NAMES": ", ".join(t.name for t in attribute.technical_parameters),
    }
    text = render(
        "attribute_ui", slots, repeat_items=_parameter_items(attribute, context, catalog)
    )
    return _request("attribute_ui", [Message(role="user", text=text, images=context.images())])


def _sanitize_attribute_ui(
    config: AttributeUiConfig,
    attribute: AttributeSpec,
    context: GenerationContext,
    catalog: Catalog,
) -> AttributeUiConfig:
    expected = [t.name for t in attribute.technical_parameters]
    got = [c.parameter_name for c in config.technicalParameterConfigs]
    if sorted(got) != sorted(expected):
        raise GenerationValidationError(
            "attribute_ui", f"technical configs {sorted(got)} != attribute parameters {sorted(expected)}"
        )
    sanitized = [
        sanitize_technical_ui(
            c,
            context.current_values.get(c.parameter_name, catalog.get(c.parameter_name).default),
            catalog,
        )
        for c in config.technicalParameterConfigs
    ]
    return AttributeUiConfig(
        attributeConfig=sanitize_concept_ui(config.attributeConfig, expected, "attribute_ui"),
        technicalParameterConfigs=sanitized,
    )


def generate_attribute_ui(
    provider: Provider,
    context: GenerationContext,
    concept: ConceptSpec,
    attribute: AttributeSpec,
    catalog: Catalog,
) -> AttributeUiConfig:
    """Single-call generation for the attribute and all its parameters; falls
    back to per-parameter calls when the combined response cannot be used."""
    request = build_attribute_ui_request(context, concept, attribute, catalog)
    try:
        response = provider.send(request)
        doc = parse_json_response(response.text, "attribute_ui")
        config = AttributeUiConfig.model_validate(doc)
        return _sanitize_attribute_ui(config, attribute, context, catalog)
    except (PipelineError, ProviderError, ValidationError) as first_error:
        configs: list[TechnicalUiConfig] = []
        attribute_config: ConceptUiConfig | None = None
        for ref in attribute.technical_parameters:
            single = AttributeSpec(
                name=attribute.name,
                description=attribute.description,
                technical_parameters=[ref],
            )
            retry = build_attribute_ui_request(context, concept, single, catalog)
            try:
                response = provider.send(retry)
                doc = parse_json_response(response.text, "attribute_ui")
                config = AttributeUiConfig.model_validate(doc)
            except (PipelineError, ProviderError, ValidationError) as exc:
                raise PipelineError(
                    "attribute_ui",
                    f"combined and per-parameter generation failed for "
                    f"{attribute.name!r}/{ref.name!r}: {exc} (initial failure: {first_error})",
                ) from exc
            if not config.technicalParameterConfigs:
                raise PipelineError(
                    "attribute_ui", f"per-parameter response for {ref.name!r} has no config"
                )
            configs.append(
                sanitize_technical_ui(
                    config.technicalParameterConfigs[0],
                    context.current_values.get(ref.name, catalog.get(ref.name).default),
                    catalog,
                )
            )
            if attribute_config is None:
                attribute_config = config.attributeConfig
        assert attribute_config is not None
        # per-parameter attributeConfigs carry single-child presets/weights;
        # rebuild them over the full child list with the equal-split fallback
        full_children = [t.name for t in attribute.technical_parameters]
        merged = ConceptUiConfig(
            parameter_name=attribute.name,
            min=attribute_config.min,
            max=attribute_config.max,
            sliderStepLabels=attribute_config.sliderStepLabels,
            dropDownOptions=[
                type(p)(label=p.label, value={c.parameter_name: c.max for c in configs})
                for p in attribute_config.dropDownOptions
            ],
            childWeights={},
        )
        return AttributeUiConfig(
            attributeConfig=sanitize_concept_ui(merged, full_children, "attribute_ui"),
            technicalParameterConfigs=configs,
        )


# -- default values --------------------------------------------------------------------


def build_default_request(
    context: GenerationContext, parameter_name: str, description: str, lo: float, hi: float
) -> ProviderRequest:
    text = render(
        "default_value",
        {
            "PARAMETER_NAME": parameter_name,
            "PARTICLE_SYSTEM_TYPE": context.particle_type,
            "USER_PROMPT": context.user_prompt,
            "DESCRIPTION": description,
            "MIN": fmt_num(lo),
            "MAX": fmt_num(hi),
            "AND_SKETCH_IF_PRESENT": (
                "and the sketch overlay" if context.sketch and context.sketch.strokes else ""
            ),
            "SCENE_OBJECTS": context.scene_text(),
        },
    )
    return _request("default_value", [Message(role="user", text=text, images=context.images())])


def infer_default(
    provider: Provider,
    context: GenerationContext,
    parameter_name: str,
    description: str,
    lo: float,
    hi: float,
) -> float:
    """Always yields a value inside the generated range; the midpoint covers
    failed calls and out-of-range answers."""
    request = build_default_request(context, parameter_name, description, lo, hi)
    try:
        response = provider.send(request)
        doc = parse_json_response(response.text, "default_value")
        candidate = DefaultValue.model_validate(doc).defaultValue
    except (PipelineError, ProviderError, ValidationError):
        candidate = None
    return choose_default(candidate, lo, hi)


# -- assembly -----------------------------------------------------------------------------


def assemble_panel(
    hierarchy: HierarchySpec,
    concept_configs: Mapping[str, ConceptUiConfig],
    attribute_configs: Mapping[str, AttributeUiConfig],
    defaults: Mapping[str, float],
    catalog: Catalog,
) -> PanelConfig:
    """Merge validated outputs into a PanelConfig whose leaf values are the
    inferred defaults and whose parents satisfy the weighted-mean relation."""
    nodes: dict[str, ControlNode] = {}
    bindings: dict[str, str] = {}
    roots: list[str] = []
    for concept in hierarchy.concepts:
        if concept.name not in concept_configs:
            raise PipelineError("assembly", f"missing concept UI config for {concept.name!r}")
        concept_cfg = concept_configs[concept.name]
        attr_names = [a.name for a in concept.attributes]
        nodes[concept.name] = ControlNode(
            id=concept.name,
            name=concept.name,
            level="concept",
            description=concept.description,
            range=ControlRange(concept_cfg.min, concept_cfg.max),
            children=list(attr_names),
            child_weights=normalize_weights(concept_cfg.childWeights, attr_names),
            step_labels=list(concept_cfg.sliderStepLabels),
            dropdown_presets={p.label: dict(p.value) for p in concept_cfg.dropDownOptions},
        )
        roots.append(concept.name)
        for attribute in concept.attributes:
            if attribute.name not in attribute_configs:
                raise PipelineError(
                    "assembly", f"missing attribute UI config for {attribute.name!r}"
                )
            attr_ui = attribute_configs[attribute.name]
            attr_cfg = attr_ui.attributeConfig
            tech_names = [t.name for t in attribute.technical_parameters]
            nodes[attribute.name] = ControlNode(
                id=attribute.name,
                name=attribute.name,
                level="attribute",
                description=attribute.description,
                range=ControlRange(attr_cfg.min, attr_cfg.max),
                children=list(tech_names),
                child_weights=normalize_weights(attr_cfg.childWeights, tech_names),
                step_labels=list(attr_cfg.sliderStepLabels),
                dropdown_presets={p.label: dict(p.value) for p in attr_cfg.dropDownOptions},
            )
            tech_by_name = {c.parameter_name: c for c in attr_ui.technicalParameterConfigs}
            for ref in attribute.technical_parameters:
                cfg = tech_by_name.get(ref.name)
                if cfg is None:
                    raise PipelineError("assembly", f"missing technical config for {ref.name!r}")
                if ref.name not in defaults:
                    raise PipelineError("assembly", f"missing default for {ref.name!r}")
                node_range = ControlRange(cfg.min, cfg.max)
                nodes[ref.name] = ControlNode(
                    id=ref.name,
                    name=ref.name,
                    level="technical",
                    description=ref.description or catalog.get(ref.name).description,
                    range=node_range,
                    value=node_range.normalize(defaults[ref.name]),
                    step_labels=list(cfg.sliderStepLabels),
                    dropdown_presets={
                        o.label: {ref.name: o.value} for o in cfg.dropDownOptions
                    },
                )
                bindings[ref.name] = ref.name
    panel = PanelConfig(
        panel_name=hierarchy.panel_name, roots=roots, nodes=nodes, bindings=bindings
    )
    ControlTree(panel).recompute_all()
    return panel


# -- orchestration ---------------------------------------------------------------------------


def run_edit_pipeline(
    provider: Provider,
    context: GenerationContext,
    catalog: Catalog,
    parallel: bool = True,
) -> tuple[HierarchySpec, PanelConfig]:
    """Full modify path: decompose, generate UI configs (concept- and
    attribute-level calls may run concurrently), infer defaults, assemble."""
    hierarchy = decompose_intent(provider, context, catalog)
    concept_names = [c.name for c in hierarchy.concepts]

    concept_jobs = [
        (concept, [n for n in concept_names if n != concept.name])
        for concept in hierarchy.concepts
    ]
    attribute_jobs = [
        (concept, attribute)
        for concept in hierarchy.concepts
        for attribute in concept.attributes
    ]

    if parallel:
        with ThreadPoolExecutor(max_workers=4) as pool:
            concept_futures = {
                concept.name: pool.submit(generate_concept_ui, provider, context, concept, siblings)
                for concept, siblings in concept_jobs
            }
            attribute_futures = {
                attribute.name: pool.submit(
                    generate_attribute_ui, provider, context, concept, attribute, catalog
                )
                for concept, attribute in attribute_jobs
            }
            concept_configs = {name: f.result() for name, f in concept_futures.items()}
            attribute_configs = {name: f.result() for name, f in attribute_futures.items()}
    else:
        concept_configs = {
            concept.name: generate_concept_ui(provider, context, concept, siblings)
            for concept, siblings in concept_jobs
        }
        attribute_configs = {
            attribute.name: generate_attribute_ui(provider, context, concept, attribute, catalog)
            for concept, attribute in attribute_jobs
        }

    defaults: dict[str, float] = {}
    for _, attribute in attribute_jobs:
        attr_ui = attribute_configs[attribute.name]
        for cfg in attr_ui.technicalParameterConfigs:
            description = catalog.get(cfg.parameter_name).description
            defaults[cfg.parameter_name] = infer_default(
                provider, context, cfg.parameter_name, description, cfg.min, cfg.max
            )

    panel = assemble_panel(hierarchy, concept_configs, attribute_configs, defaults, catalog)
    return hierarchy, panel
