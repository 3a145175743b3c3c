"""Template rendering: golden-file fidelity, slot errors, conditional blocks.

Golden files freeze full renders for several variable sets per template; the
test fails on any byte difference, so template bodies and slot plumbing
cannot drift silently.
"""

import json
from pathlib import Path

import pytest

from vfxcontrol.errors import RenderError
from vfxcontrol.pipeline import (
    GenerationContext,
    SketchData,
    SketchStroke,
    build_add_edit_request,
    build_attribute_ui_request,
    build_brush_request,
    build_concept_ui_request,
    build_default_request,
    build_intent_request,
)
from vfxcontrol.prompts import TEMPLATE_IDS, load_template, render
from vfxcontrol.schemas import AttributeSpec, ConceptSpec, TechParamRef

GOLDEN_PROMPTS = Path(__file__).parent / "golden" / "prompts"


def plain_context(**overrides):
    defaults = dict(
        particle_type="fire",
        user_prompt="make the fire more intense and angry",
        scene_objects=[
            {"name": "campfire", "position": [0, 0, 0]},
            {"name": "tent", "position": [5, 0, 3]},
        ],
        emitter_position=(0.0, 0.0, 0.0),
        current_values={},
    )
    defaults.update(overrides)
    return GenerationContext(**defaults)


def sketch_context(**overrides):
    sketch = SketchData(
        strokes=[
            SketchStroke(points=[(0.1, 0.2), (0.4, 0.5)], brush_id=1),
            SketchStroke(points=[(0.6, 0.6), (0.7, 0.2)], brush_id=2),
        ],
        used_brushes=[
            {"color": "#FF6B35", "functionality": "increase fire intensity"},
            {"color": "#4ECDC4", "functionality": "add wind gust"},
        ],
    )
    return plain_context(sketch=sketch, **overrides)


def concept_fixture():
    return ConceptSpec(
        name="Intensity",
        description="Controls the overall power and visual impact of the effect",
        attributes=[
            AttributeSpec(
                name="emission_strength",
                description="How densely and forcefully particles appear",
                technical_parameters=[
                    TechParamRef(name="emission_time", description="Lower values emit more often"),
                    TechParamRef(name="particles_count", description="More particles per burst"),
                ],
            ),
            AttributeSpec(
                name="visual_brightness",
                description="How hot and bright the flame reads",
                technical_parameters=[
                    TechParamRef(name="alpha_start", description="Higher is more opaque")
                ],
            ),
        ],
    )


def _assert_matches_golden(name: str, text: str):
    expected = (GOLDEN_PROMPTS / name).read_text()
    assert text == expected, f"rendered prompt differs from golden {name}"


def test_every_template_loads():
    for template_id in TEMPLATE_IDS:
        assert load_template(template_id)


def test_unknown_template_id():
    with pytest.raises(RenderError):
        load_template("nope")


def test_missing_slot_named_in_error():
    with pytest.raises(RenderError, match="CURRENT_TYPE"):
        render("add_edit", {"USER_PROMPT": "x", "AVAILABLE_TYPES": "fire"})


def test_substitution_is_literal():
    text = render(
        "add_edit",
        {
            "USER_PROMPT": "add some fireworks to celebrate",
            "AVAILABLE_TYPES": "fire, fountain, firework, bubbles, trail-effect",
            "CURRENT_TYPE": "fire",
        },
    )
    assert "User Request: add some fireworks to celebrate" in text
    assert "[USER_PROMPT]" not in text and "[AVAILABLE_TYPES]" not in text


def test_brush_system_type_substituted_everywhere(catalog):
    request = build_brush_request(plain_context(), catalog)
    system_text = request.messages[0].text
    assert "[PARTICLE_SYSTEM_TYPE]" not in system_text
    assert system_text.count("ACTIVE PARTICLE SYSTEM TYPE: fire") == 1


def test_intent_sketch_block_absent_without_sketch(catalog):
    request = build_intent_request(plain_context(), catalog)
    text = request.messages[0].text
    assert "From the sketch overlay" not in text
    assert "Here are the specific brushes" not in text


def test_intent_sketch_block_present_with_sketch(catalog):
    request = build_intent_request(sketch_context(), catalog)
    text = request.messages[0].text
    assert "From the sketch overlay and brush usage" in text
    assert "Here are the specific brushes the user actively used in their sketch" in text
    assert "add wind gust" in text


def test_attribute_repeat_block_expands_per_parameter(catalog):
    concept = concept_fixture()
    context = plain_context(current_values={"emission_time": 0.1, "particles_count": 12})
    request = build_attribute_ui_request(context, concept, concept.attributes[0], catalog)
    text = request.messages[0].text
    assert "[FOR EACH PARAMETER:]" not in text
    assert text.count("- emission_time: Role:") == 1
    assert text.count("- particles_count: Role:") == 1
    assert '{"current_value": 0.1}' in text


def test_call_settings_match_documented_values(catalog):
    context = plain_context()
    concept = concept_fixture()
    checks = [
        (build_add_edit_request(context, ("fire",)), 0.1, 4000, True),
        (build_brush_request(context, catalog), 0.1, 1000, False),
        (build_intent_request(context, catalog), 0.1, 4000, True),
        (build_concept_ui_request(context, concept, []), 0.2, 1200, False),
        (build_attribute_ui_request(context, concept, concept.attributes[1], catalog), 0.1, 3000, False),
        (build_default_request(context, "velocity_theta", "spread", 0, 180), 0.1, 300, False),
    ]
    for request, temperature, max_tokens, structured in checks:
        assert request.temperature == temperature
        assert request.max_tokens == max_tokens
        assert request.structured_output is structured


# -- golden renders ----------------------------------------------------------

def golden_cases(catalog):
    """(golden filename, rendered text) for every frozen variable set."""
    contexts = {
        "fire": plain_context(),
        "fountain": plain_context(
            particle_type="fountain",
            user_prompt="make it more playful",
            scene_objects=[
                {"name": "fountain_basin", "position": [0, 0, 0]},
                {"name": "garden_lamp", "position": [4, 0, 2]},
            ],
        ),
        "sketch": sketch_context(),
    }
    concept = concept_fixture()
    cases = []
    for label, ctx in contexts.items():
        cases.append(
            (
                f"add_edit_{label}.txt",
                build_add_edit_request(
                    ctx, ("fire", "fountain", "firework", "bubbles", "trail")
                ).messages[0].text,
            )
        )
        cases.append((f"brush_system_{label}.txt", build_brush_request(ctx, catalog).messages[0].text))
        cases.append((f"intent_{label}.txt", build_intent_request(ctx, catalog).messages[0].text))
        cases.append(
            (
                f"concept_ui_{label}.txt",
                build_concept_ui_request(ctx, concept, ["Burst Energy"]).messages[0].text,
            )
        )
        ctx_current = GenerationContext(
            particle_type=ctx.particle_type,
            user_prompt=ctx.user_prompt,
            scene_objects=ctx.scene_objects,
            sketch=ctx.sketch,
            current_values={"emission_time": 0.1, "particles_count": 12, "alpha_start": 1.0},
        )
        cases.append(
            (
                f"attribute_ui_{label}.txt",
                build_attribute_ui_request(ctx_current, concept, concept.attributes[0], catalog)
                .messages[0].text,
            )
        )
        cases.append(
            (
                f"default_value_{label}.txt",
                build_default_request(ctx, "velocity_theta", "solid angle of particle emission; controls the spread", 0, 180)
                .messages[0].text,
            )
        )
    return cases


def test_rendered_prompts_match_goldens(catalog):
    for name, text in golden_cases(catalog):
        _assert_matches_golden(name, text)


def test_golden_add_edit_example_values():
    # the canonical worked example: celebratory fireworks over a fire scene
    text = render(
        "add_edit",
        {
            "USER_PROMPT": "add some fireworks to celebrate",
            "AVAILABLE_TYPES": "fire, fountain, firework, bubbles, trail-effect",
            "CURRENT_TYPE": "fire",
        },
    )
    _assert_matches_golden("add_edit_worked_example.txt", text)
