"""Regenerate the bundled provider transcripts.

Requests are constructed through the same pipeline builders the runtime
uses (contexts come from a real Session), so replay hashes always line up.
Response bodies are the frozen recordings this artifact ships with; edit
them here and re-run to refresh the transcript files.

Usage: python3 scripts/build_fixtures.py
"""

from __future__ import annotations

import json
import shutil
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from vfxcontrol.catalog import load_catalog
from vfxcontrol.engine import TEMPLATE_KINDS
from vfxcontrol.pipeline import (
    SketchData,
    SketchStroke,
    _sanitize_attribute_ui,
    build_add_edit_request,
    build_attribute_ui_request,
    build_brush_request,
    build_concept_ui_request,
    build_default_request,
    build_intent_request,
)
from vfxcontrol.provider import FixtureProvider, ProviderResponse
from vfxcontrol.schemas import AttributeUiConfig, HierarchySpec
from vfxcontrol.service import SceneManifest, Session

FIXTURE_DIR = Path(__file__).resolve().parents[1] / "src" / "vfxcontrol" / "data" / "fixtures"

FOUNTAIN_SCENE = {
    "template": "fountain",
    "seed": 7,
    "objects": [
        {"name": "fountain_basin", "position": [0, 0, 0]},
        {"name": "garden_lamp", "position": [4, 0, 2]},
    ],
}

FIRE_SCENE = {
    "template": "fire",
    "seed": 3,
    "objects": [
        {"name": "campfire", "position": [0, 0, 0]},
        {"name": "tent", "position": [5, 0, 3]},
    ],
}


def make_session(scene: dict) -> Session:
    return Session(
        session_id="recorder",
        manifest=SceneManifest.from_dict(scene),
        catalog=CATALOG,
        provider=None,  # only generation_context is used
        icon_vocabulary=[],
    )


CATALOG = load_catalog()


# --- recorded responses ------------------------------------------------------

PALETTES = {
    "fountain": [
        {"brushid": 1, "functionality": "add drifting breeze across spray", "color": "#6EC6FF", "icon": "Wind"},
        {"brushid": 2, "functionality": "thicken the misty water veil", "color": "#4FA3D1", "icon": "Droplets"},
        {"brushid": 3, "functionality": "scatter glittering spray highlights", "color": "#FFD166", "icon": "Sparkles"},
        {"brushid": 4, "functionality": "lean the water jet sideways", "color": "#9B5DE5", "icon": "Move"},
        {"brushid": 5, "functionality": "energize bursts with sudden lift", "color": "#F15BB5", "icon": "Zap"},
        {"brushid": 6, "functionality": "tint spray with sunset hues", "color": "#00BBF9", "icon": "Palette"},
        {"brushid": 7, "functionality": "narrow the plume into column", "color": "#90BE6D", "icon": "ArrowDownWideNarrow"},
    ],
    "fire": [
        {"brushid": 1, "functionality": "bend flames with gusty wind", "color": "#74C0FC", "icon": "Wind"},
        {"brushid": 2, "functionality": "intensify the roaring flame core", "color": "#FF6B35", "icon": "Flame"},
        {"brushid": 3, "functionality": "introduce moisture in the air", "color": "#4ECDC4", "icon": "Droplets"},
        {"brushid": 4, "functionality": "shower crackling ember sparks upward", "color": "#FFD166", "icon": "Sparkles"},
        {"brushid": 5, "functionality": "calm flames into low embers", "color": "#A8DADC", "icon": "ArrowDownWideNarrow"},
        {"brushid": 6, "functionality": "drift the fire toward tent", "color": "#9B5DE5", "icon": "Move"},
        {"brushid": 7, "functionality": "warm the scene with glow", "color": "#F4A261", "icon": "Sun"},
    ],
    "firework": [
        {"brushid": 1, "functionality": "drift sparks sideways with wind", "color": "#6EC6FF", "icon": "Wind"},
        {"brushid": 2, "functionality": "multiply the glittering burst trails", "color": "#FFD166", "icon": "Sparkles"},
        {"brushid": 3, "functionality": "widen bursts across the sky", "color": "#F15BB5", "icon": "Expand"},
        {"brushid": 4, "functionality": "tighten bursts into neat shells", "color": "#90BE6D", "icon": "Shrink"},
        {"brushid": 5, "functionality": "quicken the burst launch rhythm", "color": "#FEE440", "icon": "Zap"},
        {"brushid": 6, "functionality": "recolor bursts with festive tones", "color": "#00BBF9", "icon": "Palette"},
        {"brushid": 7, "functionality": "linger sparkling embers after burst", "color": "#F4A261", "icon": "Star"},
    ],
}

PLAYFUL_HIERARCHY = {
    "panel_name": "Playful Fountain",
    "concepts": [
        {
            "name": "vibrancy",
            "description": "How lively and colorful the water reads. Raising it shifts the spray toward bright, saturated, eye-catching tones.",
            "attributes": [
                {
                    "name": "color_transition",
                    "description": "The hue the droplets are born with. Pushing it toward warm candy tones makes the fountain feel festive.",
                    "technical_parameters": [
                        {"name": "color_start_red", "description": "Increasing red moves spawn color toward warm pinks."},
                        {"name": "color_start_green", "description": "Lowering green deepens the candy tint."},
                        {"name": "color_start_blue", "description": "Lowering blue moves away from the cold base tone."},
                    ],
                },
                {
                    "name": "opacity_variation",
                    "description": "How strongly droplets fade over their life. More fade variation adds sparkle and depth.",
                    "technical_parameters": [
                        {"name": "alpha_start", "description": "Slightly lower start opacity softens the jets."},
                        {"name": "alpha_end", "description": "Lower end opacity makes droplets dissolve playfully."},
                    ],
                },
            ],
        },
        {
            "name": "dynamic_movement",
            "description": "How much the water dances rather than streams. Raising it makes bursts quicker and trajectories more varied.",
            "attributes": [
                {
                    "name": "burst_timing",
                    "description": "The rhythm of droplet bursts. Quicker, fuller bursts read as playful skipping.",
                    "technical_parameters": [
                        {"name": "emission_time", "description": "Longer gaps between bursts create a skipping rhythm."},
                        {"name": "particles_count", "description": "More droplets per burst make each skip fuller."},
                    ],
                },
                {
                    "name": "movement_variability",
                    "description": "How widely and energetically droplets scatter. A wider, stronger spray feels like dancing.",
                    "technical_parameters": [
                        {"name": "velocity_theta", "description": "A wider cone scatters droplets in varied directions."},
                        {"name": "velocity_radius", "description": "More launch energy varies the arc heights."},
                    ],
                },
            ],
        },
    ],
}

PLAYFUL_CONCEPT_UIS = {
    "vibrancy": {
        "parameter_name": "vibrancy",
        "min": 0,
        "max": 100,
        "sliderStepLabels": ["Muted Glow", "Soft Shimmer", "Lively Sparkle", "Radiant Burst"],
        "dropDownOptions": [
            {"label": "Pastel Mist", "value": {"color_transition": 35, "opacity_variation": 70}},
            {"label": "Carnival Splash", "value": {"color_transition": 85, "opacity_variation": 40}},
            {"label": "Neon Cascade", "value": {"color_transition": 95, "opacity_variation": 90}},
        ],
        "childWeights": {"color_transition": 0.6, "opacity_variation": 0.4},
    },
    "dynamic_movement": {
        "parameter_name": "dynamic_movement",
        "min": 0,
        "max": 100,
        "sliderStepLabels": ["Still Waters", "Gentle Sway", "Playful Dance", "Wild Leap"],
        "dropDownOptions": [
            {"label": "Lazy Drift", "value": {"burst_timing": 25, "movement_variability": 30}},
            {"label": "Skipping Stones", "value": {"burst_timing": 80, "movement_variability": 45}},
            {"label": "Whirling Jets", "value": {"burst_timing": 60, "movement_variability": 95}},
        ],
        "childWeights": {"burst_timing": 0.45, "movement_variability": 0.55},
    },
}

PLAYFUL_ATTRIBUTE_UIS = {
    "color_transition": {
        "attributeConfig": {
            "parameter_name": "color_transition",
            "min": 0,
            "max": 100,
            "sliderStepLabels": ["Cool Blues", "Sunlit Aqua", "Candy Pop", "Rainbow Riot"],
            "dropDownOptions": [
                {"label": "Bubblegum", "value": {"color_start_red": 255, "color_start_green": 105, "color_start_blue": 180}},
                {"label": "Lagoon", "value": {"color_start_red": 64, "color_start_green": 224, "color_start_blue": 208}},
                {"label": "Sunburst", "value": {"color_start_red": 255, "color_start_green": 200, "color_start_blue": 60}},
            ],
            "childWeights": {"color_start_red": 0.4, "color_start_green": 0.3, "color_start_blue": 0.3},
        },
        "technicalParameterConfigs": [
            {
                "parameter_name": "color_start_red",
                "min": 120,
                "max": 255,
                "sliderStepLabels": ["Sea Glass", "Blush", "Coral", "Hot Pink"],
                "dropDownOptions": [
                    {"value": 160, "label": "Blush"},
                    {"value": 210, "label": "Coral"},
                    {"value": 255, "label": "Hot Pink"},
                ],
            },
            {
                "parameter_name": "color_start_green",
                "min": 180,
                "max": 105,
                "sliderStepLabels": ["Minty", "Balanced", "Candy"],
                "dropDownOptions": [
                    {"value": 165, "label": "Soft"},
                    {"value": 135, "label": "Sweet"},
                    {"value": 105, "label": "Vivid"},
                ],
            },
            {
                "parameter_name": "color_start_blue",
                "min": 255,
                "max": 150,
                "sliderStepLabels": ["Deep Sea", "Lagoon", "Warm Tide"],
                "dropDownOptions": [
                    {"value": 230, "label": "Cool"},
                    {"value": 190, "label": "Mixed"},
                    {"value": 150, "label": "Warm"},
                ],
            },
        ],
    },
    "opacity_variation": {
        "attributeConfig": {
            "parameter_name": "opacity_variation",
            "min": 0,
            "max": 100,
            "sliderStepLabels": ["Solid Stream", "Gentle Fade", "Twinkling"],
            "dropDownOptions": [
                {"label": "Glass Veil", "value": {"alpha_start": 0.7, "alpha_end": 0.3}},
                {"label": "Firefly Fade", "value": {"alpha_start": 0.9, "alpha_end": 0.1}},
                {"label": "Soap Film", "value": {"alpha_start": 0.5, "alpha_end": 0.2}},
            ],
            "childWeights": {"alpha_start": 0.7, "alpha_end": 0.3},
        },
        "technicalParameterConfigs": [
            {
                "parameter_name": "alpha_start",
                "min": 1,
                "max": 0.4,
                "sliderStepLabels": ["Full Jet", "Soft Jet", "Misty"],
                "dropDownOptions": [
                    {"value": 0.9, "label": "Soft"},
                    {"value": 0.6, "label": "Airy"},
                    {"value": 0.4, "label": "Misty"},
                ],
            },
            {
                "parameter_name": "alpha_end",
                "min": 0.8,
                "max": 0.1,
                "sliderStepLabels": ["Lingering", "Dissolving", "Vanishing"],
                "dropDownOptions": [
                    {"value": 0.6, "label": "Lingering"},
                    {"value": 0.3, "label": "Dissolving"},
                    {"value": 0.1, "label": "Vanishing"},
                ],
            },
        ],
    },
    "burst_timing": {
        "attributeConfig": {
            "parameter_name": "burst_timing",
            "min": 0,
            "max": 100,
            "sliderStepLabels": ["Steady Stream", "Light Patter", "Skipping Beat", "Popcorn"],
            "dropDownOptions": [
                {"label": "Drizzle", "value": {"emission_time": 0.1, "particles_count": 8}},
                {"label": "Heartbeat", "value": {"emission_time": 0.35, "particles_count": 25}},
                {"label": "Popcorn", "value": {"emission_time": 0.25, "particles_count": 40}},
            ],
            "childWeights": {"emission_time": 0.7, "particles_count": 0.7},
        },
        "technicalParameterConfigs": [
            {
                "parameter_name": "emission_time",
                "min": 0.05,
                "max": 0.4,
                "sliderStepLabels": ["Constant", "Patter", "Skipping"],
                "dropDownOptions": [
                    {"value": 0.1, "label": "Patter"},
                    {"value": 0.25, "label": "Skip"},
                    {"value": 0.4, "label": "Pulse"},
                ],
            },
            {
                "parameter_name": "particles_count",
                "min": 5,
                "max": 40,
                "sliderStepLabels": ["Sparse", "Lively", "Overflowing"],
                "dropDownOptions": [
                    {"value": 12, "label": "Lively"},
                    {"value": 24, "label": "Busy"},
                    {"value": 40, "label": "Overflowing"},
                ],
            },
        ],
    },
    "movement_variability": {
        "attributeConfig": {
            "parameter_name": "movement_variability",
            "min": 0,
            "max": 100,
            "sliderStepLabels": ["Straight Jet", "Loose Spray", "Dancing Arcs", "Wild Scatter"],
            "dropDownOptions": [
                {"label": "Garden Sprinkler", "value": {"velocity_theta": 35, "velocity_radius": 28}},
                {"label": "Geyser Hop", "value": {"velocity_theta": 20, "velocity_radius": 45}},
                {"label": "Confetti Spray", "value": {"velocity_theta": 75, "velocity_radius": 30}},
            ],
            "childWeights": {"velocity_theta": 0.6, "velocity_radius": 0.4},
        },
        "technicalParameterConfigs": [
            {
                "parameter_name": "velocity_theta",
                "min": 15,
                "max": 85,
                "sliderStepLabels": ["Column", "Fan", "Bloom", "Dome"],
                "dropDownOptions": [
                    {"value": 30, "label": "Fan"},
                    {"value": 55, "label": "Bloom"},
                    {"value": 85, "label": "Dome"},
                ],
            },
            {
                "parameter_name": "velocity_radius",
                "min": 20,
                "max": 45,
                "sliderStepLabels": ["Current", "Spirited", "Soaring"],
                "dropDownOptions": [
                    {"value": 26, "label": "Spirited"},
                    {"value": 36, "label": "Lofty"},
                    {"value": 45, "label": "Soaring"},
                ],
            },
        ],
    },
}

PLAYFUL_DEFAULTS = {
    "color_start_red": 220,
    "color_start_green": 140,
    "color_start_blue": 200,
    "alpha_start": 0.85,
    "alpha_end": 0.45,
    "emission_time": 0.18,
    "particles_count": 18,
    "velocity_theta": 45,
    "velocity_radius": 32,
}

SPRAY_HIERARCHY = {
    "panel_name": "Spray Direction",
    "concepts": [
        {
            "name": "directional_push",
            "description": "A steady sideways lean of the spray. Raising it drives the water further toward the right side of the scene.",
            "attributes": [
                {
                    "name": "wind_force",
                    "description": "A constant breeze acting on the droplets. Stronger rightward force carries the spray with it.",
                    "technical_parameters": [
                        {"name": "force_x", "description": "Positive values push droplets to the right."},
                        {"name": "force_y", "description": "Vertical pull stays near its current value; unrelated to the sideways push."},
                        {"name": "force_z", "description": "Depth force stays near zero; unrelated to the sideways push."},
                    ],
                }
            ],
        }
    ],
}

SPRAY_CONCEPT_UI = {
    "parameter_name": "directional_push",
    "min": 0,
    "max": 100,
    "sliderStepLabels": ["Calm Air", "Light Breeze", "Steady Wind", "Gale Push"],
    "dropDownOptions": [
        {"label": "Whisper", "value": {"wind_force": 20}},
        {"label": "Seaside Gust", "value": {"wind_force": 65}},
        {"label": "Storm Shove", "value": {"wind_force": 90}},
    ],
    "childWeights": {"wind_force": 1.0},
}

SPRAY_ATTRIBUTE_UI = {
    "attributeConfig": {
        "parameter_name": "wind_force",
        "min": 0,
        "max": 100,
        "sliderStepLabels": ["Still", "Breeze", "Wind", "Gale"],
        "dropDownOptions": [
            {"label": "Breeze", "value": {"force_x": 10, "force_y": -20, "force_z": 0}},
            {"label": "Wind", "value": {"force_x": 22, "force_y": -18, "force_z": 0}},
            {"label": "Gale", "value": {"force_x": 35, "force_y": -15, "force_z": 2}},
        ],
        "childWeights": {"force_x": 1.0, "force_y": 0, "force_z": 0},
    },
    "technicalParameterConfigs": [
        {
            "parameter_name": "force_x",
            "min": 0,
            "max": 35,
            "sliderStepLabels": ["Still", "Breeze", "Wind", "Gale"],
            "dropDownOptions": [
                {"value": 10, "label": "Breeze"},
                {"value": 22, "label": "Wind"},
                {"value": 35, "label": "Gale"},
            ],
        },
        {
            "parameter_name": "force_y",
            "min": -20,
            "max": -10,
            "sliderStepLabels": ["Current Pull", "Lighter", "Lightest"],
            "dropDownOptions": [
                {"value": -20, "label": "Current"},
                {"value": -15, "label": "Lighter"},
                {"value": -10, "label": "Lightest"},
            ],
        },
        {
            "parameter_name": "force_z",
            "min": 0,
            "max": 5,
            "sliderStepLabels": ["Flat", "Slight Drift", "Drift"],
            "dropDownOptions": [
                {"value": 0, "label": "Flat"},
                {"value": 2, "label": "Slight"},
                {"value": 5, "label": "Drift"},
            ],
        },
    ],
}

SPRAY_DEFAULTS = {"force_x": 22, "force_y": -16, "force_z": 0}


def record_edit_scenario(store, session, prompt, hierarchy_doc, concept_docs, attribute_docs, defaults, sketch=None):
    ctx = session.generation_context(prompt, sketch)
    store.record(
        build_add_edit_request(ctx, TEMPLATE_KINDS),
        ProviderResponse(
            text=json.dumps(
                {
                    "should_add_particle": False,
                    "particle_type": "",
                    "reason": "The request changes the existing effect rather than adding a new one.",
                }
            )
        ),
    )
    store.record(build_intent_request(ctx, CATALOG), ProviderResponse(text=json.dumps(hierarchy_doc, indent=2)))
    hierarchy = HierarchySpec.model_validate(hierarchy_doc)
    names = [c.name for c in hierarchy.concepts]
    for concept in hierarchy.concepts:
        siblings = [n for n in names if n != concept.name]
        store.record(
            build_concept_ui_request(ctx, concept, siblings),
            ProviderResponse(text=json.dumps(concept_docs[concept.name], indent=2)),
        )
        for attribute in concept.attributes:
            doc = attribute_docs[attribute.name]
            store.record(
                build_attribute_ui_request(ctx, concept, attribute, CATALOG),
                ProviderResponse(text=json.dumps(doc, indent=2)),
            )
            sanitized = _sanitize_attribute_ui(
                AttributeUiConfig.model_validate(doc), attribute, ctx, CATALOG
            )
            for cfg in sanitized.technicalParameterConfigs:
                store.record(
                    build_default_request(
                        ctx,
                        cfg.parameter_name,
                        CATALOG.get(cfg.parameter_name).description,
                        cfg.min,
                        cfg.max,
                    ),
                    ProviderResponse(
                        text=json.dumps({"defaultValue": defaults[cfg.parameter_name]})
                    ),
                )


def main() -> None:
    if FIXTURE_DIR.exists():
        shutil.rmtree(FIXTURE_DIR)
    store = FixtureProvider(FIXTURE_DIR, record=True)

    # palettes per template type (brush prompts see only type + catalog)
    for kind, palette in PALETTES.items():
        scene = FOUNTAIN_SCENE if kind == "fountain" else FIRE_SCENE
        session = make_session(scene)
        if kind != session.state.template_kind:
            from vfxcontrol.engine import instantiate_template

            session.state = instantiate_template(kind, CATALOG, session.manifest.seed)
        ctx = session.generation_context("")
        store.record(
            build_brush_request(ctx, CATALOG),
            ProviderResponse(text=json.dumps({"brushes": palette}, indent=2)),
        )

    # scenario: ADD fireworks over the fire scene
    fire_session = make_session(FIRE_SCENE)
    ctx = fire_session.generation_context("add some fireworks to celebrate")
    store.record(
        build_add_edit_request(ctx, TEMPLATE_KINDS),
        ProviderResponse(
            text=json.dumps(
                {
                    "should_add_particle": True,
                    "particle_type": "firework",
                    "reason": "Celebratory fireworks are a new effect, not an edit of the existing fire.",
                }
            )
        ),
    )

    # scenario: EDIT the fountain toward playfulness
    record_edit_scenario(
        store,
        make_session(FOUNTAIN_SCENE),
        "make it more playful",
        PLAYFUL_HIERARCHY,
        PLAYFUL_CONCEPT_UIS,
        PLAYFUL_ATTRIBUTE_UIS,
        PLAYFUL_DEFAULTS,
    )

    # scenario: sketch-guided EDIT steering the fountain spray
    wind_brush = PALETTES["fountain"][0]
    sketch = SketchData(
        strokes=[SketchStroke(points=[(0.2, 0.4), (0.7, 0.45)], brush_id=1)],
        used_brushes=[{"color": wind_brush["color"], "functionality": wind_brush["functionality"]}],
    )
    record_edit_scenario(
        store,
        make_session(FOUNTAIN_SCENE),
        "push the spray to the right",
        SPRAY_HIERARCHY,
        {"directional_push": SPRAY_CONCEPT_UI},
        {"wind_force": SPRAY_ATTRIBUTE_UI},
        SPRAY_DEFAULTS,
        sketch=sketch,
    )

    count = len(list(FIXTURE_DIR.glob("*.json")))
    print(f"wrote {count} transcript(s) to {FIXTURE_DIR}")


if __name__ == "__main__":
    main()
