"""Schema shape rules plus the catalog-aware validation and fallback helpers."""

import pytest
from pydantic import ValidationError

from vfxcontrol.errors import GenerationValidationError
from vfxcontrol.schemas import (
    AttributeSpec,
    BrushPalette,
    BrushSpec,
    ConceptSpec,
    ConceptUiConfig,
    DropdownPreset,
    HierarchySpec,
    TechParamRef,
    TechnicalUiConfig,
    choose_default,
    sanitize_concept_ui,
    sanitize_technical_ui,
    validate_hierarchy,
    validate_palette,
)

ICONS = ["Wind", "Droplets", "Flame", "Move", "Zap", "Sparkles", "ArrowDownWideNarrow"]


def brush(i, icon="Wind", color="#4ECDC4", functionality="add wind gust now"):
    return BrushSpec(brushid=i, functionality=functionality, color=color, icon=icon)


def hierarchy(tech_names_by_attr):
    concepts = [
        ConceptSpec(
            name="energy",
            description="",
            attributes=[
                AttributeSpec(
                    name=attr,
                    description="",
                    technical_parameters=[TechParamRef(name=t) for t in techs],
                )
                for attr, techs in tech_names_by_attr.items()
            ],
        )
    ]
    return HierarchySpec(panel_name="test", concepts=concepts)


# -- brushes ------------------------------------------------------------------

def test_brush_functionality_word_limit():
    with pytest.raises(ValidationError):
        BrushSpec(brushid=1, functionality="one two three four five six", color="#FFF", icon="Wind")


def test_brush_hex_color_pattern():
    with pytest.raises(ValidationError):
        BrushSpec(brushid=1, functionality="ok", color="red", icon="Wind")
    assert brush(1, color="#AbC").color == "#AbC"


def test_palette_requires_exactly_seven():
    for n in (6, 8):
        palette = BrushPalette(brushes=[brush(min(i + 1, 7)) for i in range(n)])
        with pytest.raises(GenerationValidationError):
            validate_palette(palette, ICONS)


def test_palette_rejects_unknown_icon():
    brushes = [brush(i + 1) for i in range(7)]
    brushes[3] = brush(4, icon="NotARealIcon")
    with pytest.raises(GenerationValidationError, match="NotARealIcon"):
        validate_palette(BrushPalette(brushes=brushes), ICONS)


def test_valid_palette_passes():
    palette = BrushPalette(brushes=[brush(i + 1) for i in range(7)])
    assert validate_palette(palette, ICONS) is palette


# -- hierarchy ------------------------------------------------------------------

def test_hierarchy_unknown_parameter_listed(catalog):
    spec = hierarchy({"speed": ["velocity_theta", "warp_factor"]})
    with pytest.raises(GenerationValidationError, match="warp_factor"):
        validate_hierarchy(spec, catalog)


def test_hierarchy_grouping_rule_color(catalog):
    spec = hierarchy({"tone": ["color_start_red"]})
    with pytest.raises(GenerationValidationError, match="color_start_green"):
        validate_hierarchy(spec, catalog)


def test_hierarchy_grouping_rule_force(catalog):
    spec = hierarchy({"push": ["force_x", "force_y"]})
    with pytest.raises(GenerationValidationError, match="force_z"):
        validate_hierarchy(spec, catalog)


def test_hierarchy_grouping_satisfied(catalog):
    spec = hierarchy({"push": ["force_x", "force_y", "force_z"]})
    validate_hierarchy(spec, catalog)


def test_hierarchy_duplicate_names_rejected(catalog):
    spec = HierarchySpec(
        panel_name="test",
        concepts=[
            ConceptSpec(
                name="energy",
                attributes=[
                    AttributeSpec(
                        name="pace", technical_parameters=[TechParamRef(name="emission_time")]
                    )
                ],
            ),
            ConceptSpec(
                name="chaos",
                attributes=[
                    AttributeSpec(
                        name="pace", technical_parameters=[TechParamRef(name="velocity_theta")]
                    )
                ],
            ),
        ],
    )
    with pytest.raises(GenerationValidationError, match="duplicate name 'pace'"):
        validate_hierarchy(spec, catalog)


def test_hierarchy_empty_levels_rejected(catalog):
    with pytest.raises(GenerationValidationError, match="no concepts"):
        validate_hierarchy(HierarchySpec(panel_name="x", concepts=[]), catalog)


# -- concept/attribute UI -----------------------------------------------------------

def concept_ui(weights=None, presets=None, labels=None, lo=0, hi=100):
    children = ["a", "b"]
    presets = presets or [
        DropdownPreset(label=f"p{i}", value={"a": 20.0, "b": 80.0}) for i in range(3)
    ]
    return ConceptUiConfig(
        parameter_name="c",
        min=lo,
        max=hi,
        sliderStepLabels=labels or ["low", "mid", "high"],
        dropDownOptions=presets,
        childWeights=weights if weights is not None else {"a": 0.5, "b": 0.5},
    )


def test_concept_ui_label_count_enforced():
    with pytest.raises(ValidationError):
        concept_ui(labels=["only", "two"])
    with pytest.raises(ValidationError):
        concept_ui(labels=["a", "b", "c", "d", "e", "f"])


def test_concept_ui_wrong_weight_keys():
    config = concept_ui(weights={"a": 0.5, "zz": 0.5})
    with pytest.raises(GenerationValidationError, match="childWeights"):
        sanitize_concept_ui(config, ["a", "b"])


def test_concept_ui_wrong_preset_keys():
    bad = [DropdownPreset(label="x", value={"a": 10.0, "zz": 5.0})] + [
        DropdownPreset(label=f"p{i}", value={"a": 1.0, "b": 2.0}) for i in range(2)
    ]
    config = concept_ui(presets=bad)
    with pytest.raises(GenerationValidationError, match="preset"):
        sanitize_concept_ui(config, ["a", "b"])


def test_concept_ui_preset_count():
    presets = [DropdownPreset(label="only", value={"a": 1.0, "b": 2.0})]
    with pytest.raises(GenerationValidationError, match="3 dropdown"):
        sanitize_concept_ui(concept_ui(presets=presets), ["a", "b"])


def test_concept_ui_missing_weights_pass_through():
    # empty weights survive sanitation; the 1/n fallback happens at assembly
    config = sanitize_concept_ui(concept_ui(weights={}), ["a", "b"])
    assert config.childWeights == {}


# -- technical UI ------------------------------------------------------------------

def test_technical_min_coerced_to_current(catalog):
    config = TechnicalUiConfig(parameter_name="velocity_theta", min=10, max=120)
    out = sanitize_technical_ui(config, current_value=0, catalog=catalog)
    assert out.min == 0 and out.max == 120


def test_technical_max_clipped_to_catalog(catalog):
    config = TechnicalUiConfig(parameter_name="velocity_theta", min=0, max=250)
    out = sanitize_technical_ui(config, current_value=0, catalog=catalog)
    assert out.max == 180


def test_technical_inverted_range_accepted(catalog):
    config = TechnicalUiConfig(parameter_name="velocity_theta", min=100, max=20)
    out = sanitize_technical_ui(config, current_value=100, catalog=catalog)
    assert (out.min, out.max) == (100, 20)


def test_technical_collapsed_range_reopened(catalog):
    config = TechnicalUiConfig(parameter_name="velocity_theta", min=30, max=30)
    out = sanitize_technical_ui(config, current_value=30, catalog=catalog)
    assert out.min == 30 and out.max == 180
    config = TechnicalUiConfig(parameter_name="velocity_theta", min=180, max=400)
    out = sanitize_technical_ui(config, current_value=180, catalog=catalog)
    assert out.min == 180 and out.max == 0


def test_technical_dropdown_values_clipped(catalog):
    config = TechnicalUiConfig(
        parameter_name="velocity_theta",
        min=0,
        max=90,
        dropDownOptions=[{"label": "too far", "value": 500}],
    )
    out = sanitize_technical_ui(config, current_value=0, catalog=catalog)
    assert out.dropDownOptions[0].value == 180


# -- defaults ------------------------------------------------------------------------

def test_default_midpoint_on_failure():
    assert choose_default(None, 0, 180) == 90


def test_default_midpoint_on_out_of_range():
    assert choose_default(400, 0, 180) == 90
    assert choose_default(-1, 0, 180) == 90


def test_default_in_range_kept():
    assert choose_default(45, 0, 180) == 45


def test_default_with_inverted_range():
    assert choose_default(60, 100, 20) == 60
    assert choose_default(400, 100, 20) == 60
