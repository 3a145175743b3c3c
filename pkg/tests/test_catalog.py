"""Catalog loading, range clamping, path resolution, assignment validation.

The bundled-catalog expectations are the authoritative range table values,
spot-checked per entry and exhaustively in test_acceptance.
"""

import pytest

from vfxcontrol.catalog import (
    Catalog,
    Violation,
    clamp_to_range,
    load_catalog,
    resolve_path,
    validate_assignment,
)
from vfxcontrol.errors import CatalogError, UnknownParameterError


def test_bundled_catalog_loads_all_parameters(catalog):
    assert len(catalog) == 22
    spec = catalog.get("velocity_theta")
    assert (spec.min, spec.max, spec.default) == (0, 180, 0)
    spec = catalog.get("alpha_start")
    assert (spec.min, spec.max, spec.default) == (0.1, 1, 1)


def test_lookup_total_over_bundled_names(catalog):
    for name in catalog.names():
        assert name in catalog
        assert catalog.get(name).name == name


def test_alpha_end_default_pulled_into_range(catalog):
    # The published default (0) sits below the published min (0.1); the range
    # table wins, so the loaded default is the nearest bound.
    spec = catalog.get("alpha_end")
    assert spec.min == 0.1
    assert spec.default == 0.1


def test_empty_document_rejected():
    with pytest.raises(CatalogError):
        load_catalog({"version": "1", "parameters": []})
    with pytest.raises(CatalogError):
        load_catalog({})


def test_duplicate_name_rejected():
    entry = {
        "name": "twice",
        "description": "dup",
        "min": 0,
        "max": 1,
        "default": 0.5,
        "path": "emitters[{emitterIndex}].x",
    }
    with pytest.raises(CatalogError, match="duplicate"):
        load_catalog({"version": "1", "parameters": [entry, dict(entry)]})


def test_malformed_entry_names_offender():
    with pytest.raises(CatalogError, match="entry 0"):
        load_catalog({"version": "1", "parameters": [{"name": "x"}]})


def test_inverted_range_rejected():
    entry = {
        "name": "bad",
        "description": "",
        "min": 5,
        "max": 1,
        "default": 2,
        "path": "p",
    }
    with pytest.raises(CatalogError, match="inverted"):
        load_catalog({"version": "1", "parameters": [entry]})


def test_missing_file_is_catalog_error(tmp_path):
    with pytest.raises(CatalogError, match="not found"):
        load_catalog(tmp_path / "nope.json")


def test_clamp_to_range(catalog):
    assert clamp_to_range(catalog, "velocity_theta", 200) == 180
    assert clamp_to_range(catalog, "force_x", -10) == -10
    assert clamp_to_range(catalog, "alpha_end", 0) == 0.1


def test_clamp_unknown_name(catalog):
    with pytest.raises(UnknownParameterError):
        clamp_to_range(catalog, "nope", 1)


def test_resolve_path_substitutes_index(catalog):
    assert resolve_path(catalog, "force_x", 0).segments == "emitters[0].behaviours[force].force.x"
    assert resolve_path(catalog, "velocity_theta", 1).segments == "emitters[1].initializers[velocity].tha"


def test_resolve_path_group_sentinel(catalog):
    path = resolve_path(catalog, "position_x", 3)
    assert path.segments == "__group_position_x"
    assert path.group == "__group_position_x"


def test_resolve_path_never_leaves_placeholder(catalog):
    for name in catalog.names():
        for idx in (0, 1, 7):
            assert "{" not in resolve_path(catalog, name, idx).segments


def test_validate_assignment(catalog):
    assert validate_assignment(catalog, "particle_lifetime", 2.0) is None
    violation = validate_assignment(catalog, "scale_start", 9)
    assert isinstance(violation, Violation)
    assert "max 5" in violation.reason
    violation = validate_assignment(catalog, "unknown_param", 1)
    assert violation is not None and "unknown" in violation.reason


def test_clamped_value_always_validates(catalog):
    probes = (-1e9, -3.7, 0.0, 0.05, 1.0, 42.0, 1e9)
    for name in catalog.names():
        for x in probes:
            clamped = clamp_to_range(catalog, name, x)
            spec = catalog.get(name)
            assert spec.min <= clamped <= spec.max
            assert validate_assignment(catalog, name, clamped) is None
