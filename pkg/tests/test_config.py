"""Run-config parsing: geometry primitives, defaults, and validation."""

import json
import math

import pytest

from briep.config import component_from_spec, load_config, parse_config
from briep.errors import ConfigError, CutLengthWarning

from conftest import CONFIG_DIR


def minimal(**overrides):
    raw = {
        "region_E": [{"kind": "segment", "a": [-1, 0], "b": [1, 0]}],
        "function": {"name": "exp_z2"},
        "n_list": [5, 10],
    }
    raw.update(overrides)
    return raw


def test_minimal_config_defaults():
    cfg = parse_config(minimal())
    assert cfg.gamma == 0.5
    assert cfg.panels_N == 500
    assert cfg.components_F is None
    assert not cfg.is_condenser
    assert cfg.outputs == "out"
    assert cfg.error_samples["kind"] == "auto"
    assert cfg.singularities == []


def test_panels_default_grows_for_multiple_components():
    raw = minimal(
        region_E=[
            {"kind": "segment", "a": [-1, 0], "b": [1, 0]},
            {"kind": "circle", "center": [0, 3], "radius": 0.5},
        ]
    )
    assert parse_config(raw).panels_N == 3000
    raw = minimal(
        region_F=[{"kind": "disk", "center": [0, 1], "radius": 0.1}],
        function={"name": "inv_linear", "params": {"q": [0, 1]}},
    )
    assert parse_config(raw).panels_N == 500


def test_singularities_default_from_function():
    raw = minimal(function={"name": "inv_linear", "params": {"q": 1.0}})
    assert parse_config(raw).singularities == [1.0 + 0j]
    raw["singularities"] = [[0, 0.5]]
    assert parse_config(raw).singularities == [0.5j]


def test_all_primitives_construct():
    specs = {
        "segment": {"kind": "segment", "a": 0, "b": 1},
        "polygon": {"kind": "polygon", "vertices": [[0, 0], [1, 0], [0, 1]]},
        "circle": {"kind": "circle", "center": [0, 0], "radius": 2},
        "arc": {
            "kind": "arc",
            "center": 0,
            "radius": 1,
            "theta_start": 0,
            "theta_end": 3.14,
        },
        "polyline": {"kind": "polyline", "points": [[0, 0], [1, 1], [2, 0]]},
        "cut_segment": {
            "kind": "cut_segment",
            "from": [1, 0],
            "direction": [1, 0],
            "length": 2,
        },
        "cut_between": {"kind": "cut_between", "z1": [0, 1], "z2": [0, 2]},
    }
    for kind, spec in specs.items():
        comps = component_from_spec(spec, kind)
        assert len(comps) == 1
        assert comps[0].length > 0


def test_annulus_expands_to_two_circles():
    comps = component_from_spec(
        {"kind": "annulus", "center": [0, 0], "r_inner": 1, "r_outer": 2}, "t"
    )
    assert len(comps) == 2
    assert abs(comps[0].length - 4 * math.pi) < 1e-12
    assert abs(comps[1].length - 2 * math.pi) < 1e-12
    with pytest.raises(ConfigError):
        component_from_spec(
            {"kind": "annulus", "center": 0, "r_inner": 2, "r_outer": 1}, "t"
        )


def test_cut_segment_direction_normalized():
    comps = component_from_spec(
        {"kind": "cut_segment", "from": [1, 0], "direction": [3, 4], "length": 5},
        "t",
    )
    end = comps[0].end
    assert abs(end - (4.0 + 4.0j)) < 1e-12


def test_missing_component_field_named():
    with pytest.raises(ConfigError) as err:
        component_from_spec({"kind": "segment", "a": 0}, "region_E[0]")
    assert "region_E[0]" in str(err.value)
    assert "'b'" in str(err.value)


def test_unknown_kind_rejected():
    with pytest.raises(ConfigError):
        component_from_spec({"kind": "blob"}, "t")
    with pytest.raises(ConfigError):
        component_from_spec("segment", "t")


def test_unknown_top_level_field_rejected():
    with pytest.raises(ConfigError) as err:
        parse_config(minimal(panels=100))
    assert "panels" in str(err.value)


def test_region_e_required():
    with pytest.raises(ConfigError):
        parse_config({"function": {"name": "exp_z2"}, "n_list": [1]})


def test_function_required():
    raw = minimal()
    del raw["function"]
    with pytest.raises(ConfigError):
        parse_config(raw)


def test_n_list_validation():
    for bad in ([], [0], [2, 2], [3, 1], [1.5, 2.0], "1:5", None):
        with pytest.raises(ConfigError):
            parse_config(minimal(n_list=bad))


def test_gamma_validation():
    for bad in (0.0, 1.0, -1, 2, "half"):
        with pytest.raises(ConfigError):
            parse_config(minimal(gamma=bad))
    assert parse_config(minimal(gamma=0.9)).gamma == 0.9


def test_panels_validation():
    for bad in (0, -5, 2.5):
        with pytest.raises(ConfigError):
            parse_config(minimal(panels_N=bad))


def test_error_samples_validation():
    with pytest.raises(ConfigError):
        parse_config(minimal(error_samples={"kind": "random"}))
    cfg = parse_config(minimal(error_samples={"kind": "boundary", "total": 1000}))
    assert cfg.error_samples["total"] == 1000


def test_grid_validation():
    good = {"nx": 11, "ny": 5, "window": [-1, -1, 1, 1]}
    assert parse_config(minimal(grid=good)).grid == good
    for bad in (
        {"nx": 1, "ny": 5, "window": [-1, -1, 1, 1]},
        {"nx": 4, "ny": 4, "window": [1, -1, -1, 1]},
        {"nx": 4, "ny": 4, "window": [0, 0, 1]},
        {"nx": 4, "ny": 4},
        [4, 4],
    ):
        with pytest.raises(ConfigError):
            parse_config(minimal(grid=bad))


def test_start_offset_padded_and_checked():
    raw = minimal(
        region_F=[
            {"kind": "disk", "center": [0, 1], "radius": 0.1},
            {"kind": "disk", "center": [0, -1], "radius": 0.1},
        ],
        start_offset={"F": [0.25]},
    )
    cfg = parse_config(raw)
    assert cfg.start_offsets_F == [0.25, 0.0]
    assert cfg.start_offsets_E == [0.0]
    raw["start_offset"] = {"F": [0.1, 0.2, 0.3]}
    with pytest.raises(ConfigError):
        parse_config(raw)
    raw["start_offset"] = {"G": [0.1]}
    with pytest.raises(ConfigError):
        parse_config(raw)


def test_cut_length_warning_band():
    # region of diameter 2 with a short cut: warn
    raw = minimal(
        region_F=[
            {"kind": "cut_between", "z1": [1.5, 0], "z2": [1.9, 0]},
        ],
        function={"name": "inv_linear", "params": {"q": 2.0}},
    )
    with pytest.warns(CutLengthWarning):
        parse_config(raw)
    # cut length inside [1, 4]: quiet
    raw["region_F"] = [{"kind": "cut_between", "z1": [1.5, 0], "z2": [3.5, 0]}]
    import warnings as w

    with w.catch_warnings():
        w.simplefilter("error", CutLengthWarning)
        parse_config(raw)
    # closed covers never warn
    raw["region_F"] = [{"kind": "disk", "center": [2, 0], "radius": 0.01}]
    with w.catch_warnings():
        w.simplefilter("error", CutLengthWarning)
        parse_config(raw)


def test_load_config_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(str(bad))
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "missing.json"))


def test_shipped_configs_parse():
    for path in sorted(CONFIG_DIR.glob("*.json")):
        cfg = load_config(str(path))
        assert cfg.n_list == sorted(cfg.n_list)
        echo = json.loads(path.read_text())
        assert cfg.echo == echo
