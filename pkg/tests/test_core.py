import pytest
import yaml

from uabs.core import ActionNode
from uabs.core.data import ConfigKeyError, ConfigValueError
from uabs.core.plugin import use_plugin, load_scenario_settings
from uabs.modules.harness import RunConfig
from uabs.modules.reinforce import RLConfig

from .conftest import make_run_config

def write_yaml(fpath, data):
    fpath.write_text(yaml.safe_dump(data))
    return str(fpath)

def test_plugin_inherit_overrides_parent(tmp_path):
    write_yaml(tmp_path / "parent.yaml", {"K": 50, "gamma": 0.8})
    child = write_yaml(tmp_path / "child.yaml", {"inherit": "parent.yaml", "K": 3})
    assert use_plugin(child) == {"K": 3, "gamma": 0.8}

def test_plugin_rejects_unknown_and_nested_keys(tmp_path):
    with pytest.raises(ConfigKeyError):
        use_plugin(write_yaml(tmp_path / "a.yaml", {"Kay": 1}), known_keys=RunConfig.Keys())
    with pytest.raises(ConfigValueError):
        use_plugin(write_yaml(tmp_path / "b.yaml", {"K": {"value": 1}}))

def test_scenario_presets_resolve_every_key():
    for scenario in ("toy", "urban"):
        settings = load_scenario_settings(scenario, known_keys=RunConfig.Keys())
        cfg = RunConfig.FromSettings(settings, scenario)
        assert cfg.K == 50 and cfg.N == 50
        assert cfg.seeds == list(range(10))
        assert cfg.rl.gamma == 0.8 and cfg.meta.gamma == 0.8
        assert cfg.arch.n_params == 2313

    with pytest.raises(ConfigValueError):
        load_scenario_settings("suburb")

def test_toy_and_urban_presets_differ_where_expected():
    toy = RunConfig.FromSettings(load_scenario_settings("toy", known_keys=RunConfig.Keys()), "toy")
    urban = RunConfig.FromSettings(load_scenario_settings("urban", known_keys=RunConfig.Keys()), "urban")
    assert toy.scen.horizon == 60 and urban.scen.horizon == 300
    assert (urban.scen.g_min, urban.scen.g_max) == (15, 30)
    assert toy.chan.threshold_db == pytest.approx(13.4858, abs=1e-3)
    assert urban.chan.threshold_db == -10.0

def test_config_is_strict():
    cfg = RLConfig()
    with pytest.raises(ConfigKeyError):
        cfg.apply_construct_config({"learning_rate": 0.1})
    hash_before = cfg.get_hash()
    with pytest.raises(ConfigValueError):
        cfg.apply_construct_config({"gamma": 0, "eta": 0.5})
    assert (cfg.gamma, cfg.eta) == (0.8, 0.001)
    assert cfg.get_hash() == hash_before
    with pytest.raises(ConfigValueError):
        cfg.apply_construct_config({"N": "many"})

    cfg.apply_construct_config({"N": "7"})
    assert cfg.episodes == 7

def test_unknown_run_keys_rejected():
    with pytest.raises(ConfigKeyError):
        RunConfig.FromSettings({"K": 2, "epsilon": 0.1})
    with pytest.raises(ConfigValueError):
        make_run_config(methods=["sarsa"])

def test_list_keys_need_lists():
    for bad in ({"hidden": 64}, {"seeds": 3}, {"methods": "comps"}, {"hidden": [0]}, {"seeds": [-1]}):
        with pytest.raises(ConfigValueError):
            make_run_config(**bad)
    with pytest.raises(ConfigValueError):
        RunConfig(hidden=64)

def test_config_hash_tracks_values():
    a, b = make_run_config(), make_run_config()
    assert a.get_hash() == b.get_hash()
    assert make_run_config(gamma=0.9).get_hash() != a.get_hash()

def test_flat_construct_config_roundtrips():
    cfg = make_run_config(eta=0.01)
    flat = cfg.get_construct_config()
    assert flat["N"] == 2 and "episodes" not in flat
    assert flat["eta"] == 0.01

    settings = {k: v for k, v in flat.items() if k != "scenario"}
    assert RunConfig.FromSettings(settings, flat["scenario"]).get_hash() == cfg.get_hash()

def test_action_status():
    class Fails(ActionNode):
        def __call__(self):
            raise RuntimeError("nope")

    class Works(ActionNode):
        CAPTION = "works"
        def __call__(self, x):
            return 2*x

    ok = Works()
    assert ok.run(3) == 6
    assert ok.status == ActionNode.ActionStatus.COMPLETE
    assert ok.name == "works"

    bad = Fails()
    with pytest.raises(RuntimeError):
        bad.run()
    assert bad.status == ActionNode.ActionStatus.FAILED
