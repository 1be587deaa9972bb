import numpy as np
import pytest
import yaml

from uabs.core.plugin import load_scenario_settings
from uabs.modules.channel import ChannelParams, RewardParams
from uabs.modules.env import AreaSpec, WaypointPath, GueSpec, TrafficPattern, TaskConfig
from uabs.modules.harness import RunConfig

# small enough to run a whole continual protocol in well under a second;
# LoS links reach 100 m so even 4-step toy episodes collect packets
SMALL = {"K": 2, "N": 2, "seeds": [0, 1], "horizon": 4, "hidden": [4], "I_meta": 1, "k_nn": 2, "coverage_radius_m": 100.0}

def make_run_config(scenario: str="toy", **overrides) -> RunConfig:
    settings = load_scenario_settings(scenario, known_keys=RunConfig.Keys())
    settings.update(SMALL)
    settings.update(overrides)
    return RunConfig.FromSettings(settings, scenario)

@pytest.fixture
def small_cfg() -> RunConfig:
    return make_run_config()

@pytest.fixture
def small_config_file(tmp_path):
    fpath = tmp_path / "small.yaml"
    fpath.write_text(yaml.safe_dump(SMALL))
    return fpath

@pytest.fixture
def toy_chan() -> ChannelParams:
    return ChannelParams(ptx_dbm=0.0, snr_th_db=50.0, coverage_radius_m=15.0)

@pytest.fixture
def open_chan() -> ChannelParams:
    # every GUE covered
    return ChannelParams(snr_th_db=-1000.0, link_mode="expected")

@pytest.fixture
def rew() -> RewardParams:
    return RewardParams()

def clustered_task(n_gues: int=3, start_time: int=1, horizon: int=5, p_msg: float=1.0) -> TaskConfig:
    # GUEs start right below the UABS and walk east
    area = AreaSpec(100, 100, 10)
    path = WaypointPath([(50, 50), (90, 50)], area)
    traffic = TrafficPattern(gues=[GueSpec(path, 1.0, start_time) for _ in range(n_gues)], p_msg=p_msg)
    return TaskConfig(name="cluster", uabs_start=(50, 50), traffic=traffic, horizon=horizon, area=area, uabs_speed=1.0)

@pytest.fixture
def rng():
    return np.random.default_rng(1234)
