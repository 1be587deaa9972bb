from collections import namedtuple
from enum import Enum

from uabs.core.data import ConfigBase, ConfigKeyError, ConfigValueError
from uabs.modules.channel import ChannelParams, RewardParams
from uabs.modules.comps import MetaConfig
from uabs.modules.env import AreaSpec, EncoderConfig
from uabs.modules.policy import PolicyArch
from uabs.modules.reinforce import RLConfig

class InsufficientTasksError(ValueError):
    pass

class EmptyMetricsError(ValueError):
    pass

class Method(Enum):
    Conventional = "conventional" # fresh init for every task
    Transfer = "transfer"         # start from the previous task's theta*
    Comps = "comps"               # start from the meta-learned theta0

MetricsRow = namedtuple("MetricsRow", ['method', 'seed', 'task_index', 'mean_packets', 'std_packets'])
SummaryRow = namedtuple("SummaryRow", ['method', 'task_index', 'mean_packets', 'std_packets'])

class ScenarioConfig(ConfigBase):
    def __init__(self, name: str = None, uuid: str = None,
                 area_width_m: float=40.0, area_height_m: float=40.0, altitude_m: float=100.0,
                 uabs_speed: float=1.0, gue_speed: float=1.0, speed_jitter: float=0.0,
                 p_msg: float=1.0, horizon: int=60, g_min: int=15, g_max: int=30) -> None:
        super().__init__(name, uuid)
        self.area_width_m = area_width_m
        self.area_height_m = area_height_m
        self.altitude_m = altitude_m
        self.uabs_speed = uabs_speed
        self.gue_speed = gue_speed
        self.speed_jitter = speed_jitter
        self.p_msg = p_msg
        self.horizon = horizon
        self.g_min = g_min
        self.g_max = g_max
        self.validate()

    @property
    def area(self) -> AreaSpec:
        return AreaSpec(self.area_width_m, self.area_height_m, self.altitude_m)

    def validate(self):
        self.area
        if self.uabs_speed<=0 or self.gue_speed<=0:
            raise ConfigValueError("Speeds must be positive")
        if not 0<=self.speed_jitter<1:
            raise ConfigValueError(f"speed_jitter must be within [0, 1), got {self.speed_jitter}")
        if not 0<=self.p_msg<=1:
            raise ConfigValueError(f"p_msg must be within [0, 1], got {self.p_msg}")
        if self.horizon<1:
            raise ConfigValueError(f"horizon must be >= 1, got {self.horizon}")
        if not 1<=self.g_min<=self.g_max:
            raise ConfigValueError(f"Need 1 <= g_min <= g_max, got [{self.g_min}, {self.g_max}]")

class RunConfig(ConfigBase):
    """Everything one experiment needs, built from one flat settings dict.

    Own keys are `K, seeds, methods, hidden`; the rest are routed to the
    sub-configs (RL, meta, channel, reward, encoder, scenario). Any key no
    sub-config claims is an error.
    """
    SUB_CONFIGS = {
        "rl": RLConfig, "meta": MetaConfig, "chan": ChannelParams,
        "rew": RewardParams, "enc": EncoderConfig, "scen": ScenarioConfig,
    }

    def __init__(self, name: str = None, uuid: str = None, K: int=50, seeds: list[int]=None, methods: list[str]=None,
                 hidden: list[int]=None, scenario: str="toy") -> None:
        super().__init__(name, uuid)
        self.K = K
        self.seeds = seeds if seeds is not None else list(range(10))
        self.methods = methods if methods is not None else [m.value for m in Method]
        self.hidden = hidden if hidden is not None else [64]
        self.scenario = scenario

        self._subs = {attr: cls() for attr, cls in self.SUB_CONFIGS.items()}
        self.validate()

    @classmethod
    def OwnKeys(cls) -> set[str]:
        return {"K", "seeds", "methods", "hidden"}

    @classmethod
    def Keys(cls) -> set[str]:
        keys = cls.OwnKeys()
        for sub in cls.SUB_CONFIGS.values():
            keys |= sub.Keys()
        return keys

    @classmethod
    def FromSettings(cls, settings: dict, scenario: str="toy") -> "RunConfig":
        if (unknown:=sorted(set(settings) - cls.Keys())):
            raise ConfigKeyError(f"Unknown config keys: {', '.join(unknown)}")
        cfg = cls(scenario=scenario)
        cfg._subs = {attr: sub.FromConfig(settings) for attr, sub in cls.SUB_CONFIGS.items()}
        cfg.apply_construct_config({k: v for k, v in settings.items() if k in cls.OwnKeys()})
        return cfg

    def __getattr__(self, attr):
        # rl / meta / chan / rew / enc / scen
        subs = self.__dict__.get("_subs", {})
        if attr in subs:
            return subs[attr]
        raise AttributeError(attr)

    @property
    def N(self) -> int:
        return self.rl.episodes

    @property
    def arch(self) -> PolicyArch:
        return PolicyArch(self.enc.feature_dim, self.hidden)

    def get_construct_config(self) -> dict:
        flat = super().get_construct_config()
        for sub in self._subs.values():
            for k, v in sub.get_construct_config().items():
                flat[{v_: k_ for k_, v_ in sub.KEY_ALIASES.items()}.get(k, k)] = v
        return flat

    def validate(self):
        if self.K<1:
            raise ConfigValueError(f"K must be >= 1, got {self.K}")
        for key in ("seeds", "methods", "hidden"):
            if not isinstance(getattr(self, key), list):
                raise ConfigValueError(f"Key '{key}' expects a list, got {getattr(self, key)!r}")
        if not self.seeds:
            raise ConfigValueError("At least one seed is required")
        if not all(isinstance(s, int) and s>=0 for s in self.seeds):
            raise ConfigValueError(f"Seeds must be non-negative integers, got {self.seeds}")
        if not all(isinstance(h, int) and h>=1 for h in self.hidden):
            raise ConfigValueError(f"Hidden widths must be positive integers, got {self.hidden}")
        for m in self.methods:
            try:
                Method(m)
            except ValueError as e:
                raise ConfigValueError(f"Unknown method '{m}'") from e
