from collections import namedtuple
from enum import Enum

from uabs.core.data import ConfigBase, ConfigValueError

class PathLossDomainError(ValueError):
    pass

class LinkMode(Enum):
    Sampled = "sampled"   # Bernoulli LoS draw per (GUE, step)
    Expected = "expected" # deterministic p_los-weighted excess loss

LinkState = namedtuple("LinkState", ['los', 'eta_db'])
    # los: bool array for sampled links, None for expected ones
    # eta_db: excess path loss actually applied

class ChannelParams(ConfigBase):
    def __init__(self, name: str = None, uuid: str = None,
                 alpha: float=9.61, beta: float=0.16, eta_los_db: float=1.0, eta_nlos_db: float=20.0,
                 fc_ghz: float=30.0, ptx_dbm: float=20.0, gtx_db: float=0.0, grx_db: float=0.0,
                 pnoise_dbm: float=-100.0, snr_th_db: float=-10.0,
                 link_mode: str="sampled", coverage_radius_m: float=0.0) -> None:
        super().__init__(name, uuid)

        self.alpha = alpha
        self.beta = beta # per degree
        self.eta_los_db = eta_los_db
        self.eta_nlos_db = eta_nlos_db
        self.fc_ghz = fc_ghz
        self.ptx_dbm = ptx_dbm
        self.gtx_db = gtx_db
        self.grx_db = grx_db
        self.pnoise_dbm = pnoise_dbm
        self.snr_th_db = snr_th_db
        self.link_mode = link_mode
        self.coverage_radius_m = coverage_radius_m # >0: threshold derived from a LoS radius

        self.validate()

    @property
    def fc_mhz(self) -> float:
        return self.fc_ghz * 1000

    @property
    def mode(self) -> LinkMode:
        return LinkMode(self.link_mode)

    @property
    def threshold_db(self) -> float:
        if self.coverage_radius_m>0:
            from .calc_lib import path_loss, snr
            return snr(self, path_loss(self.fc_mhz, self.coverage_radius_m, self.eta_los_db))
        return self.snr_th_db

    def validate(self):
        if self.alpha<=0 or self.beta<=0 or self.fc_ghz<=0:
            raise ConfigValueError("alpha, beta and fc_ghz must be positive")
        if not self.eta_nlos_db>=self.eta_los_db>=0:
            raise ConfigValueError("Excess losses must satisfy eta_nlos_db >= eta_los_db >= 0")
        if self.coverage_radius_m<0:
            raise ConfigValueError("coverage_radius_m must be >= 0")
        try:
            self.mode
        except ValueError as e:
            raise ConfigValueError(f"Unknown link_mode '{self.link_mode}'") from e

class RewardParams(ConfigBase):
    def __init__(self, name: str = None, uuid: str = None, c_max: int=10) -> None:
        super().__init__(name, uuid)
        self.c_max = c_max
        self.validate()

    def validate(self):
        if self.c_max<1:
            raise ConfigValueError(f"c_max must be >= 1, got {self.c_max}")
