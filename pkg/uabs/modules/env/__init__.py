from collections import namedtuple
from enum import Enum, IntEnum

import numpy as np

from uabs.core.data import DataBase, ConfigBase, ConfigValueError

class TerminalStateError(RuntimeError):
    pass

class TraceFormatError(ValueError):
    def __init__(self, msg: str, line: int):
        super().__init__(f"line {line}: {msg}")
        self.line = line

class Action(IntEnum):
    Hover = 0
    W = 1  # ←
    N = 2  # ↑
    E = 3  # →
    S = 4  # ↓
    NW = 5 # ↖
    NE = 6 # ↗
    SE = 7 # ↘
    SW = 8 # ↙

_D = np.sqrt(0.5)
ACTION_DIRECTIONS = np.array([
    [0, 0],
    [-1, 0], [0, 1], [1, 0], [0, -1],
    [-_D, _D], [_D, _D], [_D, -_D], [-_D, -_D],
]) # unit vectors, index = Action
N_ACTIONS = len(Action)

class TrafficMode(Enum):
    Waypoint = "waypoint"
    TracePlayback = "trace-playback"

class AreaSpec:
    def __init__(self, width: float, height: float, uabs_altitude: float=100.0):
        if width<=0 or height<=0 or uabs_altitude<=0:
            raise ConfigValueError(f"Area dimensions must be positive, got {width}x{height}@{uabs_altitude}")
        self.width = float(width)
        self.height = float(height)
        self.uabs_altitude = float(uabs_altitude)

    @property
    def size(self) -> np.ndarray:
        return np.array([self.width, self.height])

    def contains(self, p) -> bool:
        x, y = p
        return 0<=x<=self.width and 0<=y<=self.height

    def clip(self, p) -> np.ndarray:
        return np.clip(p, 0, self.size)

    def __eq__(self, other):
        return isinstance(other, AreaSpec) and \
            (self.width, self.height, self.uabs_altitude)==(other.width, other.height, other.uabs_altitude)

    def __repr__(self):
        return f"AreaSpec({self.width}, {self.height}, {self.uabs_altitude})"

class WaypointPath:
    # piece-wise linear curve through successive points
    def __init__(self, points, area: AreaSpec=None):
        points = np.asarray(points, dtype=float)
        if points.ndim!=2 or points.shape[1]!=2 or len(points)<2:
            raise ConfigValueError("A path needs at least two 2-D points")
        seg = np.diff(points, axis=0)
        lengths = np.hypot(seg[:, 0], seg[:, 1])
        if np.any(lengths==0):
            raise ConfigValueError("Consecutive path points must be distinct")
        if area is not None and not all(area.contains(p) for p in points):
            raise ConfigValueError("Path point outside the area")

        self.points = points
        self.cumulative = np.concatenate([[0], np.cumsum(lengths)])

    @property
    def length(self) -> float:
        return self.cumulative[-1]

    def at(self, s: float) -> np.ndarray:
        # position at arc length `s`, 0 <= s <= length
        if s>=self.length:
            return self.points[-1].copy()
        i = np.searchsorted(self.cumulative, s, side="right") - 1
        frac = (s-self.cumulative[i]) / (self.cumulative[i+1]-self.cumulative[i])
        return self.points[i] + frac*(self.points[i+1]-self.points[i])

class GueSpec:
    def __init__(self, path: WaypointPath, speed: float, start_time: int):
        if speed<=0:
            raise ConfigValueError(f"GUE speed must be positive, got {speed}")
        if start_time<1:
            raise ConfigValueError(f"GUE start time must be >= 1, got {start_time}")
        self.path = path
        self.speed = float(speed)
        self.start_time = int(start_time)

TraceTrack = namedtuple("TraceTrack", ['start_time', 'positions'])
    # start_time: first step present in the trace
    # positions: (n_steps, 2), one row per contiguous step

class TrafficPattern:
    def __init__(self, gues: list[GueSpec]=None, p_msg: float=1.0, mode: TrafficMode=TrafficMode.Waypoint, trace: dict[int, TraceTrack]=None):
        if not 0<=p_msg<=1:
            raise ConfigValueError(f"p_msg must be within [0, 1], got {p_msg}")
        self.gues = gues or []
        self.p_msg = float(p_msg)
        self.mode = mode
        self.trace = trace or {}
        if self.G<1:
            raise ConfigValueError("A traffic pattern needs at least one GUE")

    @property
    def G(self) -> int:
        return len(self.trace) if self.mode==TrafficMode.TracePlayback else len(self.gues)

    @property
    def gue_ids(self) -> list[int]:
        if self.mode==TrafficMode.TracePlayback:
            return sorted(self.trace)
        return list(range(len(self.gues)))

class TaskConfig(DataBase):
    def __init__(self, name: str = None, uuid: str = None, uabs_start=(0, 0), traffic: TrafficPattern=None, horizon: int=1, area: AreaSpec=None, uabs_speed: float=1.0) -> None:
        super().__init__(name, uuid)

        self.uabs_start = np.asarray(uabs_start, dtype=float)
        self.traffic = traffic
        self.horizon = int(horizon)
        self.area = area
        self.uabs_speed = float(uabs_speed)

        self._track = None
        if self.horizon<1:
            raise ConfigValueError(f"Horizon must be >= 1, got {horizon}")
        if area is not None and not area.contains(self.uabs_start):
            raise ConfigValueError(f"UABS start {tuple(self.uabs_start)} outside the area")

    @property
    def track(self) -> tuple[np.ndarray, np.ndarray]:
        # (positions (T+1, G, 2), active (T+1, G)) tabulated once per task
        if self._track is None:
            from .world import tabulate_traffic
            self._track = tabulate_traffic(self.traffic, self.horizon, self.area)
        return self._track

GueState = namedtuple("GueState", ['position', 'active', 'has_packet'])

class WorldState:
    def __init__(self, t: int, uabs_pos: np.ndarray, gue_pos: np.ndarray, active: np.ndarray, has_packet: np.ndarray):
        self.t = t
        self.uabs_pos = uabs_pos
        self.gue_pos = gue_pos # (G, 2), rows of inactive GUEs are meaningless
        self.active = active
        self.has_packet = has_packet

    @property
    def gues(self) -> list[GueState]:
        return [
            GueState(pos if act else None, bool(act), bool(pkt))
            for pos, act, pkt in zip(self.gue_pos, self.active, self.has_packet)
        ]

class EncoderConfig(ConfigBase):
    def __init__(self, name: str = None, uuid: str = None, k_nn: int=8) -> None:
        super().__init__(name, uuid)
        self.k_nn = k_nn

    @property
    def feature_dim(self) -> int:
        return 2 + 3*self.k_nn

    def validate(self):
        if self.k_nn<0:
            raise ConfigValueError(f"k_nn must be >= 0, got {self.k_nn}")
