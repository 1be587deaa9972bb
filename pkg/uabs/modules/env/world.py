import numpy as np

from uabs.modules.channel import ChannelParams, RewardParams
from uabs.modules.channel.calc_lib import coverage_mask, collect_reward
from . import Action, ACTION_DIRECTIONS, AreaSpec, GueSpec, TrafficMode, TrafficPattern, \
              TaskConfig, WorldState, EncoderConfig, TerminalStateError

def gue_position(spec: GueSpec, t: int, area: AreaSpec=None, horizon: int=None) -> np.ndarray | None:
    """Position of a waypoint GUE at step `t`, `None` while inactive.

    Active from `start_time` on, walking `speed` of arc length per step; the
    step that reaches (or passes) the end point lands on it and is the last
    active one. Steps beyond `horizon` are inactive.
    """
    if t<spec.start_time or (horizon is not None and t>horizon):
        return None
    k = t - spec.start_time
    path = spec.path
    if (k-1)*spec.speed >= path.length: # end point already reached at k-1
        return None
    pos = path.at(k*spec.speed)
    return area.clip(pos) if area is not None else pos

def trace_position(traffic: TrafficPattern, gue_id: int, t: int, horizon: int=None) -> np.ndarray | None:
    track = traffic.trace[gue_id]
    k = t - track.start_time
    if k<0 or k>=len(track.positions) or (horizon is not None and t>horizon):
        return None
    return track.positions[k]

def tabulate_traffic(traffic: TrafficPattern, horizon: int, area: AreaSpec=None) -> tuple[np.ndarray, np.ndarray]:
    G = traffic.G
    positions = np.zeros((horizon+1, G, 2))
    active = np.zeros((horizon+1, G), dtype=bool)

    for g, gue_id in enumerate(traffic.gue_ids):
        for t in range(horizon+1):
            if traffic.mode==TrafficMode.TracePlayback:
                pos = trace_position(traffic, gue_id, t, horizon)
            else:
                pos = gue_position(traffic.gues[gue_id], t, area, horizon)
            if pos is not None:
                positions[t, g] = pos
                active[t, g] = True

    return positions, active

def uabs_move(p: np.ndarray, a: Action, v_u: float, area: AreaSpec) -> np.ndarray:
    return area.clip(np.asarray(p, dtype=float) + v_u*ACTION_DIRECTIONS[int(a)])

def reset(task: TaskConfig, rng: np.random.Generator) -> WorldState:
    positions, active = task.track
    act = active[0].copy()
    return WorldState(
        t=0,
        uabs_pos=task.uabs_start.copy(),
        gue_pos=positions[0].copy(),
        active=act,
        has_packet=act & (rng.random(task.traffic.G) < task.traffic.p_msg),
    )

def step(state: WorldState, a: Action, task: TaskConfig, chan: ChannelParams, rew: RewardParams, rng: np.random.Generator) -> tuple[WorldState, int, np.ndarray]:
    """Advance one decision step.

    Draw order on `rng` is fixed: G packet uniforms, G link uniforms (sampled
    links only), then the overflow shuffle when more than `c_max` GUEs are
    eligible.
    """
    if state.t>=task.horizon:
        raise TerminalStateError(f"Cannot step terminal state t={state.t} (T={task.horizon})")

    t = state.t + 1
    positions, active = task.track
    uabs_pos = uabs_move(state.uabs_pos, a, task.uabs_speed, task.area)
    act = active[t].copy()
    has_packet = act & (rng.random(task.traffic.G) < task.traffic.p_msg)

    covered = coverage_mask(uabs_pos, task.area.uabs_altitude, positions[t], chan, rng)
    eligible = np.flatnonzero(has_packet & covered)
    r, served = collect_reward(eligible, rew, rng)

    nxt = WorldState(t=t, uabs_pos=uabs_pos, gue_pos=positions[t].copy(), active=act, has_packet=has_packet)
    return nxt, r, served

def encode_state(state: WorldState, task: TaskConfig, enc: EncoderConfig) -> np.ndarray:
    size = task.area.size
    features = np.zeros(enc.feature_dim)
    features[:2] = state.uabs_pos / size

    idx = np.flatnonzero(state.active)
    if len(idx) and enc.k_nn:
        rel = state.gue_pos[idx] - state.uabs_pos
        dist = np.hypot(rel[:, 0], rel[:, 1])
        order = np.argsort(dist, kind="stable")[:enc.k_nn] # ties keep GUE index order
        slots = features[2:].reshape(enc.k_nn, 3)
        slots[:len(order), 0] = 1
        slots[:len(order), 1:] = rel[order] / size

    return features

class Simulator:
    """One task's simulator with a call ledger.

    Every `reset`/`step` is counted so the continual drivers can prove a
    task's simulator is never touched again once its episodes are done.
    """
    def __init__(self, task: TaskConfig, chan: ChannelParams, rew: RewardParams):
        self.task = task
        self.chan = chan
        self.rew = rew
        self.calls = 0

    def reset(self, rng: np.random.Generator) -> WorldState:
        self.calls += 1
        return reset(self.task, rng)

    def step(self, state: WorldState, a: Action, rng: np.random.Generator) -> tuple[WorldState, int, np.ndarray]:
        self.calls += 1
        return step(state, a, self.task, self.chan, self.rew, rng)
