from collections import namedtuple

import numpy as np

from uabs.core.data import ConfigBase, ConfigValueError

StepRecord = namedtuple("StepRecord", ['features', 'action', 'reward', 'behavior_prob'])

class Episode:
    """A recorded T-step rollout, stored column-wise.

    `behavior_probs[t]` is the probability the collecting policy gave to
    `actions[t]` at decision time; `positions` holds the UABS track
    (T+1 points, start included).
    """
    def __init__(self, features: np.ndarray, actions: np.ndarray, rewards: np.ndarray, behavior_probs: np.ndarray, positions: np.ndarray=None):
        self.features = np.asarray(features, dtype=np.float64)
        self.actions = np.asarray(actions, dtype=np.int64)
        self.rewards = np.asarray(rewards, dtype=np.int64)
        self.behavior_probs = np.asarray(behavior_probs, dtype=np.float64)
        self.positions = np.asarray(positions, dtype=np.float64) if positions is not None else np.zeros((len(self.actions)+1, 2))

    @property
    def length(self) -> int:
        return len(self.actions)

    @property
    def total_reward(self) -> int:
        return int(self.rewards.sum())

    @property
    def steps(self) -> list[StepRecord]:
        return [StepRecord(*rec) for rec in zip(self.features, self.actions, self.rewards, self.behavior_probs)]

    def __eq__(self, other):
        return isinstance(other, Episode) and all(
            np.array_equal(getattr(self, k), getattr(other, k))
            for k in ('features', 'actions', 'rewards', 'behavior_probs', 'positions')
        )

class RLConfig(ConfigBase):
    KEY_ALIASES = {"N": "episodes"}

    def __init__(self, name: str = None, uuid: str = None, episodes: int=50, gamma: float=0.8, eta: float=0.001) -> None:
        super().__init__(name, uuid)
        self.episodes = episodes
        self.gamma = gamma
        self.eta = eta
        self.validate()

    def validate(self):
        if self.episodes<1:
            raise ConfigValueError(f"N must be >= 1, got {self.episodes}")
        if not 0<self.gamma<=1:
            raise ConfigValueError(f"gamma must be within (0, 1], got {self.gamma}")
        if self.eta<0:
            raise ConfigValueError(f"eta must be >= 0, got {self.eta}")

TaskResult = namedtuple("TaskResult", ['theta_star', 'full_set', 'skilled', 'skilled_index', 'per_episode_rewards', 'theta_norms'])
