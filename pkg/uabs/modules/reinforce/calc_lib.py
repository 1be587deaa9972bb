import numpy as np

from uabs.modules.policy import PolicyParams
from uabs.modules.policy.calc_lib import score_sum
from . import Episode, RLConfig

def discounted_returns(rewards, gamma: float) -> np.ndarray:
    rewards = np.asarray(rewards, dtype=float)
    G = np.zeros_like(rewards)
    acc = 0.0
    for t in range(len(rewards)-1, -1, -1):
        acc = rewards[t] + gamma*acc
        G[t] = acc
    return G

def policy_gradient(p: PolicyParams, e: Episode, gamma: float) -> np.ndarray:
    # score terms use the current parameters, whatever policy collected `e`
    return score_sum(p, e.features, e.actions, discounted_returns(e.rewards, gamma))

def reinforce_update(p: PolicyParams, e: Episode, cfg: RLConfig) -> PolicyParams:
    return p.with_theta(p.theta + cfg.eta*policy_gradient(p, e, cfg.gamma))
