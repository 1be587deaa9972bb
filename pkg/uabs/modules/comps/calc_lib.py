import numpy as np

from uabs.modules.policy import PolicyParams
from uabs.modules.policy.calc_lib import log_probs, score_sum, nll, numerical_gradient
from uabs.modules.reinforce import Episode
from uabs.modules.reinforce.calc_lib import discounted_returns
from . import MetaConfig, MetaGradMode, MetaState, TaskArchiveEntry, ArchiveCorruptionError, EmptyExperienceError

def importance_ratios(theta0: PolicyParams, e: Episode, ratio_clip: float) -> np.ndarray:
    if np.any(e.behavior_probs<=0):
        raise ArchiveCorruptionError("Archived episode has a zero behavior probability")
    lp = log_probs(theta0, e.features)[np.arange(e.length), e.actions]
    return np.clip(np.exp(lp) / e.behavior_probs, 1/ratio_clip, ratio_clip)

def off_policy_adapt(theta0: PolicyParams, e: Episode, cfg: MetaConfig) -> PolicyParams:
    # one importance-weighted policy-gradient step from theta0, no new simulation
    weights = importance_ratios(theta0, e, cfg.ratio_clip) * discounted_returns(e.rewards, cfg.gamma)
    return theta0.with_theta(theta0.theta + cfg.eta*score_sum(theta0, e.features, e.actions, weights))

def bc_loss(p: PolicyParams, skilled: Episode) -> float:
    return nll(p, skilled.features, skilled.actions)

def bc_loss_grad(p: PolicyParams, skilled: Episode) -> np.ndarray:
    return -score_sum(p, skilled.features, skilled.actions, np.ones(skilled.length))

def meta_gradient(theta0: PolicyParams, entry: TaskArchiveEntry, cfg: MetaConfig, rng: np.random.Generator) -> np.ndarray:
    """Gradient of the cloning loss after one off-policy step, w.r.t. theta0.

    One archived episode is drawn uniformly to drive the adaptation. The
    first-order mode evaluates the loss gradient at the adapted parameters;
    the finite-difference mode differentiates the whole composition and is
    only affordable on tiny nets.
    """
    if not entry.full_set:
        raise EmptyExperienceError(f"Task {entry.task_index} has no episodes")
    e = entry.full_set[int(rng.integers(len(entry.full_set)))]

    if cfg.mode==MetaGradMode.FirstOrder:
        return bc_loss_grad(off_policy_adapt(theta0, e, cfg), entry.skilled)
    else:
        composed = lambda theta: bc_loss(off_policy_adapt(theta0.with_theta(theta), e, cfg), entry.skilled)
        return numerical_gradient(composed, theta0.theta)

def meta_update(state: MetaState, cfg: MetaConfig, rng: np.random.Generator) -> MetaState:
    # archive data only: no simulator is reachable from here
    n_tasks = state.i
    if n_tasks==0:
        raise EmptyExperienceError("Meta-update needs at least one archived task")
    theta0 = state.theta0
    step = cfg.kappa / n_tasks
    for _ in range(cfg.I_meta):
        picked = np.sort(rng.choice(n_tasks, size=min(cfg.B, n_tasks), replace=False))
        grad = np.zeros_like(theta0.theta)
        for k in picked: # reduced in task-index order
            grad += meta_gradient(theta0, state.archive[k], cfg, rng)
        theta0 = theta0.with_theta(theta0.theta - step*grad)
    return MetaState(theta0, state.archive)
