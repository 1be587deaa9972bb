import numpy as np

from uabs.core.actions import PAB
from uabs.modules.channel import ChannelParams, RewardParams
from uabs.modules.env import EncoderConfig, TaskConfig
from uabs.modules.env.world import Simulator, encode_state
from uabs.modules.policy import PolicyParams
from uabs.modules.policy.calc_lib import action_probs, sample_action
from . import Episode, RLConfig, TaskResult
from .calc_lib import reinforce_update

def run_episode(p: PolicyParams, sim: Simulator, enc: EncoderConfig, rng: np.random.Generator) -> Episode:
    """Roll out one episode of `sim` under policy `p`.

    `rng` is split into an environment stream and an action stream, so packet
    and link draws do not shift with the actions taken.
    """
    env_rng, act_rng = rng.spawn(2)
    T = sim.task.horizon
    features = np.zeros((T, enc.feature_dim))
    actions = np.zeros(T, dtype=np.int64)
    rewards = np.zeros(T, dtype=np.int64)
    behavior = np.zeros(T)
    positions = np.zeros((T+1, 2))

    state = sim.reset(env_rng)
    positions[0] = state.uabs_pos
    for t in range(T):
        x = encode_state(state, sim.task, enc)
        a, pi_a = sample_action(act_rng, action_probs(p, x))
        state, r, _ = sim.step(state, a, env_rng)
        features[t], actions[t], rewards[t], behavior[t] = x, a, r, pi_a
        positions[t+1] = state.uabs_pos

    return Episode(features, actions, rewards, behavior, positions)

class TrainTaskAction(PAB):
    CAPTION = "Conventional policy gradient on a task"

    def __call__(self, theta0: PolicyParams, sim: Simulator, cfg: RLConfig, enc: EncoderConfig, rng: np.random.Generator) -> TaskResult:
        """Alternate one episode and one REINFORCE step, `cfg.episodes` times.

        Returns
        -------
        TaskResult
            theta_star : parameters after the last update
            full_set : every episode, with behavior probabilities
            skilled, skilled_index : first episode with the highest total reward
            per_episode_rewards : undiscounted totals, one per episode
            theta_norms : |theta| after each update
        """
        n = cfg.episodes
        p = theta0
        full_set = []
        norms = []
        for i, episode_rng in enumerate(rng.spawn(n)):
            e = run_episode(p, sim, enc, episode_rng)
            p = reinforce_update(p, e, cfg)
            full_set.append(e)
            norms.append(float(np.linalg.norm(p.theta)))
            self.progress(i+1, n)

        totals = np.array([e.total_reward for e in full_set])
        k = int(np.argmax(totals)) # first maximum wins ties
        self.message(f"Task '{sim.task.name}': mean {totals.mean():.3f}, best episode {k} ({totals[k]})")
        return TaskResult(p, full_set, full_set[k], k, totals, np.array(norms))

def train_task(theta0: PolicyParams, task: TaskConfig, cfg: RLConfig, chan: ChannelParams, rew: RewardParams, rng: np.random.Generator, enc: EncoderConfig=None) -> TaskResult:
    return TrainTaskAction().run(theta0, Simulator(task, chan, rew), cfg, enc or EncoderConfig(), rng)
