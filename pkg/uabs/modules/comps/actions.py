import numpy as np

from uabs.core.actions import PAB
from uabs.modules.channel import ChannelParams, RewardParams
from uabs.modules.env import EncoderConfig, TaskConfig
from uabs.modules.env.world import Simulator
from uabs.modules.policy import PolicyArch, PolicyParams
from uabs.modules.policy.calc_lib import init_params, action_probs, sample_action
from uabs.modules.reinforce import Episode, RLConfig
from uabs.modules.reinforce.actions import TrainTaskAction
from . import MetaConfig, MetaGradMode, MetaState, TaskArchiveEntry, ContinualConstraintError
from .calc_lib import meta_gradient, meta_update

class CompsStepAction(PAB):
    CAPTION = "CoMPS step on a new task"

    def __init__(self, name: str = None, uuid: str = None) -> None:
        super().__init__(name, uuid)
        self.result = None

    def __call__(self, state: MetaState, sim: Simulator, rl_cfg: RLConfig, meta_cfg: MetaConfig, enc: EncoderConfig,
                 rng: np.random.Generator, meta_rng: np.random.Generator=None, simulators: dict[int, Simulator]=None) -> tuple[MetaState, np.ndarray]:
        """Train on the new task from theta0, archive it, then meta-update theta0.

        Parameters
        ----------
        rng : stream for the RL phase (same role as in conventional training)
        meta_rng : stream for task / episode sampling in the meta-update,
            spawned from `rng` when omitted
        simulators : every simulator seen so far, keyed by task index; their
            call counters must not move during the meta-update
        """
        trainer = TrainTaskAction(name=self.name)
        trainer._progress, trainer._message = self._progress, self._message
        result = trainer.run(state.theta0, sim, rl_cfg, enc, rng)
        self.result = result # full RL-phase result for callers that export more than the curve

        entry = TaskArchiveEntry(state.i, result.full_set, result.skilled_index)
        grown = MetaState(state.theta0, [*state.archive, entry])

        simulators = {**(simulators or {}), entry.task_index: sim}
        before = {k: s.calls for k, s in simulators.items()}
        updated = meta_update(grown, meta_cfg, meta_rng if meta_rng is not None else rng.spawn(1)[0])
        if (touched:=[k for k, s in simulators.items() if s.calls!=before[k]]):
            raise ContinualConstraintError(f"Simulators of tasks {touched} were run during the meta-update")

        self.message(f"Meta-update over {updated.i} archived tasks, |theta0|={np.linalg.norm(updated.theta0.theta):.4f}")
        return updated, result.per_episode_rewards

def run_comps_step(state: MetaState, task: TaskConfig, rl_cfg: RLConfig, meta_cfg: MetaConfig, chan: ChannelParams, rew: RewardParams,
                   rng: np.random.Generator, enc: EncoderConfig=None, meta_rng: np.random.Generator=None) -> tuple[MetaState, np.ndarray]:
    return CompsStepAction().run(state, Simulator(task, chan, rew), rl_cfg, meta_cfg, enc or EncoderConfig(), rng, meta_rng)

def random_entry(behavior: PolicyParams, horizon: int, n_episodes: int, rng: np.random.Generator, task_index: int=0) -> TaskArchiveEntry:
    # synthetic archive entry: gaussian features, actions drawn from `behavior`
    full_set = []
    for _ in range(n_episodes):
        X = rng.normal(size=(horizon, behavior.arch.input_dim))
        picks = [sample_action(rng, action_probs(behavior, x)) for x in X]
        full_set.append(Episode(
            X, [a for a, _ in picks], rng.integers(0, 4, size=horizon), [pi_a for _, pi_a in picks],
        ))
    skilled_index = int(np.argmax([e.total_reward for e in full_set]))
    return TaskArchiveEntry(task_index, full_set, skilled_index)

class MetaGradientCheckAction(PAB):
    CAPTION = "First-order vs finite-difference meta-gradient"

    def __call__(self, cfg: MetaConfig, trials: int=20, input_dim: int=4, horizon: int=5, n_episodes: int=3, seed: int=0) -> np.ndarray:
        """Cosine similarity of the two meta-gradient modes on tiny linear policies.

        Both modes see the same archived episode in every trial. With the
        default `input_dim` the policy has 45 parameters.
        """
        rng = np.random.default_rng(seed)
        arch = PolicyArch(input_dim, [])
        modes = {
            mode: MetaConfig.FromConfig({**cfg.get_construct_config(), "meta_grad_mode": mode.value})
            for mode in MetaGradMode
        }
        cosines = np.zeros(trials)
        for k in range(trials):
            behavior = init_params(arch, rng)
            theta0 = behavior.with_theta(rng.normal(scale=0.5, size=arch.n_params))
            entry = random_entry(behavior, horizon, n_episodes, rng)
            pick_seed = int(rng.integers(2**32))
            g_fo, g_fd = (
                meta_gradient(theta0, entry, modes[mode], np.random.default_rng(pick_seed))
                for mode in (MetaGradMode.FirstOrder, MetaGradMode.FiniteDifference)
            )
            cosines[k] = g_fo@g_fd / (np.linalg.norm(g_fo)*np.linalg.norm(g_fd))
            self.progress(k+1, trials)

        self.message(f"eta={cfg.eta}: mean cosine {cosines.mean():.6f} over {trials} trials")
        return cosines
