from collections import namedtuple
from concurrent.futures import ProcessPoolExecutor
from glob import glob
from os import path

import numpy as np

from uabs.core.actions import PAB
from uabs.modules.comps import MetaState, ContinualConstraintError
from uabs.modules.comps.actions import CompsStepAction
from uabs.modules.env import TaskConfig
from uabs.modules.env.data_loader import load_task_manifest
from uabs.modules.env.tasks import make_toy_tasks, gen_random_task
from uabs.modules.env.world import Simulator
from uabs.modules.policy.calc_lib import init_params
from uabs.modules.reinforce.actions import TrainTaskAction
from . import Method, MetricsRow, RunConfig, InsufficientTasksError

ENV_STREAM, INIT_STREAM, META_STREAM = 0, 1, 2

SeedRun = namedtuple("SeedRun", ['method', 'seed', 'rows', 'trajectories', 'training_logs', 'final_params', 'meta_state'])
    # trajectories: UABS track of the first episode of every task
    # training_logs: (per_episode_rewards, theta_norms) of every task
ContinualResult = namedtuple("ContinualResult", ['rows', 'runs'])

def stream(seed: int, kind: int, i: int) -> np.random.Generator:
    # independent of the method, so all methods see the same draws for (seed, i)
    return np.random.default_rng([seed, kind, i])

def run_method_seed(cfg: RunConfig, method: str, seed: int, tasks: list[TaskConfig]) -> SeedRun:
    method = Method(method)
    arch = cfg.arch
    expected_calls = {}
    simulators: dict[int, Simulator] = {}
    rows, trajectories, logs = [], [], []
    params = None
    meta_state = None

    for i, task in enumerate(tasks):
        sim = Simulator(task, cfg.chan, cfg.rew)
        rng = stream(seed, ENV_STREAM, i)

        if method==Method.Comps:
            if meta_state is None:
                meta_state = MetaState(init_params(arch, stream(seed, INIT_STREAM, 0)))
            action = CompsStepAction(name=f"{method.value}/{seed}/{i}")
            meta_state, _ = action.run(meta_state, sim, cfg.rl, cfg.meta, cfg.enc, rng, stream(seed, META_STREAM, i), simulators)
            result = action.result
            params = meta_state.theta0
        else:
            if method==Method.Conventional or params is None:
                params = init_params(arch, stream(seed, INIT_STREAM, i))
            result = TrainTaskAction(name=f"{method.value}/{seed}/{i}").run(params, sim, cfg.rl, cfg.enc, rng)
            params = result.theta_star

        simulators[i] = sim
        expected_calls[i] = cfg.N * (task.horizon+1)
        totals = result.per_episode_rewards
        rows.append(MetricsRow(method.value, seed, i, float(np.mean(totals)), float(np.std(totals))))
        trajectories.append(result.full_set[0].positions)
        logs.append((totals, result.theta_norms))

    if (touched:=[i for i, sim in simulators.items() if sim.calls!=expected_calls[i]]):
        raise ContinualConstraintError(f"Simulators of tasks {touched} were run outside their own episodes")

    return SeedRun(method.value, seed, rows, trajectories, logs, params, meta_state)

def _run_job(job):
    return run_method_seed(*job)

class RunContinualAction(PAB):
    CAPTION = "Continual run over a task sequence"

    def __call__(self, cfg: RunConfig, tasks: list[TaskConfig], jobs: int=1) -> ContinualResult:
        if len(tasks)!=cfg.K:
            raise InsufficientTasksError(f"Expected K={cfg.K} tasks, got {len(tasks)}")

        todo = [(cfg, method, seed, tasks) for method in cfg.methods for seed in cfg.seeds]
        n = len(todo)
        runs = []
        if jobs>1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                for k, run in enumerate(pool.map(_run_job, todo)): # preserves job order
                    runs.append(run)
                    self.progress(k+1, n)
        else:
            for k, job in enumerate(todo):
                runs.append(_run_job(job))
                self.progress(k+1, n)

        for run in runs:
            self.message(f"{run.method} seed {run.seed}: last task mean {run.rows[-1].mean_packets:.3f}")
        return ContinualResult([row for run in runs for row in run.rows], runs)

def toy_task_sequence(cfg: RunConfig) -> list[TaskConfig]:
    scen = cfg.scen
    cw, ccw = make_toy_tasks(altitude=scen.altitude_m, uabs_speed=scen.uabs_speed, gue_speed=scen.gue_speed,
                             p_msg=scen.p_msg, horizon=scen.horizon)
    return [(cw, ccw)[i%2] for i in range(cfg.K)]

def urban_task_sequence(cfg: RunConfig, traces_dir: str=None, gen_seed: int=None) -> list[TaskConfig]:
    if traces_dir is not None:
        manifests = sorted(glob(path.join(traces_dir, "*.yaml")))
        if len(manifests)<cfg.K:
            raise InsufficientTasksError(f"'{traces_dir}' holds {len(manifests)} task manifests, K={cfg.K}")
        return [load_task_manifest(fpath) for fpath in manifests[:cfg.K]]

    scen = cfg.scen
    rng = np.random.default_rng(gen_seed)
    return [
        gen_random_task(scen.area, (scen.g_min, scen.g_max), scen.gue_speed, scen.horizon, rng,
                        speed_jitter=scen.speed_jitter, p_msg=scen.p_msg, uabs_speed=scen.uabs_speed, name=f"urban-{i:03d}")
        for i in range(cfg.K)
    ]

class RunToyAction(PAB):
    CAPTION = "Toy experiment: alternating perimeter tasks"

    def __call__(self, cfg: RunConfig, jobs: int=1) -> ContinualResult:
        runner = RunContinualAction(name=self.name)
        runner._progress, runner._message = self._progress, self._message
        return runner.run(cfg, toy_task_sequence(cfg), jobs)

class RunUrbanAction(PAB):
    CAPTION = "Urban experiment: trace or generated tasks"

    def __call__(self, cfg: RunConfig, traces_dir: str=None, gen_seed: int=None, jobs: int=1) -> ContinualResult:
        tasks = urban_task_sequence(cfg, traces_dir, gen_seed)
        self.message(f"{len(tasks)} tasks, G in [{min(t.traffic.G for t in tasks)}, {max(t.traffic.G for t in tasks)}]")
        runner = RunContinualAction(name=self.name)
        runner._progress, runner._message = self._progress, self._message
        return runner.run(cfg, tasks, jobs)
