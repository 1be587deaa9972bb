import struct

import numpy as np
import pytest

from uabs.modules.env import EncoderConfig
from uabs.modules.env.tasks import make_toy_tasks
from uabs.modules.env.world import Simulator
from uabs.modules.policy import PolicyArch, PolicyParams
from uabs.modules.policy.calc_lib import init_params, action_probs
from uabs.modules.reinforce import Episode, RLConfig
from uabs.modules.reinforce.actions import TrainTaskAction
from uabs.modules.reinforce.calc_lib import reinforce_update
from uabs.modules.comps import MetaConfig, MetaState, TaskArchiveEntry, ArchiveError, ArchiveVersionError, \
                               ArchiveTruncatedError, ArchiveChecksumError, ArchiveCorruptionError, \
                               EmptyExperienceError, ContinualConstraintError
from uabs.modules.comps.actions import CompsStepAction, MetaGradientCheckAction, run_comps_step, random_entry
from uabs.modules.comps.calc_lib import importance_ratios, off_policy_adapt, bc_loss, bc_loss_grad, \
                                        meta_gradient, meta_update
from uabs.modules.comps.data_loader import dump_archive, parse_archive, archive_save, archive_load
from uabs.modules.policy.calc_lib import numerical_gradient

def random_policy(arch, rng, scale=0.5):
    return PolicyParams(theta=rng.normal(scale=scale, size=arch.n_params), arch=arch)

def test_off_policy_reduces_to_on_policy():
    rng = np.random.default_rng(0)
    arch = PolicyArch(4, [6])
    for _ in range(50):
        theta0 = random_policy(arch, rng)
        e = random_entry(theta0, 6, 1, rng).full_set[0] # behavior is theta0 itself
        adapted = off_policy_adapt(theta0, e, MetaConfig(eta=0.01))
        on_policy = reinforce_update(theta0, e, RLConfig(eta=0.01))
        assert np.max(np.abs(adapted.theta - on_policy.theta)) <= 1e-12

def test_importance_ratios_clip():
    rng = np.random.default_rng(1)
    arch = PolicyArch(3, [])
    theta0 = random_policy(arch, rng)
    X = rng.normal(size=(4, 3))
    actions = np.array([0, 1, 2, 3])
    probs = np.array([action_probs(theta0, x)[a] for x, a in zip(X, actions)])
    behavior = probs * np.array([1e-3, 1e3, 2.0, 1.0])
    e = Episode(X, actions, np.ones(4), behavior)

    assert np.allclose(importance_ratios(theta0, e, 10.0), [10, 0.1, 0.5, 1], atol=1e-12)
    assert np.allclose(importance_ratios(theta0, e, np.inf), probs / behavior, rtol=1e-12)

    corrupt = Episode(X, actions, np.ones(4), [0.1, 0.0, 0.1, 0.1])
    with pytest.raises(ArchiveCorruptionError):
        importance_ratios(theta0, corrupt, 10.0)

def test_off_policy_adapt_by_hand():
    # linear policy on two features: logits = x @ W + b
    rng = np.random.default_rng(2)
    arch = PolicyArch(2, [])
    theta0 = random_policy(arch, rng)
    W, b = theta0.theta[:18].reshape(2, 9), theta0.theta[18:]
    x, a, r, q = np.array([0.4, -1.3]), 5, 2.0, 0.2

    z = x@W + b
    pi = np.exp(z - z.max()) / np.exp(z - z.max()).sum()
    rho = min(max(pi[a] / q, 0.1), 10)
    score = np.eye(9)[a] - pi
    expected = theta0.theta + 0.3 * rho * r * np.concatenate([np.outer(x, score).ravel(), score])

    e = Episode(x[None, :], [a], [r], [q])
    assert np.allclose(off_policy_adapt(theta0, e, MetaConfig(eta=0.3)).theta, expected, rtol=0, atol=1e-10)

def test_off_policy_adapt_without_rewards():
    rng = np.random.default_rng(3)
    theta0 = random_policy(PolicyArch(3, [4]), rng)
    e = random_entry(theta0, 5, 1, rng).full_set[0]
    silent = Episode(e.features, e.actions, np.zeros(5), e.behavior_probs)
    assert off_policy_adapt(theta0, silent, MetaConfig(eta=0.5)) == theta0

def test_bc_loss_anchors():
    rng = np.random.default_rng(4)
    uniform = PolicyParams(arch=PolicyArch(3, [4]))
    skilled = Episode(rng.normal(size=(60, 3)), rng.integers(9, size=60), np.zeros(60), np.full(60, 1/9))
    assert bc_loss(uniform, skilled) == pytest.approx(60*np.log(9), abs=1e-9)

    arch = PolicyArch(1, [])
    theta = np.zeros(arch.n_params)
    theta[-9 + 2] = np.log(8) # action 2 gets half the mass
    half = PolicyParams(theta=theta, arch=arch)
    three = Episode(np.zeros((3, 1)), [2, 2, 2], np.zeros(3), np.full(3, 0.5))
    assert bc_loss(half, three) == pytest.approx(3*np.log(2), abs=1e-12)

    theta[-9 + 2] = 100.0
    assert bc_loss(half.with_theta(theta), three) == pytest.approx(0, abs=1e-12)

def test_bc_loss_grad_matches_finite_differences():
    rng = np.random.default_rng(5)
    p = random_policy(PolicyArch(3, [4]), rng)
    skilled = random_entry(p, 7, 1, rng).skilled
    numeric = numerical_gradient(lambda theta: bc_loss(p.with_theta(theta), skilled), p.theta)
    assert np.allclose(bc_loss_grad(p, skilled), numeric, atol=1e-7)

def test_meta_gradient_modes_agree_without_adaptation():
    rng = np.random.default_rng(6)
    arch = PolicyArch(4, [])
    for _ in range(5):
        theta0 = random_policy(arch, rng)
        entry = random_entry(init_params(arch, rng), 5, 3, rng)
        fo = meta_gradient(theta0, entry, MetaConfig(eta=0.0), np.random.default_rng(9))
        fd = meta_gradient(theta0, entry, MetaConfig(eta=0.0, meta_grad_mode="finite_difference"), np.random.default_rng(9))
        assert np.allclose(fo, fd, atol=1e-6)
        assert np.allclose(fo, bc_loss_grad(theta0, entry.skilled), atol=1e-12)

def test_meta_gradient_cosine_over_tiny_policies():
    cosines = MetaGradientCheckAction()(MetaConfig(eta=0.001), trials=20)
    assert len(cosines) == 20
    assert np.all(np.isfinite(cosines))
    assert cosines.mean() > 0

def entries(arch, n_tasks, rng, horizon=4, n_episodes=3):
    return [random_entry(init_params(arch, rng), horizon, n_episodes, rng, task_index=k) for k in range(n_tasks)]

def test_meta_update_prefactor_and_order():
    rng = np.random.default_rng(7)
    arch = PolicyArch(3, [])
    theta0 = random_policy(arch, rng)
    archive = entries(arch, 2, rng)
    cfg = MetaConfig(kappa=0.1, eta=0.01, B=5, I_meta=1)

    updated = meta_update(MetaState(theta0, archive), cfg, np.random.default_rng(11))

    replay = np.random.default_rng(11)
    picked = np.sort(replay.choice(2, size=2, replace=False))
    grad = np.zeros(arch.n_params)
    for k in picked:
        grad += meta_gradient(theta0, archive[k], cfg, replay)
    assert np.array_equal(updated.theta0.theta, theta0.theta - 0.1/2 * grad)
    assert updated.archive == archive

def test_meta_update_single_task_sampling():
    rng = np.random.default_rng(12)
    arch = PolicyArch(3, [])
    theta0 = random_policy(arch, rng)
    archive = entries(arch, 3, rng)
    cfg = MetaConfig(kappa=0.3, eta=0.01, B=1, I_meta=2)

    updated = meta_update(MetaState(theta0, archive), cfg, np.random.default_rng(5))

    replay = np.random.default_rng(5)
    theta = theta0
    for _ in range(2):
        k = replay.choice(3, size=1, replace=False)[0]
        theta = theta.with_theta(theta.theta - 0.3/3 * meta_gradient(theta, archive[k], cfg, replay))
    assert np.allclose(updated.theta0.theta, theta.theta, rtol=0, atol=1e-12)

def test_meta_update_edge_cases():
    rng = np.random.default_rng(8)
    arch = PolicyArch(3, [4])
    theta0 = random_policy(arch, rng)
    state = MetaState(theta0, entries(arch, 3, rng))

    assert meta_update(state, MetaConfig(kappa=0.0, I_meta=3), rng).theta0 == theta0
    assert meta_update(state, MetaConfig(I_meta=0), rng).theta0 == theta0

    cfg = MetaConfig(kappa=0.01, B=2, I_meta=4)
    a = meta_update(state, cfg, np.random.default_rng(1))
    b = meta_update(state, cfg, np.random.default_rng(1))
    assert a.theta0 == b.theta0 and a.theta0 != theta0

    with pytest.raises(EmptyExperienceError):
        meta_update(MetaState(theta0), cfg, rng)
    with pytest.raises(EmptyExperienceError):
        TaskArchiveEntry(0, [], 0)

def test_archive_roundtrip(tmp_path):
    rng = np.random.default_rng(9)
    arch = PolicyArch(5, [4, 3])
    state = MetaState(random_policy(arch, rng), entries(arch, 3, rng))

    fpath = str(tmp_path / "comps.uarc")
    archive_save(state, fpath)
    loaded = archive_load(fpath)
    assert loaded == state
    assert loaded.i == 3
    assert [entry.skilled_index for entry in loaded.archive] == [entry.skilled_index for entry in state.archive]
    assert np.array_equal(loaded.archive[2].full_set[1].behavior_probs, state.archive[2].full_set[1].behavior_probs)

    empty = parse_archive(dump_archive(MetaState(state.theta0)))
    assert empty.i == 0 and empty.theta0 == state.theta0

def test_archive_corruption_is_detected():
    rng = np.random.default_rng(10)
    arch = PolicyArch(3, [])
    data = dump_archive(MetaState(random_policy(arch, rng), entries(arch, 1, rng)))

    flipped = bytearray(data)
    flipped[len(data)//2] ^= 0x01
    with pytest.raises(ArchiveChecksumError):
        parse_archive(bytes(flipped))
    with pytest.raises(ArchiveTruncatedError):
        parse_archive(data[:-10])
    with pytest.raises(ArchiveTruncatedError):
        parse_archive(data[:20])
    with pytest.raises(ArchiveVersionError):
        parse_archive(data[:4] + struct.pack("<H", 2) + data[6:])
    with pytest.raises(ArchiveError):
        parse_archive(b"ZARC" + data[4:])

@pytest.fixture
def comps_setup(toy_chan, rew):
    cw, ccw = make_toy_tasks(horizon=6)
    enc = EncoderConfig(k_nn=2)
    theta0 = init_params(PolicyArch(enc.feature_dim, [4]), np.random.default_rng(0))
    rl_cfg = RLConfig(episodes=3, eta=0.01)
    meta_cfg = MetaConfig(kappa=0.01, eta=0.01, I_meta=2)
    return (Simulator(cw, toy_chan, rew), Simulator(ccw, toy_chan, rew)), enc, theta0, rl_cfg, meta_cfg

def test_comps_step(comps_setup):
    (sim0, sim1), enc, theta0, rl_cfg, meta_cfg = comps_setup
    state, rewards = CompsStepAction()(MetaState(theta0), sim0, rl_cfg, meta_cfg, enc, np.random.default_rng(5), np.random.default_rng(6))
    assert state.i == 1 and len(rewards) == 3
    assert sim0.calls == 3 * 7

    # first task: RL phase is plain REINFORCE from the same init and stream
    conventional = TrainTaskAction()(theta0, Simulator(sim0.task, sim0.chan, sim0.rew), rl_cfg, enc, np.random.default_rng(5))
    assert rewards.tolist() == conventional.per_episode_rewards.tolist()
    assert state.archive[0].full_set == conventional.full_set

    action = CompsStepAction()
    state, rewards = action(state, sim1, rl_cfg, meta_cfg, enc, np.random.default_rng(7), np.random.default_rng(8), {0: sim0})
    assert state.i == 2 and [entry.task_index for entry in state.archive] == [0, 1]
    assert action.result.per_episode_rewards.tolist() == rewards.tolist()
    assert sim0.calls == 3 * 7 and sim1.calls == 3 * 7

def test_run_comps_step_from_task(comps_setup, toy_chan, rew):
    (sim0, _), enc, theta0, rl_cfg, meta_cfg = comps_setup
    state, rewards = run_comps_step(MetaState(theta0), sim0.task, rl_cfg, meta_cfg, toy_chan, rew,
                                    np.random.default_rng(5), enc, np.random.default_rng(6))
    same, same_rewards = CompsStepAction()(MetaState(theta0), sim0, rl_cfg, meta_cfg, enc, np.random.default_rng(5), np.random.default_rng(6))
    assert rewards.tolist() == same_rewards.tolist()
    assert state.theta0 == same.theta0 and state.archive == same.archive

def test_comps_step_rejects_resimulation(comps_setup, monkeypatch):
    (sim0, sim1), enc, theta0, rl_cfg, meta_cfg = comps_setup
    state, _ = CompsStepAction()(MetaState(theta0), sim0, rl_cfg, meta_cfg, enc, np.random.default_rng(5))

    from uabs.modules.comps import actions
    def peeking_meta_update(state, cfg, rng):
        sim0.reset(rng)
        return state
    monkeypatch.setattr(actions, "meta_update", peeking_meta_update)

    with pytest.raises(ContinualConstraintError):
        CompsStepAction()(state, sim1, rl_cfg, meta_cfg, enc, np.random.default_rng(7), None, {0: sim0})
