"""Experiment orchestration: the per-step pipeline and its CSV outputs.

Every environment step performs exactly one curiosity observation, one
detector step and one buffer insert, in that order; a boundary event is
delivered to the buffer *before* the same step's insert so the first
transition of a new task lands in the new sub-reservoir.

Outputs per run directory (comma separated, header row, '.' decimals):

    curiosity.csv    t,c,mu,snr,candidate,boundary
    composition.csv  snapshot_t,buffer_kind,task_label,count,ratio
    rewards.csv      eval_t,task_label,mean_return,std_return,episodes
    boundaries.csv   t

composition.csv carries two row groups per snapshot: the whole buffer
under the plain kind name and the long-term part under "<kind>/retained".
"""

from __future__ import annotations

import os
import traceback
from dataclasses import dataclass, replace

import numpy as np

from .buffers import HrbtsBuffer, make_buffer
from .config import ExperimentConfig, resolve_out_dir
from .curiosity import CuriosityEstimator
from .detector import Detector, DetectorStep
from .env import (OBS_SCALE, Pendulum, REWARD_BOUND, TORQUE_BOUND,
                  schedule_param, schedule_true_label)
from .rng import Rng
from .sac import ActorCritic, ScriptedPolicy, evaluate_policy
from .types import CompositionRow, CuriosityRow, RewardRow, Transition

CURIOSITY_HEADER = ["t", "c", "mu", "snr", "candidate", "boundary"]
COMPOSITION_HEADER = ["snapshot_t", "buffer_kind", "task_label", "count", "ratio"]
REWARDS_HEADER = ["eval_t", "task_label", "mean_return", "std_return", "episodes"]
BOUNDARIES_HEADER = ["t"]


def _format(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(int(value)) if isinstance(value, np.integer) else str(value)


def write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_format(v) for v in row) + "\n")


class _StubDetector:
    """Never-firing replacement used by the detector-ablation runs.

    Window statistics are still computed so curiosity.csv stays complete.
    """

    def __init__(self, inner: Detector):
        self.inner = inner

    def step(self, c: float) -> DetectorStep:
        step = self.inner.step(c)
        return DetectorStep(False, False, step.mu, step.snr)


@dataclass
class RunSummary:
    out_dir: str
    seed: int
    boundaries: list[int]
    final_composition: dict[int, tuple[int, float]]
    final_retained_composition: dict[int, tuple[int, float]]
    final_returns: dict[int, tuple[float, float]]


def build_components(cfg: ExperimentConfig, rng: Rng):
    """Construct env, policy, estimator, detector and buffer from a config."""
    env = Pendulum(cfg.env.max_steps_per_episode)
    if cfg.learner.policy == "sac":
        policy = ActorCritic(
            obs_dim=3, action_dim=1, rng=rng.split("learner"),
            hidden=cfg.learner.hidden, learning_rate=cfg.learner.learning_rate,
            discount=cfg.learner.discount, tau=cfg.learner.tau,
            entropy_target=cfg.learner.entropy_target)
    else:
        policy = ScriptedPolicy(cfg.learner.policy)
    estimator = None
    if cfg.curiosity.enabled:
        estimator = CuriosityEstimator(
            state_dim=3, action_dim=1, rng=rng.split("curiosity"),
            weights=tuple(cfg.curiosity.weights), ensemble_size=cfg.curiosity.ensemble_size,
            hidden=cfg.curiosity.hidden, fifo_capacity=cfg.curiosity_fifo_capacity(),
            learning_rate=cfg.curiosity.learning_rate, batch_size=cfg.curiosity.batch_size,
            state_scale=OBS_SCALE, action_scale=np.array([TORQUE_BOUND]),
            reward_scale=REWARD_BOUND)
    detector = Detector(cfg.detector.window, cfg.detector.idle_threshold,
                        cfg.detector.mean_factor, cfg.detector.delta)
    if not cfg.detector.enabled:
        detector = _StubDetector(detector)
    buffer = make_buffer(cfg.buffer.kind, cfg.buffer.size, cfg.buffer.fifo_fraction,
                         cfg.buffer.mtr_sub_buffers, cfg.buffer.mtr_promotion_prob)
    return env, policy, estimator, detector, buffer


def run_experiment(cfg: ExperimentConfig, seed: int | None = None,
                   out_dir: str | None = None, components=None) -> RunSummary:
    """Execute one full run and write the four CSVs.

    ``components`` may inject pre-built (env, policy, estimator, detector,
    buffer); tests use that to instrument the loop.
    """
    cfg.validate()
    seed = cfg.harness.seed if seed is None else int(seed)
    out = resolve_out_dir(cfg, out_dir)
    os.makedirs(out, exist_ok=True)

    rng = Rng(seed)
    if components is None:
        components = build_components(cfg, rng)
    env, policy, estimator, detector, buffer = components
    env_rng = rng.split("env")
    policy_rng = rng.split("policy")
    sample_rng = rng.split("sample")
    buffer_rng = rng.split("buffer")
    eval_rng = rng.split("eval")

    schedule = cfg.schedule
    eval_tasks = cfg.harness.eval_tasks
    total_steps = cfg.harness.total_steps
    snapshot_at = set(cfg.harness.snapshot_steps)
    is_sac = isinstance(policy, ActorCritic)
    warmup = cfg.learner.warmup_steps if is_sac else total_steps + 1
    update_interval = cfg.learner.update_interval
    batch_size = cfg.learner.batch_size

    curiosity_rows: list[CuriosityRow] = []
    composition_rows: list[CompositionRow] = []
    reward_rows: list[RewardRow] = []
    boundaries: list[int] = []

    def snapshot(processed: int) -> None:
        for retained in (False, True):
            kind = buffer.kind + ("/retained" if retained else "")
            for label, (count, ratio) in buffer.composition(retained_only=retained).items():
                composition_rows.append(CompositionRow(processed, kind, label, count, ratio))

    def evaluate(processed: int) -> None:
        for label, task_value in enumerate(eval_tasks):
            mean_ret, std_ret = evaluate_policy(
                policy, task_value, cfg.harness.eval_episodes, eval_rng,
                cfg.env.max_steps_per_episode)
            reward_rows.append(RewardRow(processed, label, mean_ret, std_ret,
                                         cfg.harness.eval_episodes))

    if 0 in snapshot_at:
        snapshot(0)

    obs = env.reset(env_rng)
    for t in range(total_steps):
        length = schedule_param(schedule, t)
        label = schedule_true_label(schedule, t, eval_tasks)

        if is_sac and t < warmup:
            action = policy_rng.uniform(-TORQUE_BOUND, TORQUE_BOUND, size=1)
        else:
            action = policy.select_action(obs, policy_rng)
        next_obs, reward, truncated = env.step(float(action[0]), length)
        tr = Transition(state=obs, action=np.asarray(action, float), reward=reward,
                        next_state=next_obs, done=truncated,
                        true_task_label=label, timestep=t)

        c = estimator.observe(tr) if estimator is not None else 0.0
        tr.curiosity_at_insert = c

        det = detector.step(c)
        curiosity_rows.append(CuriosityRow(t, c, det.mu, det.snr, det.candidate, det.boundary))
        if det.boundary:
            boundaries.append(t)
            if isinstance(buffer, HrbtsBuffer):
                buffer.on_boundary(buffer_rng)

        buffer.insert(tr, buffer_rng)

        if is_sac and t >= warmup and len(buffer) >= batch_size and (t + 1) % update_interval == 0:
            policy.update(buffer.sample(batch_size, sample_rng))

        processed = t + 1
        if processed % cfg.harness.eval_interval == 0 or processed == total_steps:
            evaluate(processed)
        if processed in snapshot_at:
            snapshot(processed)

        obs = env.reset(env_rng) if truncated else next_obs

    write_csv(os.path.join(out, "curiosity.csv"), CURIOSITY_HEADER,
              ((r.t, r.c, r.mu, r.snr, r.candidate, r.boundary) for r in curiosity_rows))
    write_csv(os.path.join(out, "composition.csv"), COMPOSITION_HEADER,
              ((r.snapshot_t, r.buffer_kind, r.task_label, r.count, r.ratio)
               for r in composition_rows))
    write_csv(os.path.join(out, "rewards.csv"), REWARDS_HEADER,
              ((r.eval_t, r.task_label, r.mean_return, r.std_return, r.episodes)
               for r in reward_rows))
    write_csv(os.path.join(out, "boundaries.csv"), BOUNDARIES_HEADER,
              ((t,) for t in boundaries))

    final_returns = {}
    if reward_rows:
        last_eval = reward_rows[-1].eval_t
        final_returns = {r.task_label: (r.mean_return, r.std_return)
                         for r in reward_rows if r.eval_t == last_eval}
    return RunSummary(
        out_dir=out, seed=seed, boundaries=boundaries,
        final_composition=buffer.composition(),
        final_retained_composition=buffer.composition(retained_only=True),
        final_returns=final_returns)


def run_matrix(configs, seeds: list[int], out_dir: str | None = None):
    """Run every (config, seed) pair; aggregate per config across seeds.

    Individual run failures are recorded in failures.csv and the matrix
    continues.  Returns the list of per-config summary lists.
    """
    if isinstance(configs, ExperimentConfig):
        configs = [configs]
    if not configs or not seeds:
        raise ValueError("need at least one config and one seed")
    all_summaries = []
    for ci, cfg in enumerate(configs):
        base = resolve_out_dir(cfg, out_dir)
        cfg_dir = os.path.join(base, f"config{ci}") if len(configs) > 1 else base
        os.makedirs(cfg_dir, exist_ok=True)
        summaries = []
        failures = []
        for seed in seeds:
            run_dir = os.path.join(cfg_dir, f"seed_{seed}")
            try:
                summaries.append(run_experiment(cfg, seed=seed, out_dir=run_dir))
            except Exception as exc:  # noqa: BLE001 - matrix must survive bad runs
                failures.append((seed, f"{type(exc).__name__}: {exc}"))
                traceback.print_exc()
        _write_aggregate(cfg_dir, summaries)
        if failures:
            write_csv(os.path.join(cfg_dir, "failures.csv"), ["seed", "error"], failures)
        all_summaries.append(summaries)
    return all_summaries


def _write_aggregate(cfg_dir: str, summaries: list[RunSummary]) -> None:
    rows = []
    labels = sorted({lbl for s in summaries for lbl in s.final_returns})
    for label in labels:
        values = [s.final_returns[label][0] for s in summaries if label in s.final_returns]
        rows.append(("final_return", label, float(np.mean(values)), float(np.std(values))))
    labels = sorted({lbl for s in summaries for lbl in s.final_composition})
    for label in labels:
        values = [s.final_composition.get(label, (0, 0.0))[1] for s in summaries]
        rows.append(("final_ratio", label, float(np.mean(values)), float(np.std(values))))
    write_csv(os.path.join(cfg_dir, "aggregate.csv"),
              ["metric", "task_label", "mean", "std"], rows)


def scripted_config(cfg: ExperimentConfig, policy: str = "random") -> ExperimentConfig:
    """Copy of ``cfg`` driven by a scripted policy (no learner updates)."""
    return replace(cfg, learner=replace(cfg.learner, policy=policy))
