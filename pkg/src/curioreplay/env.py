"""Classic torque-limited pendulum with a live parameter schedule.

The pole length is the task knob: schedules change it between or during
episodes while mass, gravity, timestep and torque bound stay fixed.
Angle 0 is upright; velocity is clipped to +-8; integration is
semi-implicit Euler, which keeps undriven mechanical energy bounded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .rng import Rng
from .types import TaskSchedule

GRAVITY = 10.0
MASS = 1.0
TORQUE_BOUND = 2.0
DT = 0.05
MAX_SPEED = 8.0

OBS_SCALE = np.array([1.0, 1.0, MAX_SPEED])
# Tightest static bound on one-step cost: pi^2 + 0.1 * 8^2 + 0.001 * 2^2.
REWARD_BOUND = math.pi**2 + 0.1 * MAX_SPEED**2 + 0.001 * TORQUE_BOUND**2


@dataclass(slots=True)
class EnvParams:
    length: float = 1.0

    def __post_init__(self):
        if self.length <= 0:
            raise ValueError("length must be positive")


@dataclass(slots=True)
class PendulumState:
    theta: float
    theta_dot: float
    step_in_episode: int


def wrap_angle(theta: float) -> float:
    """Map onto (-pi, pi]."""
    return math.pi - (math.pi - theta) % (2.0 * math.pi)


def observation(state: PendulumState) -> np.ndarray:
    return np.array([math.cos(state.theta), math.sin(state.theta), state.theta_dot])


def pendulum_step(state: PendulumState, torque: float, params: EnvParams,
                  dt: float = DT):
    """One physics step; returns (next_state, reward, observation of next).

    Reward is charged on the pre-step state and the applied torque, so the
    upright rest state with zero torque scores exactly 0.
    """
    if not (math.isfinite(state.theta) and math.isfinite(state.theta_dot) and math.isfinite(torque)):
        raise ValueError("non-finite state or action")
    u = min(max(torque, -TORQUE_BOUND), TORQUE_BOUND)
    th, thdot = state.theta, state.theta_dot

    angle = wrap_angle(th)
    reward = -(angle * angle + 0.1 * thdot * thdot + 0.001 * u * u)

    length = params.length
    accel = (3.0 * GRAVITY / (2.0 * length)) * math.sin(th) + (3.0 / (MASS * length * length)) * u
    new_thdot = thdot + accel * dt
    new_thdot = min(max(new_thdot, -MAX_SPEED), MAX_SPEED)
    new_th = th + new_thdot * dt

    next_state = PendulumState(new_th, new_thdot, state.step_in_episode + 1)
    return next_state, reward, observation(next_state)


def mechanical_energy(state: PendulumState, params: EnvParams) -> float:
    """Kinetic plus potential energy of the undriven rod (zero at the bottom)."""
    inertia = MASS * params.length**2 / 3.0
    height = (params.length / 2.0) * (1.0 + math.cos(state.theta))
    return 0.5 * inertia * state.theta_dot**2 + MASS * GRAVITY * height


class Pendulum:
    """Stateful wrapper handling episodes; physics stays in pendulum_step."""

    def __init__(self, max_steps_per_episode: int = 200):
        self.max_steps = max_steps_per_episode
        self.state: PendulumState | None = None

    def reset(self, rng: Rng) -> np.ndarray:
        theta = float(rng.uniform(-math.pi, math.pi))
        theta_dot = float(rng.uniform(-1.0, 1.0))
        self.state = PendulumState(theta, theta_dot, 0)
        return observation(self.state)

    def step(self, torque: float, length: float):
        """Returns (next observation, reward, truncated)."""
        if self.state is None:
            raise RuntimeError("call reset() before step()")
        self.state, reward, obs = pendulum_step(self.state, torque, EnvParams(length))
        truncated = self.state.step_in_episode >= self.max_steps
        return obs, reward, truncated


def schedule_param(schedule: TaskSchedule, t: int) -> float:
    """Environment parameter at global step t."""
    if t < 0:
        raise ValueError("t must be >= 0")
    if schedule.kind == "piecewise":
        i = int(np.searchsorted(schedule.change_steps, t, side="right")) - 1
        return float(schedule.values[i])
    lo, hi = schedule.param_min, schedule.param_max
    value = lo + math.sin(t * schedule.angular_rate) * (hi - lo)
    if schedule.clamp:
        value = min(max(value, lo), hi)
    return value


def schedule_true_label(schedule: TaskSchedule, t: int,
                        task_values: list[float] | None = None) -> int:
    """Ground-truth task label at step t, for evaluation bookkeeping only.

    Labels identify parameter values, not visits: a revisited value maps
    back to its original label.  When ``task_values`` is given the label is
    the index of the nearest value in that list (shared with reward
    evaluation); otherwise piecewise schedules label distinct values in
    order of first appearance.
    """
    value = schedule_param(schedule, t)
    if task_values is not None:
        diffs = [abs(value - v) for v in task_values]
        return diffs.index(min(diffs))
    if schedule.kind != "piecewise":
        raise ValueError("sinusoidal schedules need task_values to define labels")
    seen: list[float] = []
    for v in schedule.values:
        if v not in seen:
            seen.append(v)
    return seen.index(value)
