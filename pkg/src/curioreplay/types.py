"""Shared domain types: transitions, task schedules, metric rows."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(slots=True)
class Transition:
    """One environment step.

    ``true_task_label`` is ground truth carried for evaluation only: buffer
    policies must never read it when deciding what to keep; only the
    composition metric may.  ``curiosity_at_insert`` is stamped by the run
    loop right before the transition is offered to a buffer (0 when the
    curiosity pipeline is off).
    """

    state: np.ndarray
    action: np.ndarray
    reward: float
    next_state: np.ndarray
    done: bool
    true_task_label: int
    timestep: int
    curiosity_at_insert: float = 0.0


@dataclass
class TaskSchedule:
    """How the environment parameter evolves over global steps.

    ``piecewise`` holds the value of the latest change step <= t.
    ``sinusoidal`` follows  p(t) = param_min + sin(t * angular_rate) *
    (param_max - param_min), clamped into [param_min, param_max] unless
    ``clamp`` is disabled (the raw sine dips below param_min).
    """

    kind: str = "piecewise"
    change_steps: list[int] = field(default_factory=lambda: [0, 20000, 120000])
    values: list[float] = field(default_factory=lambda: [1.0, 1.4, 1.8])
    param_min: float = 1.0
    param_max: float = 1.8
    angular_rate: float = 1e-4
    clamp: bool = True

    def validate(self) -> None:
        if self.kind not in ("piecewise", "sinusoidal"):
            raise ValueError(f"schedule.kind must be piecewise or sinusoidal, got {self.kind!r}")
        if self.kind == "piecewise":
            if not self.change_steps or self.change_steps[0] != 0:
                raise ValueError("schedule.change_steps must start at 0")
            if any(b <= a for a, b in zip(self.change_steps, self.change_steps[1:])):
                raise ValueError("schedule.change_steps must be strictly increasing")
            if len(self.values) != len(self.change_steps):
                raise ValueError("schedule.values must match schedule.change_steps in length")
        else:
            if not self.param_min < self.param_max:
                raise ValueError("schedule.param_min must be < schedule.param_max")


@dataclass(slots=True)
class CuriosityRow:
    t: int
    c: float
    mu: float
    snr: float
    candidate: bool
    boundary: bool


@dataclass(slots=True)
class CompositionRow:
    snapshot_t: int
    buffer_kind: str
    task_label: int
    count: int
    ratio: float


@dataclass(slots=True)
class RewardRow:
    eval_t: int
    task_label: int
    mean_return: float
    std_return: float
    episodes: int
