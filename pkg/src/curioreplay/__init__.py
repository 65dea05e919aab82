"""Curiosity-driven experience replay for continual reinforcement learning.

A numpy toolkit around three pieces: replay buffer policies that decide
what to remember when tasks drift (FIFO, reservoir, HRB, MTR, HCB, HRBTS),
a streaming detector that turns a curiosity signal into hypothesized task
boundaries, and a nonstationary pendulum testbed with an experiment
harness that measures buffer composition and per-task reward.
"""

from .buffers import (FifoBuffer, HcbBuffer, HrbBuffer, HrbtsBuffer, MtrBuffer,
                      ReplayBuffer, ReservoirBuffer, make_buffer)
from .config import (ConfigError, ExperimentConfig, config_dump, config_load,
                     config_load_file)
from .curiosity import CuriosityEstimator
from .detector import Detector, DetectorStep, detect_offline
from .env import (EnvParams, Pendulum, PendulumState, mechanical_energy,
                  pendulum_step, schedule_param, schedule_true_label, wrap_angle)
from .harness import RunSummary, run_experiment, run_matrix
from .nets import Adam, Mlp
from .rng import Rng, rng_create
from .sac import ActorCritic, ScriptedPolicy, evaluate_policy
from .types import (CompositionRow, CuriosityRow, RewardRow, TaskSchedule,
                    Transition)

__version__ = "0.1.0"

__all__ = [
    "ActorCritic", "Adam", "CompositionRow", "ConfigError", "CuriosityEstimator",
    "CuriosityRow", "Detector", "DetectorStep", "EnvParams", "ExperimentConfig",
    "FifoBuffer", "HcbBuffer", "HrbBuffer", "HrbtsBuffer", "Mlp", "MtrBuffer",
    "Pendulum", "PendulumState", "ReplayBuffer", "ReservoirBuffer", "RewardRow",
    "Rng", "RunSummary", "ScriptedPolicy", "TaskSchedule", "Transition",
    "config_dump", "config_load", "config_load_file", "detect_offline",
    "evaluate_policy", "make_buffer", "mechanical_energy", "pendulum_step",
    "rng_create", "run_experiment", "run_matrix", "schedule_param",
    "schedule_true_label", "wrap_angle",
]
