"""Experiment configuration: TOML sections mapped onto typed dataclasses.

The schema (section and key names, defaults, constraints) is documented in
``docs/config.md``.  Unknown sections or keys are rejected so typos fail
loudly instead of silently running with defaults.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from .types import TaskSchedule

BUFFER_KINDS = ("fifo", "reservoir", "hrb", "mtr", "hcb", "hrbts")
POLICY_KINDS = ("sac", "random", "zero", "swingup")

OUT_DIR_ENV_VAR = "CURIOREPLAY_OUT"


class ConfigError(ValueError):
    """Raised for unparseable documents or invariant violations."""


@dataclass
class EnvConfig:
    kind: str = "pendulum"
    max_steps_per_episode: int = 200


@dataclass
class BufferConfig:
    kind: str = "fifo"
    size: int = 20000
    fifo_fraction: float = 0.05
    mtr_sub_buffers: int = 5
    mtr_promotion_prob: float = 0.5


@dataclass
class DetectorConfig:
    enabled: bool = True
    window: int = 600  # n: sliding window length
    idle_threshold: int = 8000  # k: idle steps required before a boundary may fire
    mean_factor: float = 1.5  # m_f
    delta: float = 1e-6  # division-by-zero guard in the snr denominator


@dataclass
class CuriosityConfig:
    enabled: bool = True
    ensemble_size: int = 3
    weights: list[float] = field(default_factory=lambda: [0.0, 1.0, 0.0])  # fwd, inv, rwd
    hidden: list[int] = field(default_factory=lambda: [32, 32])
    learning_rate: float = 0.0003
    batch_size: int = 64
    fifo_capacity: int = 0  # 0 -> 10% of buffer.size


@dataclass
class LearnerConfig:
    policy: str = "sac"
    hidden: list[int] = field(default_factory=lambda: [256, 256])
    learning_rate: float = 0.0003
    batch_size: int = 512
    discount: float = 0.99
    tau: float = 0.005
    entropy_target: float | None = None  # None -> -action_dim
    warmup_steps: int = 1000
    update_interval: int = 1


@dataclass
class HarnessConfig:
    total_steps: int = 150000
    eval_interval: int = 1000
    eval_episodes: int = 10
    eval_tasks: list[float] = field(default_factory=lambda: [1.0, 1.4, 1.8])
    snapshot_steps: list[int] = field(default_factory=lambda: [150000])
    seed: int = 0
    out_dir: str = "runs"


@dataclass
class ExperimentConfig:
    env: EnvConfig = field(default_factory=EnvConfig)
    schedule: TaskSchedule = field(default_factory=TaskSchedule)
    buffer: BufferConfig = field(default_factory=BufferConfig)
    detector: DetectorConfig = field(default_factory=DetectorConfig)
    curiosity: CuriosityConfig = field(default_factory=CuriosityConfig)
    learner: LearnerConfig = field(default_factory=LearnerConfig)
    harness: HarnessConfig = field(default_factory=HarnessConfig)

    def curiosity_fifo_capacity(self) -> int:
        if self.curiosity.fifo_capacity > 0:
            return self.curiosity.fifo_capacity
        return max(1, self.buffer.size // 10)

    def validate(self) -> None:
        env, buf, det, cur, lrn, har = (
            self.env, self.buffer, self.detector, self.curiosity, self.learner, self.harness)
        if env.kind != "pendulum":
            raise ConfigError(f"env.kind: only 'pendulum' is supported, got {env.kind!r}")
        if env.max_steps_per_episode <= 0:
            raise ConfigError("env.max_steps_per_episode must be positive")
        try:
            self.schedule.validate()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if buf.kind not in BUFFER_KINDS:
            raise ConfigError(f"buffer.kind must be one of {BUFFER_KINDS}, got {buf.kind!r}")
        if buf.size <= 0:
            raise ConfigError("buffer.size must be positive")
        if not 0.0 <= buf.fifo_fraction < 1.0:
            raise ConfigError(
                f"buffer.fifo_fraction must lie in [0, 1), got {buf.fifo_fraction}")
        if buf.mtr_sub_buffers < 1:
            raise ConfigError("buffer.mtr_sub_buffers must be >= 1")
        if not 0.0 <= buf.mtr_promotion_prob <= 1.0:
            raise ConfigError("buffer.mtr_promotion_prob must lie in [0, 1]")
        if det.window < 2:
            raise ConfigError("detector.window must be >= 2")
        if det.idle_threshold < 0:
            raise ConfigError("detector.idle_threshold must be >= 0")
        if det.mean_factor <= 0:
            raise ConfigError("detector.mean_factor must be > 0")
        if det.delta <= 0:
            raise ConfigError("detector.delta must be > 0")
        if cur.ensemble_size < 1:
            raise ConfigError("curiosity.ensemble_size must be >= 1")
        if len(cur.weights) != 3 or any(w < 0 for w in cur.weights):
            raise ConfigError("curiosity.weights must be three non-negative reals")
        if cur.enabled and not any(w > 0 for w in cur.weights):
            raise ConfigError("curiosity.weights needs at least one positive entry")
        if cur.batch_size < 1:
            raise ConfigError("curiosity.batch_size must be >= 1")
        if lrn.policy not in POLICY_KINDS:
            raise ConfigError(f"learner.policy must be one of {POLICY_KINDS}, got {lrn.policy!r}")
        if lrn.batch_size < 1 or lrn.batch_size > buf.size:
            raise ConfigError(
                f"learner.batch_size must lie in [1, buffer.size={buf.size}], got {lrn.batch_size}")
        if not 0.0 <= lrn.discount <= 1.0:
            raise ConfigError("learner.discount must lie in [0, 1]")
        if not 0.0 < lrn.tau <= 1.0:
            raise ConfigError("learner.tau must lie in (0, 1]")
        if lrn.update_interval < 1:
            raise ConfigError("learner.update_interval must be >= 1")
        if har.total_steps <= 0:
            raise ConfigError("harness.total_steps must be positive")
        if har.eval_interval <= 0:
            raise ConfigError("harness.eval_interval must be positive")
        if har.eval_episodes < 1:
            raise ConfigError("harness.eval_episodes must be >= 1")
        if not har.eval_tasks:
            raise ConfigError("harness.eval_tasks must not be empty")
        bad = [s for s in har.snapshot_steps if not 0 <= s <= har.total_steps]
        if bad:
            raise ConfigError(
                f"harness.snapshot_steps must lie in [0, total_steps={har.total_steps}], got {bad}")


_SECTIONS = {
    "env": EnvConfig,
    "schedule": TaskSchedule,
    "buffer": BufferConfig,
    "detector": DetectorConfig,
    "curiosity": CuriosityConfig,
    "learner": LearnerConfig,
    "harness": HarnessConfig,
}

# Keys whose TOML integers should be accepted for float fields.
_FLOAT_FIELDS = {"values", "param_min", "param_max", "angular_rate", "fifo_fraction",
                 "mtr_promotion_prob", "mean_factor", "delta", "weights", "learning_rate",
                 "discount", "tau", "entropy_target", "eval_tasks"}


def _coerce(section: str, key: str, value, target_type):
    if key in _FLOAT_FIELDS:
        if isinstance(value, list):
            return [float(v) for v in value]
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return float(value)
    return value


def _build_section(name: str, cls, data: dict):
    known = {f.name: f for f in fields(cls)}
    for key in data:
        if key not in known:
            raise ConfigError(f"[{name}] has no key {key!r} (known: {sorted(known)})")
    kwargs = {key: _coerce(name, key, value, known[key].type) for key, value in data.items()}
    return cls(**kwargs)


def config_load(text: str) -> ExperimentConfig:
    """Parse a configuration document and validate every invariant."""
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config parse error: {exc}") from exc
    for section in raw:
        if section not in _SECTIONS:
            raise ConfigError(f"unknown section [{section}] (known: {sorted(_SECTIONS)})")
        if not isinstance(raw[section], dict):
            raise ConfigError(f"[{section}] must be a table")
    cfg = ExperimentConfig(**{
        name: _build_section(name, cls, raw.get(name, {}))
        for name, cls in _SECTIONS.items()
    })
    cfg.validate()
    return cfg


def config_load_file(path: str) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return config_load(fh.read())


def _toml_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(value, list):
        return "[" + ", ".join(_toml_value(v) for v in value) + "]"
    raise TypeError(f"cannot serialize {value!r}")


def config_dump(cfg: ExperimentConfig) -> str:
    """Serialize so that ``config_load(config_dump(cfg)) == cfg``."""
    lines: list[str] = []
    for name, cls in _SECTIONS.items():
        section = getattr(cfg, name)
        lines.append(f"[{name}]")
        for f in fields(cls):
            value = getattr(section, f.name)
            if value is None:  # optional key, absent means "use default"
                continue
            lines.append(f"{f.name} = {_toml_value(value)}")
        lines.append("")
    return "\n".join(lines)


def resolve_out_dir(cfg: ExperimentConfig, override: str | None = None) -> str:
    """CLI flag beats the environment variable beats the config value."""
    if override:
        return override
    return os.environ.get(OUT_DIR_ENV_VAR) or cfg.harness.out_dir
