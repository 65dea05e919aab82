"""Entropy-regularized off-policy actor-critic on hand-written networks.

The policy outputs mean and log-std of a Gaussian whose samples are
squashed through tanh and scaled to the torque bound, so actions always
respect the environment's limits.  Twin critics with Polyak-averaged
target copies provide the TD target

    y = r + gamma * (1 - done) * (min_i Q_i'(s', a') - alpha * log pi(a'|s'))

with a' freshly sampled from the current policy.  The temperature alpha
follows the usual dual update toward a fixed entropy target.  All
gradients are exact derivatives of the implemented formulas (log-std
clipping and the squash-correction guard included), which keeps them
checkable by finite differences.
"""

from __future__ import annotations

import math

import numpy as np

from .env import Pendulum, TORQUE_BOUND, wrap_angle
from .nets import Adam, Mlp, ScalarAdam
from .rng import Rng
from .types import Transition

LOG_STD_MIN = -20.0
LOG_STD_MAX = 2.0
SQUASH_GUARD = 1e-6
LOG_2PI = math.log(2.0 * math.pi)


def transitions_to_arrays(batch: list[Transition]):
    states = np.stack([tr.state for tr in batch]).astype(float)
    actions = np.stack([tr.action for tr in batch]).astype(float)
    rewards = np.array([tr.reward for tr in batch], dtype=float)
    next_states = np.stack([tr.next_state for tr in batch]).astype(float)
    dones = np.array([float(tr.done) for tr in batch])
    return states, actions, rewards, next_states, dones


class ActorCritic:
    def __init__(self, obs_dim: int, action_dim: int, rng: Rng,
                 hidden: list[int] | None = None, learning_rate: float = 3e-4,
                 discount: float = 0.99, tau: float = 0.005,
                 action_bound: float = TORQUE_BOUND,
                 entropy_target: float | None = None):
        hidden = list(hidden) if hidden else [256, 256]
        init = rng.split("init")
        self.policy = Mlp.init([obs_dim, *hidden, 2 * action_dim], init.split("policy"))
        self.q1 = Mlp.init([obs_dim + action_dim, *hidden, 1], init.split("q1"))
        self.q2 = Mlp.init([obs_dim + action_dim, *hidden, 1], init.split("q2"))
        self.q1_target = self.q1.copy()
        self.q2_target = self.q2.copy()
        self.policy_opt = Adam(self.policy, lr=learning_rate)
        self.q1_opt = Adam(self.q1, lr=learning_rate)
        self.q2_opt = Adam(self.q2, lr=learning_rate)
        self.log_alpha = 0.0
        self.alpha_opt = ScalarAdam(lr=learning_rate)
        self.gamma = discount
        self.tau = tau
        self.obs_dim = obs_dim
        self.action_dim = action_dim
        self.action_bound = action_bound
        self.entropy_target = -float(action_dim) if entropy_target is None else float(entropy_target)
        self.updates = 0
        self._noise_rng = rng.split("noise")

    @property
    def alpha(self) -> float:
        return math.exp(self.log_alpha)

    def _policy_params(self, obs: np.ndarray):
        """Returns (mean, clipped log-std, clip pass-through mask, cache)."""
        out, cache = self.policy.forward_cached(obs)
        mean = out[..., : self.action_dim]
        raw = out[..., self.action_dim:]
        log_std = np.clip(raw, LOG_STD_MIN, LOG_STD_MAX)
        inside = (raw > LOG_STD_MIN) & (raw < LOG_STD_MAX)
        return mean, log_std, inside, cache

    def _log_prob_terms(self, log_std: np.ndarray, eps: np.ndarray, u: np.ndarray):
        """log pi(a|s) per sample for a = bound * tanh(u), u = mean + std * eps."""
        tanh_u = np.tanh(u)
        squash = self.action_bound * (1.0 - tanh_u**2) + SQUASH_GUARD
        per_dim = -0.5 * eps**2 - log_std - 0.5 * LOG_2PI - np.log(squash)
        return per_dim.sum(axis=-1), tanh_u, squash

    def select_action(self, obs: np.ndarray, rng: Rng | None = None,
                      deterministic: bool = False) -> np.ndarray:
        obs = np.asarray(obs, float)
        if obs.shape != (self.obs_dim,):
            raise ValueError(f"expected observation of shape ({self.obs_dim},), got {obs.shape}")
        mean, log_std, _, _ = self._policy_params(obs)
        if deterministic:
            return self.action_bound * np.tanh(mean)
        eps = rng.normal(size=self.action_dim)
        return self.action_bound * np.tanh(mean + np.exp(log_std) * eps)

    def td_targets(self, rewards, next_states, dones, rng: Rng) -> np.ndarray:
        """TD targets under the documented convention (entropy inside gamma)."""
        mean2, log_std2, _, _ = self._policy_params(next_states)
        eps2 = rng.normal(size=mean2.shape)
        u2 = mean2 + np.exp(log_std2) * eps2
        log_p2, tanh_u2, _ = self._log_prob_terms(log_std2, eps2, u2)
        a2 = self.action_bound * tanh_u2
        sa2 = np.concatenate([next_states, a2], axis=1)
        q_min = np.minimum(self.q1_target.forward(sa2)[:, 0], self.q2_target.forward(sa2)[:, 0])
        return rewards + self.gamma * (1.0 - dones) * (q_min - self.alpha * log_p2)

    def _actor_loss_and_grads(self, states: np.ndarray, eps: np.ndarray):
        """Reparameterized actor objective mean(alpha * log pi - min Q).

        ``eps`` is the fixed reparameterization noise; returns the loss,
        the exact policy-parameter gradients and the per-sample log pi.
        """
        n = len(states)
        alpha = self.alpha
        mean, log_std, inside, cache = self._policy_params(states)
        std = np.exp(log_std)
        u = mean + std * eps
        log_p, tanh_u, squash = self._log_prob_terms(log_std, eps, u)
        a_new = self.action_bound * tanh_u
        sa_new = np.concatenate([states, a_new], axis=1)
        q1_new, q1_cache = self.q1.forward_cached(sa_new)
        q2_new, q2_cache = self.q2.forward_cached(sa_new)
        q1_new, q2_new = q1_new[:, 0], q2_new[:, 0]
        use_q1 = q1_new <= q2_new
        q_min = np.where(use_q1, q1_new, q2_new)
        actor_loss = float(np.mean(alpha * log_p - q_min))

        # d actor_loss / d a, routed through whichever critic was the min.
        gout1 = (-(1.0 / n) * use_q1)[:, None]
        gout2 = (-(1.0 / n) * ~use_q1)[:, None]
        _, gin1 = self.q1.backward(q1_cache, gout1)
        _, gin2 = self.q2.backward(q2_cache, gout2)
        grad_a = gin1[:, self.obs_dim:] + gin2[:, self.obs_dim:]

        dtanh = 1.0 - tanh_u**2
        # d log pi / d u from the squash correction term.
        dlogp_du = 2.0 * self.action_bound * tanh_u * dtanh / squash
        grad_u = grad_a * self.action_bound * dtanh + (alpha / n) * dlogp_du
        grad_mean = grad_u
        grad_log_std = (grad_u * std * eps - alpha / n) * inside
        policy_grads, _ = self.policy.backward(
            cache, np.concatenate([grad_mean, grad_log_std], axis=1))
        return actor_loss, policy_grads, log_p

    def update(self, batch: list[Transition]) -> dict[str, float]:
        if not batch:
            raise ValueError("batch must be non-empty")
        states, actions, rewards, next_states, dones = transitions_to_arrays(batch)
        n = len(batch)

        targets = self.td_targets(rewards, next_states, dones, self._noise_rng)

        sa = np.concatenate([states, actions], axis=1)
        q1_loss, q1_grads = self.q1.loss_mse(sa, targets[:, None])
        q2_loss, q2_grads = self.q2.loss_mse(sa, targets[:, None])
        self.q1_opt.step(self.q1, q1_grads)
        self.q2_opt.step(self.q2, q2_grads)

        eps = self._noise_rng.normal(size=(n, self.action_dim))
        actor_loss, policy_grads, log_p = self._actor_loss_and_grads(states, eps)
        self.policy_opt.step(self.policy, policy_grads)

        # Temperature toward the entropy target (log-space dual ascent).
        grad_log_alpha = -float(np.mean(log_p + self.entropy_target))
        self.log_alpha = self.alpha_opt.step(self.log_alpha, grad_log_alpha)

        self._smooth_targets()
        self.updates += 1

        critic_loss = 0.5 * (q1_loss + q2_loss)
        if not (math.isfinite(critic_loss) and math.isfinite(actor_loss) and math.isfinite(self.log_alpha)):
            raise RuntimeError(
                f"non-finite loss at update {self.updates}: critic={critic_loss}, "
                f"actor={actor_loss}, log_alpha={self.log_alpha}")
        return {"critic_loss": critic_loss, "actor_loss": actor_loss, "alpha": self.alpha}

    def _smooth_targets(self) -> None:
        tau = self.tau
        for online, target in ((self.q1, self.q1_target), (self.q2, self.q2_target)):
            for w, wt in zip(online.weights, target.weights):
                wt *= 1.0 - tau
                wt += tau * w
            for b, bt in zip(online.biases, target.biases):
                bt *= 1.0 - tau
                bt += tau * b


class ScriptedPolicy:
    """Deterministic-by-construction policies for buffer-only experiments."""

    KINDS = ("random", "zero", "swingup")

    def __init__(self, kind: str, action_bound: float = TORQUE_BOUND):
        if kind not in self.KINDS:
            raise ValueError(f"kind must be one of {self.KINDS}, got {kind!r}")
        self.kind = kind
        self.action_bound = action_bound

    def select_action(self, obs: np.ndarray, rng: Rng | None = None,
                      deterministic: bool = False) -> np.ndarray:
        if self.kind == "zero":
            return np.zeros(1)
        if self.kind == "random":
            return rng.uniform(-self.action_bound, self.action_bound, size=1)
        cos_th, sin_th, theta_dot = float(obs[0]), float(obs[1]), float(obs[2])
        theta = math.atan2(sin_th, cos_th)
        if cos_th > 0.95 and abs(theta_dot) < 2.0:
            u = -8.0 * wrap_angle(theta) - 2.0 * theta_dot
        else:
            # Pump energy toward the upright level of a nominal unit rod.
            energy = 0.5 * (1.0 / 3.0) * theta_dot**2 + 5.0 * (1.0 + cos_th)
            u = 0.6 * (10.0 - energy) * (1.0 if theta_dot >= 0 else -1.0)
        return np.array([min(max(u, -self.action_bound), self.action_bound)])


def evaluate_policy(policy, length: float, episodes: int, rng: Rng,
                    max_steps_per_episode: int = 200) -> tuple[float, float]:
    """Deterministic-mode rollouts on a fresh environment at a fixed length.

    Returns mean and population standard deviation of the undiscounted
    episode returns.
    """
    if episodes < 1:
        raise ValueError("episodes must be >= 1")
    env = Pendulum(max_steps_per_episode)
    returns = []
    for _ in range(episodes):
        obs = env.reset(rng)
        total = 0.0
        truncated = False
        while not truncated:
            action = policy.select_action(obs, rng, deterministic=True)
            obs, reward, truncated = env.step(float(action[0]), length)
            total += reward
        returns.append(total)
    return float(np.mean(returns)), float(np.std(returns))
