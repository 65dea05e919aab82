"""Online curiosity as weighted prediction error of learned models.

Each ensemble member bundles up to three predictor heads: forward
(state, action) -> next state, inverse (state, next state) -> action and
reward (state, action) -> reward.  The curiosity of a transition is the
ensemble mean of the weighted per-head mean squared errors, measured
*before* the transition is used for training, so surprise never reflects
the transition itself.

Heads whose weight is zero are never built, evaluated or trained.  The
predictors learn online from their own small FIFO of recent transitions,
one optimizer step per observed transition, so they track the current
task and a task change registers as an error spike.
"""

from __future__ import annotations

from collections import deque

import numpy as np

from .nets import Adam, Mlp
from .rng import Rng
from .types import Transition


class _Head:
    __slots__ = ("net", "optimizer")

    def __init__(self, sizes: list[int], rng: Rng, lr: float):
        self.net = Mlp.init(sizes, rng)
        self.optimizer = Adam(self.net, lr=lr)

    def train(self, x: np.ndarray, target: np.ndarray) -> float:
        loss, grads = self.net.loss_mse(x, target)
        self.optimizer.step(self.net, grads)
        return loss


class CuriosityEstimator:
    def __init__(self, state_dim: int, action_dim: int, rng: Rng,
                 weights=(0.0, 1.0, 0.0), ensemble_size: int = 3,
                 hidden: list[int] | None = None, fifo_capacity: int = 2000,
                 learning_rate: float = 3e-4, batch_size: int = 64,
                 state_scale=None, action_scale=None, reward_scale: float = 1.0):
        w_fwd, w_inv, w_rwd = (float(w) for w in weights)
        if min(w_fwd, w_inv, w_rwd) < 0 or max(w_fwd, w_inv, w_rwd) == 0:
            raise ValueError("weights must be non-negative with at least one positive")
        if ensemble_size < 1:
            raise ValueError("ensemble_size must be >= 1")
        hidden = list(hidden) if hidden else [32, 32]
        self.weights = (w_fwd, w_inv, w_rwd)
        self.state_scale = np.ones(state_dim) if state_scale is None else np.asarray(state_scale, float)
        self.action_scale = np.ones(action_dim) if action_scale is None else np.asarray(action_scale, float)
        self.reward_scale = float(reward_scale)
        self.fifo: deque[Transition] = deque(maxlen=fifo_capacity)
        self.batch_size = batch_size
        self._batch_rng = rng.split("batch")

        init_rng = rng.split("init")
        self.bundles = []
        for m in range(ensemble_size):
            member_rng = init_rng.split(f"member{m}")
            self.bundles.append({
                "fwd": _Head([state_dim + action_dim, *hidden, state_dim],
                             member_rng.split("fwd"), learning_rate) if w_fwd > 0 else None,
                "inv": _Head([2 * state_dim, *hidden, action_dim],
                             member_rng.split("inv"), learning_rate) if w_inv > 0 else None,
                "rwd": _Head([state_dim + action_dim, *hidden, 1],
                             member_rng.split("rwd"), learning_rate) if w_rwd > 0 else None,
            })

    def _normalize(self, tr: Transition):
        s = np.asarray(tr.state, float) / self.state_scale
        a = np.asarray(tr.action, float) / self.action_scale
        s2 = np.asarray(tr.next_state, float) / self.state_scale
        r = tr.reward / self.reward_scale
        return s, a, s2, r

    def evaluate(self, tr: Transition) -> float:
        """Curiosity of one transition; no training happens."""
        s, a, s2, r = self._normalize(tr)
        w_fwd, w_inv, w_rwd = self.weights
        sa = np.concatenate([s, a])
        ss = np.concatenate([s, s2])
        total = 0.0
        for bundle in self.bundles:
            e = 0.0
            if bundle["fwd"] is not None:
                diff = bundle["fwd"].net.forward(sa) - s2
                e += w_fwd * float(np.mean(diff**2))
            if bundle["inv"] is not None:
                diff = bundle["inv"].net.forward(ss) - a
                e += w_inv * float(np.mean(diff**2))
            if bundle["rwd"] is not None:
                diff = float(bundle["rwd"].net.forward(sa)[0]) - r
                e += w_rwd * diff * diff
            total += e
        return total / len(self.bundles)

    def train_step(self) -> float | None:
        """One optimizer step per active head per member on a uniform batch.

        Returns the mean training loss, or None when the FIFO holds fewer
        than ``batch_size`` transitions.
        """
        if len(self.fifo) < self.batch_size:
            return None
        picks = self._batch_rng.integers(0, len(self.fifo), size=self.batch_size)
        batch = [self.fifo[int(i)] for i in picks]
        s = np.stack([tr.state for tr in batch]) / self.state_scale
        a = np.stack([tr.action for tr in batch]) / self.action_scale
        s2 = np.stack([tr.next_state for tr in batch]) / self.state_scale
        r = np.array([[tr.reward] for tr in batch]) / self.reward_scale
        sa = np.concatenate([s, a], axis=1)
        ss = np.concatenate([s, s2], axis=1)

        losses = []
        for bundle in self.bundles:
            if bundle["fwd"] is not None:
                losses.append(bundle["fwd"].train(sa, s2))
            if bundle["inv"] is not None:
                losses.append(bundle["inv"].train(ss, a))
            if bundle["rwd"] is not None:
                losses.append(bundle["rwd"].train(sa, r))
        return float(np.mean(losses))

    def observe(self, tr: Transition) -> float:
        """Evaluate-then-learn: score the transition, then train on the FIFO."""
        c = self.evaluate(tr)
        self.fifo.append(tr)
        self.train_step()
        return c
