"""Minimal fully-connected networks with hand-written backpropagation.

Hidden layers use tanh, the output layer is linear.  Gradients are exact
analytic derivatives, which keeps them verifiable against central finite
differences to tight tolerances.  Everything is float64.
"""

from __future__ import annotations

import numpy as np

from .rng import Rng


class Mlp:
    """Weights are (fan_in, fan_out) matrices; biases are vectors."""

    __slots__ = ("layer_sizes", "weights", "biases")

    def __init__(self, layer_sizes: list[int], weights: list[np.ndarray], biases: list[np.ndarray]):
        self.layer_sizes = list(layer_sizes)
        self.weights = weights
        self.biases = biases

    @classmethod
    def init(cls, layer_sizes: list[int], rng: Rng) -> "Mlp":
        """Weights ~ Normal(0, 1/fan_in), biases zero."""
        if len(layer_sizes) < 2:
            raise ValueError("an Mlp needs at least an input and an output layer")
        if any(s <= 0 for s in layer_sizes):
            raise ValueError(f"layer sizes must be positive, got {layer_sizes}")
        weights, biases = [], []
        for fan_in, fan_out in zip(layer_sizes, layer_sizes[1:]):
            scale = 1.0 / np.sqrt(fan_in)
            weights.append(rng.generator.normal(0.0, scale, (fan_in, fan_out)))
            biases.append(np.zeros(fan_out))
        return cls(layer_sizes, weights, biases)

    def copy(self) -> "Mlp":
        return Mlp(self.layer_sizes, [w.copy() for w in self.weights], [b.copy() for b in self.biases])

    @property
    def in_dim(self) -> int:
        return self.layer_sizes[0]

    @property
    def out_dim(self) -> int:
        return self.layer_sizes[-1]

    def _check_input(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.ndim not in (1, 2) or x.shape[-1] != self.in_dim:
            raise ValueError(f"expected input of width {self.in_dim}, got shape {x.shape}")
        return x

    def forward(self, x: np.ndarray) -> np.ndarray:
        """Pure forward pass; accepts a single vector or a (batch, dim) array."""
        y, _ = self.forward_cached(x)
        return y

    def forward_cached(self, x: np.ndarray):
        """Forward pass that also returns the activations needed by backward()."""
        x = self._check_input(x)
        squeeze = x.ndim == 1
        h = x[None, :] if squeeze else x
        activations = [h]
        for w, b in zip(self.weights[:-1], self.biases[:-1]):
            h = np.tanh(h @ w + b)
            activations.append(h)
        y = h @ self.weights[-1] + self.biases[-1]
        out = y[0] if squeeze else y
        return out, activations

    def backward(self, activations: list[np.ndarray], grad_out: np.ndarray):
        """Backpropagate d(loss)/d(output) through the cached pass.

        Returns (grads, grad_input) where grads is a list of (dW, db) pairs
        aligned with the layers and grad_input has the input batch's shape.
        """
        g = np.asarray(grad_out, dtype=np.float64)
        if g.ndim == 1:
            g = g[None, :]
        grads: list[tuple[np.ndarray, np.ndarray]] = [None] * len(self.weights)
        for i in range(len(self.weights) - 1, -1, -1):
            grads[i] = (activations[i].T @ g, g.sum(axis=0))
            if i > 0:
                # tanh'(z) expressed through the stored activation a = tanh(z)
                g = (g @ self.weights[i].T) * (1.0 - activations[i] ** 2)
            else:
                g = g @ self.weights[i].T
        return grads, g

    def loss_mse(self, x: np.ndarray, target: np.ndarray):
        """Mean squared error over every output element (batch included).

        Returns (loss, grads).  Averaging over the batch means a batch of
        identical samples yields the single-sample gradient.
        """
        target = np.asarray(target, dtype=np.float64)
        y, activations = self.forward_cached(x)
        if y.shape != target.shape:
            raise ValueError(f"target shape {target.shape} does not match output {y.shape}")
        diff = y - target
        loss = float(np.mean(diff**2))
        grads, _ = self.backward(activations, 2.0 * diff / diff.size)
        return loss, grads

    def zero_grads(self) -> list[tuple[np.ndarray, np.ndarray]]:
        return [(np.zeros_like(w), np.zeros_like(b)) for w, b in zip(self.weights, self.biases)]


def add_grads(total, grads, scale: float = 1.0):
    """Accumulate one gradient list into another, in place."""
    for (tw, tb), (gw, gb) in zip(total, grads):
        tw += scale * gw
        tb += scale * gb
    return total


class Adam:
    """Adaptive-moment optimizer over an Mlp's parameter list.

    With fresh (all-zero) moment state, a zero gradient leaves parameters
    unchanged; once the moments are non-zero, passing zero gradients still
    moves parameters as the moments decay.
    """

    def __init__(self, net: Mlp, lr: float = 3e-4, beta1: float = 0.9,
                 beta2: float = 0.999, eps: float = 1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.step_count = 0
        self.m = [(np.zeros_like(w), np.zeros_like(b)) for w, b in zip(net.weights, net.biases)]
        self.v = [(np.zeros_like(w), np.zeros_like(b)) for w, b in zip(net.weights, net.biases)]

    def step(self, net: Mlp, grads) -> None:
        self.step_count += 1
        t = self.step_count
        b1, b2 = self.beta1, self.beta2
        correction = np.sqrt(1.0 - b2**t) / (1.0 - b1**t)
        for i, (gw, gb) in enumerate(grads):
            for j, g in enumerate((gw, gb)):
                m = self.m[i][j]
                v = self.v[i][j]
                m *= b1
                m += (1.0 - b1) * g
                v *= b2
                v += (1.0 - b2) * g * g
                param = net.weights[i] if j == 0 else net.biases[i]
                param -= self.lr * correction * m / (np.sqrt(v) + self.eps)


class ScalarAdam:
    """Adam for a single scalar parameter (used for the entropy temperature)."""

    def __init__(self, lr: float = 3e-4, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.step_count = 0
        self.m = 0.0
        self.v = 0.0

    def step(self, value: float, grad: float) -> float:
        self.step_count += 1
        t = self.step_count
        self.m = self.beta1 * self.m + (1.0 - self.beta1) * grad
        self.v = self.beta2 * self.v + (1.0 - self.beta2) * grad * grad
        correction = np.sqrt(1.0 - self.beta2**t) / (1.0 - self.beta1**t)
        return value - self.lr * correction * self.m / (np.sqrt(self.v) + self.eps)
