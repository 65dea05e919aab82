"""Shared oracles and stream builders used across the test modules."""

from __future__ import annotations

import numpy as np

from curioreplay import Mlp, Rng, Transition


def make_transition(t: int, label: int = 0, state=None, action=None, reward: float = 0.0,
                    next_state=None, curiosity: float = 0.0) -> Transition:
    return Transition(
        state=np.zeros(3) if state is None else np.asarray(state, float),
        action=np.zeros(1) if action is None else np.asarray(action, float),
        reward=reward,
        next_state=np.zeros(3) if next_state is None else np.asarray(next_state, float),
        done=False,
        true_task_label=label,
        timestep=t,
        curiosity_at_insert=curiosity,
    )


def finite_difference_grads(net: Mlp, x: np.ndarray, target: np.ndarray, h: float = 1e-5):
    """Central finite differences of the MSE loss over every parameter."""

    def loss() -> float:
        diff = net.forward(x) - target
        return float(np.mean(diff**2))

    grads = []
    for w, b in zip(net.weights, net.biases):
        gw = np.zeros_like(w)
        for idx in np.ndindex(w.shape):
            old = w[idx]
            w[idx] = old + h
            hi = loss()
            w[idx] = old - h
            lo = loss()
            w[idx] = old
            gw[idx] = (hi - lo) / (2 * h)
        gb = np.zeros_like(b)
        for idx in np.ndindex(b.shape):
            old = b[idx]
            b[idx] = old + h
            hi = loss()
            b[idx] = old - h
            lo = loss()
            b[idx] = old
            gb[idx] = (hi - lo) / (2 * h)
        grads.append((gw, gb))
    return grads


def max_relative_grad_error(analytic, numeric) -> float:
    worst = 0.0
    for (aw, ab), (nw, nb) in zip(analytic, numeric):
        for a, n in ((aw, nw), (ab, nb)):
            denom = np.maximum(np.abs(n), 1e-6)
            worst = max(worst, float(np.max(np.abs(a - n) / denom)))
    return worst


def random_small_net(rng: Rng, max_hidden_layers: int = 2, max_units: int = 16) -> Mlp:
    """Random net with at most 3 weight layers and at most 16 units per layer."""
    gen = rng.generator
    depth = int(gen.integers(0, max_hidden_layers + 1))
    sizes = [int(gen.integers(1, max_units + 1)) for _ in range(depth + 2)]
    return Mlp.init(sizes, rng)


def gradcheck_max_error(n_nets: int = 20, seed: int = 1234) -> float:
    """Worst relative error between analytic and finite-difference gradients."""
    worst = 0.0
    for i in range(n_nets):
        rng = Rng(seed + i)
        net = random_small_net(rng)
        gen = rng.generator
        x = gen.normal(size=net.in_dim)
        target = gen.normal(size=net.out_dim)
        _, analytic = net.loss_mse(x, target)
        numeric = finite_difference_grads(net, x, target)
        worst = max(worst, max_relative_grad_error(analytic, numeric))
    return worst


def piecewise_noisy_stream(levels, change_steps, total: int, seed: int,
                           rel_noise: float = 0.05) -> np.ndarray:
    """Piecewise-constant levels with relative Gaussian noise."""
    gen = np.random.default_rng(seed)
    values = np.empty(total)
    bounds = list(change_steps) + [total]
    for level, start, stop in zip(levels, bounds, bounds[1:]):
        values[start:stop] = level
    return values * (1.0 + rel_noise * gen.standard_normal(total))


FIG2_CHANGES = [100000, 150000, 350000]
FIG2_LEVELS = [1.0, 3.0, 0.8, 2.6]
FIG2_TOTAL = 400000


def fig2_style_stream(seed: int) -> np.ndarray:
    """400k-step stream with changes at the Fig.-2 change set."""
    return piecewise_noisy_stream(FIG2_LEVELS, [0] + FIG2_CHANGES, FIG2_TOTAL, seed)


def _rotation(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


REGIME_A = (0.7 * _rotation(0.3), np.array([[0.5], [0.1]]))
REGIME_B = (-0.6 * _rotation(1.2), np.array([[-0.3], [0.6]]))


def linear_dynamics_stream(total: int, seed: int, switch: int | None = None):
    """Two-regime linear system s' = A s + B a + noise, switching at ``switch``."""
    gen = np.random.default_rng(seed)
    s = gen.uniform(-1, 1, size=2)
    for t in range(total):
        a_mat, b_mat = REGIME_A if (switch is None or t < switch) else REGIME_B
        action = gen.uniform(-1, 1, size=1)
        s2 = a_mat @ s + b_mat @ action + 0.01 * gen.standard_normal(2)
        yield Transition(s.copy(), action, 0.0, s2.copy(), False, 0, t)
        s = s2


def forward_estimator(seed: int, lr: float = 3e-3):
    """Forward-error-only estimator sized for the linear-dynamics streams."""
    from curioreplay import CuriosityEstimator

    return CuriosityEstimator(2, 1, Rng(seed), weights=(1.0, 0.0, 0.0),
                              ensemble_size=1, hidden=[32, 32], fifo_capacity=500,
                              learning_rate=lr, batch_size=32)


def spike_ratio(seed: int, switch: int = 1500, horizon: int = 500) -> float:
    """Post-switch over pre-switch mean curiosity on the two-regime stream."""
    est = forward_estimator(seed)
    cs = [est.observe(tr) for tr in linear_dynamics_stream(switch + horizon, seed, switch)]
    pre = float(np.mean(cs[switch - horizon:switch]))
    post = float(np.mean(cs[switch:switch + horizon]))
    return post / pre
