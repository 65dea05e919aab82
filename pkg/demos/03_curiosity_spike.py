"""Curiosity as a task-change signal on a controlled linear system.

The estimator learns s' = A s + B a online from its own FIFO of recent
transitions.  When the dynamics matrix flips at t=1500, one-step
prediction errors jump by orders of magnitude: exactly the spike the
boundary detector feeds on.
"""

import numpy as np

from curioreplay import CuriosityEstimator, Rng, Transition


def rotation(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


REGIMES = {
    "A": (0.7 * rotation(0.3), np.array([[0.5], [0.1]])),
    "B": (-0.6 * rotation(1.2), np.array([[-0.3], [0.6]])),
}
SWITCH = 1500
TOTAL = 2500

estimator = CuriosityEstimator(
    state_dim=2, action_dim=1, rng=Rng(0), weights=(1.0, 0.0, 0.0),
    ensemble_size=1, hidden=[32, 32], fifo_capacity=500,
    learning_rate=3e-3, batch_size=32)

gen = np.random.default_rng(0)
state = gen.uniform(-1, 1, size=2)
curiosities = []
for t in range(TOTAL):
    a_mat, b_mat = REGIMES["A"] if t < SWITCH else REGIMES["B"]
    action = gen.uniform(-1, 1, size=1)
    next_state = a_mat @ state + b_mat @ action + 0.01 * gen.standard_normal(2)
    tr = Transition(state.copy(), action, 0.0, next_state.copy(), False, 0, t)
    curiosities.append(estimator.observe(tr))
    state = next_state

window = 100
print("trailing 100-step mean curiosity (regime flips at t=1500):")
for t in range(window, TOTAL + 1, window):
    mean = float(np.mean(curiosities[t - window:t]))
    bar = "#" * min(60, int(mean * 2000))
    marker = "  <-- switch" if t == SWITCH + window else ""
    print(f"  t={t:>5}  {mean:9.5f} {bar}{marker}")

pre = float(np.mean(curiosities[SWITCH - 500:SWITCH]))
post = float(np.mean(curiosities[SWITCH:SWITCH + 500]))
print(f"\npre-switch mean {pre:.5f}, post-switch mean {post:.5f}, ratio {post / pre:.0f}x")
