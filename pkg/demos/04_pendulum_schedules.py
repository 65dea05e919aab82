"""The three task-drift schedules on the variable-length pendulum.

Setting 1: prolonged exposures, no revisits (lengths 1.0 / 1.4 / 1.8).
Setting 2: frequent short-lived excursions from a dominant task.
Setting 3: the length follows a clamped sine at every step.
"""

import numpy as np

from curioreplay import Pendulum, Rng, ScriptedPolicy, TaskSchedule, schedule_param

SETTING1 = TaskSchedule(kind="piecewise", change_steps=[0, 20000, 120000],
                        values=[1.0, 1.4, 1.8])
SETTING2 = TaskSchedule(
    kind="piecewise",
    change_steps=[0, 32275, 37275, 56602, 61602, 81694, 86694, 105977,
                  110977, 118155, 123155, 141158, 146158],
    values=[1.4, 1.0, 1.4, 1.8, 1.4, 1.0, 1.4, 1.0, 1.4, 1.8, 1.4, 1.8, 1.4])
SETTING3 = TaskSchedule(kind="sinusoidal", param_min=1.0, param_max=1.8)

print("pendulum length along the run (sampled every 10k steps):")
print(f"{'t':>8} {'setting 1':>10} {'setting 2':>10} {'setting 3':>10}")
for t in range(0, 150001, 10000):
    row = [schedule_param(s, t) for s in (SETTING1, SETTING2, SETTING3)]
    print(f"{t:>8} {row[0]:>10.3f} {row[1]:>10.3f} {row[2]:>10.3f}")

print("\nsetting 2 revisits tasks in short bursts:")
for start, value in zip(SETTING2.change_steps, SETTING2.values):
    print(f"  from t={start:>6}: length {value}")

# A short rollout under a live schedule: the same episode can straddle a
# task change, the policy never gets told.
env = Pendulum(max_steps_per_episode=200)
policy = ScriptedPolicy("swingup")
rng = Rng(0)
obs = env.reset(rng)
total = 0.0
for t in range(400):
    length = schedule_param(SETTING3, t * 500)  # fast-forwarded drift
    action = policy.select_action(obs, rng)
    obs, reward, truncated = env.step(float(action[0]), length)
    total += reward
    if truncated:
        obs = env.reset(rng)
print(f"\nswing-up heuristic under fast sinusoidal drift: return/step {total / 400:.2f}")
