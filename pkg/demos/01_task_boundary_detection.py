"""Detecting task changes in a noisy piecewise-constant curiosity signal.

A surprise signal that sits at one level per task and jumps at task
changes is the cleanest setting for the SNR filter: inside a task the
window's standard deviation is small and the signal-to-noise ratio is
high; while the window straddles a change the deviation blows up, snr
collapses below mean_factor * mean, and a burst of candidate points
appears.  The idle counter turns each burst into a single boundary.
"""

import numpy as np

from curioreplay import Detector, detect_offline

rng = np.random.default_rng(7)

TOTAL = 400_000
CHANGES = [100_000, 150_000, 350_000]
LEVELS = [1.0, 3.0, 0.8, 2.6]

signal = np.empty(TOTAL)
for level, start, stop in zip(LEVELS, [0] + CHANGES, CHANGES + [TOTAL]):
    signal[start:stop] = level
signal *= 1.0 + 0.05 * rng.standard_normal(TOTAL)

print(f"stream: {TOTAL} steps, true changes at {CHANGES}")
print("detector: window=600, idle_threshold=8000, mean_factor=1.5")

found = detect_offline(signal, window=600, idle_threshold=8000, mean_factor=1.5)
print(f"\ndetected boundaries: {found}")
for change, index in zip(CHANGES, found):
    print(f"  true change {change:>7} -> detected {index:>7} (lag {index - change})")

# The same filter consumed one value at a time, with window statistics
# visible along the way.
detector = Detector(window=600, idle_threshold=8000, mean_factor=1.5)
print("\nstreaming view around the first change:")
for t, value in enumerate(signal):
    step = detector.step(value)
    if 99_995 <= t < 100_005 or step.boundary:
        flag = " <-- boundary" if step.boundary else (" (candidate)" if step.candidate else "")
        print(f"  t={t:>7} c={value:6.3f} mu={step.mu:6.3f} snr={step.snr:8.3f}{flag}")
    if t > 360_000:
        break
