"""Streaming task-boundary detection on a curiosity signal.

A sliding window of the most recent ``n`` values yields a mean ``mu`` and a
signal-to-noise ratio ``snr = mu / (sigma + delta)`` with population sigma.
A step is a *candidate* change point when ``snr < mean_factor * mu``; a
candidate becomes a *boundary* only if at least ``idle_threshold`` steps
passed since the previous candidate, which debounces the burst of
candidates that surrounds a single change.

The idle counter starts at the threshold so the first candidate after
warm-up can fire immediately; during warm-up (fewer than ``n`` values seen)
no candidates are emitted and the counter keeps growing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(slots=True)
class DetectorStep:
    candidate: bool
    boundary: bool
    mu: float
    snr: float


class Detector:
    """Single-owner streaming state; one instance per run."""

    __slots__ = ("n", "idle_threshold", "mean_factor", "delta",
                 "_ring", "_count", "_idx", "_s1", "_s2", "idle", "steps_seen")

    def __init__(self, window: int = 600, idle_threshold: int = 8000,
                 mean_factor: float = 1.5, delta: float = 1e-6):
        if window < 2:
            raise ValueError("window must be >= 2")
        if idle_threshold < 0:
            raise ValueError("idle_threshold must be >= 0")
        if mean_factor <= 0 or delta <= 0:
            raise ValueError("mean_factor and delta must be positive")
        self.n = window
        self.idle_threshold = idle_threshold
        self.mean_factor = mean_factor
        self.delta = delta
        self._ring = [0.0] * window
        self._count = 0
        self._idx = 0
        self._s1 = 0.0  # running sum of held values
        self._s2 = 0.0  # running sum of squares
        self.idle = float(idle_threshold)
        self.steps_seen = 0

    def __len__(self) -> int:
        return self._count

    def mean(self) -> float:
        """Arithmetic mean of the currently held values."""
        if self._count == 0:
            raise ValueError("window is empty")
        return self._s1 / self._count

    def sigma(self) -> float:
        """Population standard deviation of the currently held values."""
        if self._count == 0:
            raise ValueError("window is empty")
        mu = self._s1 / self._count
        var = self._s2 / self._count - mu * mu
        return math.sqrt(var) if var > 0.0 else 0.0

    def snr(self) -> float:
        return self.mean() / (self.sigma() + self.delta)

    def step(self, c: float) -> DetectorStep:
        """Push one curiosity value and classify the step."""
        c = float(c)
        if self._count == self.n:
            old = self._ring[self._idx]
            self._s1 -= old
            self._s2 -= old * old
        else:
            self._count += 1
        self._ring[self._idx] = c
        self._idx += 1
        if self._idx == self.n:
            self._idx = 0
        self._s1 += c
        self._s2 += c * c

        count = self._count
        mu = self._s1 / count
        var = self._s2 / count - mu * mu
        sigma = math.sqrt(var) if var > 0.0 else 0.0
        snr = mu / (sigma + self.delta)

        self.steps_seen += 1
        if self.steps_seen < self.n:
            self.idle += 1.0
            return DetectorStep(False, False, mu, snr)

        candidate = snr < self.mean_factor * mu
        if candidate:
            boundary = self.idle >= self.idle_threshold
            self.idle = 0.0
        else:
            boundary = False
            self.idle += 1.0
        return DetectorStep(candidate, boundary, mu, snr)


def detect_offline(values, window: int = 600, idle_threshold: int = 8000,
                   mean_factor: float = 1.5, delta: float = 1e-6) -> list[int]:
    """Fold the streaming detector over a sequence; return boundary indices.

    The loop performs the exact per-step update of :meth:`Detector.step`
    with the state held in locals; equality with the streaming object is
    covered by a property test.
    """
    Detector(window, idle_threshold, mean_factor, delta)  # validate params
    n = window
    ring = [0.0] * n
    count = 0
    idx = 0
    s1 = 0.0
    s2 = 0.0
    idle = float(idle_threshold)
    sqrt = math.sqrt
    boundaries: list[int] = []
    for i, value in enumerate(values):
        c = float(value)
        if count == n:
            old = ring[idx]
            s1 -= old
            s2 -= old * old
        else:
            count += 1
        ring[idx] = c
        idx += 1
        if idx == n:
            idx = 0
        s1 += c
        s2 += c * c
        if i + 1 < n:
            idle += 1.0
            continue
        mu = s1 / count
        var = s2 / count - mu * mu
        sigma = sqrt(var) if var > 0.0 else 0.0
        if mu / (sigma + delta) < mean_factor * mu:
            if idle >= idle_threshold:
                boundaries.append(i)
            idle = 0.0
        else:
            idle += 1.0
    return boundaries
