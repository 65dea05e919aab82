"""Replay buffer policies behind a single insert/sample/composition contract.

Six policies: plain FIFO, uniform reservoir, hybrid reservoir (HRB),
multi-timescale chain (MTR), hybrid curious (HCB) and hybrid reservoir
with task separation (HRBTS).

Hybrid policies offer every arriving transition independently to their
recency FIFO and to their long-term store; items evicted from the FIFO are
never recycled into the long-term part, which keeps the long-term store's
acceptance statistics exact.  Selection logic never reads
``true_task_label``; only the composition metric does.
"""

from __future__ import annotations

import heapq
from collections import Counter

from .rng import Rng
from .types import Transition


class ReplayBuffer:
    """Contract shared by every policy.

    ``insert`` may consume randomness from the supplied Rng; ``sample``
    draws uniformly with replacement over every stored slot (an item held
    by two components occupies two slots).  Total stored count never
    exceeds the configured capacity.
    """

    kind = "base"

    def __init__(self, capacity: int):
        if capacity <= 0:
            raise ValueError("capacity must be positive")
        self.capacity = capacity

    def insert(self, tr: Transition, rng: Rng | None = None):
        raise NotImplementedError

    def _parts(self) -> list:
        """Indexable views over each component's stored items."""
        raise NotImplementedError

    def _retained_parts(self) -> list:
        """The long-term (non-recency-FIFO) components."""
        return self._parts()

    def __len__(self) -> int:
        return sum(len(p) for p in self._parts())

    def items(self):
        for part in self._parts():
            yield from part

    def sample(self, batch_size: int, rng: Rng) -> list[Transition]:
        if batch_size < 0:
            raise ValueError("batch_size must be >= 0")
        if batch_size == 0:
            return []
        parts = [p for p in self._parts() if len(p)]
        total = sum(len(p) for p in parts)
        if total == 0:
            raise RuntimeError("cannot sample from an empty buffer")
        picks = rng.integers(0, total, size=batch_size)
        out = []
        for i in picks:
            i = int(i)
            for part in parts:
                if i < len(part):
                    out.append(part[i])
                    break
                i -= len(part)
        return out

    def composition(self, retained_only: bool = False) -> dict[int, tuple[int, float]]:
        """Counts and ratios of stored items per ground-truth task label.

        ``retained_only`` restricts the count to the long-term components
        of hybrid policies (empty for a plain FIFO).
        """
        parts = self._retained_parts() if retained_only else self._parts()
        counts: Counter[int] = Counter()
        for part in parts:
            for tr in part:
                counts[tr.true_task_label] += 1
        total = sum(counts.values())
        if total == 0:
            return {}
        return {label: (count, count / total) for label, count in sorted(counts.items())}


class _Ring:
    """Bounded queue over a preallocated list; O(1) insert and indexing.

    Index 0 is the oldest held item.  A zero-capacity ring stores nothing
    and hands every inserted item straight back.
    """

    __slots__ = ("capacity", "_slots", "_start", "_count")

    def __init__(self, capacity: int):
        self.capacity = capacity
        self._slots = [None] * capacity
        self._start = 0
        self._count = 0

    def __len__(self) -> int:
        return self._count

    def __getitem__(self, i: int):
        if not 0 <= i < self._count:
            raise IndexError(i)
        return self._slots[(self._start + i) % self.capacity]

    def __iter__(self):
        for i in range(self._count):
            yield self._slots[(self._start + i) % self.capacity]

    def push(self, item):
        """Append; returns the evicted oldest item when over capacity."""
        if self.capacity == 0:
            return item
        if self._count < self.capacity:
            self._slots[(self._start + self._count) % self.capacity] = item
            self._count += 1
            return None
        evicted = self._slots[self._start]
        self._slots[self._start] = item
        self._start = (self._start + 1) % self.capacity
        return evicted


class FifoBuffer(ReplayBuffer):
    """Evicts in insertion order."""

    kind = "fifo"

    def __init__(self, capacity: int):
        super().__init__(capacity)
        self._ring = _Ring(capacity)

    def insert(self, tr: Transition, rng: Rng | None = None):
        return self._ring.push(tr)

    def _parts(self):
        return [self._ring]

    def _retained_parts(self):
        return []


class _ZeroFifo:
    """Stand-in recency component when the FIFO fraction rounds to zero."""

    def __len__(self):
        return 0

    def __iter__(self):
        return iter(())

    def push(self, item):
        return item


class ReservoirBuffer(ReplayBuffer):
    """Uniform sample of the stream seen so far (Vitter's algorithm R)."""

    kind = "reservoir"

    def __init__(self, capacity: int):
        super().__init__(capacity)
        self.slots: list[Transition] = []
        self.n_seen = 0

    def insert(self, tr: Transition, rng: Rng | None = None) -> bool:
        """Returns whether the item was stored."""
        self.n_seen += 1
        if len(self.slots) < self.capacity:
            self.slots.append(tr)
            return True
        j = int(rng.integers(0, self.n_seen))
        if j < self.capacity:
            self.slots[j] = tr
            return True
        return False

    def shrink_to(self, new_capacity: int, rng: Rng) -> None:
        """Drop uniformly random items until the store fits ``new_capacity``."""
        if new_capacity < 0:
            raise ValueError("new_capacity must be >= 0")
        if len(self.slots) > new_capacity:
            keep = rng.choice(len(self.slots), size=new_capacity, replace=False)
            keep.sort()
            self.slots = [self.slots[int(i)] for i in keep]
        self.capacity = new_capacity

    def _parts(self):
        return [self.slots]


class HrbBuffer(ReplayBuffer):
    """Small recency FIFO next to a uniform reservoir."""

    kind = "hrb"

    def __init__(self, capacity: int, fifo_fraction: float = 0.05):
        super().__init__(capacity)
        fifo_cap = int(fifo_fraction * capacity)
        self.fifo = _Ring(fifo_cap) if fifo_cap else _ZeroFifo()
        self.reservoir = ReservoirBuffer(capacity - fifo_cap)

    def insert(self, tr: Transition, rng: Rng | None = None):
        self.fifo.push(tr)
        self.reservoir.insert(tr, rng)

    def _parts(self):
        return [self.fifo, self.reservoir.slots]

    def _retained_parts(self):
        return [self.reservoir.slots]


class MtrBuffer(ReplayBuffer):
    """Chain of equal FIFO stages with probabilistic promotion.

    An item evicted from stage i moves to stage i+1 with probability
    ``promotion_prob``, else it is discarded; evictions from the last stage
    are always discarded.  Leftover capacity from the division goes to the
    first stage.
    """

    kind = "mtr"

    def __init__(self, capacity: int, sub_buffers: int = 5, promotion_prob: float = 0.5):
        super().__init__(capacity)
        if sub_buffers < 1:
            raise ValueError("sub_buffers must be >= 1")
        if not 0.0 <= promotion_prob <= 1.0:
            raise ValueError("promotion_prob must lie in [0, 1]")
        base = capacity // sub_buffers
        if base == 0:
            raise ValueError("capacity must be >= sub_buffers")
        caps = [base] * sub_buffers
        caps[0] += capacity - base * sub_buffers
        self.stages = [_Ring(c) for c in caps]
        self.promotion_prob = promotion_prob

    def insert(self, tr: Transition, rng: Rng | None = None):
        item = tr
        for i, stage in enumerate(self.stages):
            evicted = stage.push(item)
            if evicted is None:
                return
            if i + 1 == len(self.stages):
                return  # fell off the end of the chain
            if float(rng.uniform()) >= self.promotion_prob:
                return
            item = evicted

    def _parts(self):
        return self.stages


class HcbBuffer(ReplayBuffer):
    """Recency FIFO next to a store that keeps the most surprising items.

    The long-term store is keyed by ``curiosity_at_insert`` frozen at
    arrival.  A newcomer only displaces the current minimum when its
    priority is strictly higher; on equal priority the incumbent wins.
    Among equal-priority incumbents the most recent arrival is displaced
    first, which makes the store exactly the top-K of everything offered.
    """

    kind = "hcb"

    def __init__(self, capacity: int, fifo_fraction: float = 0.05):
        super().__init__(capacity)
        fifo_cap = int(fifo_fraction * capacity)
        self.fifo = _Ring(fifo_cap) if fifo_cap else _ZeroFifo()
        self.curious_capacity = capacity - fifo_cap
        self._heap: list[tuple[float, int, Transition]] = []  # (priority, -arrival, item)
        self._arrivals = 0

    def insert(self, tr: Transition, rng: Rng | None = None):
        """Returns the transition squeezed out of the curious store, if any."""
        self.fifo.push(tr)
        priority = float(tr.curiosity_at_insert)
        self._arrivals += 1
        entry = (priority, -self._arrivals, tr)
        if len(self._heap) < self.curious_capacity:
            heapq.heappush(self._heap, entry)
            return None
        if priority > self._heap[0][0]:
            return heapq.heapreplace(self._heap, entry)[2]
        return None

    def curious_items(self) -> list[Transition]:
        return [entry[2] for entry in self._heap]

    def _parts(self):
        return [self.fifo, _HeapView(self._heap)]

    def _retained_parts(self):
        return [_HeapView(self._heap)]


class _HeapView:
    __slots__ = ("_heap",)

    def __init__(self, heap):
        self._heap = heap

    def __len__(self):
        return len(self._heap)

    def __getitem__(self, i):
        return self._heap[i][2]

    def __iter__(self):
        return (entry[2] for entry in self._heap)


class HrbtsBuffer(ReplayBuffer):
    """Recency FIFO next to per-task sub-reservoirs of equal size.

    Each hypothesized task owns one sub-reservoir with its own stream
    counter; inserts go only to the current task's sub-reservoir.  When a
    boundary arrives, the long-term capacity is re-split evenly over the
    grown task count (remainders to the lowest task indices), existing
    sub-reservoirs shed uniformly random items to fit, and a fresh empty
    sub-reservoir becomes current.
    """

    kind = "hrbts"

    def __init__(self, capacity: int, fifo_fraction: float = 0.05):
        super().__init__(capacity)
        fifo_cap = int(fifo_fraction * capacity)
        self.fifo = _Ring(fifo_cap) if fifo_cap else _ZeroFifo()
        self.reservoir_capacity = capacity - fifo_cap
        self.subs = [ReservoirBuffer(self.reservoir_capacity)]

    @property
    def task_count(self) -> int:
        return len(self.subs)

    def on_boundary(self, rng: Rng) -> None:
        new_count = len(self.subs) + 1
        base, extra = divmod(self.reservoir_capacity, new_count)
        caps = [base + 1 if i < extra else base for i in range(new_count)]
        for sub, cap in zip(self.subs, caps):
            sub.shrink_to(cap, rng)
        self.subs.append(ReservoirBuffer(caps[-1]))

    def insert(self, tr: Transition, rng: Rng | None = None):
        self.fifo.push(tr)
        self.subs[-1].insert(tr, rng)

    def sub_counts(self) -> list[int]:
        return [len(sub.slots) for sub in self.subs]

    def _parts(self):
        return [self.fifo] + [sub.slots for sub in self.subs]

    def _retained_parts(self):
        return [sub.slots for sub in self.subs]


def make_buffer(kind: str, capacity: int, fifo_fraction: float = 0.05,
                mtr_sub_buffers: int = 5, mtr_promotion_prob: float = 0.5) -> ReplayBuffer:
    if kind == "fifo":
        return FifoBuffer(capacity)
    if kind == "reservoir":
        return ReservoirBuffer(capacity)
    if kind == "hrb":
        return HrbBuffer(capacity, fifo_fraction)
    if kind == "mtr":
        return MtrBuffer(capacity, mtr_sub_buffers, mtr_promotion_prob)
    if kind == "hcb":
        return HcbBuffer(capacity, fifo_fraction)
    if kind == "hrbts":
        return HrbtsBuffer(capacity, fifo_fraction)
    raise ValueError(f"unknown buffer kind {kind!r}")
