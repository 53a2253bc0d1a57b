"""Channel queues: latest-wins media plane, lossless control plane, and
sequence-gap accounting."""

from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass, field


class MediaQueue:
    """Bounded frame queue; enqueue drops the oldest unsent frame when full.

    Safe for one producer and one consumer; the drop decision is atomic
    with the enqueue.
    """

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("media queue capacity must be >= 1")
        self.capacity = capacity
        self._items: deque = deque()
        self._lock = threading.Lock()
        self._ready = threading.Condition(self._lock)
        self.dropped = 0

    def offer(self, item) -> int:
        """Enqueue, dropping the oldest item if the queue is full.
        Returns the number of frames dropped by this call."""
        with self._ready:
            dropped = 0
            while len(self._items) >= self.capacity:
                self._items.popleft()
                dropped += 1
            self._items.append(item)
            self.dropped += dropped
            self._ready.notify()
            return dropped

    def get(self, timeout: float | None = None):
        """Dequeue the oldest queued frame; None on timeout."""
        with self._ready:
            if not self._items and not self._ready.wait_for(
                lambda: bool(self._items), timeout
            ):
                return None
            return self._items.popleft()

    def __len__(self) -> int:
        with self._lock:
            return len(self._items)


class ControlQueue:
    """Unbounded FIFO for control-plane messages with a backpressure
    watermark surfaced to metrics instead of dropping."""

    def __init__(self, watermark: int = 256):
        self.watermark = watermark
        self._items: deque = deque()
        self._lock = threading.Lock()
        self._ready = threading.Condition(self._lock)
        self.backpressure_faults = 0

    def put(self, item) -> None:
        with self._ready:
            self._items.append(item)
            if len(self._items) > self.watermark:
                self.backpressure_faults += 1
            self._ready.notify()

    def get(self, timeout: float | None = None):
        with self._ready:
            if not self._items and not self._ready.wait_for(
                lambda: bool(self._items), timeout
            ):
                return None
            return self._items.popleft()

    def __len__(self) -> int:
        with self._lock:
            return len(self._items)


@dataclass(frozen=True)
class SequenceGap:
    expected: int
    received: int

    @property
    def lost(self) -> int:
        return (self.received - self.expected) & 0xFFFFFFFF


@dataclass
class GapReport:
    gaps: list[SequenceGap] = field(default_factory=list)
    received: int = 0

    @property
    def total_lost(self) -> int:
        return sum(g.lost for g in self.gaps)


def detect_sequence_gaps(sequences) -> GapReport:
    """Report every discontinuity in a per-sender sequence stream.
    Increments wrap modulo 2^32, so 0xFFFFFFFF -> 0 is not a gap."""
    report = GapReport()
    last = None
    for seq in sequences:
        report.received += 1
        if last is not None:
            expected = (last + 1) & 0xFFFFFFFF
            if seq != expected:
                report.gaps.append(SequenceGap(expected, seq))
        last = seq
    return report


class SequenceWatcher:
    """Incremental form of detect_sequence_gaps for live streams."""

    def __init__(self) -> None:
        self._last: int | None = None
        self.report = GapReport()

    def push(self, seq: int) -> SequenceGap | None:
        self.report.received += 1
        gap = None
        if self._last is not None:
            expected = (self._last + 1) & 0xFFFFFFFF
            if seq != expected:
                gap = SequenceGap(expected, seq)
                self.report.gaps.append(gap)
        self._last = seq
        return gap
