"""Per-stage latency and counter tracking with atomic snapshots."""

from __future__ import annotations

import threading
import time
from contextlib import contextmanager

STAGES = ("ingest", "downscale", "blur", "detect", "classify", "annotate", "sbs", "encode")

_MAX_SAMPLES = 20_000


class StageMetrics:
    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._latencies: dict[str, list[float]] = {s: [] for s in STAGES}
        self.frames_in = 0
        self.frames_out = 0
        self.frames_dropped = 0
        self.classifier_calls = 0
        self.classifier_failures = 0
        self.detections_total = 0
        self.console_disconnects = 0
        self.backpressure_faults = 0

    @contextmanager
    def stage(self, name: str):
        t0 = time.perf_counter()
        yield
        self.add_latency(name, (time.perf_counter() - t0) * 1000.0)

    def add_latency(self, name: str, ms: float) -> None:
        with self._lock:
            samples = self._latencies.setdefault(name, [])
            if len(samples) < _MAX_SAMPLES:
                samples.append(ms)

    def bump(self, counter: str, n: int = 1) -> None:
        with self._lock:
            setattr(self, counter, getattr(self, counter) + n)

    @staticmethod
    def _percentile(samples: list[float], q: float) -> float:
        if not samples:
            return 0.0
        ordered = sorted(samples)
        idx = min(len(ordered) - 1, int(q * len(ordered)))
        return ordered[idx]

    def counters(self) -> dict[str, int]:
        with self._lock:
            return {
                "frames_in": self.frames_in,
                "frames_out": self.frames_out,
                "frames_dropped": self.frames_dropped,
                "classifier_calls": self.classifier_calls,
                "classifier_failures": self.classifier_failures,
                "detections_total": self.detections_total,
                "console_disconnects": self.console_disconnects,
                "backpressure_faults": self.backpressure_faults,
            }

    def snapshot(self) -> dict:
        """Consistent view: stage histograms plus counters."""
        with self._lock:
            stages = {
                name: {
                    "count": len(samples),
                    "p50_ms": self._percentile(samples, 0.50),
                    "p95_ms": self._percentile(samples, 0.95),
                }
                for name, samples in self._latencies.items()
            }
        return {"stages": stages, "counters": self.counters()}

    def to_csv(self) -> str:
        snap = self.snapshot()
        lines = ["stage,count,p50_ms,p95_ms"]
        for name in STAGES:
            st = snap["stages"].get(name, {"count": 0, "p50_ms": 0.0, "p95_ms": 0.0})
            lines.append(f"{name},{st['count']},{st['p50_ms']:.3f},{st['p95_ms']:.3f}")
        for key, value in snap["counters"].items():
            lines.append(f"counter_{key},{value},,")
        return "\n".join(lines) + "\n"
