"""
Performance Monitoring and Resource Caps.
Profiles per-instance work and enforces the timeout and matching-count caps.
"""

import logging
import threading
import time
from collections import deque
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, Optional

import psutil

from pmhprism.errors import ErrorContext, ResourceCapExceeded


@dataclass
class PerformanceMetrics:
    """Performance metrics for one profiled operation."""

    operation: str
    start_time: float
    end_time: float
    duration: float
    memory_mb: float
    success: bool
    error_message: Optional[str] = None
    metadata: Dict[str, Any] = field(default_factory=dict)


class PerformanceProfiler:
    """Performance profiler for tracking per-instance metrics."""

    def __init__(self, slow_operation_threshold: float = 2.0, max_metrics: int = 10000):
        self.metrics: deque = deque(maxlen=max_metrics)
        self._lock = threading.RLock()
        self.logger = logging.getLogger(f"{__name__}.PerformanceProfiler")

        self.slow_operation_threshold = slow_operation_threshold  # seconds
        self.memory_warning_threshold = 1024  # MB

    @contextmanager
    def profile_operation(
        self, operation: str, metadata: Optional[Dict] = None
    ) -> Iterator[None]:
        """Context manager for profiling operations."""
        start_time = time.perf_counter()
        process = psutil.Process()
        start_memory = process.memory_info().rss / 1024 / 1024  # MB

        success = True
        error_message = None

        try:
            yield
        except Exception as e:
            success = False
            error_message = str(e)
            raise
        finally:
            end_time = time.perf_counter()
            end_memory = process.memory_info().rss / 1024 / 1024  # MB
            self._record_metrics(
                PerformanceMetrics(
                    operation=operation,
                    start_time=start_time,
                    end_time=end_time,
                    duration=end_time - start_time,
                    memory_mb=max(start_memory, end_memory),
                    success=success,
                    error_message=error_message,
                    metadata=metadata or {},
                )
            )

    def _record_metrics(self, metrics: PerformanceMetrics) -> None:
        with self._lock:
            self.metrics.append(metrics)

            if metrics.duration > self.slow_operation_threshold:
                self.logger.warning(
                    f"Slow instance: {metrics.operation} took {metrics.duration:.2f}s"
                )
            if metrics.memory_mb > self.memory_warning_threshold:
                self.logger.warning(
                    f"High memory usage: {metrics.operation} "
                    f"at {metrics.memory_mb:.0f}MB"
                )

    def last(self, operation: str) -> Optional[PerformanceMetrics]:
        """Most recent metrics recorded for ``operation``."""
        with self._lock:
            for metrics in reversed(self.metrics):
                if metrics.operation == operation:
                    return metrics
        return None


class ResourceBudget:
    """
    Deadline plus matching-count cap for one instance.

    Enumeration loops call ``tick()`` once per emitted matching; the deadline is
    checked every ``check_every`` ticks to keep the clock off the hot path.
    """

    def __init__(
        self,
        timeout_s: Optional[float] = None,
        matching_cap: Optional[int] = None,
        operation: str = "enumeration",
        check_every: int = 256,
    ):
        self.timeout_s = timeout_s
        self.matching_cap = matching_cap
        self.operation = operation
        self.check_every = check_every
        self.count = 0
        self._deadline = (
            None if timeout_s is None else time.monotonic() + float(timeout_s)
        )

    def tick(self) -> None:
        self.count += 1
        if self.matching_cap is not None and self.count > self.matching_cap:
            raise ResourceCapExceeded(
                f"Matching cap of {self.matching_cap} exceeded",
                ErrorContext(self.operation, metadata={"cap": "matching_cap"}),
            )
        if self.count % self.check_every == 0:
            self.check_deadline()

    def check_deadline(self) -> None:
        if self._deadline is not None and time.monotonic() > self._deadline:
            raise ResourceCapExceeded(
                f"Timeout of {self.timeout_s}s exceeded after {self.count} matchings",
                ErrorContext(self.operation, metadata={"cap": "timeout_s"}),
            )


# Global instances
_performance_profiler: Optional[PerformanceProfiler] = None


def get_performance_profiler() -> PerformanceProfiler:
    """Get global performance profiler instance."""
    global _performance_profiler
    if _performance_profiler is None:
        from pmhprism.config import get_config

        _performance_profiler = PerformanceProfiler(get_config().slow_instance_s)
    return _performance_profiler
