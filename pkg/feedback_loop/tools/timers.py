import time
from dataclasses import dataclass, field
from logging import Logger
from typing import Any, List, Optional

import numpy as np


class timer:
    """Context manager for timing a block of code.

    The measured time is accessible via the `duration` property, and is logged when a `logger`
    is provided during initialization. Durations come from `time.perf_counter`, so sub-millisecond
    blocks such as a single engine update are resolved.

    Timing a block and reading the duration afterwards:
    >>> with timer() as block_timer:
    >>>     engine.ingest(event)
    >>> print(f"{block_timer.duration * 1e3:0.3f}ms")

    NOTE: the duration is in seconds.
    """

    __slots__ = ("logger", "name", "_duration", "start")

    def __init__(self, logger: Optional[Logger] = None, name: str = "Code Block") -> None:
        if logger is not None and not isinstance(logger, Logger):
            raise TypeError(f"logger must be of type logging.Logger, got {type(logger)}")

        self.logger = logger
        self.name = name
        self._duration: Optional[float] = None

        self.start: float = -1.0
        """-1 until the context block is entered.
        """

    def __enter__(self) -> "timer":
        self.start = time.perf_counter()
        return self

    def __exit__(self, *args: Any) -> None:
        # calculate the duration *first*
        self._duration = time.perf_counter() - self.start

        if self.start == -1:
            raise ValueError("Cannot use context-block exit method if context-block enter method has not been called!")
        if self.logger is not None:
            self.logger.info(f"{self.name} took {self._duration:5.2f}s")

    @property
    def duration(self) -> float:
        """Seconds between entering and exiting the context block."""
        if self._duration is None:
            raise ValueError("Cannot get duration if timer has not exited context block!")
        return self._duration


@dataclass
class LatencyMeter:
    """Accumulates durations of repeated blocks, e.g. one entry per engine update."""

    durations: List[float] = field(default_factory=list)

    def measure(self) -> timer:
        """Return a timer whose duration is recorded once its block exits."""
        return _RecordingTimer(self)

    def record(self, seconds: float) -> None:
        self.durations.append(seconds)

    def __len__(self) -> int:
        return len(self.durations)

    @property
    def mean_ms(self) -> float:
        """Mean duration in milliseconds, NaN when nothing was measured."""
        return float(np.mean(self.durations) * 1e3) if self.durations else float("nan")

    @property
    def median_s(self) -> float:
        return float(np.median(self.durations)) if self.durations else float("nan")


class _RecordingTimer(timer):
    __slots__ = ("meter",)

    def __init__(self, meter: LatencyMeter) -> None:
        super().__init__()
        self.meter = meter

    def __exit__(self, *args: Any) -> None:
        super().__exit__(*args)
        self.meter.record(self.duration)
