from dataclasses import dataclass


@dataclass
class VarianceTracker:
    """Running mean and population variance of the feedback stream, updated in a single pass
    with Welford's recurrence.
    """

    count: int = 0
    mean: float = 0.0
    m2: float = 0.0
    """Sum of squared deviations from the running mean
    """

    def update(self, value: float) -> "VarianceTracker":
        """Fold one value into the running statistics and return the tracker."""
        self.count += 1
        delta = value - self.mean
        self.mean += delta / self.count
        self.m2 += delta * (value - self.mean)
        return self

    @property
    def variance(self) -> float:
        """Population variance, 0 before any value is seen."""
        return self.m2 / self.count if self.count > 0 else 0.0


def observe_feedback(tracker: VarianceTracker, feedback: float) -> VarianceTracker:
    """Fold `feedback` into `tracker`."""
    return tracker.update(float(feedback))
