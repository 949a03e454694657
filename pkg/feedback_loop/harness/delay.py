from collections import defaultdict, deque
from typing import Deque, Dict, Iterator, List

from feedback_loop.core.types.feedback import FeedbackEvent


class DelayQueue:
    """Holds feedback events until their delivery step.

    An event generated at step `t` is due at exactly `t + delay`, and events due at the same step
    are delivered in the order they were pushed.
    """

    def __init__(self, delay: int = 0) -> None:
        if delay < 0:
            raise ValueError(f"`delay` must be >= 0, got {delay}.")
        self.delay = delay
        self._pending: Dict[int, Deque[FeedbackEvent]] = defaultdict(deque)
        self._size = 0

    def push(self, event: FeedbackEvent) -> int:
        """Enqueue `event` and return its delivery step."""
        due = event.step + self.delay
        self._pending[due].append(event)
        self._size += 1
        return due

    def pop_due(self, t: int) -> List[FeedbackEvent]:
        """Remove and return the events due at step `t`."""
        events = list(self._pending.pop(t, ()))
        self._size -= len(events)
        return events

    def drain(self) -> Iterator[FeedbackEvent]:
        """Deliver every remaining event in due order, e.g. once the horizon is reached."""
        for due in sorted(self._pending):
            yield from self.pop_due(due)

    def __len__(self) -> int:
        return self._size
