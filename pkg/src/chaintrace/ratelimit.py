"""Sliding-window rate limiting with a fixed backoff sleep.

The governor is the one shared, synchronized object in the pipeline:
callers block in ``acquire`` until a permit is free. Time comes from an
injected clock so simulations and replay runs never actually sleep; the
default backoff is the 16 minutes the upstream platform quota demands.
"""

from __future__ import annotations

import threading
import time
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Mapping, Protocol

__all__ = [
    "Clock",
    "Permit",
    "RateLimitGovernor",
    "RateLimitPolicy",
    "SystemClock",
    "VirtualClock",
]

DEFAULT_BACKOFF_SECONDS = 16 * 60.0


class Clock(Protocol):
    def now(self) -> float: ...

    def sleep(self, seconds: float) -> None: ...


class SystemClock:
    def now(self) -> float:
        return time.monotonic()

    def sleep(self, seconds: float) -> None:
        time.sleep(seconds)


class VirtualClock:
    """Deterministic clock: ``sleep`` advances time instead of waiting."""

    def __init__(self, start: float = 0.0) -> None:
        self._now = start
        self._lock = threading.Lock()

    def now(self) -> float:
        with self._lock:
            return self._now

    def sleep(self, seconds: float) -> None:
        self.advance(seconds)

    def advance(self, seconds: float) -> None:
        if seconds < 0:
            raise ValueError("cannot advance backwards")
        with self._lock:
            self._now += seconds


@dataclass(frozen=True)
class RateLimitPolicy:
    """At most ``max_requests`` grants in any window of ``window`` seconds;
    exhausted callers sleep ``backoff`` seconds before retrying."""

    max_requests: int
    window: float
    backoff: float = DEFAULT_BACKOFF_SECONDS

    def __post_init__(self) -> None:
        if self.max_requests < 1:
            raise ValueError("max_requests must be >= 1")
        if self.window <= 0 or self.backoff <= 0:
            raise ValueError("window and backoff must be positive")


@dataclass(frozen=True)
class Permit:
    source: str
    granted_at: float


class RateLimitGovernor:
    """Per-source sliding-window limiter. Sources never interact."""

    def __init__(self, policies: Mapping[str, RateLimitPolicy], clock: Clock | None = None) -> None:
        self._policies = dict(policies)
        self._clock = clock if clock is not None else SystemClock()
        self._grants: dict[str, deque[float]] = defaultdict(deque)
        self._lock = threading.Lock()

    @property
    def clock(self) -> Clock:
        return self._clock

    def policy_for(self, source: str) -> RateLimitPolicy:
        try:
            return self._policies[source]
        except KeyError:
            raise KeyError(f"no rate-limit policy configured for source {source!r}") from None

    def acquire(self, source: str) -> Permit:
        """Block (on the injected clock) until a permit for ``source`` is free.

        Grants satisfy: in any half-open window (t - window, t], at most
        ``max_requests`` permits are granted.
        """
        policy = self.policy_for(source)
        while True:
            with self._lock:
                now = self._clock.now()
                grants = self._grants[source]
                cutoff = now - policy.window
                while grants and grants[0] <= cutoff:
                    grants.popleft()
                if len(grants) < policy.max_requests:
                    grants.append(now)
                    return Permit(source, now)
            self._clock.sleep(policy.backoff)
