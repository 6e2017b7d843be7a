"""
SIL — Search Limits
Soft memory cap and deterministic fan-out for exhaustive sweeps.

The cap is read from SIL_MAX_MEM (MiB). Sweeps call ``MemoryGuard.check()``
periodically; past the cap a ``BudgetExhausted`` is raised, which checkers
turn into an INCONCLUSIVE verdict.
"""

import logging
import os
import resource
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Optional

logger = logging.getLogger(__name__)

ENV_MAX_MEM = "SIL_MAX_MEM"


class BudgetExhausted(Exception):
    """Raised when a search passes the configured memory cap."""
    pass


def _rss_mib() -> float:
    rss = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
    # ru_maxrss is bytes on macOS, KiB elsewhere
    if sys.platform == "darwin":
        return rss / (1024 * 1024)
    return rss / 1024


class MemoryGuard:
    """Checks resident memory against a soft cap every ``interval`` ticks."""

    def __init__(self, max_mib: Optional[float] = None, interval: int = 512):
        self.max_mib = max_mib
        self.interval = interval
        self._ticks = 0

    @classmethod
    def from_env(cls, fallback: Optional[float] = None) -> "MemoryGuard":
        raw = os.environ.get(ENV_MAX_MEM)
        if raw is None or raw.strip() == "":
            return cls(fallback)
        try:
            return cls(float(raw))
        except ValueError:
            logger.warning("ignoring non-numeric %s=%r", ENV_MAX_MEM, raw)
            return cls(fallback)

    def check(self) -> None:
        if self.max_mib is None:
            return
        self._ticks += 1
        if self._ticks % self.interval:
            return
        used = _rss_mib()
        if used > self.max_mib:
            raise BudgetExhausted(f"memory {used:.0f} MiB exceeds cap {self.max_mib:.0f} MiB")

    def __repr__(self) -> str:
        return f"<MemoryGuard max_mib={self.max_mib}>"


_guard = MemoryGuard.from_env()


def guard() -> MemoryGuard:
    return _guard


def set_guard(new_guard: MemoryGuard) -> None:
    global _guard
    _guard = new_guard


def ordered_map(fn: Callable, items: Iterable, jobs: int = 1) -> list:
    """Map ``fn`` over ``items``; results keep input order for any ``jobs``."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))
