"""Run configuration shared by the CLI and the self-test harness."""
from __future__ import annotations

import os
from dataclasses import dataclass

from .errors import ConfigError
from .field_tower import DEFAULT_CAP, validate_q

TOL_RANGE = (1e-12, 1e-4)
FORMATS = ("csv", "json")
THREADS_ENV = "TORUS_HARMONICS_THREADS"


@dataclass(frozen=True)
class RunConfig:
    qs: tuple = (3, 5, 7)
    tolerance: float = 1e-8
    seed: int = 0
    fmt: str = "csv"
    output: str | None = None
    verbosity: int = 0
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        object.__setattr__(self, "qs", tuple(self.qs))
        if not self.qs:
            raise ConfigError("at least one q is required")
        for q in self.qs:
            validate_q(q, self.cap)
        if len(set(self.qs)) != len(self.qs):
            raise ConfigError(f"duplicate q in {list(self.qs)}")
        lo, hi = TOL_RANGE
        if not (lo <= self.tolerance <= hi):
            raise ConfigError(f"tolerance {self.tolerance:g} outside [{lo:g}, {hi:g}]")
        if self.fmt not in FORMATS:
            raise ConfigError(f"unknown format {self.fmt!r}")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")


def thread_count(environ=None) -> int:
    """Worker cap from ``TORUS_HARMONICS_THREADS`` (default 1)."""
    environ = os.environ if environ is None else environ
    raw = environ.get(THREADS_ENV, "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV}={raw!r} is not an integer") from None
    if n < 1:
        raise ConfigError(f"{THREADS_ENV} must be >= 1")
    return n
