"""Verification suites. Each returns an :class:`EstimateReport`."""

from __future__ import annotations

from typing import Callable, Optional

from ..config import Config
from .basic import geometry_suite, partition_suite
from .estimates import estimate_suite
from .identities import identity_suite, oracle_suite
from .report import Check, EstimateReport, emit_report, emit_timings, load_report
from .schur import schur_suite
from .symbolic import region3_suite, stationary_decay_suite

# name -> runner(cfg, trials); trials overrides the suite's sample count when it has one
SUITES: dict[str, Callable[[Config, Optional[int]], EstimateReport]] = {
    "partition": lambda cfg, trials=None: partition_suite(cfg),
    "geometry": lambda cfg, trials=None: geometry_suite(cfg, n_trials=trials),
    "stationary": lambda cfg, trials=None: stationary_decay_suite(cfg),
    "identity": lambda cfg, trials=None: identity_suite(cfg, n_trials=trials),
    "oracle": lambda cfg, trials=None: oracle_suite(cfg, n_points=trials),
    "estimate": lambda cfg, trials=None: estimate_suite(cfg, n_trials=trials),
    "region3": lambda cfg, trials=None: region3_suite(cfg, n=trials),
    "schur": lambda cfg, trials=None: schur_suite(cfg),
}


def run_suite(name: str, cfg: Config, trials: Optional[int] = None) -> EstimateReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return SUITES[name](cfg, trials)


__all__ = ["Check", "EstimateReport", "SUITES", "emit_report", "emit_timings", "estimate_suite",
           "geometry_suite", "identity_suite", "load_report", "oracle_suite", "partition_suite",
           "region3_suite", "run_suite", "schur_suite", "stationary_decay_suite"]
