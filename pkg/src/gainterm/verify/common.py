"""Shared pieces of the verification suites: report metadata and the random
test families."""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .. import __version__
from ..analytic import AnalyticFn
from ..collision import KernelSpec, QuadConfig
from ..config import Config, config_hash
from ..partitions import set_ramp
from ..quadrature import SphereQuadrature
from .report import SCHEMA, EstimateReport

EXPONENTS = ((1.0, 2.0), (2.0, 1.0), (4.0 / 3.0, 4.0 / 3.0))
GAMMAS = (0.0, 0.5, 1.0)


def new_report(suite: str, cfg: Config, seed: Optional[int] = None, **extra) -> EstimateReport:
    set_ramp(cfg.run.ramp)
    config = cfg.as_dict()
    del config["run"]["output_dir"]  # reports must not depend on where they are written
    meta = {"schema": SCHEMA, "suite": suite, "seed": cfg.run.seed if seed is None else seed,
            "config_hash": config_hash(cfg), "config": config,
            "version": __version__}
    meta.update(extra)
    return EstimateReport(suite, meta)


@contextmanager
def timed(report: EstimateReport, key: str):
    t0 = time.perf_counter()
    yield
    report.timings[key] = report.timings.get(key, 0.0) + time.perf_counter() - t0


def quad_config(cfg: Config, vstar_grid=None, method: Optional[str] = None) -> QuadConfig:
    c = cfg.collision
    return QuadConfig(SphereQuadrature(c.n_polar, c.n_azimuth), vstar_grid,
                      method or c.method, c.guard, c.prune)


@dataclass(frozen=True)
class TrialSpec:
    """One (f, g, h, p, q, gamma) cell of the estimate sweep."""

    f: AnalyticFn
    g: AnalyticFn
    h: AnalyticFn
    p: float
    q: float
    gamma: float
    kernel: KernelSpec
    levels: tuple
    seed: int

    def __post_init__(self):
        if abs(1.0 / self.p + 1.0 / self.q - 1.5) > 1e-12:
            raise ValueError(f"1/p + 1/q must be 3/2, got p={self.p}, q={self.q}")
        if not (1.0 <= self.p <= 2.0 and 1.0 <= self.q <= 2.0):
            raise ValueError("p and q must lie in [1, 2]")
        if not 0.0 <= self.gamma < 1.5:
            raise ValueError("gamma must lie in [0, 3/2)")

    @property
    def R(self) -> float:
        """Lebesgue exponent with 1/2 = gamma/3 + 1/R."""
        return 1.0 / (0.5 - self.gamma / 3.0)


def lebesgue_R(gamma: float) -> float:
    return 1.0 / (0.5 - gamma / 3.0)


def random_mixture(rng: np.random.Generator, center: float = 1.0,
                   widths=(0.6, 1.0), amps=(0.5, 1.5), max_atoms: int = 3,
                   modulate_prob: float = 0.0, k_max: float = 1.0) -> AnalyticFn:
    """Positive Gaussian mixture; optionally one component is modulated."""
    n = int(rng.integers(1, max_atoms + 1))
    parts = []
    for i in range(n):
        c = rng.uniform(-center, center, 3)
        w = float(rng.uniform(*widths))
        a = float(rng.uniform(*amps))
        atom = AnalyticFn.gaussian(c, w, a)
        if i == 0 and rng.random() < modulate_prob:
            k = rng.normal(size=3)
            k *= float(rng.uniform(0.0, k_max)) / np.linalg.norm(k)
            atom = atom.modulate(k)
        parts.append(atom)
    fn = parts[0]
    for atom in parts[1:]:
        fn = fn + atom
    return fn


def mean_zero(rng: np.random.Generator, center: float = 1.0,
              widths=(0.8, 1.2)) -> AnalyticFn:
    """Difference of two Gaussians with equal mass, so the integral vanishes."""
    c1, c2 = rng.uniform(-center, center, (2, 3))
    w1, w2 = (float(x) for x in rng.uniform(*widths, 2))
    a = float(rng.uniform(0.5, 1.5))
    return AnalyticFn.gaussian(c1, w1, a) - AnalyticFn.gaussian(c2, w2, a * (w1 / w2) ** 3)
