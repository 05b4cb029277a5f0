"""Numerical verification of regularizing estimates for the gain term of the
Boltzmann collision operator with hard-potential kernels."""

__version__ = "0.1.0"

from .analytic import AnalyticFn, parse  # noqa: E402
from .collision import (KernelSpec, QuadConfig, conjugated_radon, qplus_eval,  # noqa: E402
                        qplus_multi, qplus_oracle, radon_eval, weak_form_rhs)
from .config import Config, load_config  # noqa: E402
from .geometry import critical_points, pre_collision  # noqa: E402
from .grid import GridFunction, NormSpec, VelocityGrid, norm, sample_on_grid  # noqa: E402
from .partitions import region_classify  # noqa: E402
from .symbol import symbol_closed_form, symbol_direct, symbol_stationary  # noqa: E402

__all__ = [
    "AnalyticFn", "Config", "GridFunction", "KernelSpec", "NormSpec", "QuadConfig",
    "VelocityGrid", "conjugated_radon", "critical_points", "load_config", "norm", "parse",
    "pre_collision", "qplus_eval", "qplus_multi", "qplus_oracle", "radon_eval",
    "region_classify", "sample_on_grid", "symbol_closed_form", "symbol_direct",
    "symbol_stationary", "weak_form_rhs",
]
