"""Run configuration.

File format: INI (``configparser``, no interpolation). Sections mirror the
dataclasses below; tuple-valued keys are comma-separated::

    [grid]
    n = 16
    L = 8.0

    [run]
    seed = 12345

Environment variables ``GAINTERM_<SECTION>_<KEY>`` override the file, which
overrides the defaults. Unknown sections or keys are rejected.
"""

from __future__ import annotations

import configparser
import dataclasses
import hashlib
import math
import os
from dataclasses import dataclass, field, fields
from typing import Mapping, Optional

from .errors import ConfigError
from .partitions import RAMPS

ENV_PREFIX = "GAINTERM_"


@dataclass(frozen=True)
class GridConfig:
    n: int = 16
    L: float = 8.0
    refine_n: int = 24  # second level of the 16 -> 24 refinement checks
    norm_n: int = 64  # fine grid for input-side (denominator) norms
    sweep_L: float = 10.0


@dataclass(frozen=True)
class SymbolConfig:
    node_factor: float = 1.0
    lambda_min: float = 10.0
    convention: str = "computed"
    theta0s: tuple = (math.pi / 3, math.pi / 2)
    lambdas: tuple = (100.0, 1000.0, 10000.0)
    gammas: tuple = (0.0, 1.0)


@dataclass(frozen=True)
class CollisionConfig:
    n_polar: int = 16
    n_azimuth: int = 16
    method: str = "auto"
    guard: float = 1e-10
    prune: float = 1e-22
    oracle_vstar_n: int = 32


@dataclass(frozen=True)
class ToleranceConfig:
    partition: float = 1e-10
    cutoff: float = 1e-12
    gradient: float = 1e-9
    hessian: float = 1e-6
    involution: float = 1e-12
    colinear: float = 1e-8
    closed_form: float = 1e-8
    slope_lo: float = -1.3
    slope_hi: float = -0.7
    mass: float = 1e-4
    weak_form: float = 1e-3
    split: float = 1e-10
    galilean: float = 1e-10
    scaling: float = 1e-3
    oracle: float = 1e-3
    dilation: float = 0.05
    refinement: float = 0.10
    region3_slope: float = 0.1
    schur: float = 1e-6


@dataclass(frozen=True)
class SuiteConfig:
    geometry_trials: int = 1000
    involution_samples: int = 10000
    identity_trials: int = 10
    mass_method: str = "direct"
    oracle_points: int = 20
    estimate_trials: int = 50
    dilation_pairs: int = 2
    region3_points: int = 500
    region3_gammas: tuple = (0.0, 1.0)
    schur_nodes: int = 160


@dataclass(frozen=True)
class RunConfig:
    seed: int = 12345
    output_dir: str = "reports"
    ramp: str = "exp"


@dataclass(frozen=True)
class Config:
    grid: GridConfig = field(default_factory=GridConfig)
    symbol: SymbolConfig = field(default_factory=SymbolConfig)
    collision: CollisionConfig = field(default_factory=CollisionConfig)
    tolerance: ToleranceConfig = field(default_factory=ToleranceConfig)
    suite: SuiteConfig = field(default_factory=SuiteConfig)
    run: RunConfig = field(default_factory=RunConfig)

    def replace(self, **sections) -> "Config":
        """Copy with ``section={"key": value}`` updates, validated."""
        new = {}
        for name, upd in sections.items():
            new[name] = dataclasses.replace(getattr(self, name), **upd)
        cfg = dataclasses.replace(self, **new)
        validate(cfg)
        return cfg

    def as_dict(self) -> dict:
        return {s.name: {f.name: _plain(getattr(getattr(self, s.name), f.name))
                         for f in fields(getattr(self, s.name))}
                for s in fields(self)}


SECTIONS = tuple(f.name for f in fields(Config))


def _plain(v):
    return list(v) if isinstance(v, tuple) else v


def _is_pow2(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def _coerce(section: str, key: str, raw: str, default):
    path = f"{section}.{key}"
    try:
        if isinstance(default, bool):
            return raw.strip().lower() in ("1", "true", "yes", "on")
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
        if isinstance(default, tuple):
            return tuple(float(x) for x in raw.split(",") if x.strip())
        return raw.strip()
    except ValueError as exc:
        raise ConfigError(path, f"cannot parse {raw!r}: {exc}") from None


def validate(cfg: Config) -> None:
    g = cfg.grid
    if not _is_pow2(g.n):
        raise ConfigError("grid.n", f"must be a power of two, got {g.n}")
    if not _is_pow2(g.norm_n):
        raise ConfigError("grid.norm_n", f"must be a power of two, got {g.norm_n}")
    if g.refine_n < 8 or g.refine_n % 2:
        raise ConfigError("grid.refine_n", f"must be even and >= 8, got {g.refine_n}")
    for key in ("L", "sweep_L"):
        if not getattr(g, key) > 0:
            raise ConfigError(f"grid.{key}", "must be positive")
    for f in fields(cfg.tolerance):
        v = getattr(cfg.tolerance, f.name)
        if f.name.startswith("slope_"):
            continue
        if not v > 0:
            raise ConfigError(f"tolerance.{f.name}", f"must be positive, got {v}")
    if cfg.tolerance.slope_lo >= cfg.tolerance.slope_hi:
        raise ConfigError("tolerance.slope_lo", "must be below slope_hi")
    if cfg.run.ramp not in RAMPS:
        raise ConfigError("run.ramp", f"must be one of {RAMPS}")
    if cfg.collision.method not in ("direct", "sphere", "auto"):
        raise ConfigError("collision.method", "must be direct, sphere or auto")
    if cfg.suite.mass_method not in ("direct", "sphere", "auto"):
        raise ConfigError("suite.mass_method", "must be direct, sphere or auto")
    if cfg.symbol.convention not in ("computed", "published"):
        raise ConfigError("symbol.convention", "must be computed or published")
    if not cfg.collision.guard > 0 or not cfg.collision.prune > 0:
        raise ConfigError("collision.guard", "guard and prune must be positive")
    for f in fields(cfg.suite):
        v = getattr(cfg.suite, f.name)
        if isinstance(v, int) and not isinstance(v, bool) and v < 1:
            raise ConfigError(f"suite.{f.name}", "must be >= 1")


def _apply(cfg: Config, updates: dict[str, dict[str, str]]) -> Config:
    new = {}
    for sec, kv in updates.items():
        if sec not in SECTIONS:
            raise ConfigError(sec, "unknown section")
        obj = getattr(cfg, sec)
        names = {f.name.lower(): f.name for f in fields(obj)}
        upd = {}
        for key, raw in kv.items():
            if key.lower() not in names:
                raise ConfigError(f"{sec}.{key}", "unknown key")
            name = names[key.lower()]
            upd[name] = _coerce(sec, name, raw, getattr(obj, name))
        new[sec] = dataclasses.replace(obj, **upd)
    return dataclasses.replace(cfg, **new)


def _env_updates(env: Mapping[str, str]) -> dict[str, dict[str, str]]:
    out: dict[str, dict[str, str]] = {}
    for var, raw in sorted(env.items()):
        if not var.startswith(ENV_PREFIX):
            continue
        rest = var[len(ENV_PREFIX):].lower()
        sec = next((s for s in SECTIONS if rest.startswith(s + "_")), None)
        if sec is None:
            raise ConfigError(var, "environment override names no known section")
        out.setdefault(sec, {})[rest[len(sec) + 1:]] = raw
    return out


def parse_ini(text: str) -> dict[str, dict[str, str]]:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError("<file>", f"parse failure: {exc}") from None
    return {s: dict(cp[s]) for s in cp.sections()}


def load_config(path: Optional[str] = None,
                env_overrides: Optional[Mapping[str, str]] = None) -> Config:
    """Defaults, then the INI file at ``path``, then GAINTERM_* variables.

    ``env_overrides=None`` reads ``os.environ``; pass ``{}`` to ignore it.
    """
    cfg = Config()
    if path is not None:
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(str(path), f"cannot read: {exc}") from None
        cfg = _apply(cfg, parse_ini(text))
    env = os.environ if env_overrides is None else env_overrides
    cfg = _apply(cfg, _env_updates(env))
    validate(cfg)
    return cfg


def _fmt(v) -> str:
    if isinstance(v, tuple):
        return ",".join(repr(float(x)) for x in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def to_ini(cfg: Config) -> str:
    lines = []
    for sec in SECTIONS:
        obj = getattr(cfg, sec)
        lines.append(f"[{sec}]")
        lines += [f"{f.name} = {_fmt(getattr(obj, f.name))}" for f in fields(obj)]
        lines.append("")
    return "\n".join(lines)


def from_ini(text: str) -> Config:
    cfg = _apply(Config(), parse_ini(text))
    validate(cfg)
    return cfg


def config_hash(cfg: Config) -> str:
    """Hash of everything that can change results; the output directory is excluded."""
    cfg = dataclasses.replace(cfg, run=dataclasses.replace(cfg.run, output_dir=RunConfig.output_dir))
    return hashlib.sha256(to_ini(cfg).encode()).hexdigest()[:16]
