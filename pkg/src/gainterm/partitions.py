"""Smooth dyadic partitions of unity, the small/large velocity cutoff, angular
cones and the phase-space region classifier.

One smooth step is used everywhere: ``psi(r) = 1`` for ``r <= 8``, ``0`` for
``r >= 16``, with a C-infinity ramp in between. Then

* ``rho(r) = psi(r) - psi(2r)`` is supported in (4, 16) and telescopes,
* the small-velocity cutoff ``s(r) = sum_{k<=0} rho(2^-k r)`` equals ``psi``,
* the angular bump ``zeta(t) = psi_a(t) - psi_a(2t)`` with
  ``psi_a(t) = psi(32 t / pi)`` is supported in (pi/8, pi/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError

LOWER_KNOT = 8.0
UPPER_KNOT = 16.0
RAMPS = ("exp", "exp2")

_ramp = "exp"


def set_ramp(name: str) -> None:
    """Choose the C-infinity ramp profile ('exp': e^{-1/t}, 'exp2': e^{-1/t^2})."""
    global _ramp
    if name not in RAMPS:
        raise ValueError(f"unknown ramp {name!r}; choose from {RAMPS}")
    _ramp = name


def get_ramp() -> str:
    return _ramp


def _smooth_zero(t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t)
    pos = t > 0
    if _ramp == "exp":
        out[pos] = np.exp(-1.0 / t[pos])
    else:
        out[pos] = np.exp(-1.0 / t[pos] ** 2)
    return out


def smooth_step(t) -> np.ndarray:
    """0 for t <= 0, 1 for t >= 1, C-infinity in between."""
    t = np.asarray(t, dtype=float)
    a = _smooth_zero(t)
    b = _smooth_zero(1.0 - t)
    with np.errstate(invalid="ignore"):
        out = np.where(a + b > 0, a / np.where(a + b > 0, a + b, 1.0), 0.0)
    return out


def psi(r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    return smooth_step((UPPER_KNOT - r) / (UPPER_KNOT - LOWER_KNOT))


def rho(r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    return psi(r) - psi(2.0 * r)


def s_cut(r) -> np.ndarray:
    """Small relative velocity cutoff; equals 1 on [0, 8] and 0 on [16, inf)."""
    return psi(r)


def s_bar(r) -> np.ndarray:
    return 1.0 - psi(r)


def radial_partition(kind: str, k: int, r):
    """Evaluate rho(2^-k r), chi_k (same function of |.|), s or s-bar."""
    arr = np.asarray(r, dtype=float)
    if np.any(arr < 0):
        raise DomainError("radius must be non-negative")
    if kind in ("rho", "chi_k"):
        out = rho(arr * 2.0 ** (-k))
    elif kind == "s_cut":
        out = s_cut(arr)
    elif kind == "s_bar":
        out = s_bar(arr)
    else:
        raise ValueError(f"unknown partition kind {kind!r}")
    return float(out) if np.ndim(out) == 0 else out


# -- angular ------------------------------------------------------------------

def _psi_angle(t):
    return psi(np.asarray(t, dtype=float) * (32.0 / math.pi))


def zeta(t):
    t = np.asarray(t, dtype=float)
    return _psi_angle(t) - _psi_angle(2.0 * t)


def zeta_index(z: int, theta0):
    """zeta_z evaluated at the angle theta0 in (0, pi)."""
    t = np.asarray(theta0, dtype=float)
    if z == 0:
        half = np.minimum(t, math.pi - t)
        return 1.0 - _psi_angle(2.0 * half)
    if z > 0:
        return zeta(2.0 ** z * t)
    return zeta(2.0 ** (-z) * (math.pi - t))


def _theta0(x, xi) -> float:
    x = np.asarray(x, dtype=float)
    xi = np.asarray(xi, dtype=float)
    if not np.any(x) or not np.any(xi):
        raise DomainError("x and xi must be nonzero")
    return float(np.arctan2(np.linalg.norm(np.cross(x, xi)), x @ xi))


def angular_partition(z: int, x, xi) -> float:
    return float(zeta_index(z, _theta0(x, xi)))


def cone_bounds(z: int) -> tuple[float, float]:
    """Open interval of angles carrying zeta_z."""
    if z == 0:
        return math.pi / 8, math.pi - math.pi / 8
    n = abs(z)
    lo, hi = math.pi / 2 ** (n + 3), math.pi / 2 ** (n + 1)
    return (lo, hi) if z > 0 else (math.pi - hi, math.pi - lo)


def dominant_cone(theta0: float) -> int:
    """argmax_z zeta_z(theta0); ties go to the smaller |z|, then to z > 0."""
    if not 0.0 < theta0 < math.pi:
        raise DomainError("angle must lie in (0, pi)")
    m = min(theta0, math.pi - theta0)
    # zeta_n is nonzero only when pi/2^(n+3) < m < pi/2^(n+1)
    top = max(1, int(math.ceil(math.log2(math.pi / m))) + 1)
    cands = [0] + [s * n for n in range(1, top + 1) for s in (1, -1)]
    vals = [float(zeta_index(z, theta0)) for z in cands]
    best = max(vals)
    for z, v in zip(cands, vals):
        if v == best:
            return z
    raise AssertionError("unreachable")


# -- region classifier --------------------------------------------------------

class Coarse(str, Enum):
    A = "A"
    B1 = "B1"
    B2 = "B2"
    C1 = "C1"
    C2 = "C2"


class Zone(str, Enum):
    I = "I"      # noqa: E741
    II = "II"
    III = "III"


@dataclass(frozen=True)
class RegionLabel:
    coarse: Coarse
    cone: int | None
    zone: Zone | None


def coarse_label(nx: float, nxi: float) -> Coarse:
    lam = nx * nxi
    if nx > 8 and nxi > 8:
        return Coarse.A
    if lam > 64 and nx > 8 and nxi < 16:
        return Coarse.B1
    if lam > 64 and nx < 16:
        return Coarse.B2
    if lam < 512 and nx > 8:
        return Coarse.C1
    if lam < 512 and nx < 16:
        return Coarse.C2
    raise AssertionError(f"uncovered point |x|={nx}, |xi|={nxi}")


def zone_label(nx: float, nxi: float, z: int) -> Zone:
    if z == 0:
        return Zone.I
    e = 2.0 ** abs(z)
    lam = nx * nxi
    if nx > 8 * e and nxi > 8 * e:
        return Zone.I
    if lam > 64 * e * e and (8 < nxi < 32 * e or 8 < nx < 32 * e):
        return Zone.II
    if 64 < lam < 1024 * e * e:
        return Zone.III
    raise AssertionError(f"uncovered zone |x|={nx}, |xi|={nxi}, z={z}")


def region_classify(x, xi) -> RegionLabel:
    """Coarse support label, dominant cone and (for label A) zone I/II/III.

    Overlapping supports resolve by first match in the order A, B1, B2, C1, C2
    and I, II, III. Colinear pairs have no cone (theta0 in {0, pi}).
    """
    th0 = _theta0(x, xi)
    nx = float(np.linalg.norm(x))
    nxi = float(np.linalg.norm(xi))
    coarse = coarse_label(nx, nxi)
    if not 0.0 < th0 < math.pi:
        return RegionLabel(coarse, None, None)
    z = dominant_cone(th0)
    zone = zone_label(nx, nxi, z) if coarse is Coarse.A else None
    return RegionLabel(coarse, z, zone)
