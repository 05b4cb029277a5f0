"""Hemisphere product rules for integrals over S^2_+ = {theta in [0, pi/2]}.

Weights integrate against the surface element dOmega, so with integrand 1 they
sum to 2*pi. Two polar variables are offered:

* ``"mu"``: Gauss-Legendre in mu = cos(theta) on [0, 1]; dOmega = dmu dphi.
* ``"theta"``: Gauss-Legendre in theta on [0, pi/2] with sin(theta) folded in.

The theta rule converges geometrically for integrands that are smooth on the
closed hemisphere; the mu rule sees a sqrt(1 - mu^2) endpoint singularity and
is only used where the integrand varies slowly (collision integrals).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

_PANEL = 16


@lru_cache(maxsize=64)
def gauss_legendre(a: float, b: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """n-point rule on [a, b]; composite 16-point panels once n exceeds 256."""
    if n < 1:
        raise ValueError("need at least one node")
    if n <= 256:
        t, w = np.polynomial.legendre.leggauss(n)
        x = 0.5 * (a + b) + 0.5 * (b - a) * t
        x.flags.writeable = False
        w = 0.5 * (b - a) * w
        w.flags.writeable = False
        return x, w
    npan = -(-n // _PANEL)
    t, w = np.polynomial.legendre.leggauss(_PANEL)
    edges = np.linspace(a, b, npan + 1)
    lo, hi = edges[:-1, None], edges[1:, None]
    x = (0.5 * (lo + hi) + 0.5 * (hi - lo) * t).ravel()
    ww = (0.5 * (hi - lo) * w).ravel()
    x.flags.writeable = False
    ww.flags.writeable = False
    return x, ww


@dataclass(frozen=True)
class SphereQuadrature:
    """Product rule on the hemisphere: n_polar x n_azimuth nodes."""

    n_polar: int = 16
    n_azimuth: int = 16
    variable: str = "mu"

    def __post_init__(self):
        if self.n_polar < 1 or self.n_azimuth < 1:
            raise ValueError("node counts must be positive")
        if self.variable not in ("mu", "theta"):
            raise ValueError(f"unknown polar variable {self.variable!r}")

    @property
    def size(self) -> int:
        return self.n_polar * self.n_azimuth

    def polar(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(cos theta, sin theta, polar weight including the area Jacobian)."""
        if self.variable == "mu":
            mu, w = gauss_legendre(0.0, 1.0, self.n_polar)
            return np.asarray(mu), np.sqrt(1.0 - mu * mu), np.asarray(w)
        th, w = gauss_legendre(0.0, np.pi / 2, self.n_polar)
        return np.cos(th), np.sin(th), w * np.sin(th)

    def azimuth(self) -> tuple[np.ndarray, float]:
        phi = 2.0 * np.pi * np.arange(self.n_azimuth) / self.n_azimuth
        return phi, 2.0 * np.pi / self.n_azimuth

    def flat(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Flattened (cos theta, sin theta cos phi, sin theta sin phi, weight)."""
        c, s, wp = self.polar()
        phi, wa = self.azimuth()
        cos_t = np.repeat(c, self.n_azimuth)
        sx = np.outer(s, np.cos(phi)).ravel()
        sy = np.outer(s, np.sin(phi)).ravel()
        w = np.repeat(wp, self.n_azimuth) * wa
        return cos_t, sx, sy, w

    def integrate(self, fn) -> complex:
        """Integrate fn(theta, phi) (vectorized) over S^2_+ w.r.t. dOmega."""
        c, _, wp = self.polar()
        phi, wa = self.azimuth()
        th = np.arccos(np.clip(c, -1.0, 1.0))
        vals = np.broadcast_to(fn(th[:, None], phi[None, :]), (th.size, phi.size))
        return complex(np.sum(wp[:, None] * vals) * wa)
