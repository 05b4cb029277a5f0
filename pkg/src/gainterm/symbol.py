"""The oscillatory symbol

    a(x, xi) = |x|^g |xi|^g  int_{S^2_+} exp(-i (x.w)(xi.w)) cos(theta) dOmega(w)

by direct quadrature, by two-point stationary phase, and in closed form.

The closed form follows from the Gegenbauer integral
int_0^pi exp(i z cos(p) cos(q)) J0(z sin(p) sin(q)) sin(p) dp = 2 sin(z)/z:

    a(x, xi) = 2 pi L^(g-1) exp(-i x.xi/2) sin(L/2),    L = |x||xi|.

It is used as an oracle only; :func:`symbol_direct` never calls it.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from . import geometry
from .errors import PreconditionError, ResolutionError, ValidityError
from .partitions import Coarse, Zone, cone_bounds, region_classify
from .quadrature import gauss_legendre

LAMBDA_MIN = 10.0
NODE_SLACK = 32
_ROW_BLOCK = 64


@dataclass(frozen=True)
class SymbolEval:
    value: complex
    method: str
    lam: float
    theta0: float
    est_error: Optional[float] = None


def _pair(x, xi):
    x = geometry._nonzero(x, "x")
    xi = geometry._nonzero(xi, "xi")
    return x, xi, float(np.linalg.norm(x) * np.linalg.norm(xi)), geometry.angle(x, xi)


def node_floor(lam: float, theta0: float, c: float = 1.0) -> tuple[int, int]:
    """Minimum (n_theta, n_phi) for the theta-GL x trapezoid rule.

    The phase varies by about L across the hemisphere in theta and by
    L sin(theta0) in phi; both rules need roughly one node per radian of
    phase plus a fixed margin to reach ~1e-10.
    """
    n_t = int(math.ceil(c * lam)) + NODE_SLACK
    n_p = int(math.ceil(c * lam * math.sin(theta0))) + NODE_SLACK
    return n_t, n_p


def _hemisphere_phase_sum(x, xi, n_theta: int, n_phi: int) -> complex:
    b = geometry.frame(x)
    lam = float(np.linalg.norm(x) * np.linalg.norm(xi))
    w = b @ (xi / np.linalg.norm(xi))  # xi direction in the frame of x
    th, wt = gauss_legendre(0.0, math.pi / 2, n_theta)
    ct, st = np.cos(th), np.sin(th)
    phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
    cp, sp = np.cos(phi), np.sin(phi)
    # inplane = (xi_hat . e1) cos(phi) + (xi_hat . e2) sin(phi)
    inplane = w[0] * cp + w[1] * sp
    total = 0.0 + 0.0j
    m = th.size  # composite rules round up to whole panels
    for lo in range(0, m, _ROW_BLOCK):
        sl = slice(lo, min(lo + _ROW_BLOCK, m))
        sig = ct[sl, None] * (st[sl, None] * inplane[None, :] + w[2] * ct[sl, None])
        rows = np.exp(-1j * lam * sig).sum(axis=1)
        total += np.dot(wt[sl] * st[sl] * ct[sl], rows)
    return total * (2.0 * math.pi / n_phi)


def symbol_direct(x, xi, gamma: float, quad: Optional[tuple[int, int]] = None,
                  c: float = 1.0) -> SymbolEval:
    """a(x, xi) by Gauss-Legendre in theta times the trapezoid rule in phi.

    ``quad`` is (n_theta, n_phi); ``None`` uses the resolution floor.
    Requests below the floor raise :class:`ResolutionError`.
    """
    x, xi, lam, th0 = _pair(x, xi)
    need = node_floor(lam, th0, c)
    if quad is None:
        quad = need
    elif quad[0] < need[0] or quad[1] < need[1]:
        raise ResolutionError(
            f"L={lam:.4g} needs at least {need[0]}x{need[1]} nodes, got {quad[0]}x{quad[1]}",
            need)
    integral = _hemisphere_phase_sum(x, xi, int(quad[0]), int(quad[1]))
    return SymbolEval(lam ** gamma * integral, "quadrature", lam, th0, None)


def symbol_closed_form(x, xi, gamma: float) -> SymbolEval:
    x, xi, lam, th0 = _pair(x, xi)
    v = 2.0 * math.pi * lam ** (gamma - 1.0) * np.exp(-0.5j * float(x @ xi)) * math.sin(lam / 2)
    return SymbolEval(complex(v), "closed_form", lam, th0, 0.0)


def validity(lam: float, theta0: float) -> float:
    return lam * math.cos(theta0 / 2) ** 2 * math.sin(theta0 / 2) ** 2


def symbol_stationary(x, xi, gamma: float, lambda_min: float = LAMBDA_MIN,
                      convention: str = "computed") -> SymbolEval:
    """Two-critical-point leading term.

    ``convention="computed"`` builds each term from the Hessian at the
    critical point, (2 pi / L) |det H|^(-1/2) exp(i pi sgn(-H) / 4) cos(theta*),
    which gives  pi i L^(g-1) (e^{-i L s+} - e^{-i L s-}).
    ``convention="published"`` returns the published coefficients
    -2^(-3/2) i pi sin(t0/2) and 2^(-3/2) i pi cos(t0/2) verbatim.
    """
    x, xi, lam, th0 = _pair(x, xi)
    cp = geometry.critical_points(x, xi)
    if cp.degenerate:
        raise PreconditionError("x and xi are colinear; no isolated critical points")
    cond = validity(lam, th0)
    if cond < lambda_min:
        raise ValidityError(f"L cos^2 sin^2 = {cond:.3g} below {lambda_min}")
    est = lam ** (gamma - 1.0) / cond
    if convention == "published":
        k = 2.0 ** -1.5 * math.pi
        v = (np.exp(-1j * lam * cp.sigma_plus) * (-1j * k * math.sin(th0 / 2))
             + np.exp(-1j * lam * cp.sigma_minus) * (1j * k * math.cos(th0 / 2)))
        return SymbolEval(complex(v * lam ** (gamma - 1.0)), "stationary", lam, th0, est)
    if convention != "computed":
        raise ValueError(f"unknown convention {convention!r}")
    xh = x / np.linalg.norm(x)
    total = 0.0 + 0.0j
    for om, sig, hess in ((cp.omega_plus, cp.sigma_plus, cp.hess_plus),
                          (cp.omega_minus, cp.sigma_minus, cp.hess_minus)):
        ev = np.linalg.eigvalsh(-hess)
        sgn = int(np.sum(np.sign(ev)))
        amp = (2.0 * math.pi / lam) / math.sqrt(abs(float(np.prod(ev))))
        total += amp * np.exp(0.25j * math.pi * sgn) * float(xh @ om) * np.exp(-1j * lam * sig)
    return SymbolEval(complex(total * lam ** gamma), "stationary", lam, th0, est)


def symbol_compare(x, xi, gamma: float, convention: str = "computed",
                   quad: Optional[tuple[int, int]] = None):
    st = symbol_stationary(x, xi, gamma, convention=convention)
    q = symbol_direct(x, xi, gamma, quad)
    norm = max(abs(q.value), q.lam ** (gamma - 1.0))
    return q, st, abs(q.value - st.value) / norm


# -- region III ---------------------------------------------------------------

def _sample_zone3(rng: np.random.Generator, lam_max: float, z_max: int):
    while True:
        n = int(rng.integers(1, z_max + 1))
        z = n if rng.random() < 0.5 else -n
        lo, hi = cone_bounds(z)
        # stay in the core of the cone so z is the dominant index
        mid = 0.5 * (lo + hi)
        th0 = float(rng.uniform(mid - 0.25 * (hi - lo), mid + 0.25 * (hi - lo)))
        lam_hi = min(1024.0 * 4.0 ** n, lam_max)
        lam = float(math.exp(rng.uniform(math.log(64.0), math.log(lam_hi))))
        if lam <= 64.0 * 1.0001:
            continue
        nxi = float(math.exp(rng.uniform(math.log(8.0), math.log(lam / 8.0))))
        nx = lam / nxi
        d = rng.normal(size=3)
        d /= np.linalg.norm(d)
        e = rng.normal(size=3)
        e -= (e @ d) * d
        e /= np.linalg.norm(e)
        x = nx * d
        xi = nxi * (math.cos(th0) * d + math.sin(th0) * e)
        lab = region_classify(x, xi)
        if lab.coarse is Coarse.A and lab.zone is Zone.III:
            return x, xi


@lru_cache(maxsize=4096)
def _unit_integral(x: tuple, xi: tuple) -> complex:
    return symbol_direct(np.array(x), np.array(xi), 0.0).value


def region3_scan(sampler_seed: int, n: int, gamma: float, lam_max: float = 4096.0,
                 z_max: int = 3) -> list[dict]:
    """Sample n zone-III points (coarse label A) and record |a| sqrt(L)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(sampler_seed)
    rows = []
    for _ in range(n):
        x, xi = _sample_zone3(rng, lam_max, z_max)
        lam = float(np.linalg.norm(x) * np.linalg.norm(xi))
        a = lam ** gamma * _unit_integral(tuple(x), tuple(xi))
        rows.append({
            "lambda": lam,
            "theta0": geometry.angle(x, xi),
            "re_a": a.real,
            "im_a": a.imag,
            "abs_norm": abs(a) * math.sqrt(lam),
            "method": "quadrature",
        })
    return rows


def loglog_slope(xs, ys) -> float:
    lx = np.log(np.asarray(xs, dtype=float))
    ly = np.log(np.asarray(ys, dtype=float))
    keep = np.isfinite(ly)
    return float(np.polyfit(lx[keep], ly[keep], 1)[0])


CSV_COLUMNS = ("lambda", "theta0", "re_a", "im_a", "abs_norm", "method")


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})
    return buf.getvalue()
