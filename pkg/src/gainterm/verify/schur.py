"""Schur test for the bounding kernels of the low-frequency and region-III pieces.

Each bound |K(x, xi)| <= k(|x|, |xi|) Z(angle) is zonal. Spherical harmonics
diagonalize the angular factor (Funk-Hecke) with eigenvalues bounded by the
l = 0 one, lambda_0 = 2 pi int Z(t) sin t dt, so on L^2(R^3) the operator norm
is lambda_0 times the norm of the radial operator with measure 4 pi r^2 dr.
The Schur integrals factor the same way. Both sides are therefore computed
for the radial operator on a log-spaced grid, where the discrete Schur test
is exact: sigma_max <= sqrt(omega beta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..config import Config
from ..partitions import Coarse, Zone, coarse_label, zeta_index, zone_label
from ..quadrature import gauss_legendre
from .common import new_report, timed
from .report import Check, EstimateReport, check_le

POWER_TOL = 1e-13
POWER_MAX_ITER = 20000


@dataclass(frozen=True)
class KernelChoice:
    name: str
    kernel: Callable  # k(r, s) on 2-D arrays
    p: Callable  # weight on the x side
    q: Callable  # weight on the xi side
    x_range: tuple
    xi_range: tuple
    angular: float = 1.0  # lambda_0 of the angular factor


def _indicator(mask):
    return mask.astype(float)


def _angular_mass(z: int) -> float:
    """2 pi int_0^pi zeta_z(t) sin t dt."""
    t, w = gauss_legendre(0.0, math.pi, 2048)
    return float(2.0 * math.pi * np.sum(w * np.sin(t) * zeta_index(z, t)))


def _region3_mask(r, s, z):
    out = np.zeros(np.broadcast_shapes(r.shape, s.shape), dtype=bool)
    rr, ss = np.broadcast_arrays(r, s)
    for idx in np.ndindex(out.shape):
        a, b = float(rr[idx]), float(ss[idx])
        if coarse_label(a, b) is Coarse.A and zone_label(a, b, z) is Zone.III:
            out[idx] = True
    return out


def kernel_choice(name: str) -> KernelChoice:
    """regionC1, regionC2, region3(z) or zero, with the test pairs used for them."""
    if name == "regionC1":
        return KernelChoice(
            name, lambda r, s: _indicator((r > 8) & (r * s < 512)),
            lambda r: 1.0 / (1.0 + r), lambda s: s ** -2.0,
            (8.0, 8.0 * 2 ** 10), (2.0 ** -6, 64.0))
    if name == "regionC2":
        return KernelChoice(
            name, lambda r, s: _indicator((r < 16) & (r * s < 512)),
            lambda r: 1.0 / r, lambda s: (1.0 + s) ** -2.0,
            (2.0 ** -6, 16.0), (2.0 ** -6, 512.0 * 2 ** 6))
    if name.startswith("region3"):
        z = int(name[name.index("(") + 1:name.index(")")])
        if z == 0:
            raise ValueError("region III needs z != 0")
        top = 1024.0 * 4.0 ** abs(z) / 8.0
        return KernelChoice(
            name, lambda r, s: _indicator(_region3_mask(r, s, z)) * (r * s) ** -0.5,
            lambda r: r ** -1.5, lambda s: s ** -1.5,
            (8.0, top), (8.0, top), _angular_mass(z))
    if name == "zero":
        return KernelChoice(name, lambda r, s: np.zeros(np.broadcast_shapes(r.shape, s.shape)),
                            lambda r: np.ones_like(r), lambda s: np.ones_like(s),
                            (1.0, 2.0), (1.0, 2.0))
    raise ValueError(f"unknown kernel choice {name!r}")


def _log_nodes(lo: float, hi: float, n: int):
    e = np.linspace(math.log(lo), math.log(hi), n + 1)
    mid = 0.5 * (e[1:] + e[:-1])
    r = np.exp(mid)
    w = 4.0 * math.pi * r ** 3 * np.diff(e)  # 4 pi r^2 dr with dr = r dlog r
    return r, w


def _matvec(A, x):
    # einsum without BLAS keeps the summation order fixed across thread counts
    return np.einsum("ij,j->i", A, x, optimize=False)


def power_iteration(A: np.ndarray, seed: int = 0):
    """Largest singular value of A; returns (sigma, iterations, converged)."""
    m = A.shape[1]
    if not np.any(A):
        return 0.0, 0, True
    x = np.random.default_rng(seed).uniform(0.5, 1.5, m)
    x /= np.linalg.norm(x)
    At = np.ascontiguousarray(A.T)
    lam = 0.0
    for it in range(1, POWER_MAX_ITER + 1):
        y = _matvec(At, _matvec(A, x))
        new = float(np.linalg.norm(y))
        x = y / new
        if abs(new - lam) <= POWER_TOL * new:
            return math.sqrt(new), it, True
        lam = new
    return math.sqrt(lam), POWER_MAX_ITER, False


def schur_numbers(choice: KernelChoice, nodes: int, seed: int = 0) -> dict:
    r, wr = _log_nodes(*choice.x_range, nodes)
    s, ws = _log_nodes(*choice.xi_range, nodes)
    K = choice.angular * choice.kernel(r[:, None], s[None, :])
    p, q = choice.p(r), choice.q(s)
    row = _matvec(K, q * ws) / p
    col = _matvec(np.ascontiguousarray(K.T), p * wr) / q
    omega, beta = float(row.max()), float(col.max())
    A = np.sqrt(wr)[:, None] * K * np.sqrt(ws)[None, :]
    sigma, iters, conv = power_iteration(A, seed)
    return {"nodes": nodes, "omega": omega, "beta": beta, "bound": math.sqrt(omega * beta),
            "sigma": sigma, "iterations": iters, "converged": conv}


def schur_suite(cfg: Config, kernel_choices=("regionC1", "regionC2", "region3(1)", "region3(-1)",
                                             "region3(2)", "zero"),
                nodes: int | None = None) -> EstimateReport:
    nodes = cfg.suite.schur_nodes if nodes is None else nodes
    tol = cfg.tolerance.schur
    rep = new_report("schur", cfg)
    rep.columns = ("kernel", "nodes", "omega", "beta", "bound", "sigma", "iterations", "converged")
    for name in kernel_choices:
        choice = kernel_choice(name)
        with timed(rep, name):
            levels = [schur_numbers(choice, m, cfg.run.seed) for m in (nodes, 2 * nodes)]
        for lv in levels:
            rep.trials.append({"kernel": name, **lv})
            rep.checks.append(Check(f"schur[{name},n={lv['nodes']}]",
                                    lv["sigma"] <= lv["bound"] * (1 + tol) and lv["converged"],
                                    lv["sigma"], lv["bound"] * (1 + tol),
                                    "power-iteration sigma <= sqrt(omega beta)"))
        a, b = levels
        delta = abs(a["sigma"] - b["sigma"]) / b["sigma"] if b["sigma"] else 0.0
        rep.checks.append(check_le(f"refinement[{name}]", delta, cfg.tolerance.refinement,
                                   "sigma change under node doubling"))
        rep.aggregate[name] = {"angular_mass": choice.angular, "sigma": b["sigma"],
                               "bound": b["bound"], "ratio": b["sigma"] / b["bound"] if b["bound"] else 0.0,
                               "refinement_delta": delta}
    return rep
