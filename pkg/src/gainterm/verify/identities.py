"""Exact identities of the gain operator and the independent point oracle."""

from __future__ import annotations

import math
import time

import numpy as np

from ..analytic import AnalyticFn
from ..collision import KernelSpec, qplus_multi, qplus_oracle, weak_form_rhs
from ..config import Config
from ..grid import VelocityGrid
from .common import GAMMAS, new_report, quad_config, random_mixture, timed
from .report import Check, EstimateReport, check_le

# identity checks run on the n=16, L=8 lattice (spacing 1): widths >= 0.8 keep the
# midpoint-rule aliasing near e^{-2 pi^2 w^2} ~ 3e-6, centers within 0.5 keep the
# boundary shell below the guard
ID_WIDTHS = (0.8, 0.9)
ID_CENTER = 0.5


def mass_check(cfg: Config, f: AnalyticFn, g: AnalyticFn, method: str | None = None):
    """Relative error of sum Q+(f, g) h^3 against pi |f|_1 |g|_1 (gamma = 0)."""
    grid = VelocityGrid(cfg.grid.n, cfg.grid.L)
    quad = quad_config(cfg, method=method or cfg.suite.mass_method)
    t0 = time.perf_counter()
    q = qplus_multi(f, g, grid, [KernelSpec(0.0, "full")], quad)[0]
    elapsed = time.perf_counter() - t0
    total = complex(np.sum(q.values) * grid.cell)
    target = math.pi * f.l1_mass() * g.l1_mass()
    return abs(total - target) / abs(target), elapsed


def identity_suite(cfg: Config, seed: int | None = None, n_trials: int | None = None) -> EstimateReport:
    seed = cfg.run.seed if seed is None else seed
    n_trials = cfg.suite.identity_trials if n_trials is None else n_trials
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    tol = cfg.tolerance
    rep = new_report("identity", cfg, seed)
    rep.columns = ("trial", "gamma", "lhs", "rhs", "rel_mismatch")
    rng = np.random.default_rng(seed)
    grid = VelocityGrid(cfg.grid.n, cfg.grid.L)

    def pair():
        return (random_mixture(rng, ID_CENTER, ID_WIDTHS),
                random_mixture(rng, ID_CENTER, ID_WIDTHS))

    # mass
    f, g = pair()
    with timed(rep, "mass"):
        rel, _ = mass_check(cfg, f, g)
    rep.checks.append(check_le("mass", rel, tol.mass,
                               f"gamma=0, n={grid.n}, L={grid.L:g}, method={cfg.suite.mass_method}"))

    # weak form, all gammas from one pass over the pairs
    kernels = [KernelSpec(gm, "full") for gm in GAMMAS]
    worst = {gm: 0.0 for gm in GAMMAS}
    quad = quad_config(cfg, vstar_grid=grid)
    with timed(rep, "weak_form"):
        for t in range(n_trials):
            f, g = pair()
            h = random_mixture(rng, 1.5, (1.0, 1.5))
            qs = qplus_multi(f, g, grid, kernels, quad)
            hv = h(grid.points())
            for k, q in zip(kernels, qs):
                lhs = complex(np.sum(q.values * np.conj(hv)) * grid.cell)
                rhs = weak_form_rhs(f, g, h, k, quad)
                mis = abs(lhs - rhs) / max(abs(lhs), abs(rhs))
                worst[k.gamma] = max(worst[k.gamma], mis)
                rep.trials.append({"trial": t, "gamma": k.gamma, "lhs": lhs.real, "rhs": rhs.real,
                                   "rel_mismatch": mis})
    for gm in GAMMAS:
        rep.checks.append(check_le(f"weak_form[gamma={gm:g}]", worst[gm], tol.weak_form,
                                   f"<Q+(f,g), h> vs triple sum, {n_trials} triples"))

    # split: full = small + large, three separate passes
    f, g = pair()
    with timed(rep, "split"):
        split = 0.0
        for gm in (0.0, 1.0):
            full, small, large = (qplus_multi(f, g, grid, [KernelSpec(gm, c)], quad)[0].values
                                  for c in ("full", "small", "large"))
            split = max(split, float(np.max(np.abs(full - small - large)))
                        / max(1.0, float(np.max(np.abs(full)))))
    rep.checks.append(check_le("split", split, tol.split, "max |full - small - large|"))

    # Galilean covariance with a lattice shift m
    gal_grid = VelocityGrid(20, 10.0)
    m = gal_grid.h * np.array([1.0, -1.0, 1.0])
    pts = rng.uniform(-1.0, 1.0, (6, 3))
    gq = quad_config(cfg, vstar_grid=gal_grid)
    with timed(rep, "galilean"):
        a = qplus_multi(f.translate(m), g.translate(m), pts, kernels, gq)
        b = qplus_multi(f, g, pts + m, kernels, gq)
        gal = max(float(np.max(np.abs(x - y)) / np.max(np.abs(y))) for x, y in zip(a, b))
    rep.checks.append(check_le("galilean", gal, tol.galilean, "Q+(tau_m f, tau_m g)(v) = Q+(f,g)(v+m)"))

    # scaling law Q+(f_l, g_l)(v) = l^(-3-g) Q+(f, g)(l v)
    fine = VelocityGrid(64, cfg.grid.L)
    scal = {}
    with timed(rep, "scaling"):
        for lam, grid_l in ((2.0, fine), (0.5, fine.scaled(2.0))):
            a = qplus_multi(f.dilate(lam), g.dilate(lam), pts, kernels,
                            quad_config(cfg, vstar_grid=grid_l))
            b = qplus_multi(f, g, lam * pts, kernels, quad_config(cfg, vstar_grid=fine))
            for k, x, y in zip(kernels, a, b):
                y = lam ** (-3.0 - k.gamma) * y
                scal[f"lambda={lam:g},gamma={k.gamma:g}"] = float(np.max(np.abs(x - y)) / np.max(np.abs(y)))
    rep.checks.append(check_le("scaling", max(scal.values()), tol.scaling,
                               "lambda=2 on a fixed n=64 lattice, lambda=1/2 on the rescaled one"))

    # zero input
    z = qplus_multi(AnalyticFn.zero(), g, grid, kernels[:1], quad)[0]
    rep.checks.append(Check("zero_input", bool(np.all(z.values == 0)), None, None, "f = 0 gives 0"))
    rep.aggregate = {"mass_rel_err": rep.check("mass").value,
                     "weak_form_worst": {f"{k:g}": v for k, v in worst.items()},
                     "split": split, "galilean": gal, "scaling": scal}
    return rep


def oracle_suite(cfg: Config, seed: int | None = None, n_points: int | None = None) -> EstimateReport:
    """qplus_eval against qplus_oracle at random points, gamma in {0, 1}."""
    seed = cfg.run.seed if seed is None else seed
    n_points = cfg.suite.oracle_points if n_points is None else n_points
    rep = new_report("oracle", cfg, seed)
    rep.columns = ("point", "gamma", "vx", "vy", "vz", "lattice", "oracle", "rel_err",
                   "oracle_rel_change", "inconclusive")
    rng = np.random.default_rng(seed)
    f = random_mixture(rng, ID_CENTER, ID_WIDTHS)
    g = random_mixture(rng, ID_CENTER, ID_WIDTHS)
    pts = rng.uniform(-2.0, 2.0, (n_points, 3))
    vgrid = VelocityGrid(cfg.collision.oracle_vstar_n, cfg.grid.L)
    quad = quad_config(cfg, vstar_grid=vgrid)
    worst, inconclusive = 0.0, 0
    for gm in (0.0, 1.0):
        k = KernelSpec(gm, "full")
        with timed(rep, f"lattice_gamma={gm:g}"):
            lat = qplus_multi(f, g, pts, [k], quad)[0]
        with timed(rep, f"oracle_gamma={gm:g}"):
            for i, v in enumerate(pts):
                o = qplus_oracle(f, g, v, k)
                err = abs(lat[i] - o.value) / max(abs(o.value), 1e-300)
                worst = max(worst, err)
                inconclusive += int(o.inconclusive)
                rep.trials.append({"point": i, "gamma": gm, "vx": v[0], "vy": v[1], "vz": v[2],
                                   "lattice": lat[i].real, "oracle": o.value.real, "rel_err": err,
                                   "oracle_rel_change": o.rel_change,
                                   "inconclusive": bool(o.inconclusive)})
    rep.checks.append(check_le("oracle_agreement", worst, cfg.tolerance.oracle,
                               f"{n_points} points, lattice n={vgrid.n}"))
    rep.checks.append(Check("oracle_converged", inconclusive == 0, float(inconclusive), 0.0,
                            "oracle refinement levels agree"))
    # Maxwellian closed form: Q+(M, M)(v) = pi (2 pi)^(3/2) M(v) for gamma = 0
    M = AnalyticFn.gaussian((0, 0, 0), 1.0, 1.0)
    v = np.array([0.7, -0.2, 0.4])
    om = qplus_oracle(M, M, v, KernelSpec(0.0, "full")).value
    exact = math.pi * (2 * math.pi) ** 1.5 * math.exp(-0.5 * float(v @ v))
    rep.aggregate = {"max_rel_err": worst, "inconclusive": inconclusive,
                     "maxwellian_gamma0_rel_err": abs(om - exact) / exact}
    return rep
