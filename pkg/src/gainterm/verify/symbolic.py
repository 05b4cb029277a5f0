"""Stationary-phase decay and the region-III symbol bound."""

from __future__ import annotations

import cmath
import math

import numpy as np

from ..config import Config
from ..errors import ResolutionError, ValidityError
from ..symbol import (loglog_slope, region3_scan, symbol_closed_form, symbol_direct,
                      symbol_stationary)
from .common import new_report, timed
from .report import Check, EstimateReport, check_le


def _pair(lam: float, theta0: float):
    s = math.sqrt(lam)
    x = np.array([0.0, 0.0, s])
    xi = s * np.array([math.sin(theta0), 0.0, math.cos(theta0)])
    return x, xi


def stationary_decay_suite(cfg: Config, gammas=None, theta0_list=None,
                           lambda_list=None) -> EstimateReport:
    sc = cfg.symbol
    tol = cfg.tolerance
    gammas = tuple(sc.gammas if gammas is None else gammas)
    theta0_list = tuple(sc.theta0s if theta0_list is None else theta0_list)
    lambda_list = tuple(sc.lambdas if lambda_list is None else lambda_list)
    rep = new_report("stationary", cfg)
    rep.columns = ("theta0", "lambda", "gamma", "re_quad", "im_quad", "re_stat", "im_stat",
                   "rel_err", "rel_err_published", "quad_vs_closed", "status")
    closed_worst = 0.0
    for th0 in theta0_list:
        for lam in lambda_list:
            x, xi = _pair(lam, th0)
            with timed(rep, f"quad_{th0:.4f}_{lam:g}"):
                try:
                    q0 = symbol_direct(x, xi, 0.0, c=sc.node_factor).value
                    st0 = symbol_stationary(x, xi, 0.0, sc.lambda_min, sc.convention).value
                    pu0 = symbol_stationary(x, xi, 0.0, sc.lambda_min, "published").value
                    status = "ok"
                except (ResolutionError, ValidityError) as exc:
                    status = f"skipped: {exc}"
            for g in gammas:
                row = {"theta0": th0, "lambda": lam, "gamma": g, "status": status}
                if status == "ok":
                    k = lam ** g
                    q, st, pa = k * q0, k * st0, k * pu0
                    nrm = max(abs(q), lam ** (g - 1.0))
                    cf = symbol_closed_form(x, xi, g).value
                    qc = abs(q - cf) / nrm
                    closed_worst = max(closed_worst, qc)
                    row.update(re_quad=q.real, im_quad=q.imag, re_stat=st.real, im_stat=st.imag,
                               rel_err=abs(q - st) / nrm, rel_err_published=abs(q - pa) / nrm,
                               quad_vs_closed=qc)
                rep.trials.append(row)

    slopes, slopes_published = {}, {}
    for g in gammas:
        for th0 in theta0_list:
            rows = [r for r in rep.trials if r["gamma"] == g and r["theta0"] == th0
                    and r["status"] == "ok"]
            key = f"gamma={g:g},theta0={th0:.6f}"
            if len(rows) < 2:
                slopes[key] = float("nan")
            else:
                slopes[key] = loglog_slope([r["lambda"] for r in rows], [r["rel_err"] for r in rows])
            ok = math.isfinite(slopes[key]) and tol.slope_lo <= slopes[key] <= tol.slope_hi
            rep.checks.append(Check(f"slope[{key}]", ok, slopes[key], None,
                                    f"log-log slope of rel_err in [{tol.slope_lo}, {tol.slope_hi}]"))
            if len(rows) >= 2:
                ps = loglog_slope([r["lambda"] for r in rows], [r["rel_err_published"] for r in rows])
                slopes_published[key] = ps
                rep.checks.append(Check(f"slope_published[{key}]", tol.slope_lo <= ps <= tol.slope_hi,
                                        ps, None, "same fit with the published leading coefficients",
                                        asserted=False))
    rep.checks.append(check_le("quadrature_vs_closed_form", closed_worst, tol.closed_form,
                               "direct quadrature against 2 pi L^(g-1) e^(-i x.xi/2) sin(L/2)"))

    # gamma = 1, |x| = |xi| = 1, colinear
    e = np.array([0.0, 0.0, 1.0])
    target = math.pi * (1.0 - cmath.exp(-1j)) / 1j
    col = abs(symbol_direct(e, e, 1.0).value - target)
    rep.checks.append(check_le("colinear_closed_form", col, tol.colinear,
                               "gamma=1, x = xi = e_z against pi (1 - e^-i)/i"))
    rep.aggregate = {"slopes": slopes, "slopes_published": slopes_published,
                     "max_rel_err": max((r.get("rel_err", 0.0) for r in rep.trials), default=0.0),
                     "max_rel_err_published": max((r.get("rel_err_published", 0.0) for r in rep.trials),
                                              default=0.0),
                     "convention": sc.convention}
    return rep


def region3_suite(cfg: Config, seed: int | None = None, n: int | None = None,
                  gammas=None) -> EstimateReport:
    seed = cfg.run.seed if seed is None else seed
    n = cfg.suite.region3_points if n is None else n
    gammas = tuple(cfg.suite.region3_gammas if gammas is None else gammas)
    rep = new_report("region3", cfg, seed)
    rep.columns = ("gamma", "lambda", "theta0", "re_a", "im_a", "abs_norm", "method")
    slopes = {}
    for g in gammas:
        with timed(rep, f"gamma={g:g}"):
            rows = region3_scan(seed, n, g)
        slope = loglog_slope([r["lambda"] for r in rows], [r["abs_norm"] for r in rows])
        slopes[f"{g:g}"] = slope
        rep.trials += [{"gamma": g, **r} for r in rows]
        rep.checks.append(check_le(f"slope[gamma={g:g}]", slope, cfg.tolerance.region3_slope,
                                   f"regression of log(|a| L^1/2) on log L over {n} zone-III points"))
    lam = [r["lambda"] for r in rep.trials]
    rep.aggregate = {"slopes": slopes, "lambda_range": [min(lam), max(lam)], "n_points": n}
    return rep
