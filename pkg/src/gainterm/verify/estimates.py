"""Randomized boundedness sweep for the Sobolev gain estimates, the dilation
invariance of their ratios, and exploratory sharpness / box-size studies."""

from __future__ import annotations

import math

import numpy as np

from ..analytic import AnalyticFn
from ..collision import KernelSpec, conjugated_radon, h_sbar_eval, qplus_multi
from ..config import Config
from ..grid import NormSpec, VelocityGrid, dft, norm, sample_on_grid
from ..symbol import loglog_slope
from .common import (EXPONENTS, GAMMAS, TrialSpec, lebesgue_R, mean_zero, new_report,
                     quad_config, random_mixture, timed)
from .report import Check, EstimateReport, check_le

KINDS = ("hom", "inhom", "LR", "sbar_hom", "sbar_inhom",
         "T_v", "T_vstar", "Ts_v", "Ts_vstar", "H_v", "H_vstar")
LEMMA_KINDS = KINDS[5:]
CSV_COLUMNS = ("trial", "gamma", "p", "q", "ratio_hom", "ratio_inhom", "ratio_LR",
               "refinement_delta")
DILATIONS = (0.5, 1.0, 2.0, 4.0)
SHARPNESS_EPS = 0.25

SWEEP_CENTER = 1.0
SWEEP_WIDTHS = (0.6, 1.0)
MODULATE_PROB = 0.2
N_PROBES = 5


def _l2(values: np.ndarray, cell: float) -> float:
    return float(math.sqrt(np.sum(np.abs(values) ** 2) * cell))


def input_norms(fn: AnalyticFn, fine: VelocityGrid, gammas=GAMMAS) -> dict:
    """L^p and weighted L^p_gamma norms for the exponents that occur in EXPONENTS."""
    gf = sample_on_grid(fn, fine)
    ps = sorted({p for pair in EXPONENTS for p in pair})
    out = {}
    for p in ps:
        out[(p, 0.0)] = norm(gf, NormSpec.lebesgue(p))
        for gm in gammas:
            out[(p, gm)] = norm(gf, NormSpec.lebesgue(p, gm))
    return out


def dual_norms(h: AnalyticFn, fine: VelocityGrid, gammas=GAMMAS) -> dict:
    """||h||_{H-dot^-g} and ||h||_{H^-g}; the first requires a vanishing mean."""
    gf = sample_on_grid(h, fine)
    F = dft(gf).values
    return {gm: (norm(gf, NormSpec.hom(-gm), fhat=F), norm(gf, NormSpec.inhom(-gm), fhat=F))
            for gm in gammas}


def lemma_numerators(h: AnalyticFn, grid: VelocityGrid, gamma: float, probes: np.ndarray) -> dict:
    """sup over probe points of the L^2(v) and L^2(v_*) norms of the Radon-type maps."""
    V = grid.points()
    c = grid.cell
    out = {}
    for variant, tag in (("T", "T"), ("T_small", "Ts")):
        out[f"{tag}_v"] = max(_l2(conjugated_radon(h, V, p, gamma, variant, method="sphere"), c)
                              for p in probes)
        out[f"{tag}_vstar"] = max(_l2(conjugated_radon(h, p, V, gamma, variant, method="sphere"), c)
                                  for p in probes)
    out["H_v"] = max(_l2(h_sbar_eval(h, V, p, gamma, method="sphere"), c) for p in probes)
    out["H_vstar"] = max(_l2(h_sbar_eval(h, p, V, gamma, method="sphere"), c) for p in probes)
    return out


def trial_ratios(cfg: Config, f: AnalyticFn, g: AnalyticFn, h: AnalyticFn, probes,
                 levels, gammas=GAMMAS, L: float | None = None):
    """Ratios for every (gamma, p, q) cell at each grid level.

    Returns ``(ratios, reason)``; ``ratios`` maps (gamma, p, q) to
    {kind: {n: value}} and is None when the trial is skipped.
    """
    if f.is_zero or g.is_zero:
        return None, "0/0: f or g vanishes"
    if abs(h.l1_mass()) > 1e-12 * max(1.0, sum(abs(a.amp) for a in h.atoms)):
        return None, "h is not mean-zero"
    L = cfg.grid.sweep_L if L is None else L
    fine = VelocityGrid(cfg.grid.norm_n, L)
    nf, ng = input_norms(f, fine, gammas), input_norms(g, fine, gammas)
    hn = dual_norms(h, fine, gammas)
    kernels = [KernelSpec(gm, "full") for gm in gammas] + [KernelSpec(gm, "large") for gm in gammas]
    k = len(gammas)
    out = {(gm, p, q): {kind: {} for kind in KINDS} for gm in gammas for p, q in EXPONENTS}
    for n in levels:
        grid = VelocityGrid(n, L)
        qs = qplus_multi(f, g, grid, kernels, quad_config(cfg))
        for i, gm in enumerate(gammas):
            Q, Qb = qs[i], qs[k + i]
            F, Fb = dft(Q).values, dft(Qb).values
            num = {"hom": norm(Q, NormSpec.hom(gm), fhat=F),
                   "inhom": norm(Q, NormSpec.inhom(gm), fhat=F),
                   "LR": norm(Q, NormSpec.lebesgue(lebesgue_R(gm))),
                   "sbar_hom": norm(Qb, NormSpec.hom(1.0), fhat=Fb),
                   "sbar_inhom": norm(Qb, NormSpec.inhom(1.0), fhat=Fb)}
            lem = lemma_numerators(h, grid, gm, probes)
            hom_h, inh_h = hn[gm]
            for p, q in EXPONENTS:
                plain = ng[(p, 0.0)] * nf[(q, 0.0)]
                weighted = ng[(p, gm)] * nf[(q, gm)]
                cell = out[(gm, p, q)]
                cell["hom"][n] = num["hom"] / plain
                cell["inhom"][n] = num["inhom"] / weighted
                cell["LR"][n] = num["LR"] / plain
                cell["sbar_hom"][n] = num["sbar_hom"] / plain
                cell["sbar_inhom"][n] = num["sbar_inhom"] / weighted
                for kind in ("T_v", "T_vstar"):
                    cell[kind][n] = lem[kind] / hom_h
                for kind in ("Ts_v", "Ts_vstar", "H_v", "H_vstar"):
                    cell[kind][n] = lem[kind] / inh_h
    return out, ""


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def estimate_suite(cfg: Config, seed: int | None = None, n_trials: int | None = None,
                   exponent_list=EXPONENTS, gamma_list=GAMMAS,
                   explore: bool = True) -> EstimateReport:
    seed = cfg.run.seed if seed is None else seed
    n_trials = cfg.suite.estimate_trials if n_trials is None else n_trials
    exponent_list = tuple(tuple(float(x) for x in pq) for pq in exponent_list)
    gamma_list = tuple(float(x) for x in gamma_list)
    if not set(exponent_list) <= set(EXPONENTS):
        raise ValueError(f"exponent pairs must come from {EXPONENTS}")
    levels = (cfg.grid.n, cfg.grid.refine_n)
    rep = new_report("estimate", cfg, seed, levels=list(levels), L=cfg.grid.sweep_L)
    rep.columns = CSV_COLUMNS
    rng = np.random.default_rng(seed)
    tol = cfg.tolerance
    skipped = []
    cells = {(gm, p, q): [] for gm in gamma_list for p, q in exponent_list}
    for t in range(n_trials):
        f = random_mixture(rng, SWEEP_CENTER, SWEEP_WIDTHS, modulate_prob=MODULATE_PROB)
        g = random_mixture(rng, SWEEP_CENTER, SWEEP_WIDTHS, modulate_prob=MODULATE_PROB)
        h = mean_zero(rng)
        probes = np.vstack([np.zeros(3), rng.uniform(-2.0, 2.0, (N_PROBES - 1, 3))])
        for gm in gamma_list:
            for p, q in exponent_list:
                TrialSpec(f, g, h, p, q, gm, KernelSpec(gm, "full"), levels, seed)
        with timed(rep, f"trial_{t}"):
            ratios, reason = trial_ratios(cfg, f, g, h, probes, levels, gamma_list)
        if ratios is None:
            skipped.append({"trial": t, "reason": reason})
            continue
        for key, cell in ratios.items():
            if key not in cells:
                continue
            gm, p, q = key
            row = {"trial": t, "gamma": gm, "p": p, "q": q, "f": str(f), "g": str(g), "h": str(h)}
            delta = 0.0
            for kind, by_n in cell.items():
                for n, v in by_n.items():
                    row[f"{kind}@{n}"] = v
                row[f"ratio_{kind}"] = by_n[levels[-1]]
                delta = max(delta, _rel(by_n[levels[0]], by_n[levels[-1]]))
            row["refinement_delta"] = delta
            rep.trials.append(row)
            cells[key].append(cell)

    # aggregate per cell and kind: the max over trials at each level
    agg, worst_delta, nonfinite = {}, {kind: 0.0 for kind in KINDS}, 0
    for (gm, p, q), lst in cells.items():
        entry = {"trials": len(lst)}
        for kind in KINDS:
            vals = {n: [c[kind][n] for c in lst] for n in levels}
            nonfinite += sum(1 for n in levels for v in vals[n] if not (math.isfinite(v) and v >= 0))
            mx = {n: max(vals[n]) if vals[n] else float("nan") for n in levels}
            d = _rel(mx[levels[0]], mx[levels[-1]]) if lst else float("nan")
            entry[kind] = {"max": mx[levels[-1]], "max_coarse": mx[levels[0]], "delta": d}
            worst_delta[kind] = max(worst_delta[kind], d) if math.isfinite(d) else float("nan")
        agg[f"gamma={gm:g},p={p:.6g},q={q:.6g}"] = entry
    rep.aggregate = {"cells": agg, "skipped": skipped, "levels": list(levels)}
    rep.checks.append(Check("ratios_finite", nonfinite == 0 and bool(rep.trials), float(nonfinite), 0.0,
                            "every ratio finite and nonnegative"))
    done = min((len(v) for v in cells.values()), default=0)
    rep.checks.append(Check("trials_per_cell", done >= n_trials, float(done), float(n_trials),
                            f"completed trials per (gamma, p, q) cell; {len(skipped)} skipped"))
    for kind in KINDS:
        rep.checks.append(check_le(f"refinement[{kind}]", worst_delta[kind], tol.refinement,
                                   f"max ratio per cell, n {levels[0]} -> {levels[-1]}"))

    with timed(rep, "dilation"):
        dil = dilation_study(cfg, rng, cfg.suite.dilation_pairs, gamma_list, exponent_list)
    rep.aggregate["dilation"] = dil
    rep.checks.append(check_le("dilation", dil["max_deviation"], tol.dilation,
                               f"ratio_hom spread over lambda in {DILATIONS}"))
    rep.checks.append(Check("sharpness_growth", dil["sharpness_min_slope"] > 0.0,
                            dil["sharpness_min_slope"], None,
                            f"H-dot^(gamma+{SHARPNESS_EPS}) ratio grows under dilation", asserted=False))
    if explore:
        with timed(rep, "box_growth"):
            rep.aggregate["radon_box_growth"] = radon_box_growth(cfg, rng, gamma_list)
    return rep


def dilation_study(cfg: Config, rng: np.random.Generator, n_pairs: int,
                   gammas=GAMMAS, exponents=EXPONENTS) -> dict:
    """ratio_hom for (f(l .), g(l .)) on grids scaled by 1/l, so that the
    discretization is dilated together with the data."""
    n, L = cfg.grid.n, cfg.grid.sweep_L
    kernels = [KernelSpec(gm, "full") for gm in gammas]
    spread, slopes, pairs = 0.0, [], []
    for _ in range(n_pairs):
        f = AnalyticFn.gaussian(rng.uniform(-1, 1, 3), float(rng.uniform(*SWEEP_WIDTHS)))
        g = AnalyticFn.gaussian(rng.uniform(-1, 1, 3), float(rng.uniform(*SWEEP_WIDTHS)))
        table = {}
        for lam in DILATIONS:
            fl, gl = f.dilate(lam), g.dilate(lam)
            grid = VelocityGrid(n, L / lam)
            fine = VelocityGrid(cfg.grid.norm_n, L / lam)
            nf, ng = input_norms(fl, fine, ()), input_norms(gl, fine, ())
            qs = qplus_multi(fl, gl, grid, kernels, quad_config(cfg))
            for gm, Q in zip(gammas, qs):
                F = dft(Q).values
                hom = norm(Q, NormSpec.hom(gm), fhat=F)
                sharp = norm(Q, NormSpec.hom(gm + SHARPNESS_EPS), fhat=F)
                for p, q in exponents:
                    den = ng[(p, 0.0)] * nf[(q, 0.0)]
                    table.setdefault((gm, p, q), []).append((lam, hom / den, sharp / den))
        cell_out = {}
        for (gm, p, q), rows in table.items():
            r = [x[1] for x in rows]
            dev = (max(r) - min(r)) / min(r)
            spread = max(spread, dev)
            s = loglog_slope([x[0] for x in rows], [x[2] for x in rows])
            slopes.append(s)
            cell_out[f"gamma={gm:g},p={p:.6g},q={q:.6g}"] = {"ratio_hom": r, "deviation": dev,
                                                          "sharpness_slope": s}
        pairs.append({"f": str(f), "g": str(g), "cells": cell_out})
    return {"lambdas": list(DILATIONS), "max_deviation": spread,
            "sharpness_min_slope": min(slopes) if slopes else float("nan"), "pairs": pairs}


def radon_box_growth(cfg: Config, rng: np.random.Generator, gammas=GAMMAS,
                     boxes=(10.0, 20.0, 40.0), spacing: float = 1.25) -> dict:
    """||T h||_{L^2(box)} at v_* = 0 for growing boxes at fixed spacing.

    For large |x|, T h(x) ~ |x|^(g-2) times the integral of h over the plane
    through 0 orthogonal to x, which is nonzero for generic mean-zero h.
    The squared norm then grows like L^(2g-1) when g > 1/2.
    """
    h = mean_zero(rng)
    out = {}
    for gm in gammas:
        vals = []
        for L in boxes:
            grid = VelocityGrid(int(round(2 * L / spacing)), L)
            vals.append(_l2(conjugated_radon(h, grid.points(), np.zeros(3), gm, method="sphere"),
                            grid.cell))
        out[f"{gm:g}"] = {"boxes": list(boxes), "norms": vals,
                          "slope": loglog_slope(boxes, vals), "predicted_slope_if_positive": gm - 0.5}
    return {"h": str(h), "gamma": out}
