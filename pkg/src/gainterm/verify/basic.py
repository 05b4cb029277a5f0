"""Partition-of-unity and sphere-geometry suites."""

from __future__ import annotations

import math

import numpy as np

from .. import geometry
from ..config import Config
from ..errors import DomainError
from ..partitions import (Coarse, Zone, psi, region_classify, rho, s_bar, s_cut,
                          zeta_index)
from .common import new_report, timed
from .report import Check, EstimateReport, check_le


def partition_suite(cfg: Config) -> EstimateReport:
    tol = cfg.tolerance
    rep = new_report("partition", cfg)
    with timed(rep, "total"):
        r = np.logspace(-3, 6, 200)
        ks = np.arange(-64, 65)
        tele = np.sum(rho(r[None, :] * 2.0 ** (-ks[:, None])), axis=0)
        rep.checks.append(check_le("telescoping", float(np.max(np.abs(tele - 1.0))), tol.partition,
                                   "max |sum_k rho(2^-k r) - 1| over 200 log-spaced r"))

        r_in = np.append(np.linspace(0.0, 4.0, 4000, endpoint=False), 3.9)
        r_out = np.append(np.linspace(16.0, 1e3, 4000)[1:], 16.1)
        rep.checks.append(check_le("s_cut_one", float(np.max(np.abs(s_cut(r_in) - 1.0))), tol.cutoff,
                                   "s = 1 on [0, 4)"))
        rep.checks.append(check_le("s_cut_zero", float(np.max(np.abs(s_cut(r_out)))), tol.cutoff,
                                   "s = 0 on (16, 1000]"))

        rng = np.random.default_rng(cfg.run.seed)
        rs = rng.uniform(0.0, 32.0, 10_000)
        rep.checks.append(check_le("complement", float(np.max(np.abs(s_cut(rs) + s_bar(rs) - 1.0))),
                                   tol.cutoff, "s + s_bar = 1 on 1e4 samples"))

        outside = np.concatenate([np.linspace(0.0, 4.0, 500), np.linspace(16.0, 100.0, 500)])
        inside = np.linspace(4.5, 15.5, 500)  # e^{-1/t} underflows to 0 right at the knots
        rho_out = float(np.max(np.abs(rho(outside))))
        rho_in_min = float(np.min(rho(inside)))
        rep.checks.append(Check("rho_support", rho_out == 0.0 and rho_in_min > 0.0, rho_out, 0.0,
                                f"rho vanishes off (4, 16), positive on [4.5, 15.5]; min {rho_in_min:.3g}"))

        rr = np.logspace(-2, 4, 3000)
        overlap = max(float(np.max(np.abs(rho(rr * 2.0 ** -j) * rho(rr * 2.0 ** -(j + d)))))
                      for j in range(-4, 5) for d in (2, 3, 4))
        rep.checks.append(Check("rho_disjoint", overlap == 0.0, overlap, 0.0,
                                "rho_j rho_k = 0 for |j - k| >= 2"))

        fine = np.linspace(0.0, 20.0, 20001)
        rise = float(np.max(np.diff(psi(fine))))
        rep.checks.append(Check("psi_monotone", rise <= 0.0, rise, 0.0, "psi non-increasing"))

        th = np.linspace(1e-3, math.pi - 1e-3, 2000)
        ang = sum(zeta_index(z, th) for z in range(-40, 41))
        rep.checks.append(check_le("angular_unity", float(np.max(np.abs(ang - 1.0))), tol.partition,
                                   "sum_z zeta_z(theta) = 1 on (1e-3, pi - 1e-3)"))

        counts: dict[str, int] = {}
        bad = 0
        for _ in range(2000):
            x = rng.normal(size=3)
            xi = rng.normal(size=3)
            x *= 10 ** rng.uniform(-2, 4) / np.linalg.norm(x)
            xi *= 10 ** rng.uniform(-2, 4) / np.linalg.norm(xi)
            try:
                lab = region_classify(x, xi)
            except (AssertionError, DomainError):
                bad += 1
                continue
            nx, nxi = float(np.linalg.norm(x)), float(np.linalg.norm(xi))
            if lab.coarse is Coarse.A and not (nx > 8 and nxi > 8):
                bad += 1
            if lab.zone is Zone.III and not 64 < nx * nxi:
                bad += 1
            key = lab.coarse.value + ("" if lab.zone is None else "/" + lab.zone.value)
            counts[key] = counts.get(key, 0) + 1
        rep.checks.append(Check("region_cover", bad == 0, float(bad), 0.0,
                                "2000 random pairs classified, labels consistent with supports"))
        rep.aggregate["region_counts"] = dict(sorted(counts.items()))
        rep.aggregate["telescoping_max"] = rep.check("telescoping").value
    return rep


# -- geometry --------------------------------------------------------------------

FD_STEP_1 = 1e-6
FD_STEP_2 = 1e-4


def _sigma(xh, xih, om):
    return float((xh @ om) * (xih @ om))


def _geodesic(om, e, t):
    return math.cos(t) * om + math.sin(t) * e


def _tangent_basis(x, om):
    """(e_theta, e_phi) at om in standard coordinates, frame of x."""
    b = geometry.frame(x)
    sp = geometry.sphere_point(x, om)
    ct, st = math.cos(sp.theta), math.sin(sp.theta)
    cp, snp = math.cos(sp.phi), math.sin(sp.phi)
    e_t = np.array([ct * cp, ct * snp, -st]) @ b
    e_p = np.array([-snp, cp, 0.0]) @ b
    return e_t, e_p


def fd_calculus(x, xi, om):
    """Finite-difference gradient and Hessian of sigma along geodesics.

    The second derivative of sigma along a unit-speed geodesic is the
    covariant Hessian applied to its tangent, so no chart terms enter.
    """
    xh = x / np.linalg.norm(x)
    xih = xi / np.linalg.norm(xi)
    e_t, e_p = _tangent_basis(x, om)
    f0 = _sigma(xh, xih, om)

    def d1(e):
        t = FD_STEP_1
        return (_sigma(xh, xih, _geodesic(om, e, t)) - _sigma(xh, xih, _geodesic(om, e, -t))) / (2 * t)

    def d2(e):
        t = FD_STEP_2
        return (_sigma(xh, xih, _geodesic(om, e, t)) - 2 * f0
                + _sigma(xh, xih, _geodesic(om, e, -t))) / t ** 2

    grad = np.array([d1(e_t), d1(e_p)])
    s2 = 1.0 / math.sqrt(2.0)
    off = 0.5 * (d2(s2 * (e_t + e_p)) - d2(s2 * (e_t - e_p)))
    hess = np.array([[d2(e_t), off], [off, d2(e_p)]])
    return grad, hess


def _random_vec(rng, lo=-1.0, hi=2.0):
    v = rng.normal(size=3)
    return v * 10 ** rng.uniform(lo, hi) / np.linalg.norm(v)


def geometry_suite(cfg: Config, seed: int | None = None, n_trials: int | None = None) -> EstimateReport:
    seed = cfg.run.seed if seed is None else seed
    n_trials = cfg.suite.geometry_trials if n_trials is None else n_trials
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    tol = cfg.tolerance
    rep = new_report("geometry", cfg, seed)
    rep.columns = ("trial", "lambda", "theta0", "grad_plus", "grad_minus", "fd_grad",
                   "hess_plus", "hess_minus_literal", "hess_minus_corrected", "hess_formula")
    rng = np.random.default_rng(seed)
    with timed(rep, "trials"):
        for t in range(n_trials):
            x, xi = _random_vec(rng), _random_vec(rng)
            cp = geometry.critical_points(x, xi)
            if cp.degenerate:  # measure-zero for Gaussian directions; resample deterministically
                xi = xi + 0.1 * np.linalg.norm(xi) * geometry.frame(x)[0]
                cp = geometry.critical_points(x, xi)
            g_p, _ = geometry.sphere_calculus(x, xi, cp.omega_plus)
            g_m, _ = geometry.sphere_calculus(x, xi, cp.omega_minus)
            fg_p, fh_p = fd_calculus(x, xi, cp.omega_plus)
            fg_m, fh_m = fd_calculus(x, xi, cp.omega_minus)
            lit_p = np.diag([-2.0, -2.0 * cp.sigma_plus])
            lit_m = np.diag([-2.0, -2.0 * cp.sigma_minus])
            cor_m = np.diag([2.0, -2.0 * cp.sigma_minus])
            # analytic Hessian formula at a generic (non-critical) point
            om = rng.normal(size=3)
            om /= np.linalg.norm(om)
            sp = geometry.sphere_point(x, om)
            if abs(math.sin(sp.theta)) < 1e-3:
                om = geometry.frame(x)[0]
            _, h_an = geometry.sphere_calculus(x, xi, om)
            _, h_fd = fd_calculus(x, xi, om)
            rep.trials.append({
                "trial": t,
                "lambda": float(np.linalg.norm(x) * np.linalg.norm(xi)),
                "theta0": cp.theta0,
                "grad_plus": float(np.linalg.norm(g_p)),
                "grad_minus": float(np.linalg.norm(g_m)),
                "fd_grad": float(max(np.linalg.norm(fg_p), np.linalg.norm(fg_m))),
                "hess_plus": float(np.max(np.abs(fh_p - lit_p))),
                "hess_minus_literal": float(np.max(np.abs(fh_m - lit_m))),
                "hess_minus_corrected": float(np.max(np.abs(fh_m - cor_m))),
                "hess_formula": float(max(np.max(np.abs(h_an - h_fd)),
                                          np.max(np.abs(fh_p - cp.hess_plus)),
                                          np.max(np.abs(fh_m - cp.hess_minus)))),
            })

    def worst(key):
        return max(r[key] for r in rep.trials)

    rep.checks += [
        check_le("gradient", max(worst("grad_plus"), worst("grad_minus")), tol.gradient,
                 "covariant gradient at omega_+/-"),
        check_le("gradient_fd", worst("fd_grad"), tol.gradient,
                 "finite-difference gradient at omega_+/-"),
        check_le("hessian_plus", worst("hess_plus"), tol.hessian,
                 "FD Hessian at omega_+ vs diag(-2, -2 sigma_+)"),
        check_le("hessian_minus_literal", worst("hess_minus_literal"), tol.hessian,
                 "FD Hessian at omega_- vs diag(-2, -2 sigma_-) as published"),
        check_le("hessian_minus_corrected", worst("hess_minus_corrected"), tol.hessian,
                 "FD Hessian at omega_- vs diag(+2, -2 sigma_-)"),
        check_le("hessian_formula", worst("hess_formula"), tol.hessian,
                 "library Hessians vs finite differences"),
    ]

    with timed(rep, "involution"):
        m = cfg.suite.involution_samples
        v = rng.normal(scale=5.0, size=(m, 3))
        vs = rng.normal(scale=5.0, size=(m, 3))
        om = rng.normal(size=(m, 3))
        om /= np.linalg.norm(om, axis=1)[:, None]
        a, b = geometry.pre_collision(v, vs, om)
        a2, b2 = geometry.pre_collision(a, b, om)
        scale = np.maximum(1.0, np.abs(v).max(axis=1) + np.abs(vs).max(axis=1))
        inv = float(np.max(np.maximum(np.abs(a2 - v).max(axis=1), np.abs(b2 - vs).max(axis=1)) / scale))
        mom = float(np.max(np.abs(a + b - v - vs).max(axis=1) / scale))
        e0 = np.sum(v * v, axis=1) + np.sum(vs * vs, axis=1)
        en = float(np.max(np.abs(np.sum(a * a, axis=1) + np.sum(b * b, axis=1) - e0) / np.maximum(1.0, e0)))
    rep.checks += [
        check_le("involution", inv, tol.involution, f"{m} random triples"),
        check_le("momentum", mom, tol.involution, "v' + v'_* = v + v_*"),
        check_le("energy", en, tol.involution, "|v'|^2 + |v'_*|^2 = |v|^2 + |v_*|^2"),
    ]

    ok = True
    for _ in range(20):
        x = _random_vec(rng)
        for s in (2.5, -0.3):
            cp = geometry.critical_points(x, s * x)
            ok &= cp.degenerate and bool(np.all(np.isnan(cp.hess_plus)))
    rep.checks.append(Check("colinear_degenerate", ok, None, None,
                            "colinear pairs flagged, no Hessian asserted"))
    rep.aggregate = {"n_trials": n_trials,
                     "hess_minus_literal_max": worst("hess_minus_literal"),
                     "hess_minus_corrected_max": worst("hess_minus_corrected")}
    return rep
