"""Compiled inner loops for the collision integrals.

Parallel loops run over output points only; every per-point sum is a plain
sequential loop in a fixed order, so results do not depend on the number of
threads.
"""

import math
import warnings

import numpy as np
from numba import njit, prange

# numba falls back from an old TBB to the omp/workqueue layer; the notice is noise
warnings.filterwarnings("ignore", message="The TBB threading layer")

# cutoff modes
FULL, SMALL, LARGE = 0, 1, 2
# ramp ids (must match partitions.RAMPS)
RAMP_EXP, RAMP_EXP2 = 0, 1


@njit(cache=True, inline="always")
def _smooth_zero(t, ramp):
    if t <= 0.0:
        return 0.0
    if ramp == RAMP_EXP:
        return math.exp(-1.0 / t)
    return math.exp(-1.0 / (t * t))


@njit(cache=True)
def psi(r, ramp):
    t = (16.0 - r) / 8.0
    if t >= 1.0:
        return 1.0
    if t <= 0.0:
        return 0.0
    a = _smooth_zero(t, ramp)
    b = _smooth_zero(1.0 - t, ramp)
    return a / (a + b)


@njit(cache=True)
def kinetic(r, gamma, mode, ramp):
    """|z|^gamma times the cutoff factor, with 0^0 = 1."""
    w = 1.0 if gamma == 0.0 else r ** gamma
    if mode == SMALL:
        w *= psi(r, ramp)
    elif mode == LARGE:
        w *= 1.0 - psi(r, ramp)
    return w


@njit(cache=True)
def eval_atoms(kind, amp, cen, inv2s2, sc2, wav, pha, x, y, z):
    acc = 0.0 + 0.0j
    for a in range(kind.shape[0]):
        dx = x - cen[a, 0]
        dy = y - cen[a, 1]
        dz = z - cen[a, 2]
        r2 = dx * dx + dy * dy + dz * dz
        k = kind[a]
        if k == 0:
            base = math.exp(-r2 * inv2s2[a])
        elif k == 1:
            s = r2 / sc2[a]
            if s >= 1.0:
                continue
            base = math.exp(1.0 - 1.0 / (1.0 - s))
        else:
            base = 1.0
        ph = wav[a, 0] * x + wav[a, 1] * y + wav[a, 2] * z + pha[a]
        if ph == 0.0:
            acc += amp[a] * base
        else:
            acc += amp[a] * base * complex(math.cos(ph), math.sin(ph))
    return acc


@njit(cache=True)
def sphere_bound(kind, absamp, cen, inv2s2, scl, cx, cy, cz, r):
    """Upper bound of |F| on the sphere {|y - c| = r}."""
    tot = 0.0
    for a in range(kind.shape[0]):
        dx = cx - cen[a, 0]
        dy = cy - cen[a, 1]
        dz = cz - cen[a, 2]
        d = math.sqrt(dx * dx + dy * dy + dz * dz)
        k = kind[a]
        if k == 0:
            g = abs(d - r)
            tot += absamp[a] * math.exp(-g * g * inv2s2[a])
        elif k == 1:
            if abs(d - r) < scl[a]:
                tot += absamp[a]
        else:
            tot += absamp[a]
    return tot


@njit(cache=True, inline="always")
def _frame(ux, uy, uz):
    # deterministic orthonormal pair perpendicular to the unit vector u
    ax, ay, az = abs(ux), abs(uy), abs(uz)
    if ax <= ay and ax <= az:
        px, py, pz = 1.0, 0.0, 0.0
    elif ay <= az:
        px, py, pz = 0.0, 1.0, 0.0
    else:
        px, py, pz = 0.0, 0.0, 1.0
    d = px * ux + py * uy + pz * uz
    e1x, e1y, e1z = px - d * ux, py - d * uy, pz - d * uz
    n = math.sqrt(e1x * e1x + e1y * e1y + e1z * e1z)
    e1x /= n
    e1y /= n
    e1z /= n
    e2x = uy * e1z - uz * e1y
    e2y = uz * e1x - ux * e1z
    e2z = ux * e1y - uy * e1x
    return e1x, e1y, e1z, e2x, e2y, e2z


@njit(cache=True)
def hemisphere_pair(vx, vy, vz, wx, wy, wz, ct, sx, sy, sw,
                    fk, fa, fc, fi, fs2, fw, fp, gk, ga, gc, gi, gs2, gw, gp):
    """sum_k w_k cos(theta_k) f(v'_k) g(v'_*k), hemisphere axis along v - v_*."""
    ux, uy, uz = vx - wx, vy - wy, vz - wz
    r = math.sqrt(ux * ux + uy * uy + uz * uz)
    if r > 0.0:
        ux /= r
        uy /= r
        uz /= r
    else:
        ux, uy, uz = 0.0, 0.0, 1.0
    e1x, e1y, e1z, e2x, e2y, e2z = _frame(ux, uy, uz)
    acc = 0.0 + 0.0j
    for k in range(ct.shape[0]):
        c = ct[k]
        ox = c * ux + sx[k] * e1x + sy[k] * e2x
        oy = c * uy + sx[k] * e1y + sy[k] * e2y
        oz = c * uz + sx[k] * e1z + sy[k] * e2z
        s = r * c
        fv = eval_atoms(fk, fa, fc, fi, fs2, fw, fp, vx - s * ox, vy - s * oy, vz - s * oz)
        if fv == 0.0:
            continue
        gv = eval_atoms(gk, ga, gc, gi, gs2, gw, gp, wx + s * ox, wy + s * oy, wz + s * oz)
        acc += sw[k] * c * fv * gv
    return acc


@njit(cache=True)
def hemisphere_single(vx, vy, vz, wx, wy, wz, ct, sx, sy, sw, hk, ha, hc, hi, hs2, hw, hp):
    """sum_k w_k cos(theta_k) h(v'_k)."""
    ux, uy, uz = vx - wx, vy - wy, vz - wz
    r = math.sqrt(ux * ux + uy * uy + uz * uz)
    if r > 0.0:
        ux /= r
        uy /= r
        uz /= r
    else:
        ux, uy, uz = 0.0, 0.0, 1.0
    e1x, e1y, e1z, e2x, e2y, e2z = _frame(ux, uy, uz)
    acc = 0.0 + 0.0j
    for k in range(ct.shape[0]):
        c = ct[k]
        ox = c * ux + sx[k] * e1x + sy[k] * e2x
        oy = c * uy + sx[k] * e1y + sy[k] * e2y
        oz = c * uz + sx[k] * e1z + sy[k] * e2z
        s = r * c
        acc += sw[k] * c * eval_atoms(hk, ha, hc, hi, hs2, hw, hp,
                                      vx - s * ox, vy - s * oy, vz - s * oz)
    return acc


@njit(cache=True, inline="always")
def _sinhc_sphere(e0, z):
    """int_{S^2} exp(e0 + r sigma.Q) dsigma with z = r sqrt(Q.Q)."""
    if abs(z) < 1e-3:
        z2 = z * z
        return 4.0 * math.pi * np.exp(e0) * (1.0 + z2 / 6.0 + z2 * z2 / 120.0)
    return 4.0 * math.pi * (np.exp(e0 + z) - np.exp(e0 - z)) / (2.0 * z)


@njit(cache=True)
def sphere_pair(cx, cy, cz, r, fa, fp, fb, fe, ga, gp, gb, ge, logcut):
    """int_{S^2} f(c + r s) g(c - r s) ds for Gaussian-type atoms.

    Atom pairs whose largest exponent on the sphere, Re E0 + r |Re Q|, falls
    below ``logcut`` are skipped.
    """
    c2 = cx * cx + cy * cy + cz * cz
    acc = 0.0 + 0.0j
    for a in range(fa.shape[0]):
        for b in range(ga.shape[0]):
            e0 = (-(fp[a] + gp[b]) * (c2 + r * r)
                  + (fb[a, 0] + gb[b, 0]) * cx + (fb[a, 1] + gb[b, 1]) * cy
                  + (fb[a, 2] + gb[b, 2]) * cz + fe[a] + ge[b])
            qx = -2.0 * fp[a] * cx + fb[a, 0] + 2.0 * gp[b] * cx - gb[b, 0]
            qy = -2.0 * fp[a] * cy + fb[a, 1] + 2.0 * gp[b] * cy - gb[b, 1]
            qz = -2.0 * fp[a] * cz + fb[a, 2] + 2.0 * gp[b] * cz - gb[b, 2]
            top = e0.real + r * math.sqrt(qx.real ** 2 + qy.real ** 2 + qz.real ** 2)
            if top < logcut:
                continue
            z = r * np.sqrt(qx * qx + qy * qy + qz * qz)
            acc += fa[a] * ga[b] * _sinhc_sphere(e0, z)
    return acc


@njit(cache=True)
def sphere_pair_real(cx, cy, cz, r, fa, fp, fb, fe, ga, gp, gb, ge, logcut):
    """Same as :func:`sphere_pair` for unmodulated real atoms, in real arithmetic."""
    c2 = cx * cx + cy * cy + cz * cz
    acc = 0.0
    for a in range(fa.shape[0]):
        for b in range(ga.shape[0]):
            e0 = (-(fp[a] + gp[b]) * (c2 + r * r)
                  + (fb[a, 0] + gb[b, 0]) * cx + (fb[a, 1] + gb[b, 1]) * cy
                  + (fb[a, 2] + gb[b, 2]) * cz + fe[a] + ge[b])
            qx = -2.0 * fp[a] * cx + fb[a, 0] + 2.0 * gp[b] * cx - gb[b, 0]
            qy = -2.0 * fp[a] * cy + fb[a, 1] + 2.0 * gp[b] * cy - gb[b, 1]
            qz = -2.0 * fp[a] * cz + fb[a, 2] + 2.0 * gp[b] * cz - gb[b, 2]
            z = r * math.sqrt(qx * qx + qy * qy + qz * qz)
            top = e0 + z
            if top < logcut:
                continue
            if z < 1e-3:
                z2 = z * z
                val = math.exp(e0) * (1.0 + z2 / 6.0 + z2 * z2 / 120.0)
            else:
                # (e^{e0+z} - e^{e0-z}) / (2z) without overflow
                val = math.exp(top) * (-math.expm1(-2.0 * z)) / (2.0 * z)
            acc += fa[a] * ga[b] * val
    return 4.0 * math.pi * acc


@njit(cache=True)
def sphere_single(cx, cy, cz, r, ha, hp, hb, he):
    """int_{S^2} h(c + r s) ds for Gaussian-type atoms."""
    c2 = cx * cx + cy * cy + cz * cz
    acc = 0.0 + 0.0j
    for a in range(ha.shape[0]):
        e0 = -hp[a] * (c2 + r * r) + hb[a, 0] * cx + hb[a, 1] * cy + hb[a, 2] * cz + he[a]
        qx = -2.0 * hp[a] * cx + hb[a, 0]
        qy = -2.0 * hp[a] * cy + hb[a, 1]
        qz = -2.0 * hp[a] * cz + hb[a, 2]
        z = r * np.sqrt(qx * qx + qy * qy + qz * qz)
        acc += ha[a] * _sinhc_sphere(e0, z)
    return acc


@njit(cache=True, parallel=True)
def qplus_grid(out, vs, vw, gammas, modes, ramp, method, ct, sx, sy, sw,
               fk, fa, fc, fi, fs2, fsc, fw, fp, gk, ga, gc, gi, gs2, gsc, gw, gp,
               fa_g, fp_g, fb_g, fe_g, ga_g, gp_g, gb_g, ge_g, real_path, prune):
    """Q+(f, g) at each row of ``out`` by summing over the nodes ``vs``.

    One column per kernel (gammas[c], modes[c]); the angular integral is
    computed once per (v, v_*) pair and shared by all columns.
    method 0: hemisphere product rule; method 1: exact sphere average
    (Gaussian-type atoms only; ``real_path`` when no atom is modulated).
    """
    m = out.shape[0]
    nk = gammas.shape[0]
    res = np.zeros((m, nk), dtype=np.complex128)
    fabs = np.abs(fa)
    gabs = np.abs(ga)
    logcut = math.log(prune)
    fa_r, fb_r, fe_r = fa_g.real.copy(), fb_g.real.copy(), fe_g.real.copy()
    ga_r, gb_r, ge_r = ga_g.real.copy(), gb_g.real.copy(), ge_g.real.copy()
    for i in prange(m):
        vx, vy, vz = out[i, 0], out[i, 1], out[i, 2]
        acc = np.zeros(nk, dtype=np.complex128)
        kw = np.zeros(nk)
        for j in range(vs.shape[0]):
            wx, wy, wz = vs[j, 0], vs[j, 1], vs[j, 2]
            ux, uy, uz = vx - wx, vy - wy, vz - wz
            u = math.sqrt(ux * ux + uy * uy + uz * uz)
            live = False
            for c in range(nk):
                if u == 0.0 and gammas[c] > 0.0:
                    kw[c] = 0.0
                else:
                    kw[c] = kinetic(u, gammas[c], modes[c], ramp)
                if kw[c] != 0.0:
                    live = True
            if not live:
                continue
            cx, cy, cz = 0.5 * (vx + wx), 0.5 * (vy + wy), 0.5 * (vz + wz)
            r = 0.5 * u
            if method == 0:
                bf = sphere_bound(fk, fabs, fc, fi, fsc, cx, cy, cz, r)
                if bf == 0.0:
                    continue
                bg = sphere_bound(gk, gabs, gc, gi, gsc, cx, cy, cz, r)
                if bf * bg < prune:
                    continue
                val = hemisphere_pair(vx, vy, vz, wx, wy, wz, ct, sx, sy, sw,
                                      fk, fa, fc, fi, fs2, fw, fp, gk, ga, gc, gi, gs2, gw, gp)
            elif real_path:
                val = 0.25 * sphere_pair_real(cx, cy, cz, r, fa_r, fp_g, fb_r, fe_r,
                                              ga_r, gp_g, gb_r, ge_r, logcut)
            else:
                val = 0.25 * sphere_pair(cx, cy, cz, r, fa_g, fp_g, fb_g, fe_g,
                                         ga_g, gp_g, gb_g, ge_g, logcut)
            if val == 0.0:
                continue
            for c in range(nk):
                acc[c] += vw[j] * kw[c] * val
        for c in range(nk):
            res[i, c] = acc[c]
    return res


@njit(cache=True, parallel=True)
def weak_rows(vs, vw, gamma, mode, ramp, method, ct, sx, sy, sw,
              fvals, gvals, hk, ha, hc, hi, hs2, hsc, hw, hp, ha_g, hp_g, hb_g, he_g, prune):
    """Row sums R_i = sum_j w_j f(v_i) g(v_j) B int cos h(v') for every node v_i."""
    m = vs.shape[0]
    res = np.zeros(m, dtype=np.complex128)
    habs = np.abs(ha)
    for i in prange(m):
        fv = fvals[i]
        if fv == 0.0:
            continue
        vx, vy, vz = vs[i, 0], vs[i, 1], vs[i, 2]
        acc = 0.0 + 0.0j
        for j in range(m):
            gv = gvals[j]
            if gv == 0.0:
                continue
            wx, wy, wz = vs[j, 0], vs[j, 1], vs[j, 2]
            ux, uy, uz = vx - wx, vy - wy, vz - wz
            u = math.sqrt(ux * ux + uy * uy + uz * uz)
            if u == 0.0 and gamma > 0.0:
                continue
            kw = kinetic(u, gamma, mode, ramp)
            if kw == 0.0:
                continue
            cx, cy, cz = 0.5 * (vx + wx), 0.5 * (vy + wy), 0.5 * (vz + wz)
            r = 0.5 * u
            bh = sphere_bound(hk, habs, hc, hi, hsc, cx, cy, cz, r)
            if bh * abs(fv) * abs(gv) < prune:
                continue
            if method == 0:
                val = hemisphere_single(vx, vy, vz, wx, wy, wz, ct, sx, sy, sw,
                                        hk, ha, hc, hi, hs2, hw, hp)
            else:
                val = 0.25 * sphere_single(cx, cy, cz, r, ha_g, hp_g, hb_g, he_g)
            acc += vw[j] * gv * kw * val
        res[i] = vw[i] * fv * acc
    return res


@njit(cache=True, parallel=True)
def polar_point(vx, vy, vz, rad, radw, dirs, dirw, gamma, mode, ramp, ct, sx, sy, sw,
                fk, fa, fc, fi, fs2, fw, fp, gk, ga, gc, gi, gs2, gw, gp):
    """Q+(v) in polar coordinates about v: u = r d, v_* = v - u.

    ``radw`` already carries r^2 dr; the |u|^gamma factor is applied here.
    """
    nd = dirs.shape[0]
    part = np.zeros(nd, dtype=np.complex128)
    for q in prange(nd):
        acc = 0.0 + 0.0j
        for p in range(rad.shape[0]):
            r = rad[p]
            kw = kinetic(r, gamma, mode, ramp)
            if kw == 0.0:
                continue
            wx = vx - r * dirs[q, 0]
            wy = vy - r * dirs[q, 1]
            wz = vz - r * dirs[q, 2]
            acc += radw[p] * kw * hemisphere_pair(
                vx, vy, vz, wx, wy, wz, ct, sx, sy, sw,
                fk, fa, fc, fi, fs2, fw, fp, gk, ga, gc, gi, gs2, gw, gp)
        part[q] = dirw[q] * acc
    tot = 0.0 + 0.0j
    for q in range(nd):
        tot += part[q]
    return tot
