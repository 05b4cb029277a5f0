"""Gain operator Q+, loss term, Radon transforms and an independent oracle.

Two evaluation paths share the v_* lattice sum:

* ``method="direct"``: hemisphere product rule (Gauss-Legendre in mu times
  trapezoid in phi) with f, g evaluated in closed form at (v', v'_*);
* ``method="sphere"``: for Gaussian-type atoms the angular integral is exact,
  using  int_{S^2_+} cos(theta) F(v') dOmega = 1/4 int_{S^2} F(c + r s) ds
  with c = (v + v_*)/2, r = |v - v_*|/2.

``qplus_oracle`` integrates in polar coordinates about v instead of over the
lattice and uses a theta-based hemisphere rule, so it shares no nodes with
either path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from . import _kernels as K
from .analytic import BUMP, GAUSSIAN, AnalyticFn
from .errors import DomainError, TruncationError
from .grid import GUARD, GridFunction, VelocityGrid, boundary_shell_max
from .partitions import RAMPS, get_ramp, s_bar, s_cut
from .quadrature import SphereQuadrature, gauss_legendre

CUTOFFS = {"full": K.FULL, "small": K.SMALL, "large": K.LARGE}
PRUNE = 1e-22


@dataclass(frozen=True)
class KernelSpec:
    gamma: float = 0.0
    cutoff: str = "full"

    def __post_init__(self):
        if not 0.0 <= self.gamma <= 1.0:
            raise DomainError(f"gamma must lie in [0, 1], got {self.gamma}")
        if self.cutoff not in CUTOFFS:
            raise DomainError(f"unknown cutoff {self.cutoff!r}")

    def weight(self, r):
        r = np.asarray(r, dtype=float)
        w = np.where(r > 0, r, 0.0) ** self.gamma if self.gamma else np.ones_like(r)
        if self.cutoff == "small":
            w = w * s_cut(r)
        elif self.cutoff == "large":
            w = w * s_bar(r)
        return w


@dataclass(frozen=True)
class QuadConfig:
    sphere: SphereQuadrature = field(default_factory=SphereQuadrature)
    vstar_grid: Optional[VelocityGrid] = None
    method: str = "direct"
    guard: float = GUARD
    prune: float = PRUNE

    def __post_init__(self):
        if self.method not in ("direct", "sphere", "auto"):
            raise ValueError(f"unknown method {self.method!r}")


def _ramp_id() -> int:
    return RAMPS.index(get_ramp())


def _pack(fn: AnalyticFn):
    kind, amp, cen, scl, wav, pha = fn.to_arrays()
    inv2s2 = np.where(kind == GAUSSIAN, 0.5 / scl ** 2, 0.0)
    sc2 = np.where(kind == BUMP, scl ** 2, 1.0)
    return kind, amp, cen, inv2s2, sc2, scl, wav, pha


def _gauss(fn: AnalyticFn):
    if fn.atoms and fn.gaussian_type:
        return fn.gaussian_coefficients()
    return (np.zeros(0, complex), np.zeros(0), np.zeros((0, 3), complex), np.zeros(0, complex))


def _resolve_method(quad: QuadConfig, *fns: AnalyticFn) -> int:
    if quad.method == "direct":
        return 0
    ok = all(f.gaussian_type for f in fns)
    if quad.method == "sphere" and not ok:
        raise DomainError("sphere method needs Gaussian-type atoms (no bumps)")
    return 1 if ok else 0


def check_guard(fn: AnalyticFn, grid: VelocityGrid, guard: float, name: str = "f"):
    shell = boundary_shell_max(fn(grid.points()))
    if shell > guard * max(1.0, _amp_scale(fn)):
        raise TruncationError(f"{name} reaches {shell:.3g} on the boundary of the L={grid.L} box")


def _amp_scale(fn: AnalyticFn) -> float:
    return float(sum(abs(a.amp) for a in fn.atoms))


def qplus_multi(f: AnalyticFn, g: AnalyticFn, out: Union[VelocityGrid, np.ndarray],
                kernels, quad: QuadConfig = QuadConfig()):
    """Q+(f, g) for several kernels in one pass over the (v, v_*) pairs."""
    kernels = list(kernels)
    if isinstance(out, VelocityGrid):
        pts = out.flat_points()
        vgrid = quad.vstar_grid or out
    else:
        pts = np.atleast_2d(np.asarray(out, dtype=float))
        if pts.size == 0:
            raise DomainError("empty output set")
        if quad.vstar_grid is None:
            raise DomainError("point output needs quad.vstar_grid")
        vgrid = quad.vstar_grid
    if f.is_zero or g.is_zero:
        vals = np.zeros((len(pts), len(kernels)), dtype=complex)
    else:
        check_guard(f, vgrid, quad.guard, "f")
        check_guard(g, vgrid, quad.guard, "g")
        method = _resolve_method(quad, f, g)
        ct, sx, sy, sw = quad.sphere.flat()
        vs = vgrid.flat_points()
        vw = np.full(len(vs), vgrid.cell)
        gammas = np.array([float(k.gamma) for k in kernels])
        modes = np.array([CUTOFFS[k.cutoff] for k in kernels], dtype=np.int64)
        prune = quad.prune * _amp_scale(f) * _amp_scale(g)
        vals = K.qplus_grid(pts, vs, vw, gammas, modes, _ramp_id(), method, ct, sx, sy, sw,
                            *_pack(f), *_pack(g), *_gauss(f), *_gauss(g),
                            f.is_real and g.is_real, prune)
    if isinstance(out, VelocityGrid):
        return [GridFunction(out, vals[:, c]) for c in range(len(kernels))]
    return [vals[:, c] for c in range(len(kernels))]


def qplus_eval(f: AnalyticFn, g: AnalyticFn, out: Union[VelocityGrid, np.ndarray],
               kernel: KernelSpec, quad: QuadConfig = QuadConfig()):
    """Q+(f, g) on a grid (returns GridFunction) or at points (returns array)."""
    return qplus_multi(f, g, out, [kernel], quad)[0]


def loss_eval(g: AnalyticFn, v, kernel: KernelSpec, quad: QuadConfig):
    """pi * sum_j h^3 g(v_*j) |v - v_*j|^gamma (cutoff), at one or many v."""
    if quad.vstar_grid is None:
        raise DomainError("loss_eval needs quad.vstar_grid")
    grid = quad.vstar_grid
    v = np.asarray(v, dtype=float)
    single = v.ndim == 1
    v = np.atleast_2d(v)
    if g.is_zero:
        out = np.zeros(len(v), dtype=complex)
    else:
        check_guard(g, grid, quad.guard, "g")
        vs = grid.flat_points()
        gv = g(vs)
        out = np.empty(len(v), dtype=complex)
        for i, p in enumerate(v):
            r = np.linalg.norm(p - vs, axis=1)
            out[i] = math.pi * grid.cell * np.sum(gv * kernel.weight(r))
    return out[0] if single else out


# -- Radon transforms -----------------------------------------------------------

RADON_QUAD = SphereQuadrature(32, 32, "mu")


def _frames(u):
    """Unit axis and two perpendicular unit vectors for each row of u."""
    r = np.linalg.norm(u, axis=-1)
    uh = np.where(r[..., None] > 0, u / np.where(r > 0, r, 1.0)[..., None], np.array([0.0, 0.0, 1.0]))
    idx = np.argmin(np.abs(uh), axis=-1)
    p = np.eye(3)[idx]
    e1 = p - np.sum(p * uh, axis=-1)[..., None] * uh
    e1 /= np.linalg.norm(e1, axis=-1)[..., None]
    e2 = np.cross(uh, e1)
    return r, uh, e1, e2


def hemisphere_average(h: AnalyticFn, v, v_star, quad: SphereQuadrature = RADON_QUAD):
    """int_{S^2_+} cos(theta) h(v - ((v - v_*).w) w) dOmega, axis along v - v_*."""
    v = np.asarray(v, dtype=float)
    v_star = np.asarray(v_star, dtype=float)
    v, v_star = np.broadcast_arrays(v, v_star)
    r, uh, e1, e2 = _frames(v - v_star)
    ct, sx, sy, sw = quad.flat()
    om = (ct[:, None] * uh[..., None, :] + sx[:, None] * e1[..., None, :]
          + sy[:, None] * e2[..., None, :])
    s = (r[..., None] * ct)[..., None]
    vals = h(v[..., None, :] - s * om)
    return np.sum(vals * (sw * ct), axis=-1)


def sphere_average(h: AnalyticFn, c, r):
    """int_{S^2} h(c + r s) ds in closed form (Gaussian-type atoms)."""
    amp, p, b, e0 = h.gaussian_coefficients()
    c = np.asarray(c, dtype=float)
    r = np.asarray(r, dtype=float)
    c2 = np.sum(c * c, axis=-1)
    tot = np.zeros(np.broadcast_shapes(c2.shape, r.shape), dtype=complex)
    for a in range(len(amp)):
        E0 = -p[a] * (c2 + r * r) + c @ b[a] + e0[a]
        Q = -2.0 * p[a] * c + b[a]
        z = r * np.sqrt(np.sum(Q * Q, axis=-1))
        small = np.abs(z) < 1e-3
        zs = np.where(small, 1.0, z)
        big = (np.exp(E0 + zs) - np.exp(E0 - zs)) / (2.0 * zs)
        ser = np.exp(E0) * (1.0 + z * z / 6.0 + z ** 4 / 120.0)
        tot += amp[a] * 4.0 * math.pi * np.where(small, ser, big)
    return tot


def _angular(h, v, v_star, quad, method):
    if method == "sphere" or (method == "auto" and h.gaussian_type):
        v = np.asarray(v, dtype=float)
        v_star = np.asarray(v_star, dtype=float)
        return 0.25 * sphere_average(h, 0.5 * (v + v_star),
                                     0.5 * np.linalg.norm(v - v_star, axis=-1))
    return hemisphere_average(h, v, v_star, quad or RADON_QUAD)


def conjugated_radon(h: AnalyticFn, v, v_star, gamma: float, variant: str = "T",
                     quad: Optional[SphereQuadrature] = None, method: str = "quadrature"):
    """(tau_{-v_*} T tau_{v_*} h)(v) = |v - v_*|^g int cos(theta) h(v') dOmega.

    Broadcasts over leading axes of v and v_star.
    """
    if variant not in ("T", "T_small"):
        raise ValueError(f"unknown variant {variant!r}")
    v = np.asarray(v, dtype=float)
    v_star = np.asarray(v_star, dtype=float)
    r = np.linalg.norm(v - v_star, axis=-1)
    ang = _angular(h, v, v_star, quad, method)
    w = np.where(r > 0, r, 0.0) ** gamma if gamma else np.ones_like(r)
    if variant == "T_small":
        w = w * s_cut(r)
    out = w * ang
    return out[()] if np.ndim(out) == 0 else out


def radon_eval(h: AnalyticFn, x, gamma: float, variant: str = "T",
               quad: Optional[SphereQuadrature] = None, method: str = "quadrature"):
    x = np.asarray(x, dtype=float)
    if np.any(np.linalg.norm(np.atleast_2d(x), axis=-1) == 0):
        raise DomainError("x must be nonzero")
    return conjugated_radon(h, x, np.zeros_like(x), gamma, variant, quad, method)


def h_sbar_eval(h: AnalyticFn, v, v_star, gamma: float,
                quad: Optional[SphereQuadrature] = None, method: str = "quadrature"):
    """<v>^-g <v_*>^-g int B_sbar(v - v_*, w) h(v') dOmega."""
    v = np.asarray(v, dtype=float)
    v_star = np.asarray(v_star, dtype=float)
    r = np.linalg.norm(v - v_star, axis=-1)
    w = np.where(r > 0, r, 0.0) ** gamma * s_bar(r)
    br = ((1.0 + np.sum(v * v, axis=-1)) * (1.0 + np.sum(v_star * v_star, axis=-1))) ** (-0.5 * gamma)
    out = br * w * _angular(h, v, v_star, quad, method)
    return out[()] if np.ndim(out) == 0 else out


# -- weak form ---------------------------------------------------------------------

def weak_form_rhs(f: AnalyticFn, g: AnalyticFn, h: AnalyticFn, kernel: KernelSpec,
                  quad: QuadConfig) -> complex:
    """sum_v sum_v* f(v) g(v_*) B(v - v_*, w) h(v') over the lattice and hemisphere."""
    grid = quad.vstar_grid
    if grid is None:
        raise DomainError("weak_form_rhs needs quad.vstar_grid")
    if f.is_zero or g.is_zero or h.is_zero:
        return 0j
    check_guard(f, grid, quad.guard, "f")
    check_guard(g, grid, quad.guard, "g")
    method = _resolve_method(quad, h)
    ct, sx, sy, sw = quad.sphere.flat()
    vs = grid.flat_points()
    vw = np.full(len(vs), grid.cell)
    hk, ha, hc, hi, hs2, hsc, hw, hp = _pack(h)
    prune = quad.prune * _amp_scale(f) * _amp_scale(g) * _amp_scale(h)
    rows = K.weak_rows(vs, vw, float(kernel.gamma), CUTOFFS[kernel.cutoff], _ramp_id(), method,
                       ct, sx, sy, sw, f(vs), g(vs), hk, ha, hc, hi, hs2, hsc, hw, hp,
                       *_gauss(h), prune)
    return complex(np.sum(rows))


# -- oracle --------------------------------------------------------------------------

@dataclass(frozen=True)
class OracleLevel:
    n_radial: int = 40
    n_dir_polar: int = 16
    n_dir_azimuth: int = 32
    hemi_polar: int = 12
    hemi_azimuth: int = 24


ORACLE_LEVELS = (OracleLevel(), OracleLevel(56, 24, 48, 16, 32))


@dataclass(frozen=True)
class OracleResult:
    value: complex
    coarse: complex
    rel_change: float
    inconclusive: bool


def _radial_rule(rmax: float, n: int, cutoff: str):
    """Nodes r and weights for int_0^rmax F(r) r^2 dr via r = t^2."""
    tmax = math.sqrt(rmax)
    knots = [0.0]
    if cutoff != "full":
        knots += [math.sqrt(k) for k in (8.0, 16.0) if k < rmax]
    knots.append(tmax)
    per = max(8, -(-n // (len(knots) - 1)))
    ts, ws = [], []
    for a, b in zip(knots[:-1], knots[1:]):
        t, w = gauss_legendre(a, b, per)
        ts.append(t)
        ws.append(w)
    t = np.concatenate(ts)
    w = np.concatenate(ws)
    r = t * t
    return r, w * 2.0 * t * r * r


def _direction_rule(n_pol: int, n_az: int):
    c, w = gauss_legendre(-1.0, 1.0, n_pol)
    s = np.sqrt(1.0 - c * c)
    ph = 2.0 * math.pi * np.arange(n_az) / n_az
    d = np.stack([np.outer(s, np.cos(ph)).ravel(), np.outer(s, np.sin(ph)).ravel(),
                  np.repeat(c, n_az)], axis=1)
    return d, np.repeat(w, n_az) * (2.0 * math.pi / n_az)


def qplus_oracle(f: AnalyticFn, g: AnalyticFn, v, kernel: KernelSpec,
                 levels=ORACLE_LEVELS, rtol: float = 1e-6) -> OracleResult:
    """Q+(f, g)(v) in polar coordinates about v, at two resolutions."""
    v = np.asarray(v, dtype=float)
    if f.is_zero or g.is_zero:
        return OracleResult(0j, 0j, 0.0, False)
    rf = f.effective_radius(1e-18)
    rg = g.effective_radius(1e-18)
    if not (math.isfinite(rf) and math.isfinite(rg)):
        raise DomainError("oracle needs decaying f and g")
    rmax = float(np.linalg.norm(v)) + math.hypot(rf, rg)
    fk, fa, fc, fi, fs2, _, fw, fp = _pack(f)
    gk, ga, gc, gi, gs2, _, gw, gp = _pack(g)
    vals = []
    for lev in levels:
        rad, radw = _radial_rule(rmax, lev.n_radial, kernel.cutoff)
        dirs, dirw = _direction_rule(lev.n_dir_polar, lev.n_dir_azimuth)
        ct, sx, sy, sw = SphereQuadrature(lev.hemi_polar, lev.hemi_azimuth, "theta").flat()
        vals.append(K.polar_point(v[0], v[1], v[2], rad, radw, dirs, dirw,
                                  float(kernel.gamma), CUTOFFS[kernel.cutoff], _ramp_id(),
                                  ct, sx, sy, sw, fk, fa, fc, fi, fs2, fw, fp,
                                  gk, ga, gc, gi, gs2, gw, gp))
    fine, coarse = vals[-1], vals[0]
    scale = max(abs(fine), 1e-300)
    change = abs(fine - coarse) / scale
    return OracleResult(complex(fine), complex(coarse), float(change), bool(change > rtol))


def points_csv(pts, values, comment: Optional[str] = None) -> str:
    """Rows "vx,vy,vz,value"; complex values are written as re+imj."""
    lines = [f"# {comment}"] if comment else []
    lines.append("vx,vy,vz,value")
    for p, z in zip(np.atleast_2d(pts), np.atleast_1d(values)):
        z = complex(z)
        val = repr(z.real) if z.imag == 0 else repr(z).strip("()")
        lines.append(f"{float(p[0])!r},{float(p[1])!r},{float(p[2])!r},{val}")
    return "\n".join(lines) + "\n"


def write_points_csv(path, pts, values, comment: Optional[str] = None) -> None:
    with open(path, "w") as fh:
        fh.write(points_csv(pts, values, comment))
