"""Collision geometry and calculus of the bilinear phase on the sphere.

Vectors are plain ``numpy`` arrays of shape (3,) (or (..., 3) where noted).
Spherical coordinates are always taken in the frame whose polar axis is
``x/|x|``; the azimuth origin is the projection of the first coordinate axis
that makes an angle of more than ~25 degrees with ``x`` (see :func:`frame`).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PoleError, PreconditionError

COLINEAR_TOL = 1e-8  # radians
UNIT_TOL = 1e-10


@dataclass(frozen=True)
class SpherePoint:
    theta: float
    phi: float

    def unit(self) -> np.ndarray:
        """Unit vector in the *standard* basis, i.e. for polar axis e_z."""
        st = np.sin(self.theta)
        return np.array([np.cos(self.phi) * st, np.sin(self.phi) * st, np.cos(self.theta)])

    def in_frame(self, basis: np.ndarray) -> np.ndarray:
        return self.unit() @ basis


@dataclass(frozen=True)
class CriticalPair:
    omega_plus: np.ndarray
    omega_minus: np.ndarray
    sigma_plus: float
    sigma_minus: float
    hess_plus: np.ndarray
    hess_minus: np.ndarray
    degenerate: bool
    theta0: float


def _as_vec(v, name: str) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (3,):
        raise DomainError(f"{name} must be a 3-vector")
    if not np.all(np.isfinite(v)):
        raise DomainError(f"{name} has non-finite components")
    return v


def _nonzero(v, name: str) -> np.ndarray:
    v = _as_vec(v, name)
    if not np.any(v):
        raise DomainError(f"{name} must be nonzero")
    return v


def frame(x) -> np.ndarray:
    """Rows (e1, e2, e3) of a right-handed orthonormal frame with e3 = x/|x|."""
    x = _nonzero(x, "x")
    e3 = x / np.linalg.norm(x)
    for i in range(3):
        if abs(e3[i]) < 0.9:
            a = np.zeros(3)
            a[i] = 1.0
            break
    e1 = a - (a @ e3) * e3
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(e3, e1)
    return np.array([e1, e2, e3])


def sphere_point(x, omega) -> SpherePoint:
    """Coordinates of the unit vector ``omega`` in the frame of ``x``."""
    b = frame(x)
    w = b @ np.asarray(omega, dtype=float)
    theta = float(np.arctan2(np.hypot(w[0], w[1]), w[2]))
    phi = float(np.arctan2(w[1], w[0]) % (2 * np.pi))
    return SpherePoint(theta, phi)


def angle(x, xi) -> float:
    """Angle between two nonzero vectors, accurate near 0 and pi."""
    x = _nonzero(x, "x")
    xi = _nonzero(xi, "xi")
    return float(np.arctan2(np.linalg.norm(np.cross(x, xi)), x @ xi))


def pre_collision(v, v_star, omega):
    """Pre-collision velocities (v', v'_*) for deflection direction ``omega``.

    Broadcasts over leading axes.
    """
    v = np.asarray(v, dtype=float)
    v_star = np.asarray(v_star, dtype=float)
    omega = np.asarray(omega, dtype=float)
    if np.any(np.abs(np.linalg.norm(omega, axis=-1) - 1.0) > UNIT_TOL):
        raise PreconditionError("omega must be a unit vector")
    s = np.sum(omega * (v - v_star), axis=-1)[..., None]
    return v - s * omega, v_star + s * omega


def _xi_coords(x, xi) -> tuple[float, float]:
    b = frame(x)
    w = b @ (xi / np.linalg.norm(xi))
    return float(np.arctan2(np.hypot(w[0], w[1]), w[2])), float(np.arctan2(w[1], w[0]))


def phase_sigma(x, xi, omega) -> float:
    """sigma(x, xi; omega) = (x.omega)(xi.omega) / (|x||xi|).

    ``omega`` is a :class:`SpherePoint` in the frame of ``x`` or a unit 3-vector.
    """
    x = _nonzero(x, "x")
    xi = _nonzero(xi, "xi")
    if not isinstance(omega, SpherePoint):
        omega = sphere_point(x, omega)
    th0, ph0 = _xi_coords(x, xi)
    th, ph = omega.theta, omega.phi
    return float(np.cos(th) * (np.cos(ph - ph0) * np.sin(th0) * np.sin(th)
                               + np.cos(th0) * np.cos(th)))


def _partials(th, ph, th0, ph0):
    d = ph - ph0
    s2, c2 = np.sin(2 * th), np.cos(2 * th)
    st0, ct0 = np.sin(th0), np.cos(th0)
    f_t = c2 * st0 * np.cos(d) - s2 * ct0
    f_p = -0.5 * s2 * st0 * np.sin(d)
    f_tt = -2 * s2 * st0 * np.cos(d) - 2 * c2 * ct0
    f_tp = -c2 * st0 * np.sin(d)
    f_pp = -0.5 * s2 * st0 * np.cos(d)
    return f_t, f_p, f_tt, f_tp, f_pp


def sphere_calculus(x, xi, omega) -> tuple[np.ndarray, np.ndarray]:
    """Covariant gradient and Hessian of sigma in the basis (e_theta, e_phi)."""
    x = _nonzero(x, "x")
    xi = _nonzero(xi, "xi")
    if not isinstance(omega, SpherePoint):
        omega = sphere_point(x, omega)
    th, ph = omega.theta, omega.phi
    st = np.sin(th)
    if abs(st) < 1e-12:
        raise PoleError("e_phi undefined at the poles")
    th0, ph0 = _xi_coords(x, xi)
    f_t, f_p, f_tt, f_tp, f_pp = _partials(th, ph, th0, ph0)
    ct = np.cos(th)
    grad = np.array([f_t, f_p / st])
    off = f_tp / st - ct / st ** 2 * f_p
    hess = np.array([[f_tt, off], [off, f_pp / st ** 2 + ct / st * f_t]])
    return grad, hess


def critical_points(x, xi) -> CriticalPair:
    """Critical directions of (x.omega)(xi.omega) on the hemisphere x.omega >= 0.

    The Hessians are in the basis (e_theta, e_phi) of the frame of ``x``:
    ``diag(-2, -2 sigma_+)`` at omega_+ and ``diag(2, -2 sigma_-)`` at omega_-.
    Along the meridian through omega_- the phase is convex, so the first entry
    is +2 there; the second-order check in the test-suite pins this down.
    """
    x = _nonzero(x, "x")
    xi = _nonzero(xi, "xi")
    xh = x / np.linalg.norm(x)
    xih = xi / np.linalg.norm(xi)
    th0 = angle(x, xi)
    c0 = float(np.cos(th0))
    sp, sm = 0.5 * (c0 + 1.0), 0.5 * (c0 - 1.0)
    nan2 = np.full((2, 2), np.nan)
    if th0 < COLINEAR_TOL or th0 > np.pi - COLINEAR_TOL:
        perp = frame(x)[0]
        if th0 < COLINEAR_TOL:
            wp, wm = xh, perp
            sp, sm = 1.0, 0.0
        else:
            wp, wm = perp, xh
            sp, sm = 0.0, -1.0
        return CriticalPair(wp, wm, sp, sm, nan2, nan2, True, th0)
    wp = xih + xh
    wp /= np.linalg.norm(wp)
    wm = xh - xih
    wm /= np.linalg.norm(wm)
    return CriticalPair(wp, wm, sp, sm,
                        np.diag([-2.0, -2.0 * sp]), np.diag([2.0, -2.0 * sm]),
                        False, th0)
