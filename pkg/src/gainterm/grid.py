"""Uniform velocity grids, the scaled DFT, D^s and the norm family.

Fourier convention: f^(xi) = int exp(-i x.xi) f(x) dx, inverse with (2 pi)^-3.
On the grid v_j = -L + j h (h = 2L/n) the dual nodes are xi_k = (pi/L) k with
k = -n/2 .. n/2-1, and

    f^(xi_k) ~ h^3 sum_j exp(-i v_j.xi_k) f(v_j)
             = h^3 (-1)^(k1+k2+k3) FFT(f)[k].

Homogeneous Sobolev norms use the measure (dxi)^3 (2 pi)^-3 so that the
alpha = 0 case is Plancherel.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.fft as sfft

from .analytic import AnalyticFn
from .errors import DomainError, MeanZeroError, TruncationError

# relative to sum |amplitude|; e^{-49/2} ~ 2.3e-11 must pass on n=16, L=8
GUARD = 1e-10
MEAN_ZERO_TOL = 1e-10


@dataclass(frozen=True)
class VelocityGrid:
    n: int
    L: float

    def __post_init__(self):
        # powers of two are the default; any even n >= 8 keeps the dual grid
        # symmetric, which the 16 -> 24 refinement checks rely on
        if self.n < 8 or self.n % 2:
            raise DomainError(f"grid size must be even and >= 8, got {self.n}")
        if not self.L > 0:
            raise DomainError("half-width must be positive")

    @property
    def h(self) -> float:
        return 2.0 * self.L / self.n

    @property
    def dxi(self) -> float:
        return math.pi / self.L

    @property
    def cell(self) -> float:
        return self.h ** 3

    def axis(self) -> np.ndarray:
        return -self.L + self.h * np.arange(self.n)

    def points(self) -> np.ndarray:
        """(n, n, n, 3) node coordinates, row-major in (i, j, k)."""
        a = self.axis()
        return np.stack(np.meshgrid(a, a, a, indexing="ij"), axis=-1)

    def flat_points(self) -> np.ndarray:
        return self.points().reshape(-1, 3)

    def freq_axis(self) -> np.ndarray:
        return self.dxi * np.arange(-self.n // 2, self.n // 2)

    def freq_points(self) -> np.ndarray:
        a = self.freq_axis()
        return np.stack(np.meshgrid(a, a, a, indexing="ij"), axis=-1)

    def freq_abs(self) -> np.ndarray:
        a = self.freq_axis() ** 2
        return np.sqrt(a[:, None, None] + a[None, :, None] + a[None, None, :])

    def scaled(self, factor: float) -> "VelocityGrid":
        return VelocityGrid(self.n, self.L * factor)


@dataclass(frozen=True)
class GridFunction:
    grid: VelocityGrid
    values: np.ndarray
    space: str = "v"  # "v" for velocity samples, "xi" for the dual grid
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        n = self.grid.n
        if vals.size != n ** 3:
            raise DomainError(f"expected {n ** 3} values, got {vals.size}")
        vals = vals.reshape(n, n, n)
        if not np.all(np.isfinite(vals)):
            raise DomainError("grid function has non-finite values")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def with_values(self, values, space=None) -> "GridFunction":
        return GridFunction(self.grid, values, self.space if space is None else space)

    def __add__(self, other):
        return self.with_values(self.values + other.values)

    def __sub__(self, other):
        return self.with_values(self.values - other.values)

    def __mul__(self, c):
        return self.with_values(self.values * c)

    __rmul__ = __mul__

    def inner(self, other) -> complex:
        """sum f conj(g) h^3 on the velocity grid."""
        return complex(np.sum(self.values * np.conj(other.values)) * self.grid.cell)

    def shifted(self, m: tuple[int, int, int]) -> "GridFunction":
        """Circular lattice shift by m nodes (exact tau on the periodic grid)."""
        return self.with_values(np.roll(self.values, shift=tuple(-int(s) for s in m), axis=(0, 1, 2)))


def boundary_shell_max(values: np.ndarray) -> float:
    a = np.abs(values)
    return float(max(a[0].max(), a[-1].max(), a[:, 0].max(), a[:, -1].max(),
                     a[:, :, 0].max(), a[:, :, -1].max()))


def sample_on_grid(fn: AnalyticFn, grid: VelocityGrid, guard: float = GUARD,
                   mode: str = "error") -> GridFunction:
    """Pointwise samples; the outermost layer of nodes must stay below ``guard``."""
    vals = fn(grid.points())
    shell = boundary_shell_max(vals)
    scale = max(1.0, float(sum(abs(a.amp) for a in fn.atoms)))
    if shell > guard * scale:
        msg = f"|f| reaches {shell:.3g} on the boundary shell of the L={grid.L} box"
        if mode == "error":
            raise TruncationError(msg)
        if mode == "warn":
            warnings.warn(msg, RuntimeWarning, stacklevel=2)
    return GridFunction(grid, vals, "v", {"shell_max": shell})


def _sign_pattern(n: int) -> np.ndarray:
    s = np.where(np.arange(-n // 2, n // 2) % 2 == 0, 1.0, -1.0)
    return s[:, None, None] * s[None, :, None] * s[None, None, :]


def dft(gf: GridFunction, direction: str = "forward") -> GridFunction:
    g = gf.grid
    sign = _sign_pattern(g.n)
    if direction == "forward":
        if gf.space != "v":
            raise DomainError("forward transform expects velocity samples")
        F = sfft.fftshift(sfft.fftn(gf.values)) * sign * g.cell
        return GridFunction(g, F, "xi")
    if direction == "inverse":
        if gf.space != "xi":
            raise DomainError("inverse transform expects dual-grid samples")
        f = sfft.ifftn(sfft.ifftshift(gf.values * sign)) / g.cell
        return GridFunction(g, f, "v")
    raise ValueError(f"unknown direction {direction!r}")


def _check_mean_zero(F: np.ndarray, n: int, tol: float = MEAN_ZERO_TOL):
    c = n // 2
    if abs(F[c, c, c]) > tol * max(1.0, float(np.abs(F).max())):
        raise MeanZeroError(f"zero mode {abs(F[c, c, c]):.3g} does not vanish")


def apply_dpow(gf: GridFunction, s: float, tol: float = MEAN_ZERO_TOL) -> GridFunction:
    """D^s f = F^-1(|xi|^s f^)."""
    if s == 0:
        return gf
    F = dft(gf).values.copy()
    g = gf.grid
    c = g.n // 2
    if s < 0:
        _check_mean_zero(F, g.n, tol)
    k = g.freq_abs()
    k[c, c, c] = 1.0
    F *= k ** s
    F[c, c, c] = 0.0
    return dft(GridFunction(g, F, "xi"), "inverse")


@dataclass(frozen=True)
class NormSpec:
    kind: str
    p: float = 2.0
    q: float = 0.0
    alpha: float = 0.0

    def __post_init__(self):
        if self.kind not in ("lebesgue", "sobolev_hom", "sobolev_inhom"):
            raise ValueError(f"unknown norm kind {self.kind!r}")
        if self.kind == "lebesgue" and not self.p >= 1:
            raise ValueError(f"p must be >= 1, got {self.p}")

    @classmethod
    def lebesgue(cls, p, q=0.0):
        return cls("lebesgue", p=p, q=q)

    @classmethod
    def hom(cls, alpha):
        return cls("sobolev_hom", alpha=alpha)

    @classmethod
    def inhom(cls, alpha):
        return cls("sobolev_inhom", alpha=alpha)


def norm(gf: GridFunction, spec: NormSpec, tol: float = MEAN_ZERO_TOL,
         fhat: np.ndarray | None = None) -> float:
    g = gf.grid
    if spec.kind == "lebesgue":
        a = np.abs(gf.values)
        if spec.q:
            v2 = np.sum(g.points() ** 2, axis=-1)
            a = a * (1.0 + v2) ** (0.5 * spec.q)
        if math.isinf(spec.p):
            return float(a.max())
        return float((np.sum(a ** spec.p) * g.cell) ** (1.0 / spec.p))
    F = dft(gf).values if fhat is None else fhat
    k = g.freq_abs()
    c = g.n // 2
    if spec.kind == "sobolev_hom":
        if spec.alpha < 0:
            _check_mean_zero(F, g.n, tol)
        k[c, c, c] = 1.0
        w = k ** (2.0 * spec.alpha)
        w[c, c, c] = 0.0 if spec.alpha != 0 else 1.0
    else:
        w = (1.0 + k * k) ** spec.alpha
    val = np.sum(w * np.abs(F) ** 2) * g.dxi ** 3 / (2.0 * math.pi) ** 3
    return float(math.sqrt(val))


# -- GFv1 text format -----------------------------------------------------------

def write_gf(gf: GridFunction, path, comment: str | None = None) -> None:
    """Header "GFv1 n L", optional '#' comment lines, then n^3 rows "re im"."""
    g = gf.grid
    with open(path, "w") as fh:
        fh.write(f"GFv1 {g.n} {g.L!r}\n")
        if comment:
            fh.write(f"# {comment}\n")
        for z in gf.values.ravel():
            fh.write(f"{float(z.real)!r} {float(z.imag)!r}\n")


def read_gf(path) -> GridFunction:
    with open(path) as fh:
        head = fh.readline().split()
        if len(head) != 3 or head[0] != "GFv1":
            raise DomainError("not a GFv1 file")
        n, L = int(head[1]), float(head[2])
        data = np.loadtxt(fh, ndmin=2)
    if data.shape != (n ** 3, 2):
        raise DomainError(f"expected {n ** 3} rows of 're im', got {data.shape[0]}")
    return GridFunction(VelocityGrid(n, L), data[:, 0] + 1j * data[:, 1])
