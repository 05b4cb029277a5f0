"""Closed-form test functions on R^3.

Every function is stored as a flat list of *atoms*. An atom evaluates to

    amp * exp(i (k . v + phase)) * base(v)

where ``base`` is an isotropic Gaussian ``exp(-|v-C|^2 / (2 W^2))``, a
smooth bump ``exp(1 - 1/(1 - |v-C|^2/R^2))`` supported in the ball of
radius ``R``, or the constant 1. Translation, dilation and modulation act on
the atom parameters directly, so composition never loses exactness.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

GAUSSIAN = 0
BUMP = 1
CONST = 2

_KIND_NAMES = {GAUSSIAN: "gaussian", BUMP: "bump", CONST: "const"}


@dataclass(frozen=True)
class Atom:
    kind: int
    amp: complex
    center: tuple[float, float, float] = (0.0, 0.0, 0.0)
    scale: float = 1.0
    wavevector: tuple[float, float, float] = (0.0, 0.0, 0.0)
    phase: float = 0.0

    def translated(self, m) -> "Atom":
        # h(v + m)
        m = np.asarray(m, dtype=float)
        c = np.asarray(self.center) - m
        k = np.asarray(self.wavevector)
        return Atom(self.kind, self.amp, tuple(c), self.scale,
                    self.wavevector, self.phase + float(k @ m))

    def dilated(self, lam: float) -> "Atom":
        # h(lam * v)
        c = np.asarray(self.center) / lam
        k = np.asarray(self.wavevector) * lam
        return Atom(self.kind, self.amp, tuple(c), self.scale / lam,
                    tuple(k), self.phase)

    def modulated(self, q) -> "Atom":
        k = np.asarray(self.wavevector) + np.asarray(q, dtype=float)
        return Atom(self.kind, self.amp, self.center, self.scale,
                    tuple(k), self.phase)

    def scaled(self, a: complex) -> "Atom":
        return Atom(self.kind, self.amp * a, self.center, self.scale,
                    self.wavevector, self.phase)


@dataclass(frozen=True)
class AnalyticFn:
    """Finite sum of atoms; immutable, hashable, exact pointwise."""

    atoms: tuple[Atom, ...] = field(default_factory=tuple)
    label: str = ""

    # -- constructors -----------------------------------------------------
    @staticmethod
    def gaussian(center=(0.0, 0.0, 0.0), width: float = 1.0,
                 amplitude: complex = 1.0) -> "AnalyticFn":
        if width <= 0:
            raise ValueError("gaussian width must be positive")
        c = tuple(float(x) for x in center)
        return AnalyticFn((Atom(GAUSSIAN, complex(amplitude), c, float(width)),),
                          f"gaussian(c={_fmt_vec(c)};w={_num(width)};a={_fmt_num(amplitude)})")

    @staticmethod
    def bump(center=(0.0, 0.0, 0.0), radius: float = 1.0,
             amplitude: complex = 1.0) -> "AnalyticFn":
        if radius <= 0:
            raise ValueError("bump radius must be positive")
        c = tuple(float(x) for x in center)
        return AnalyticFn((Atom(BUMP, complex(amplitude), c, float(radius)),),
                          f"bump(c={_fmt_vec(c)};r={_num(radius)};a={_fmt_num(amplitude)})")

    @staticmethod
    def const(amplitude: complex = 1.0) -> "AnalyticFn":
        return AnalyticFn((Atom(CONST, complex(amplitude)),),
                          f"const(a={_fmt_num(amplitude)})")

    @staticmethod
    def zero() -> "AnalyticFn":
        return AnalyticFn((), "zero()")

    # -- algebra ------------------------------------------------------------
    def translate(self, m) -> "AnalyticFn":
        return AnalyticFn(tuple(a.translated(m) for a in self.atoms),
                          f"translate({_fmt_vec(m)};{self.label})")

    def dilate(self, lam: float) -> "AnalyticFn":
        if lam <= 0:
            raise ValueError("dilation factor must be positive")
        return AnalyticFn(tuple(a.dilated(lam) for a in self.atoms),
                          f"dilate({_num(lam)};{self.label})")

    def modulate(self, k) -> "AnalyticFn":
        return AnalyticFn(tuple(a.modulated(k) for a in self.atoms),
                          f"modulate({_fmt_vec(k)};{self.label})")

    def __add__(self, other: "AnalyticFn") -> "AnalyticFn":
        return AnalyticFn(self.atoms + other.atoms, f"{self.label}+{other.label}")

    def __sub__(self, other: "AnalyticFn") -> "AnalyticFn":
        neg = (-1.0) * other
        return AnalyticFn(self.atoms + neg.atoms, f"{self.label}-({other.label})")

    def __rmul__(self, a: complex) -> "AnalyticFn":
        return AnalyticFn(tuple(at.scaled(a) for at in self.atoms),
                          f"{_fmt_num(a)}*({self.label})")

    def __neg__(self) -> "AnalyticFn":
        return (-1.0) * self

    # -- queries ------------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return all(a.amp == 0 for a in self.atoms)

    @property
    def is_real(self) -> bool:
        return all(a.amp.imag == 0 and not any(a.wavevector) and a.phase == 0
                   for a in self.atoms)

    @property
    def gaussian_type(self) -> bool:
        """True when every atom is a (possibly modulated) Gaussian or constant."""
        return all(a.kind != BUMP for a in self.atoms)

    def __call__(self, v) -> np.ndarray:
        """Evaluate at points ``v`` of shape (..., 3)."""
        v = np.asarray(v, dtype=float)
        out = np.zeros(v.shape[:-1], dtype=complex)
        for a in self.atoms:
            d = v - np.asarray(a.center)
            r2 = np.einsum("...i,...i->...", d, d)
            if a.kind == GAUSSIAN:
                base = np.exp(-r2 / (2.0 * a.scale ** 2))
            elif a.kind == BUMP:
                s = r2 / a.scale ** 2
                base = np.zeros_like(s)
                inside = s < 1.0
                base[inside] = np.exp(1.0 - 1.0 / (1.0 - s[inside]))
            else:
                base = np.ones_like(r2)
            mod = np.exp(1j * (v @ np.asarray(a.wavevector) + a.phase))
            out += a.amp * mod * base
        return out

    def l1_mass(self) -> complex:
        """Exact integral over R^3 for Gaussian atoms (bumps integrated numerically)."""
        total = 0j
        for a in self.atoms:
            k2 = float(np.dot(a.wavevector, a.wavevector))
            if a.kind == GAUSSIAN:
                ph = np.exp(1j * (np.dot(a.wavevector, a.center) + a.phase))
                total += a.amp * ph * (2 * np.pi) ** 1.5 * a.scale ** 3 \
                    * np.exp(-0.5 * a.scale ** 2 * k2)
            elif a.kind == BUMP:
                total += a.amp * _bump_integral(a)
            else:
                raise ValueError("constant atom has no finite integral")
        return total

    def to_arrays(self):
        """Flat arrays for compiled kernels."""
        n = len(self.atoms)
        kind = np.zeros(n, dtype=np.int64)
        amp = np.zeros(n, dtype=np.complex128)
        center = np.zeros((n, 3))
        scale = np.ones(n)
        wave = np.zeros((n, 3))
        phase = np.zeros(n)
        for i, a in enumerate(self.atoms):
            kind[i] = a.kind
            amp[i] = a.amp
            center[i] = a.center
            scale[i] = a.scale
            wave[i] = a.wavevector
            phase[i] = a.phase
        return kind, amp, center, scale, wave, phase

    def gaussian_coefficients(self):
        """Each atom as amp * exp(-p|v|^2 + b.v + e0) with complex b, e0.

        Constants have p = 0. Raises for bumps.
        """
        n = len(self.atoms)
        amp = np.zeros(n, dtype=np.complex128)
        p = np.zeros(n)
        b = np.zeros((n, 3), dtype=np.complex128)
        e0 = np.zeros(n, dtype=np.complex128)
        for i, a in enumerate(self.atoms):
            if a.kind == BUMP:
                raise ValueError("bump atoms have no Gaussian form")
            c = np.asarray(a.center)
            k = np.asarray(a.wavevector)
            amp[i] = a.amp
            if a.kind == GAUSSIAN:
                p[i] = 0.5 / a.scale ** 2
                b[i] = 2 * p[i] * c + 1j * k
                e0[i] = -p[i] * (c @ c) + 1j * a.phase
            else:
                b[i] = 1j * k
                e0[i] = 1j * a.phase
        return amp, p, b, e0

    def effective_radius(self, rel_tol: float = 1e-16) -> float:
        """Radius about the origin outside which |f| < rel_tol * sum|amp|."""
        r = 0.0
        for a in self.atoms:
            c = float(np.linalg.norm(a.center))
            if a.kind == GAUSSIAN:
                r = max(r, c + a.scale * np.sqrt(2 * np.log(1.0 / rel_tol)))
            elif a.kind == BUMP:
                r = max(r, c + a.scale)
            else:
                return np.inf
        return r

    def __str__(self) -> str:
        return self.label or "zero()"


def _bump_integral(a: Atom) -> complex:
    from scipy.integrate import quad
    k = float(np.linalg.norm(a.wavevector))
    R = a.scale

    def radial(r):
        s = (r / R) ** 2
        if s >= 1:
            return 0.0
        sinc = np.sinc(k * r / np.pi) if k else 1.0
        return 4 * np.pi * r * r * np.exp(1.0 - 1.0 / (1.0 - s)) * sinc

    val, _ = quad(radial, 0, R, epsabs=1e-14, epsrel=1e-13, limit=200)
    ph = np.exp(1j * (np.dot(a.wavevector, a.center) + a.phase))
    return ph * val


def _num(x: float) -> str:
    # shortest round-trip repr, so labels parse back to the same function
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


def _fmt_num(a: complex) -> str:
    a = complex(a)
    if a.imag == 0:
        return _num(a.real)
    return f"{_num(a.real)}{'+' if a.imag >= 0 else '-'}{_num(abs(a.imag))}j"


def _fmt_vec(v) -> str:
    return ",".join(_num(x) for x in v)


# ---------------------------------------------------------------------------
# compact grammar
#
#   expr    := term (('+' | '-') term)*
#   term    := [number '*'] atom
#   atom    := gaussian(c=x,y,z;w=W;a=A) | bump(c=x,y,z;r=R;a=A) | const(a=A)
#            | zero() | dilate(lam; expr) | translate(x,y,z; expr)
#            | modulate(x,y,z; expr) | '(' expr ')'
#
# Missing keys take defaults (c=0,0,0; w=1; r=1; a=1).

_TOKEN = re.compile(r"\s*([A-Za-z_]+|[-+*()]|[0-9.eE+-]+)")


class GrammarError(ValueError):
    pass


def parse(text: str) -> AnalyticFn:
    p = _Parser(text)
    fn = p.expr()
    p.skip_ws()
    if p.pos != len(p.text):
        raise GrammarError(f"trailing input at {p.pos}: {p.text[p.pos:]!r}")
    return fn


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            raise GrammarError(f"expected {ch!r} at {self.pos}")
        self.pos += 1

    def ident(self) -> str:
        self.skip_ws()
        m = re.compile(r"[A-Za-z_]+").match(self.text, self.pos)
        if not m:
            raise GrammarError(f"expected a name at {self.pos}")
        self.pos = m.end()
        return m.group(0)

    def number(self) -> float:
        self.skip_ws()
        m = re.compile(r"[-+]?(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?").match(self.text, self.pos)
        if not m:
            raise GrammarError(f"expected a number at {self.pos}")
        self.pos = m.end()
        return float(m.group(0))

    def vector(self) -> tuple[float, float, float]:
        vals = [self.number()]
        while self.peek() == ",":
            self.pos += 1
            vals.append(self.number())
        if len(vals) != 3:
            raise GrammarError(f"expected 3 components, got {len(vals)}")
        return tuple(vals)

    def expr(self) -> AnalyticFn:
        fn = self.term()
        while self.peek() in ("+", "-"):
            op = self.text[self.pos]
            self.pos += 1
            rhs = self.term()
            fn = fn + rhs if op == "+" else fn - rhs
        return fn

    def term(self) -> AnalyticFn:
        ch = self.peek()
        if ch and (ch.isdigit() or ch in ".-"):
            a = self.number()
            self.expect("*")
            return a * self.atom()
        return self.atom()

    def atom(self) -> AnalyticFn:
        if self.peek() == "(":
            self.pos += 1
            fn = self.expr()
            self.expect(")")
            return fn
        name = self.ident()
        if self.peek() != "(" and name in _BARE:
            return _BARE[name]()
        self.expect("(")
        if name in ("gaussian", "bump", "const"):
            kw = self.kwargs()
            self.expect(")")
            c = kw.pop("c", (0.0, 0.0, 0.0))
            a = kw.pop("a", 1.0)
            if name == "gaussian":
                fn = AnalyticFn.gaussian(c, kw.pop("w", 1.0), a)
            elif name == "bump":
                fn = AnalyticFn.bump(c, kw.pop("r", 1.0), a)
            else:
                fn = AnalyticFn.const(a)
            if kw:
                raise GrammarError(f"unknown keys for {name}: {sorted(kw)}")
            return fn
        if name == "zero":
            self.expect(")")
            return AnalyticFn.zero()
        if name == "dilate":
            lam = self.number()
            self.expect(";")
            inner = self.expr()
            self.expect(")")
            return inner.dilate(lam)
        if name in ("translate", "modulate"):
            vec = self.vector()
            self.expect(";")
            inner = self.expr()
            self.expect(")")
            return inner.translate(vec) if name == "translate" else inner.modulate(vec)
        raise GrammarError(f"unknown function {name!r}")

    def kwargs(self) -> dict:
        kw: dict = {}
        if self.peek() == ")":
            return kw
        while True:
            key = self.ident()
            self.expect("=")
            if key == "c":
                kw[key] = self.vector()
            elif key in ("w", "r", "a"):
                kw[key] = self.number()
            else:
                raise GrammarError(f"unknown key {key!r}")
            if self.peek() == ";":
                self.pos += 1
                continue
            return kw


_BARE = {"gaussian": AnalyticFn.gaussian, "bump": AnalyticFn.bump,
         "const": AnalyticFn.const, "zero": AnalyticFn.zero}


GRAMMAR_HELP = """\
function grammar:
  gaussian(c=x,y,z;w=W;a=A)   A*exp(-|v-c|^2/(2W^2))
  bump(c=x,y,z;r=R;a=A)       A*exp(1-1/(1-|v-c|^2/R^2)) inside |v-c|<R
  const(a=A), zero()
  dilate(lam; F)              F(lam*v)
  translate(x,y,z; F)         F(v+m)
  modulate(x,y,z; F)          exp(i k.v) F(v)
  F+G, F-G, 2.5*F
  a bare name (gaussian, bump, const, zero) takes all defaults
"""
