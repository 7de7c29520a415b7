"""Catalog of analytic self-maps of the unit disk (Schur functions).

Every map comes with closed-form evaluation and derivative, plus the
metadata the rest of the library needs: univalence, an exact sup-norm
when one is known, and whether the origin is fixed.  The star of the
catalog is the cusp map, built from a Moebius transform onto the right
half-disk followed by log/inversion stages; its image is the region
bounded by three circular arcs meeting at 1.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SymbolMap",
    "AffineMap",
    "MoebiusMap",
    "CuspMap",
    "ComposedMap",
    "CoefficientMap",
    "CUSP_DIAMETER",
    "cusp_halfdisk_map",
    "evaluate",
    "derivative",
    "evaluate_boundary",
    "pseudo_hyperbolic_sup",
    "GridSpec",
    "parse_symbol",
    "builtin_contractions",
]

# Diameter of the cusp image along the real axis; the image is the inside of
# D(1-a/2, a/2) minus the closed disks D(1 +/- ia/2, a/2), all three circles
# passing through 1.  Chosen so the cusp map sends 0 to 0.
CUSP_DIAMETER = 1.0 - (2.0 / math.pi) * math.log(math.sqrt(2.0) - 1.0)

_BOUNDARY_RHO = 1.0 - 1e-9  # radial-limit fallback radius


class DomainError(ValueError):
    """Evaluation requested outside the open unit disk."""


def _check_in_disk(z):
    if np.any(np.abs(z) >= 1.0):
        raise DomainError("evaluation point must satisfy |z| < 1")


@dataclass(frozen=True)
class SymbolMap:
    """Base for all symbols.  Instances are immutable and thread-safe."""

    is_univalent: bool = field(default=False, init=False)
    sup_norm_hint: float | None = field(default=None, init=False)
    fixes_origin: bool = field(default=False, init=False)

    def __call__(self, z):
        return self.evaluate(z)

    def evaluate(self, z):
        raise NotImplementedError

    def derivative(self, z):
        raise NotImplementedError

    def spec_string(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class AffineMap(SymbolMap):
    """z -> r e^{i theta} z.  Identity for r=1, theta=0."""

    r: float
    theta: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.r <= 1.0:
            raise ValueError("affine scale must lie in (0, 1]")
        object.__setattr__(self, "is_univalent", True)
        object.__setattr__(self, "sup_norm_hint", self.r)
        object.__setattr__(self, "fixes_origin", True)

    @property
    def factor(self) -> complex:
        return self.r * complex(math.cos(self.theta), math.sin(self.theta))

    def evaluate(self, z):
        _check_in_disk(z)
        return self.factor * np.asarray(z, dtype=complex)

    def derivative(self, z):
        _check_in_disk(z)
        return np.full_like(np.asarray(z, dtype=complex), self.factor)

    def spec_string(self):
        return f"affine:r={self.r!r},theta={self.theta!r}"


@dataclass(frozen=True)
class MoebiusMap(SymbolMap):
    """Disk automorphism z -> (u - z)/(1 - conj(u) z), u in the disk."""

    u: complex

    def __post_init__(self):
        if abs(self.u) >= 1.0:
            raise ValueError("Moebius parameter must lie in the open disk")
        object.__setattr__(self, "is_univalent", True)
        object.__setattr__(self, "sup_norm_hint", 1.0)
        object.__setattr__(self, "fixes_origin", self.u == 0)

    def evaluate(self, z):
        _check_in_disk(z)
        z = np.asarray(z, dtype=complex)
        return (self.u - z) / (1.0 - np.conj(self.u) * z)

    def derivative(self, z):
        _check_in_disk(z)
        z = np.asarray(z, dtype=complex)
        return (abs(self.u) ** 2 - 1.0) / (1.0 - np.conj(self.u) * z) ** 2

    def spec_string(self):
        u = complex(self.u)
        return f"moebius:u={u.real!r}{u.imag:+}i"


def cusp_halfdisk_map(z):
    """First stage of the cusp chain: conformal map of the disk onto the
    right half-disk {|w| < 1, Re w > 0}.

    Sends 1 -> 0, -1 -> 1, i -> -i, -i -> i and 0 -> sqrt(2) - 1.  Safe on
    the closed disk; the pole at z = -i is special-cased to its limit value
    i, and boundary points landing exactly on the sqrt branch cut are
    regularized toward the interior side (the image of the open disk is the
    open upper half-plane, so +0 imaginary part is the correct limit).
    """
    z = np.asarray(z, dtype=complex)
    num = z - 1j
    den = 1j * z - 1.0
    pole = np.abs(den) < 1e-300
    with np.errstate(divide="ignore", invalid="ignore"):
        q = num / np.where(pole, 1.0, den)
        q = q + 0.0  # -0.0 imag -> +0.0: take the branch continuous from above
        w = np.sqrt(q)
        out = (w - 1j) / (-1j * w + 1.0)
    out = np.where(pole, 1j, out)
    return out[()] if out.ndim == 0 else out


def _cusp_eval(z):
    """Full cusp chain; valid on the closed disk minus the corner z = 1."""
    z = np.asarray(z, dtype=complex)
    h0 = np.asarray(cusp_halfdisk_map(z))
    tip = np.abs(h0) < 1e-300  # z = 1 maps to the cusp point w = 1
    with np.errstate(divide="ignore", invalid="ignore"):
        h1 = np.log(np.where(tip, 1.0, h0))
        h2 = 1.0 - (2.0 / math.pi) * h1
        out = 1.0 - CUSP_DIAMETER / h2
    out = np.where(tip, 1.0, out)
    return out[()] if out.ndim == 0 else out


def _cusp_derivative(z):
    z = np.asarray(z, dtype=complex)
    num = z - 1j
    den = 1j * z - 1.0
    q = num / den
    w = np.sqrt(q)
    h0 = (w - 1j) / (-1j * w + 1.0)
    h2 = 1.0 - (2.0 / math.pi) * np.log(h0)
    # chain rule through q -> sqrt -> Moebius -> log -> inversion
    dq = -2.0 / den**2
    dw = dq / (2.0 * w)
    dh0 = 2.0 * dw / (1.0 - 1j * w) ** 2
    dh2 = -(2.0 / math.pi) * dh0 / h0
    return CUSP_DIAMETER * dh2 / h2**2


@dataclass(frozen=True)
class CuspMap(SymbolMap):
    """Univalent map of the disk onto the cusp domain touching the circle at 1.

    The image is the interior of D(1-a/2, a/2) with the two closed disks
    D(1 +/- ia/2, a/2) removed, a = CUSP_DIAMETER; the three circles meet at
    the cusp point 1.  The map fixes the origin and sends -1 to 1 - a.
    """

    def __post_init__(self):
        object.__setattr__(self, "is_univalent", True)
        object.__setattr__(self, "sup_norm_hint", 1.0)
        object.__setattr__(self, "fixes_origin", True)

    def evaluate(self, z):
        _check_in_disk(z)
        return _cusp_eval(z)

    def derivative(self, z):
        _check_in_disk(z)
        return _cusp_derivative(np.asarray(z, dtype=complex))

    def spec_string(self):
        return "cusp"


@dataclass(frozen=True)
class ComposedMap(SymbolMap):
    """outer o inner; both factors must be Schur functions."""

    outer: SymbolMap
    inner: SymbolMap

    def __post_init__(self):
        object.__setattr__(
            self, "is_univalent", self.outer.is_univalent and self.inner.is_univalent
        )
        hint = None
        if isinstance(self.outer, AffineMap) and self.inner.sup_norm_hint is not None:
            hint = self.outer.r * self.inner.sup_norm_hint
        object.__setattr__(self, "sup_norm_hint", hint)
        fixes = False
        if self.inner.fixes_origin and self.outer.fixes_origin:
            fixes = True
        else:
            try:
                fixes = bool(abs(self.outer.evaluate(self.inner.evaluate(0.0))) <= 1e-12)
            except DomainError:
                fixes = False
        object.__setattr__(self, "fixes_origin", fixes)

    def evaluate(self, z):
        return self.outer.evaluate(self.inner.evaluate(z))

    def derivative(self, z):
        w = self.inner.evaluate(z)
        return self.outer.derivative(w) * self.inner.derivative(z)

    def spec_string(self):
        return f"compose({self.outer.spec_string()},{self.inner.spec_string()})"


@dataclass(frozen=True)
class CoefficientMap(SymbolMap):
    """Polynomial symbol given by its Taylor coefficients c_0..c_M.

    The caller is responsible for the map being a self-map of the disk;
    `sup_norm` may be passed when known.  Univalence defaults to False.
    """

    coeffs: tuple
    univalent: bool = False
    sup_norm: float | None = None

    def __post_init__(self):
        coeffs = tuple(complex(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "is_univalent", self.univalent)
        object.__setattr__(self, "sup_norm_hint", self.sup_norm)
        object.__setattr__(self, "fixes_origin", abs(coeffs[0]) <= 1e-12 if coeffs else True)

    def evaluate(self, z):
        _check_in_disk(z)
        z = np.asarray(z, dtype=complex)
        return np.polynomial.polynomial.polyval(z, np.asarray(self.coeffs))

    def derivative(self, z):
        _check_in_disk(z)
        z = np.asarray(z, dtype=complex)
        d = np.polynomial.polynomial.polyder(np.asarray(self.coeffs))
        return np.polynomial.polynomial.polyval(z, d)

    def spec_string(self):
        inner = ",".join(
            f"{c.real!r}" if c.imag == 0 else f"{c.real!r}{c.imag:+}i" for c in self.coeffs
        )
        return f"coeffs:[{inner}]"


# ---------------------------------------------------------------------------
# module-level operation surface


def evaluate(s: SymbolMap, z):
    """phi(z) for |z| < 1.  Raises DomainError on or outside the circle."""
    return s.evaluate(z)


def derivative(s: SymbolMap, z):
    """phi'(z) by the closed-form chain rule of each kind."""
    return s.derivative(z)


def evaluate_boundary(s: SymbolMap, xi, mode: str = "direct"):
    """Boundary value at |xi| = 1, for diagnostics only.

    mode="direct" evaluates the closed-form chain on the circle, where every
    built-in kind extends continuously (cusp corners are special-cased, so
    e.g. the half-disk stage takes the exact values -i and i at +/-i).
    mode="radial" evaluates at (1 - 1e-9) xi instead.
    """
    xi = np.asarray(xi, dtype=complex)
    if np.any(np.abs(np.abs(xi) - 1.0) > 1e-12):
        raise ValueError("boundary evaluation requires |xi| = 1")
    if mode == "radial":
        return s.evaluate(_BOUNDARY_RHO * xi)
    if isinstance(s, CuspMap):
        return _cusp_eval(xi)
    if isinstance(s, ComposedMap):
        w = evaluate_boundary(s.inner, xi) if s.inner.sup_norm_hint == 1.0 else None
        if w is None:
            return s.evaluate(_BOUNDARY_RHO * xi)
        w = np.asarray(w)
        inside = np.abs(w) < 1.0
        out = np.empty_like(w)
        if np.any(inside):
            out[inside] = s.outer.evaluate(w[inside])
        if np.any(~inside):
            out[~inside] = evaluate_boundary(s.outer, w[~inside] / np.abs(w[~inside]))
        return out[()] if out.ndim == 0 else out
    # affine / moebius / polynomial formulas are regular on the closed disk
    z = xi
    if isinstance(s, AffineMap):
        return s.factor * z
    if isinstance(s, MoebiusMap):
        return (s.u - z) / (1.0 - np.conj(s.u) * z)
    if isinstance(s, CoefficientMap):
        return np.polynomial.polynomial.polyval(z, np.asarray(s.coeffs))
    return s.evaluate(_BOUNDARY_RHO * xi)


@dataclass(frozen=True)
class GridSpec:
    """Polar evaluation grid: rings at radii 1 - 2^-l, l = 0..depth.

    Deeper grids contain shallower ones, so sup-estimates over the grid are
    monotone nondecreasing in depth.
    """

    depth: int = 12
    base_angles: int = 64

    def rings(self):
        for l in range(self.depth + 1):
            radius = 1.0 - 2.0 ** (-l)
            n = max(self.base_angles, 2 ** (l + 4))
            yield radius, n


def pseudo_hyperbolic_sup(s: SymbolMap, grid: GridSpec | None = None) -> float:
    """Grid lower estimate of sup |phi'(z)| (1-|z|^2) / (1-|phi(z)|^2).

    The Schwarz-Pick inequality caps the true sup at 1; the returned value is
    monotone nondecreasing in the grid depth.
    """
    grid = grid or GridSpec()
    best = 0.0
    for radius, n in grid.rings():
        if radius == 0.0:
            z = np.array([0.0 + 0.0j])
        else:
            th = 2.0 * np.pi * np.arange(n) / n
            z = radius * np.exp(1j * th)
        w = np.asarray(s.evaluate(z))
        dw = np.asarray(s.derivative(z))
        denom = 1.0 - np.abs(w) ** 2
        val = np.abs(dw) * (1.0 - np.abs(z) ** 2)
        ratio = np.divide(val, denom, out=np.zeros_like(val), where=denom > 0)
        # Schwarz-Pick: the true ratio never exceeds 1; excesses are roundoff
        m = float(np.minimum(ratio, 1.0).max())
        if m > best:
            best = m
    return best


# ---------------------------------------------------------------------------
# string specs:  "cusp", "affine:r=0.5,theta=0", "moebius:u=0.3+0i",
# "compose(outer,inner)", "coeffs:[...]"


def _parse_complex(text: str) -> complex:
    return complex(text.strip().replace("i", "j").replace(" ", ""))


def _split_top_level(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def parse_symbol(spec: str) -> SymbolMap:
    """Build a SymbolMap from its CLI/config string form."""
    spec = spec.strip()
    if spec == "cusp":
        return CuspMap()
    if spec == "identity":
        return AffineMap(1.0, 0.0)
    m = re.fullmatch(r"compose\((.+)\)", spec)
    if m:
        parts = _split_top_level(m.group(1))
        if len(parts) < 2:
            raise ValueError(f"compose(...) needs two symbols: {spec!r}")
        # symbol specs may contain their own commas (affine:r=..,theta=..);
        # accept the unique split where both halves parse
        for cut in range(1, len(parts)):
            left, right = ",".join(parts[:cut]), ",".join(parts[cut:])
            try:
                return ComposedMap(parse_symbol(left), parse_symbol(right))
            except ValueError:
                continue
        raise ValueError(f"cannot split compose(...) into two symbols: {spec!r}")
    if spec.startswith("affine:"):
        kv = dict(item.split("=", 1) for item in spec[len("affine:"):].split(","))
        unknown = set(kv) - {"r", "theta"}
        if unknown:
            raise ValueError(f"unknown affine parameters {sorted(unknown)}")
        return AffineMap(float(kv["r"]), float(kv.get("theta", "0")))
    if spec.startswith("moebius:"):
        kv = dict(item.split("=", 1) for item in spec[len("moebius:"):].split(","))
        if set(kv) != {"u"}:
            raise ValueError(f"moebius spec needs exactly u=...: {spec!r}")
        return MoebiusMap(_parse_complex(kv["u"]))
    m = re.fullmatch(r"coeffs:\[(.*)\]", spec)
    if m:
        items = [_parse_complex(t) for t in m.group(1).split(",") if t.strip()]
        if not items:
            raise ValueError("coeffs:[...] needs at least one coefficient")
        return CoefficientMap(tuple(items))
    raise ValueError(f"unrecognized symbol spec {spec!r}")


def builtin_contractions() -> list[SymbolMap]:
    """Built-in symbols with sup norm < 1, used by the sandwich checks."""
    shifted = _origin_fixed_contraction()
    return [
        AffineMap(0.3),
        AffineMap(0.5),
        AffineMap(0.7, theta=math.pi / 3),
        shifted,
        CoefficientMap((0.0, 0.5, 0.25), univalent=True, sup_norm=0.75),
    ]


def _origin_fixed_contraction() -> SymbolMap:
    # 0.7 * moebius(0.3) post-composed with the automorphism moving its value
    # at 0 back to 0; sup norm (0.7+0.21)/(1+0.7*0.21) since Moebius maps the
    # disk of radius 0.7 onto a disk.
    g = ComposedMap(AffineMap(0.7), MoebiusMap(0.3))
    w0 = complex(g.evaluate(0.0))
    out = ComposedMap(MoebiusMap(w0), g)
    sup = (0.7 + abs(w0)) / (1.0 + 0.7 * abs(w0))
    object.__setattr__(out, "sup_norm_hint", sup)
    return out
