"""Spherical harmonics, Legendre functions and classical products on S^2.

Normalization: ``Y_l^m`` has unit norm for the averaged inner product
``<f, g> = (1/4pi) int conj(f) g dS``, i.e. it is ``sqrt(4 pi)`` times the
usual orthonormal harmonic.  Coordinates: ``theta`` is longitude, ``phi`` is
colatitude, and ``(x, y, z) = (sin phi cos theta, sin phi sin theta, cos phi)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from .exact import DomainError, factorial
from .su2_basis import lm_index, lm_pairs
from .wigner import cg_000, clebsch_gordan, poisson_p

__all__ = [
    "SpherePoint",
    "HarmonicVector",
    "QuadratureGrid",
    "legendre",
    "assoc_legendre",
    "ylm",
    "eval_ylm",
    "ylm_table",
    "pointwise_product",
    "poisson_bracket",
    "poisson_bracket_pointwise",
    "legendre_series",
    "ylm_table_xyz",
    "product_terms",
    "bracket_terms",
    "build_grid",
    "random_points",
    "xyz_to_angles",
]


# ---------------------------------------------------------------------------
# points
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpherePoint:
    theta: float  # longitude
    phi: float  # colatitude

    @property
    def xyz(self) -> np.ndarray:
        s = math.sin(self.phi)
        return np.array([s * math.cos(self.theta), s * math.sin(self.theta), math.cos(self.phi)])

    @classmethod
    def from_xyz(cls, v) -> "SpherePoint":
        th, ph = xyz_to_angles(np.asarray(v, dtype=float))
        return cls(float(th), float(ph))


def xyz_to_angles(v: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Unit vectors (..., 3) to (theta, phi)."""
    v = np.asarray(v, dtype=float)
    r = np.linalg.norm(v, axis=-1)
    z = np.clip(v[..., 2] / r, -1.0, 1.0)
    return np.mod(np.arctan2(v[..., 1], v[..., 0]), 2 * np.pi), np.arccos(z)


def random_points(count: int, seed: int = 0) -> np.ndarray:
    """``count`` uniformly distributed unit vectors, reproducible by ``seed``."""
    rng = np.random.default_rng(seed)
    v = rng.normal(size=(count, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


# ---------------------------------------------------------------------------
# Legendre functions
# ---------------------------------------------------------------------------

def _check_z(z) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if np.any(np.abs(z) > 1.0 + 1e-14):
        raise DomainError("|z| > 1")
    return np.clip(z, -1.0, 1.0)


def legendre(l: int, z):
    """Legendre polynomial ``P_l(z)`` by the three-term recurrence."""
    if l < 0:
        raise DomainError("negative degree")
    z = _check_z(z)
    p0, p1 = np.ones_like(z), z
    if l == 0:
        return p0 if p0.ndim else float(p0)
    for k in range(2, l + 1):
        p0, p1 = p1, ((2 * k - 1) * z * p1 - (k - 1) * p0) / k
    return p1 if p1.ndim else float(p1)


def legendre_series(coeffs, z):
    """``sum_l coeffs[l] P_l(z)`` by Clenshaw-free forward recurrence."""
    z = _check_z(z)
    coeffs = np.asarray(coeffs, dtype=float)
    p0, p1 = np.ones_like(z), z
    out = coeffs[0] * p0
    if len(coeffs) > 1:
        out = out + coeffs[1] * p1
    for k in range(2, len(coeffs)):
        p0, p1 = p1, ((2 * k - 1) * z * p1 - (k - 1) * p0) / k
        out = out + coeffs[k] * p1
    return out


def assoc_legendre(l: int, m: int, z):
    """``P_l^m(z)`` including the Condon-Shortley factor ``(-1)^m``.

    Upward recurrence in ``l`` seeded by
    ``P_m^m = (-1)^m (2m-1)!! (1-z^2)^(m/2)``; negative ``m`` through
    ``P_l^{-m} = (-1)^m (l-m)!/(l+m)! P_l^m``.
    """
    if l < 0 or abs(m) > l:
        raise DomainError(f"invalid (l={l}, m={m})")
    z = _check_z(z)
    if m < 0:
        k = -m
        scale = (-1) ** k * factorial(l - k) / factorial(l + k)
        return scale * assoc_legendre(l, k, z)
    dfact = 1.0
    for i in range(1, 2 * m, 2):
        dfact *= i
    pmm = (-1) ** m * dfact * (1.0 - z * z) ** (m / 2.0)
    if l == m:
        return pmm
    p0, p1 = pmm, (2 * m + 1) * z * pmm
    for k in range(m + 2, l + 1):
        p0, p1 = p1, ((2 * k - 1) * z * p1 - (k + m - 1) * p0) / (k - m)
    return p1


def _normalized_plm_table(lmax: int, z: np.ndarray) -> np.ndarray:
    """``Q[l, m] = sqrt((l-m)!/(l+m)!) P_l^m(z)`` for 0 <= m <= l <= lmax.

    The same upward recurrence, rescaled so that nothing overflows.
    """
    z = np.asarray(z, dtype=float)
    s = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    out = np.zeros((lmax + 1, lmax + 1) + z.shape)
    pmm = np.ones_like(z)
    for m in range(lmax + 1):
        if m > 0:
            # Q_m^m = -sqrt((2m-1)/(2m)) s Q_{m-1}^{m-1}
            pmm = -math.sqrt((2 * m - 1) / (2 * m)) * s * pmm
        out[m, m] = pmm
        if m + 1 <= lmax:
            out[m + 1, m] = math.sqrt(2 * m + 1) * z * pmm
        for l in range(m + 2, lmax + 1):
            out[l, m] = ((2 * l - 1) * z * out[l - 1, m]
                         - math.sqrt((l - 1) ** 2 - m * m) * out[l - 2, m]) / math.sqrt(l * l - m * m)
    return out


def ylm(l: int, m: int, theta, phi):
    """``Y_l^m(theta, phi) = sqrt(2l+1) sqrt((l-m)!/(l+m)!) P_l^m(cos phi) e^{i m theta}``."""
    if l < 0 or abs(m) > l:
        raise DomainError(f"invalid (l={l}, m={m})")
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    k = abs(m)
    q = _normalized_plm_table(l, np.cos(phi))[l, k]
    val = math.sqrt(2 * l + 1) * q * np.exp(1j * k * theta)
    if m < 0:
        val = (-1) ** k * np.conj(val)
    return val if np.ndim(val) else complex(val)


def eval_ylm(l: int, m: int, p: SpherePoint) -> complex:
    return complex(ylm(l, m, p.theta, p.phi))


def ylm_table(lmax: int, theta, phi) -> np.ndarray:
    """All ``Y_l^m`` for ``l <= lmax`` at the given points.

    Returns an array of shape ``((lmax+1)^2,) + theta.shape`` indexed by
    :func:`~artifact.su2_basis.lm_index`.
    """
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    q = _normalized_plm_table(lmax, np.cos(phi))
    out = np.zeros(((lmax + 1) ** 2,) + theta.shape, dtype=complex)
    for m in range(lmax + 1):
        ph = np.exp(1j * m * theta)
        for l in range(m, lmax + 1):
            v = math.sqrt(2 * l + 1) * q[l, m] * ph
            out[lm_index(l, m)] = v
            if m:
                out[lm_index(l, -m)] = (-1) ** m * np.conj(v)
    return out


def ylm_table_xyz(lmax: int, pts: np.ndarray) -> np.ndarray:
    th, ph = xyz_to_angles(pts)
    return ylm_table(lmax, th, ph)


# ---------------------------------------------------------------------------
# harmonic coefficient vectors
# ---------------------------------------------------------------------------

@dataclass
class HarmonicVector:
    """``f = sum f_{l,m} Y_l^m`` with ``0 <= l <= n``."""

    n: int
    coeffs: np.ndarray = field(default=None)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise DomainError("negative degree cap")
        size = (self.n + 1) ** 2
        if self.coeffs is None:
            self.coeffs = np.zeros(size, dtype=complex)
        else:
            self.coeffs = np.asarray(self.coeffs, dtype=complex)
            if self.coeffs.shape != (size,):
                raise DomainError("coefficient vector has wrong length")

    # -- constructors -----------------------------------------------------
    @classmethod
    def basis(cls, l: int, m: int, n: Optional[int] = None) -> "HarmonicVector":
        if l < 0 or abs(m) > l:
            raise DomainError(f"invalid (l={l}, m={m})")
        hv = cls(l if n is None else n)
        if l > hv.n:
            raise DomainError("basis degree exceeds cap")
        hv.coeffs[lm_index(l, m)] = 1.0
        return hv

    @classmethod
    def constant(cls, value: complex = 1.0, n: int = 0) -> "HarmonicVector":
        hv = cls(n)
        hv.coeffs[0] = value
        return hv

    @classmethod
    def from_dict(cls, data: Dict[Tuple[int, int], complex], n: Optional[int] = None) -> "HarmonicVector":
        deg = max((l for l, _ in data), default=0)
        hv = cls(deg if n is None else n)
        for (l, m), v in data.items():
            if l > hv.n or abs(m) > l:
                raise DomainError(f"invalid index ({l},{m})")
            hv.coeffs[lm_index(l, m)] += v
        return hv

    @classmethod
    def from_json(cls, entries: Iterable[dict], n: Optional[int] = None) -> "HarmonicVector":
        data: Dict[Tuple[int, int], complex] = {}
        for e in entries:
            key = (int(e["l"]), int(e["m"]))
            data[key] = data.get(key, 0) + complex(e.get("re", 0.0), e.get("im", 0.0))
        return cls.from_dict(data, n)

    @classmethod
    def cartesian(cls, axis: str, n: int = 1) -> "HarmonicVector":
        """The coordinate function ``x``, ``y`` or ``z`` as a harmonic vector."""
        r = 1 / math.sqrt(6)
        table = {
            "x": {(1, -1): r, (1, 1): -r},
            "y": {(1, -1): 1j * r, (1, 1): 1j * r},
            "z": {(1, 0): 1 / math.sqrt(3)},
        }
        return cls.from_dict(table[axis], n)

    @classmethod
    def random(cls, n: int, rng: np.random.Generator, real: bool = False) -> "HarmonicVector":
        size = (n + 1) ** 2
        hv = cls(n, rng.normal(size=size) + 1j * rng.normal(size=size))
        return hv.real_part() if real else hv

    # -- access -----------------------------------------------------------
    def get(self, l: int, m: int) -> complex:
        if l > self.n:
            return 0j
        return complex(self.coeffs[lm_index(l, m)])

    def items(self):
        for l, m in lm_pairs(self.n):
            yield (l, m), complex(self.coeffs[lm_index(l, m)])

    def support(self, tol: float = 0.0):
        idx = np.nonzero(np.abs(self.coeffs) > tol)[0]
        return [(int(math.isqrt(k)), int(k - math.isqrt(k) ** 2 - math.isqrt(k))) for k in idx]

    def degree(self, tol: float = 0.0) -> int:
        sup = self.support(tol)
        return max((l for l, _ in sup), default=0)

    def with_cap(self, n: int) -> "HarmonicVector":
        """Truncate or zero-pad to degree cap ``n``."""
        out = HarmonicVector(n)
        k = min(len(self.coeffs), len(out.coeffs))
        out.coeffs[:k] = self.coeffs[:k]
        return out

    def block(self, l: int) -> np.ndarray:
        return self.coeffs[l * l:(l + 1) ** 2]

    # -- algebra ----------------------------------------------------------
    def _aligned(self, other: "HarmonicVector"):
        n = max(self.n, other.n)
        return self.with_cap(n), other.with_cap(n), n

    def __add__(self, other: "HarmonicVector") -> "HarmonicVector":
        a, b, n = self._aligned(other)
        return HarmonicVector(n, a.coeffs + b.coeffs)

    def __sub__(self, other: "HarmonicVector") -> "HarmonicVector":
        a, b, n = self._aligned(other)
        return HarmonicVector(n, a.coeffs - b.coeffs)

    def __mul__(self, s: complex) -> "HarmonicVector":
        return HarmonicVector(self.n, self.coeffs * s)

    __rmul__ = __mul__

    def __neg__(self) -> "HarmonicVector":
        return HarmonicVector(self.n, -self.coeffs)

    def conj(self) -> "HarmonicVector":
        """Coefficients of the complex-conjugate function."""
        out = HarmonicVector(self.n)
        for l, m in lm_pairs(self.n):
            out.coeffs[lm_index(l, m)] = (-1) ** m * np.conj(self.coeffs[lm_index(l, -m)])
        return out

    def real_part(self) -> "HarmonicVector":
        return (self + self.conj()) * 0.5

    def is_real_symbol(self, tol: float = 1e-12) -> bool:
        return float(np.max(np.abs(self.coeffs - self.conj().coeffs), initial=0.0)) <= tol

    def norm(self) -> float:
        """``sqrt(<f, f>)`` for the averaged L2 product."""
        return float(np.linalg.norm(self.coeffs))

    def inner(self, other: "HarmonicVector") -> complex:
        a, b, _ = self._aligned(other)
        return complex(np.vdot(a.coeffs, b.coeffs))

    def distance(self, other: "HarmonicVector") -> float:
        a, b, _ = self._aligned(other)
        return float(np.max(np.abs(a.coeffs - b.coeffs), initial=0.0))

    # -- evaluation -------------------------------------------------------
    def evaluate(self, theta, phi):
        table = ylm_table(self.n, theta, phi)
        return np.tensordot(self.coeffs, table, axes=(0, 0))

    def evaluate_xyz(self, pts: np.ndarray) -> np.ndarray:
        th, ph = xyz_to_angles(pts)
        return self.evaluate(th, ph)

    def to_json(self, tol: float = 0.0) -> List[dict]:
        return [{"l": l, "m": m, "re": v.real, "im": v.imag}
                for (l, m), v in self.items() if abs(v) > tol]


# ---------------------------------------------------------------------------
# pointwise product and Poisson bracket in coefficient space
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def product_terms(l1: int, m1: int, l2: int, m2: int) -> Tuple[Tuple[int, float], ...]:
    """``Y_{l1}^{m1} Y_{l2}^{m2} = sum_l coef_l Y_l^{m1+m2}`` as ``((l, coef), ...)``."""
    m = m1 + m2
    out = []
    for l in range(max(abs(l1 - l2), abs(m)), l1 + l2 + 1):
        c0 = cg_000(l1, l2, l)
        if not c0:
            continue
        c = clebsch_gordan(2 * l1, 2 * m1, 2 * l2, 2 * m2, 2 * l, 2 * m)
        if not c:
            continue
        scale = math.sqrt((2 * l1 + 1) * (2 * l2 + 1) / (2 * l + 1))
        out.append((l, scale * float(c * c0)))
    return tuple(out)


@lru_cache(maxsize=None)
def bracket_terms(l1: int, m1: int, l2: int, m2: int) -> Tuple[Tuple[int, float], ...]:
    """``i{Y_{l1}^{m1}, Y_{l2}^{m2}} = sum_l coef_l Y_l^{m1+m2}``."""
    m = m1 + m2
    out = []
    for l in range(max(abs(l1 - l2), abs(m)), l1 + l2 + 1):
        p = poisson_p(l1, l2, l)
        if not p:
            continue
        c = clebsch_gordan(2 * l1, 2 * m1, 2 * l2, 2 * m2, 2 * l, 2 * m)
        if not c:
            continue
        scale = math.sqrt((2 * l1 + 1) * (2 * l2 + 1) / (2 * l + 1))
        out.append((l, scale * float(c * p)))
    return tuple(out)


def _bilinear(f: HarmonicVector, g: HarmonicVector, cap: int, terms) -> HarmonicVector:
    out = HarmonicVector(cap)
    sf, sg = f.support(), g.support()
    for l1, m1 in sf:
        a = f.coeffs[lm_index(l1, m1)]
        for l2, m2 in sg:
            ab = a * g.coeffs[lm_index(l2, m2)]
            m = m1 + m2
            for l, c in terms(l1, m1, l2, m2):
                if l <= cap:
                    out.coeffs[lm_index(l, m)] += c * ab
    return out


def pointwise_product(f: HarmonicVector, g: HarmonicVector, cap: Optional[int] = None) -> HarmonicVector:
    """Coefficients of the ordinary product ``f g``, truncated at degree ``cap``.

    ``cap`` defaults to ``deg f + deg g``, where the result is exact.
    """
    if cap is None:
        cap = f.degree() + g.degree()
    return _bilinear(f, g, cap, product_terms)


def poisson_bracket(f: HarmonicVector, g: HarmonicVector, cap: Optional[int] = None) -> HarmonicVector:
    """Coefficients of ``{f, g}``, with ``{x, y} = z`` and cyclic.

    Computed from the decomposition of ``i{Y, Y'}`` and multiplied by ``-i``.
    """
    if cap is None:
        cap = f.degree() + g.degree()
    out = _bilinear(f, g, cap, bracket_terms)
    out.coeffs *= -1j
    return out


def poisson_bracket_pointwise(f: HarmonicVector, g: HarmonicVector, theta, phi) -> np.ndarray:
    """``{f, g}`` evaluated directly from the local-coordinate formula

    ``{f, g} = (1/sin phi)(d_phi f d_theta g - d_theta f d_phi g)``.

    Derivatives of the harmonics are taken analytically; points must avoid
    the poles.  This is the oracle for :func:`poisson_bracket`.
    """
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    lmax = max(f.n, g.n)
    z, s = np.cos(phi), np.sin(phi)
    q = _normalized_plm_table(lmax, z)

    def parts(h: HarmonicVector):
        val = np.zeros(theta.shape, dtype=complex)
        dth = np.zeros(theta.shape, dtype=complex)
        dph = np.zeros(theta.shape, dtype=complex)
        for (l, m), c in h.items():
            if c == 0:
                continue
            k = abs(m)
            # d/dphi of Q_l^k(cos phi), from (z^2-1) dP_l^k/dz = l z P_l^k - (l+k) P_{l-1}^k
            prev = q[l - 1, k] * math.sqrt((l - k) / (l + k)) if l > k else 0.0
            dq = (l * z * q[l, k] - (l + k) * prev) / s
            ph = np.exp(1j * k * theta)
            y = math.sqrt(2 * l + 1) * q[l, k] * ph
            dy = math.sqrt(2 * l + 1) * dq * ph
            ty = 1j * k * y
            if m < 0:
                sgn = (-1) ** k
                y, dy, ty = sgn * np.conj(y), sgn * np.conj(dy), sgn * np.conj(ty)
            val += c * y
            dph += c * dy
            dth += c * ty
        return val, dth, dph

    _, f_th, f_ph = parts(f)
    _, g_th, g_ph = parts(g)
    return (f_ph * g_th - f_th * g_ph) / s


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureGrid:
    """Product rule: Gauss-Legendre in ``cos phi`` times uniform ``theta``."""

    degree: int
    theta: np.ndarray
    phi: np.ndarray
    weights: np.ndarray

    @property
    def size(self) -> int:
        return int(self.weights.size)

    @property
    def xyz(self) -> np.ndarray:
        s = np.sin(self.phi)
        return np.stack([s * np.cos(self.theta), s * np.sin(self.theta), np.cos(self.phi)], axis=-1)

    def integrate(self, values: np.ndarray) -> complex:
        """``int values dS`` (unnormalized area measure, total ``4 pi``)."""
        return np.tensordot(self.weights, values, axes=(0, 0))


@lru_cache(maxsize=32)
def build_grid(degree: int) -> QuadratureGrid:
    """Grid exact for spherical polynomials of degree ``<= degree``."""
    if degree < 0:
        raise DomainError("negative degree")
    n_z = max(1, math.ceil((degree + 1) / 2))
    n_t = degree + 1
    x, w = np.polynomial.legendre.leggauss(n_z)
    th = 2 * np.pi * np.arange(n_t) / n_t
    T, Z = np.meshgrid(th, x, indexing="ij")
    W = np.repeat((w * 2 * np.pi / n_t)[None, :], n_t, axis=0)
    return QuadratureGrid(degree, T.ravel(), np.arccos(Z.ravel()), W.ravel())
