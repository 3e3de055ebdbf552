"""Integral trikernels of twisted products, transition kernels and transforms.

Points are unit vectors in R^3; every evaluator accepts arrays of shape
``(..., 3)`` and broadcasts over the leading axes.
"""
from __future__ import annotations

import math
from functools import lru_cache
from typing import Tuple

import numpy as np
from numpy.polynomial import legendre as npleg

from .correspondence import (
    CharacteristicNumbers,
    DegreeTooHigh,
    berezin_chars,
    dual_chars,
    operator_kernel,
    reproducing_kernel,
    rotation_unitary,
    transition_kernel,
)
from .exact import DomainError, TriangleViolation, factorial
from .sphere import HarmonicVector, QuadratureGrid, build_grid, xyz_to_angles, ylm_table_xyz
from .su2_basis import lm_index, lm_pairs
from .wigner import product_symbol, wigner_3jm, wigner_6j_jjj

__all__ = [
    "GridTooCoarse",
    "trikernel_coeff",
    "recursive_trikernel",
    "trikernel_trace",
    "invariant_L",
    "trikernel_invariant",
    "wildberger_closed",
    "wildberger_polar",
    "stratonovich_closed",
    "berezin_closed",
    "berezin_transform",
    "inverse_berezin_transform",
    "berezin_stratonovich_transform",
    "stratonovich_berezin_transform",
    "berezin_transform_integral",
    "integral_product",
    "integral_product_check",
    "marginal_check",
    "associativity_check",
    "bonarec_check",
    "as_points",
]


class GridTooCoarse(DomainError):
    pass


def as_points(p) -> np.ndarray:
    """Accept a SpherePoint, a unit vector or an array of unit vectors."""
    if hasattr(p, "xyz"):
        return np.asarray(p.xyz, dtype=float)
    return np.asarray(p, dtype=float)


def _det(a, b, c):
    return np.einsum("...i,...i->...", a, np.cross(b, c))


def _dot(a, b):
    return np.einsum("...i,...i->...", a, b)


# ---------------------------------------------------------------------------
# coefficient form
# ---------------------------------------------------------------------------

@lru_cache(maxsize=32)
def _symbol_entries(n: int):
    """Index arrays and values of all nonzero ``[l1 l2 l3; m1 m2 m3][j]``."""
    i1, i2, i3, l1s, l2s, l3s, vals = [], [], [], [], [], [], []
    for l1, m1 in lm_pairs(n):
        for l2, m2 in lm_pairs(n):
            m3 = -m1 - m2
            for l3 in range(max(abs(l1 - l2), abs(m3)), min(l1 + l2, n) + 1):
                v = product_symbol(l1, m1, l2, m2, l3, m3, n)
                if v:
                    i1.append(lm_index(l1, m1))
                    i2.append(lm_index(l2, m2))
                    i3.append(lm_index(l3, m3))
                    l1s.append(l1)
                    l2s.append(l2)
                    l3s.append(l3)
                    vals.append(float(v))
    arr = lambda x, t=int: np.asarray(x, dtype=t)  # noqa: E731
    return arr(i1), arr(i2), arr(i3), arr(l1s), arr(l2s), arr(l3s), arr(vals, float)


def _coeff_sum(chars: CharacteristicNumbers, p1, p2, p3, weights_fn) -> np.ndarray:
    n = chars.n
    p1, p2, p3 = np.broadcast_arrays(as_points(p1), as_points(p2), as_points(p3))
    shape = p1.shape[:-1]
    flat = [p.reshape(-1, 3) for p in (p1, p2, p3)]
    Y = [np.conj(ylm_table_xyz(n, p)) for p in flat]
    i1, i2, i3, l1, l2, l3, vals = _symbol_entries(n)
    w = vals * weights_fn(chars.array, l1, l2, l3)
    out = np.zeros(flat[0].shape[0], dtype=complex)
    step = max(1, 2_000_000 // max(1, out.size))
    for s in range(0, len(w), step):
        sl = slice(s, s + step)
        out += np.einsum("e,ep,ep,ep->p", w[sl], Y[0][i1[sl]], Y[1][i2[sl]], Y[2][i3[sl]])
    pref = (-1) ** n * math.sqrt(n + 1) / (4 * math.pi) ** 2
    out = pref * out
    return out.reshape(shape) if shape else complex(out[0])


def trikernel_coeff(chars: CharacteristicNumbers, p1, p2, p3):
    """Bona-fide trikernel ``L_c(n1, n2, n3)`` from the coefficient expansion."""
    return _coeff_sum(chars, p1, p2, p3, lambda c, a, b, d: c[d] / (c[a] * c[b]))


def recursive_trikernel(chars: CharacteristicNumbers, p1, p2, p3):
    """Recursive trikernel: the ratio ``c_l3/(c_l1 c_l2)`` becomes ``c_l1 c_l2 c_l3``."""
    return _coeff_sum(chars, p1, p2, p3, lambda c, a, b, d: c[a] * c[b] * c[d])


def trikernel_trace(chars: CharacteristicNumbers, p1, p2, p3) -> complex:
    """``((n+1)/4pi)^2 trace(K'(n1) K'(n2) K(n3))`` with ``K'`` the dual kernel.

    Single points only; used as an independent oracle.
    """
    n = chars.n
    K, Kd = operator_kernel(chars), operator_kernel(dual_chars(chars))

    def moved(kernel, p):
        th, ph = xyz_to_angles(as_points(p))
        U = rotation_unitary(n, float(th), float(ph))
        return U @ kernel @ U.conj().T

    prod = moved(Kd, p1) @ moved(Kd, p2) @ moved(K, p3)
    return complex(((n + 1) / (4 * math.pi)) ** 2 * np.trace(prod))


# ---------------------------------------------------------------------------
# invariant form
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _leg_deriv_coeffs(l: int, m: int) -> np.ndarray:
    """Legendre-series coefficients of ``d^m P_l / dt^m``."""
    c = np.zeros(l + 1)
    c[l] = 1.0
    return npleg.legder(c, m) if m else c


def _reduced_plm(l: int, m: int, t):
    """``P_l^m(t)/(1-t^2)^(m/2) = (-1)^m d^m P_l/dt^m`` (a polynomial in ``t``)."""
    return (-1) ** m * npleg.legval(t, _leg_deriv_coeffs(l, m))


def _T(a, b, c):
    return _dot(a, b) - _dot(a, c) * _dot(b, c) - 1j * _det(a, b, c)


def invariant_L(l1: int, l2: int, l3: int, p1, p2, p3):
    """The SO(3)-invariant function ``L_{l1 l2 l3}(n1, n2, n3)``.

    Real when ``l1+l2+l3`` is even and purely imaginary when it is odd.
    """
    if min(l1, l2, l3) < 0 or not (abs(l1 - l2) <= l3 <= l1 + l2):
        raise TriangleViolation(f"({l1},{l2},{l3}) is not a triangle")
    a, b, c = np.broadcast_arrays(as_points(p1), as_points(p2), as_points(p3))
    L = l1 + l2 + l3
    t1, t2 = _dot(a, c), _dot(b, c)
    out = float(wigner_3jm(2 * l1, 0, 2 * l2, 0, 2 * l3, 0)) * \
        npleg.legval(t1, _leg_deriv_coeffs(l1, 0)) * npleg.legval(t2, _leg_deriv_coeffs(l2, 0))
    out = out + 0j
    Tab, Tba = _T(a, b, c), _T(b, a, c)
    sgn = -1 if L % 2 else 1
    for m in range(1, min(l1, l2) + 1):
        w = float(wigner_3jm(2 * l1, 2 * m, 2 * l2, -2 * m, 2 * l3, 0))
        if w == 0.0:
            continue
        norm = math.sqrt(factorial(l1 - m) / factorial(l1 + m) * factorial(l2 - m) / factorial(l2 + m))
        out = out + (-1) ** m * w * norm * _reduced_plm(l1, m, t1) * _reduced_plm(l2, m, t2) \
            * (Tab ** m + sgn * Tba ** m)
    out = (2 * l1 + 1) * (2 * l2 + 1) * (2 * l3 + 1) * out
    return out if np.ndim(out) else complex(out)


def trikernel_invariant(chars: CharacteristicNumbers, p1, p2, p3):
    """Bona-fide trikernel written as a sum of 6j symbols times ``L_{l1 l2 l3}``."""
    n = chars.n
    c = chars.array
    total = 0j
    for l1 in range(n + 1):
        for l2 in range(n + 1):
            for l3 in range(abs(l1 - l2), min(l1 + l2, n) + 1):
                six = float(wigner_6j_jjj(l1, l2, l3, n))
                if six == 0.0:
                    continue
                total = total + six * c[l3] / (c[l1] * c[l2]) * invariant_L(l1, l2, l3, p1, p2, p3)
    return (-1) ** n * math.sqrt(n + 1) / (4 * math.pi) ** 2 * total


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def _X(a, b, c):
    return _dot(a, b) + _dot(b, c) + _dot(c, a)


def wildberger_closed(n: int, p1, p2, p3):
    """``((n+1)/(2^n 4pi))^2 (1 + X + i det)^n`` with ``X`` the sum of pairwise dots."""
    if n < 0:
        raise DomainError("n must be >= 0")
    a, b, c = as_points(p1), as_points(p2), as_points(p3)
    base = 1 + _X(a, b, c) + 1j * _det(a, b, c)
    return ((n + 1) / (2 ** n * 4 * math.pi)) ** 2 * base ** n


def wildberger_polar(n: int, p1, p2, p3) -> Tuple[np.ndarray, np.ndarray]:
    """``(modulus, phase)`` of :func:`wildberger_closed` from half-angle data.

    Modulus ``((n+1)/4pi)^2 prod_k cos^n(beta_k)`` with
    ``cos(beta_k) = sqrt((1 + n_i.n_j)/2)``; phase ``(n/2) Theta`` with
    ``Theta = 2 arg(1 + X + i det)`` (defined modulo ``2 pi``).
    """
    a, b, c = as_points(p1), as_points(p2), as_points(p3)
    cosb = [np.sqrt((1 + _dot(u, v)) / 2) for u, v in ((a, b), (b, c), (c, a))]
    modulus = ((n + 1) / (4 * math.pi)) ** 2 * (cosb[0] * cosb[1] * cosb[2]) ** n
    theta = 2 * np.angle(1 + _X(a, b, c) + 1j * _det(a, b, c))
    return modulus, n / 2 * theta


def stratonovich_closed(n: int, p1, p2, p3):
    """Closed Stratonovich trikernels for ``n = 1`` and ``n = 2``."""
    a, b, c = as_points(p1), as_points(p2), as_points(p3)
    X, D = _X(a, b, c), _det(a, b, c)
    k = 1 / (4 * math.pi) ** 2
    if n == 1:
        return k * (1 + 3 * X + 3j * math.sqrt(3) * D)
    if n == 2:
        Z = _dot(a, b) ** 2 + _dot(b, c) ** 2 + _dot(c, a) ** 2 - 1
        return k * (1 + 3 * X + 7.5 * Z + math.sqrt(10) / 8 * ((3 * X - 1) ** 2 - 24 * Z - 45 * D ** 2)
                    + 1j * 9 * math.sqrt(2) / 4 * (1 + 5 * X) * D)
    raise DomainError("closed Stratonovich trikernel only for n = 1, 2")


def berezin_closed(n: int, p1, p2, p3):
    """Closed Berezin trikernels for ``n = 1`` and ``n = 2``."""
    a, b, c = as_points(p1), as_points(p2), as_points(p3)
    D = _det(a, b, c)
    d12, d23, d31 = _dot(a, b), _dot(b, c), _dot(c, a)
    k = 1 / (4 * math.pi) ** 2
    if n == 1:
        X = 3 * d12 + d23 + d31
        return k * (1 + 3 * X + 9j * D)
    if n == 2:
        X = 5 * d12 + d23 + d31
        return k * 9 / 4 * ((1 - X) ** 2 - 6 * (d23 ** 2 + d31 ** 2 - 2 * d12) - 25 * D ** 2
                            + 2j * (1 + 5 * X) * D)
    raise DomainError("closed Berezin trikernel only for n = 1, 2")


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------

def _scaled(f: HarmonicVector, n, power: float) -> HarmonicVector:
    n = f.n if n is None else n
    if f.degree() > n:
        raise DegreeTooHigh(f"symbol degree {f.degree()} exceeds n={n}")
    g = f.with_cap(n)
    b = berezin_chars(n).per_index()
    return HarmonicVector(n, g.coeffs * b ** power)


def berezin_transform(f: HarmonicVector, n=None) -> HarmonicVector:
    """``f_{l,m} -> (b_l^n)^2 f_{l,m}``."""
    return _scaled(f, n, 2)


def inverse_berezin_transform(f: HarmonicVector, n=None) -> HarmonicVector:
    return _scaled(f, n, -2)


def berezin_stratonovich_transform(f: HarmonicVector, n=None) -> HarmonicVector:
    """``f_{l,m} -> f_{l,m} / b_l^n``."""
    return _scaled(f, n, -1)


def stratonovich_berezin_transform(f: HarmonicVector, n=None) -> HarmonicVector:
    """``f_{l,m} -> b_l^n f_{l,m}``."""
    return _scaled(f, n, 1)


def berezin_transform_integral(f: HarmonicVector, n: int, points, grid: QuadratureGrid = None) -> np.ndarray:
    """``((n+1)/4pi) int ((1 + p.p')/2)^n f(p') dp'`` by quadrature."""
    grid = grid or build_grid(n + f.n)
    pts = as_points(points).reshape(-1, 3)
    vals = f.evaluate(grid.theta, grid.phi)
    t = np.clip(pts @ grid.xyz.T, -1, 1)
    kern = (n + 1) / (4 * math.pi) * ((1 + t) / 2) ** n
    return kern @ (grid.weights * vals)


# ---------------------------------------------------------------------------
# integral identities (quadrature oracles)
# ---------------------------------------------------------------------------

def _need_grid(grid, degree: int) -> QuadratureGrid:
    if grid is None:
        return build_grid(degree)
    if grid.degree < degree:
        raise GridTooCoarse(f"grid degree {grid.degree} < required {degree}")
    return grid


def integral_product(f: HarmonicVector, g: HarmonicVector, chars: CharacteristicNumbers,
                     points, grid: QuadratureGrid = None) -> np.ndarray:
    """``(f * g)(p) = iint f(n1) g(n2) L(n1, n2, p) dn1 dn2`` by quadrature."""
    n = chars.n
    grid = _need_grid(grid, 2 * n)
    X, W = grid.xyz, grid.weights
    fv = f.evaluate(grid.theta, grid.phi) * W
    gv = g.evaluate(grid.theta, grid.phi) * W
    A, B = np.meshgrid(np.arange(grid.size), np.arange(grid.size), indexing="ij")
    out = []
    for p in as_points(points).reshape(-1, 3):
        L = trikernel_coeff(chars, X[A], X[B], np.broadcast_to(p, A.shape + (3,)))
        out.append(np.einsum("i,j,ij->", fv, gv, L))
    return np.asarray(out)


def integral_product_check(f: HarmonicVector, g: HarmonicVector, chars: CharacteristicNumbers,
                           grid: QuadratureGrid = None, points=None, seed: int = 0) -> float:
    """Sup-distance between the quadrature product and the coefficient product."""
    from .sphere import random_points
    from .twisted import twisted_product

    pts = random_points(6, seed) if points is None else as_points(points).reshape(-1, 3)
    quad = integral_product(f, g, chars, pts, grid)
    coef = twisted_product(f, g, chars).evaluate_xyz(pts)
    return float(np.max(np.abs(quad - coef)))


def marginal_check(chars: CharacteristicNumbers, p2, p, grid: QuadratureGrid = None) -> float:
    """``|int L(n1, n2, n) dn1 - R(n2, n)|``."""
    n = chars.n
    grid = _need_grid(grid, n)
    X = grid.xyz
    p2, p = as_points(p2), as_points(p)
    L = trikernel_coeff(chars, X, np.broadcast_to(p2, X.shape), np.broadcast_to(p, X.shape))
    return float(abs(grid.integrate(L) - reproducing_kernel(n, float(np.clip(p2 @ p, -1, 1)))))


def associativity_check(chars: CharacteristicNumbers, p1, p2, p3, p4, grid: QuadratureGrid = None) -> float:
    """``int L(n1,n2,n) L(n,n3,n4) dn`` versus ``int L(n1,n,n4) L(n2,n3,n) dn``."""
    n = chars.n
    grid = _need_grid(grid, 2 * n)
    X = grid.xyz
    b = lambda v: np.broadcast_to(as_points(v), X.shape)  # noqa: E731
    lhs = grid.integrate(trikernel_coeff(chars, b(p1), b(p2), X) * trikernel_coeff(chars, X, b(p3), b(p4)))
    rhs = grid.integrate(trikernel_coeff(chars, b(p1), X, b(p4)) * trikernel_coeff(chars, b(p2), b(p3), X))
    return float(abs(lhs - rhs))


def bonarec_check(chars: CharacteristicNumbers, p1, p2, p, grid: QuadratureGrid = None) -> float:
    """``L(n1,n2,n)`` against the double integral of two transition kernels
    ``U_{c,1/c}`` with the recursive trikernel."""
    n = chars.n
    grid = _need_grid(grid, 2 * n)
    X, W = grid.xyz, grid.weights
    inv = dual_chars(chars)
    u1 = transition_kernel(chars, inv, np.clip(X @ as_points(p1), -1, 1)) * W
    u2 = transition_kernel(chars, inv, np.clip(X @ as_points(p2), -1, 1)) * W
    A, B = np.meshgrid(np.arange(grid.size), np.arange(grid.size), indexing="ij")
    T = recursive_trikernel(chars, X[A], X[B], np.broadcast_to(as_points(p), A.shape + (3,)))
    val = np.einsum("i,j,ij->", u1, u2, T)
    return float(abs(val - trikernel_coeff(chars, p1, p2, p)))
