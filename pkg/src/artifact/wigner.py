"""Exact Clebsch-Gordan, 3jm and {l1 l2 l3; j j j} symbols.

Spin arguments of :func:`clebsch_gordan` and :func:`wigner_3jm` are doubled
integers (``j1=1`` means spin 1/2).  The remaining functions deal only with
integer orbital labels ``l`` and take the ambient spin as ``n = 2j``.

All results are :class:`~artifact.exact.SqrtRational`.  Each is computed as an
exact rational alternating sum times a single square-root prefactor.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .exact import DomainError, SqrtRational, _delta_sq_int, factorial, triangle_ok

__all__ = [
    "clebsch_gordan",
    "wigner_3jm",
    "wigner_6j_jjj",
    "product_symbol",
    "product_coefficient",
    "cg_000",
    "poisson_p",
]

_ZERO = SqrtRational.zero()


def _check_jm(j: int, m: int) -> None:
    if j < 0 or abs(m) > j or (j - m) % 2:
        raise DomainError(f"invalid doubled pair (j={j}, m={m})")


def _from_sum(prefactor_sq: Fraction, total: Fraction) -> SqrtRational:
    """Return ``sqrt(prefactor_sq) * total`` in normal form."""
    if total == 0:
        return _ZERO
    return SqrtRational(1 if total > 0 else -1, prefactor_sq * total * total)


@lru_cache(maxsize=None)
def clebsch_gordan(j1: int, m1: int, j2: int, m2: int, j3: int, m3: int) -> SqrtRational:
    """``C^{j1 j2 j3}_{m1 m2 m3}`` with doubled arguments (Racah's sum)."""
    for j, m in ((j1, m1), (j2, m2), (j3, m3)):
        _check_jm(j, m)
    if m3 != m1 + m2 or not triangle_ok(j1, j2, j3):
        return _ZERO
    # everything below is a plain integer
    a = (j1 + j2 - j3) // 2
    b = (j1 - m1) // 2
    c = (j2 + m2) // 2
    d = (j3 - j2 + m1) // 2
    e = (j3 - j1 - m2) // 2
    zmin = max(0, -d, -e)
    zmax = min(a, b, c)
    total = Fraction(0)
    for z in range(zmin, zmax + 1):
        den = (factorial(z) * factorial(a - z) * factorial(b - z) * factorial(c - z)
               * factorial(d + z) * factorial(e + z))
        total += Fraction(-1 if z % 2 else 1, den)
    s_sq = 1
    for j, m in ((j1, m1), (j2, m2), (j3, m3)):
        s_sq *= factorial((j + m) // 2) * factorial((j - m) // 2)
    delta_sq = Fraction(factorial(a) * factorial((j3 + j1 - j2) // 2)
                        * factorial((j2 + j3 - j1) // 2),
                        factorial((j1 + j2 + j3) // 2 + 1))
    return _from_sum((j3 + 1) * delta_sq * s_sq, total)


@lru_cache(maxsize=None)
def wigner_3jm(j1: int, m1: int, j2: int, m2: int, j3: int, m3: int) -> SqrtRational:
    """Wigner 3jm symbol with doubled arguments.

    Related to Clebsch-Gordan coefficients by
    ``C^{j1 j2 j3}_{m1,m2,-m3} = (-1)^{j1-j2-m3} sqrt(2 j3 + 1) (j1 j2 j3; m1 m2 m3)``.
    """
    for j, m in ((j1, m1), (j2, m2), (j3, m3)):
        _check_jm(j, m)
    cg = clebsch_gordan(j1, m1, j2, m2, j3, -m3)
    if not cg:
        return _ZERO
    phase = -1 if ((j1 - j2 - m3) // 2) % 2 else 1
    return SqrtRational(phase * cg.sign, cg.radicand / (j3 + 1))


def _racah_sum_jjj(l1: int, l2: int, l3: int, n: int) -> Fraction:
    L = l1 + l2 + l3
    kmin = max(l1, l2, l3, L - n)
    kmax = min(l1 + l2, l2 + l3, l3 + l1)
    total = Fraction(0)
    for k in range(kmin, kmax + 1):
        r = (factorial(k - l1) * factorial(k - l2) * factorial(k - l3)
             * factorial(l1 + l2 - k) * factorial(l2 + l3 - k) * factorial(l3 + l1 - k))
        sgn = -1 if (n + k) % 2 else 1
        total += Fraction(sgn * factorial(n + 1 + k), factorial(n + k - L) * r)
    return total


@lru_cache(maxsize=None)
def _sixj_sorted(l1: int, l2: int, l3: int, n: int) -> SqrtRational:
    total = _racah_sum_jjj(l1, l2, l3, n)
    pre = Fraction((factorial(l1) * factorial(l2) * factorial(l3)) ** 2)
    pre *= _delta_sq_int(l1, l2, l3)
    pre *= Fraction(factorial(n - l1) * factorial(n - l2) * factorial(n - l3),
                    factorial(n + l1 + 1) * factorial(n + l2 + 1) * factorial(n + l3 + 1))
    return _from_sum(pre, total)


def wigner_6j_jjj(l1: int, l2: int, l3: int, n: int) -> SqrtRational:
    """The 6j symbol ``{l1 l2 l3; j j j}`` with ``j = n/2`` and integer ``l``.

    Exact zero is returned when ``(l1, l2, l3)`` is not a triangle.  Labels
    outside ``0..n`` raise :class:`DomainError`.
    """
    if n < 0:
        raise DomainError("n must be nonnegative")
    for l in (l1, l2, l3):
        if not 0 <= l <= n:
            raise DomainError(f"l={l} outside 0..{n}")
    if not (abs(l1 - l2) <= l3 <= l1 + l2):
        return _ZERO
    a, b, c = sorted((l1, l2, l3))
    return _sixj_sorted(a, b, c, n)


def _check_lm(l: int, m: int, n: int) -> None:
    if not 0 <= l <= n or abs(m) > l:
        raise DomainError(f"invalid (l={l}, m={m}) for n={n}")


@lru_cache(maxsize=None)
def product_symbol(l1: int, m1: int, l2: int, m2: int, l3: int, m3: int, n: int) -> SqrtRational:
    """Wigner product symbol ``[l1 l2 l3; m1 m2 m3][j]``.

    Equal to ``sqrt((2l1+1)(2l2+1)(2l3+1)) (l1 l2 l3; -m1 -m2 -m3) {l1 l2 l3; j j j}``.
    """
    for l, m in ((l1, m1), (l2, m2), (l3, m3)):
        _check_lm(l, m, n)
    if m1 + m2 + m3 != 0 or not (abs(l1 - l2) <= l3 <= l1 + l2):
        return _ZERO
    three = wigner_3jm(2 * l1, -2 * m1, 2 * l2, -2 * m2, 2 * l3, -2 * m3)
    six = wigner_6j_jjj(l1, l2, l3, n)
    dims = SqrtRational(1, Fraction((2 * l1 + 1) * (2 * l2 + 1) * (2 * l3 + 1)))
    return dims * three * six


def product_coefficient(l1: int, m1: int, l2: int, m2: int, l: int, n: int) -> SqrtRational:
    """Coefficient of ``e(l, m1+m2)`` in the operator product ``e(l1,m1) e(l2,m2)``.

    This is ``M[j]^{l1,l2,l}_{m1,m2,m} = (-1)^{n+m} [l1 l2 l; m1 m2 -m][j]``.
    """
    m = m1 + m2
    if abs(m) > l:
        _check_lm(l1, m1, n)
        _check_lm(l2, m2, n)
        return _ZERO
    val = product_symbol(l1, m1, l2, m2, l, -m, n)
    return -val if (n + m) % 2 else val


@lru_cache(maxsize=None)
def cg_000(l1: int, l2: int, l3: int) -> SqrtRational:
    """Closed form of ``C^{l1 l2 l3}_{0 0 0}`` (zero when ``l1+l2+l3`` is odd)."""
    if min(l1, l2, l3) < 0:
        raise DomainError("negative l")
    L = l1 + l2 + l3
    if L % 2 or not (abs(l1 - l2) <= l3 <= l1 + l2):
        return _ZERO
    g = L // 2
    ratio = Fraction(factorial(g), factorial(g - l1) * factorial(g - l2) * factorial(g - l3))
    sgn = -1 if (g - l3) % 2 else 1
    return _from_sum((2 * l3 + 1) * _delta_sq_int(l1, l2, l3), sgn * ratio)


@lru_cache(maxsize=None)
def poisson_p(l1: int, l2: int, l3: int) -> SqrtRational:
    """The coefficient ``P(l1, l2, l3)`` of the Poisson-bracket expansion.

    Zero when ``l1+l2+l3`` is even or the triangle condition fails.
    """
    if min(l1, l2, l3) < 0:
        raise DomainError("negative l")
    L = l1 + l2 + l3
    if L % 2 == 0 or not (abs(l1 - l2) <= l3 <= l1 + l2):
        return _ZERO
    h = (L - 1) // 2
    ratio = Fraction((L + 1) * factorial(h),
                     factorial(h - l1) * factorial(h - l2) * factorial(h - l3))
    sgn = -1 if ((l1 + l2 - l3 + 1) // 2) % 2 else 1
    return _from_sum((2 * l3 + 1) * _delta_sq_int(l1, l2, l3), sgn * ratio)
