"""Symbol correspondences on the 2-sphere.

A correspondence for spin ``j = n/2`` is fixed by its characteristic numbers
``c_0 = 1, c_1, ..., c_n`` (all nonzero reals).  It sends
``sqrt(n+1) e(l, m)`` to ``c_l Y_l^m``.  Everything here works with
coefficients in the coupled basis.  The kernel formula
``W_P(n) = trace(P K^g)`` is only used as an independent check.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Optional, Sequence, Union

import numpy as np
from scipy.linalg import expm

from .exact import DomainError, SqrtRational, factorial
from .sphere import HarmonicVector, legendre_series
from .su2_basis import (
    basis_tensor,
    coupled_basis_dense,
    decompose,
    jminus_matrix,
    jplus_matrix,
    j3_matrix,
    lm_index,
    reconstruct,
    CoupledCoefficients,
)

__all__ = [
    "DimensionMismatch",
    "DegreeTooHigh",
    "CharacteristicNumbers",
    "Family",
    "FAMILY_NAMES",
    "berezin_chars",
    "berezin_chars_exact",
    "family_chars",
    "custom_chars",
    "dual_chars",
    "operator_kernel",
    "symbol_of",
    "operator_of",
    "symbol_at",
    "rotation_unitary",
    "kernel_symbol_at",
    "transition_kernel",
    "reproducing_kernel",
    "metric_identity_check",
    "hs_inner",
]


class DimensionMismatch(DomainError):
    pass


class DegreeTooHigh(DomainError):
    pass


@dataclass(frozen=True)
class CharacteristicNumbers:
    """``c[l]`` for ``l = 0..n`` with ``c[0] = 1`` and ``c[l] != 0``."""

    n: int
    c: tuple

    def __post_init__(self) -> None:
        c = tuple(float(x) for x in self.c)
        if self.n < 1:
            raise DomainError(f"n must be >= 1 (got {self.n})")
        if len(c) != self.n + 1:
            raise DomainError(f"expected {self.n + 1} characteristic numbers, got {len(c)}")
        if abs(c[0] - 1.0) > 1e-14:
            raise DomainError("c_0 must equal 1")
        bad = [l for l, v in enumerate(c) if v == 0.0 or not math.isfinite(v)]
        if bad:
            raise DomainError(f"characteristic number c_{bad[0]} is zero or not finite")
        object.__setattr__(self, "c", c)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.c)

    def __getitem__(self, l: int) -> float:
        return self.c[l]

    def __len__(self) -> int:
        return len(self.c)

    def per_index(self) -> np.ndarray:
        """``c_l`` repeated over each ``m``, aligned with ``lm_index``."""
        return np.repeat(self.array, [2 * l + 1 for l in range(self.n + 1)])

    def is_isometric(self, tol: float = 1e-12) -> bool:
        return bool(np.all(np.abs(np.abs(self.array) - 1.0) <= tol))

    def alternate(self) -> "CharacteristicNumbers":
        """The characteristic numbers ``(-1)^l c_l``."""
        return CharacteristicNumbers(self.n, [(-1) ** l * v for l, v in enumerate(self.c)])

    def to_json(self) -> dict:
        return {"n": self.n, "c": list(self.c)}

    @classmethod
    def from_json(cls, data: dict) -> "CharacteristicNumbers":
        return cls(int(data["n"]), data["c"])


class Family(str, enum.Enum):
    STRATONOVICH = "stratonovich"
    STRATONOVICH_ALT = "stratonovich-alt"
    BEREZIN = "berezin"
    BEREZIN_ALT = "berezin-alt"
    TOEPLITZ = "toeplitz"
    TOEPLITZ_ALT = "toeplitz-alt"


FAMILY_NAMES = tuple(f.value for f in Family)


def _check_n(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise DomainError(f"n must be an integer >= 1 (got {n!r})")


def berezin_chars_exact(n: int):
    """``b_l^n = n! sqrt(n+1) / sqrt((n+l+1)! (n-l)!)`` as exact scalars."""
    _check_n(n)
    return [SqrtRational(1, Fraction(factorial(n) ** 2 * (n + 1),
                                     factorial(n + l + 1) * factorial(n - l)))
            for l in range(n + 1)]


def _berezin_float(n: int) -> np.ndarray:
    # log-gamma keeps large n finite; small n go through the exact path
    if n <= 150:
        return np.array([float(b) for b in berezin_chars_exact(n)])
    l = np.arange(n + 1)
    from scipy.special import gammaln
    logb = gammaln(n + 1) + 0.5 * np.log(n + 1) - 0.5 * (gammaln(n + l + 2) + gammaln(n - l + 1))
    out = np.exp(logb)
    out[0] = 1.0
    return out


def berezin_chars(n: int) -> CharacteristicNumbers:
    _check_n(n)
    return CharacteristicNumbers(n, _berezin_float(n))


def family_chars(family: Union[str, Family], n: int) -> CharacteristicNumbers:
    """Characteristic numbers of one of the six named families."""
    _check_n(n)
    try:
        fam = Family(family)
    except ValueError:
        raise DomainError(f"unknown family {family!r}; choose from {', '.join(FAMILY_NAMES)}") from None
    sign = (-1.0) ** np.arange(n + 1)
    if fam in (Family.STRATONOVICH, Family.STRATONOVICH_ALT):
        c = np.ones(n + 1)
    elif fam in (Family.BEREZIN, Family.BEREZIN_ALT):
        c = _berezin_float(n)
    else:
        c = 1.0 / _berezin_float(n)
    if fam.value.endswith("-alt"):
        c = c * sign
    return CharacteristicNumbers(n, c)


def custom_chars(generator: Callable[[int, int], float], n: int) -> CharacteristicNumbers:
    """Build characteristic numbers from a callback ``(n, l) -> c_l^n``."""
    _check_n(n)
    return CharacteristicNumbers(n, [generator(n, l) for l in range(n + 1)])


def dual_chars(chars: CharacteristicNumbers) -> CharacteristicNumbers:
    return CharacteristicNumbers(chars.n, 1.0 / chars.array)


# ---------------------------------------------------------------------------
# the symbol map and its inverse
# ---------------------------------------------------------------------------

def operator_kernel(chars: CharacteristicNumbers) -> np.ndarray:
    """``K = I/(n+1) + sum_{l>=1} c_l sqrt((2l+1)/(n+1)) e(l, 0)``."""
    n = chars.n
    K = np.eye(n + 1) / (n + 1)
    for l in range(1, n + 1):
        K = K + chars[l] * math.sqrt((2 * l + 1) / (n + 1)) * coupled_basis_dense(n, l, 0)
    return K


def symbol_of(P: np.ndarray, chars: CharacteristicNumbers) -> HarmonicVector:
    """Symbol ``W_P`` with coefficients ``f_{l,m} = a_{l,m} c_l / sqrt(n+1)``."""
    P = np.asarray(P)
    if P.shape != (chars.n + 1, chars.n + 1):
        raise DimensionMismatch(f"operator of shape {P.shape} for n={chars.n}")
    a = decompose(P).a
    return HarmonicVector(chars.n, a * chars.per_index() / math.sqrt(chars.n + 1))


def operator_of(f: HarmonicVector, chars: CharacteristicNumbers) -> np.ndarray:
    """Inverse of :func:`symbol_of`."""
    n = chars.n
    if f.degree() > n:
        raise DegreeTooHigh(f"symbol has degree {f.degree()} > n={n}")
    g = f.with_cap(n)
    a = g.coeffs * math.sqrt(n + 1) / chars.per_index()
    return reconstruct(CoupledCoefficients(n, a))


def symbol_at(P: np.ndarray, chars: CharacteristicNumbers, theta, phi):
    return symbol_of(P, chars).evaluate(theta, phi)


# ---------------------------------------------------------------------------
# kernel form, used as an oracle
# ---------------------------------------------------------------------------

def rotation_unitary(n: int, theta: float, phi: float) -> np.ndarray:
    """``exp(-i theta J3) exp(-i phi J2)``: carries the north pole to ``(theta, phi)``."""
    j2 = (jplus_matrix(n) - jminus_matrix(n)) / 2j
    return expm(-1j * theta * j3_matrix(n)) @ expm(-1j * phi * j2)


def kernel_symbol_at(P: np.ndarray, chars: CharacteristicNumbers, theta: float, phi: float) -> complex:
    """``W_P(theta, phi) = trace(P U K U^*)`` evaluated directly."""
    U = rotation_unitary(chars.n, theta, phi)
    K = operator_kernel(chars)
    return complex(np.trace(np.asarray(P) @ U @ K @ U.conj().T))


# ---------------------------------------------------------------------------
# transition kernels and metric relation
# ---------------------------------------------------------------------------

def transition_kernel(c: CharacteristicNumbers, c2: CharacteristicNumbers, t):
    """``U_{c,c'}(t) = (1/4pi) sum_l (c'_l / c_l) (2l+1) P_l(t)`` with ``t = n1.n2``."""
    if c.n != c2.n:
        raise DomainError("characteristic numbers for different n")
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1 + 1e-14):
        raise DomainError("|t| > 1")
    l = np.arange(c.n + 1)
    out = legendre_series((c2.array / c.array) * (2 * l + 1) / (4 * np.pi), np.clip(t, -1, 1))
    return out if out.ndim else float(out)


def reproducing_kernel(n: int, t):
    """``R(t) = (1/4pi) sum_{l<=n} (2l+1) P_l(t)``."""
    ones = CharacteristicNumbers(n, np.ones(n + 1))
    return transition_kernel(ones, ones, t)


def hs_inner(P: np.ndarray, Q: np.ndarray) -> complex:
    return complex(np.trace(np.asarray(P).conj().T @ np.asarray(Q)))


def metric_identity_check(P: np.ndarray, Q: np.ndarray, chars: CharacteristicNumbers,
                          grid=None) -> float:
    """Residual ``|<W_P, W_Q> - sum_l c_l^2/(n+1) <P_l, Q_l>|``.

    The left side is a quadrature of the evaluated symbols; the right side
    uses Hilbert-Schmidt products of the ``l``-blocks of ``P`` and ``Q``.
    """
    from .sphere import build_grid

    n = chars.n
    if np.shape(P) != (n + 1, n + 1) or np.shape(Q) != (n + 1, n + 1):
        raise DimensionMismatch("operators do not match n")
    grid = grid or build_grid(2 * n)
    wp = symbol_of(P, chars).evaluate(grid.theta, grid.phi)
    wq = symbol_of(Q, chars).evaluate(grid.theta, grid.phi)
    lhs = grid.integrate(np.conj(wp) * wq) / (4 * np.pi)
    B = basis_tensor(n)
    ap, aq = decompose(P).a, decompose(Q).a
    rhs = 0j
    for l in range(n + 1):
        sl = slice(l * l, (l + 1) ** 2)
        Pl = np.einsum("k,kij->ij", ap[sl], B[sl])
        Ql = np.einsum("k,kij->ij", aq[sl], B[sl])
        rhs += chars[l] ** 2 / (n + 1) * hs_inner(Pl, Ql)
    return float(abs(lhs - rhs))
