"""Angular momentum matrices and the coupled standard basis of M_C(n+1).

Matrices are indexed by the standard basis ordered by decreasing weight,
``j, j-1, ..., -j``.  The coupled basis element ``e(l, m)`` is supported on a
single off-diagonal: for ``m >= 0`` its nonzero entries sit at ``(k, k+m)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, Iterator, Optional, Tuple

import numpy as np

from .exact import DomainError, SqrtRational, factorial
from .wigner import clebsch_gordan, product_coefficient

__all__ = [
    "j3_matrix",
    "jminus_matrix",
    "jplus_matrix",
    "BasisMatrix",
    "coupled_basis",
    "coupled_basis_dense",
    "coupled_basis_closed",
    "basis_tensor",
    "mu_norm",
    "unnormalized_e",
    "lm_index",
    "lm_pairs",
    "CoupledCoefficients",
    "decompose",
    "reconstruct",
    "product_in_coupled_basis",
    "product_in_coupled_basis_exact",
    "ParityReport",
    "verify_parity",
]


def _check_n(n: int) -> None:
    if n < 1:
        raise DomainError(f"n must be >= 1 (got {n})")


def j3_matrix(n: int, exact: bool = False):
    """``J3 = diag(j, j-1, ..., -j)``; the exact variant is a list of Fractions."""
    _check_n(n)
    diag = [Fraction(n - 2 * k, 2) for k in range(n + 1)]
    if exact:
        return diag
    return np.diag([float(x) for x in diag])


def jminus_matrix(n: int) -> np.ndarray:
    """Lowering operator: subdiagonal entries ``sqrt(k (n-k+1))``, k = 1..n."""
    _check_n(n)
    k = np.arange(1, n + 1)
    return np.diag(np.sqrt(k * (n - k + 1.0)), -1)


def jplus_matrix(n: int) -> np.ndarray:
    return jminus_matrix(n).T.copy()


# ---------------------------------------------------------------------------
# coupled basis
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BasisMatrix:
    """Exact ``e(l, m)`` stored as its single nonzero off-diagonal."""

    n: int
    l: int
    m: int
    diag: Tuple[SqrtRational, ...]

    def positions(self) -> Iterator[Tuple[int, int]]:
        """Row/column indices of ``diag`` entries."""
        if self.m >= 0:
            return ((k, k + self.m) for k in range(len(self.diag)))
        return ((k - self.m, k) for k in range(len(self.diag)))

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n + 1, self.n + 1))
        for (r, c), v in zip(self.positions(), self.diag):
            out[r, c] = float(v)
        return out

    def entry(self, r: int, c: int) -> SqrtRational:
        for pos, v in zip(self.positions(), self.diag):
            if pos == (r, c):
                return v
        return SqrtRational.zero()

    def to_json(self) -> dict:
        return {"n": self.n, "l": self.l, "m": self.m, "diag": [str(v) for v in self.diag]}


def _check_lm(n: int, l: int, m: int) -> None:
    if not 0 <= l <= n or abs(m) > l:
        raise DomainError(f"invalid (l={l}, m={m}) for n={n}")


@lru_cache(maxsize=None)
def coupled_basis(n: int, l: int, m: int) -> BasisMatrix:
    """Exact coupled basis vector ``e^j(l, m)`` of ``M_C(n+1)``, ``j = n/2``.

    Entries are read off from Clebsch-Gordan coefficients: for ``m >= 0`` the
    entry at 1-based position ``(k, k+m)`` is
    ``(-1)^(m+k-1) C^{j,j,l}_{j-k+1, m-j+k-1, m}``.  Negative ``m`` use
    ``e(l,-m) = (-1)^m e(l,m)^T``.
    """
    _check_n(n)
    _check_lm(n, l, m)
    if m < 0:
        pos = coupled_basis(n, l, -m)
        diag = pos.diag if m % 2 == 0 else tuple(-v for v in pos.diag)
        return BasisMatrix(n, l, m, diag)
    vals = []
    for k in range(1, n + 2 - m):
        # doubled magnetic numbers: j-k+1 -> n-2k+2, m-j+k-1 -> 2m-n+2k-2
        c = clebsch_gordan(n, n - 2 * k + 2, n, 2 * m - n + 2 * k - 2, 2 * l, 2 * m)
        vals.append(-c if (m + k - 1) % 2 else c)
    return BasisMatrix(n, l, m, tuple(vals))


@lru_cache(maxsize=None)
def coupled_basis_dense(n: int, l: int, m: int) -> np.ndarray:
    arr = coupled_basis(n, l, m).to_dense()
    arr.setflags(write=False)
    return arr


def coupled_basis_closed(n: int, l: int, m: int) -> np.ndarray:
    """Float evaluation of the J-operator closed formula for ``e(l, m)``.

    ``e(l,m) = (-1)^l / mu_{l,m} * sum_k (-1)^k C(l-m,k) J-^(l-m-k) J+^l J-^k``
    for ``m >= 0``.  Used as an independent cross-check of :func:`coupled_basis`.
    """
    _check_lm(n, l, m)
    if m < 0:
        return (-1) ** m * coupled_basis_closed(n, l, -m).T
    jm, jp = jminus_matrix(n), jplus_matrix(n)
    mp = np.linalg.matrix_power
    acc = np.zeros((n + 1, n + 1))
    jpl = mp(jp, l)
    for k in range(l - m + 1):
        acc += (-1) ** k * comb(l - m, k) * (mp(jm, l - m - k) @ jpl @ mp(jm, k))
    return (-1) ** l * acc / float(mu_norm(n, l, m))


def mu_norm(n: int, l: int, m: int) -> SqrtRational:
    """Hilbert-Schmidt norm ``mu_{l,m}`` of the unnormalized ``E(l, m)``.

    ``(l!/sqrt(2l+1)) sqrt((n+l+1)!/(n-l)!) sqrt((l-m)!/(l+m)!)``.
    """
    if not 0 <= m <= l <= n:
        raise DomainError(f"mu_norm needs 0 <= m <= l <= n, got {(n, l, m)}")
    rad = Fraction(factorial(l) ** 2 * factorial(n + l + 1) * factorial(l - m),
                   (2 * l + 1) * factorial(n - l) * factorial(l + m))
    return SqrtRational(1, rad)


def unnormalized_e(n: int, l: int, m: int) -> np.ndarray:
    """``E(l, m) = (ad J-)^(l-m) (J+^l)`` as a float matrix (any ``|m| <= l``)."""
    _check_n(n)
    _check_lm(n, l, m)
    jm = jminus_matrix(n)
    e = np.linalg.matrix_power(jplus_matrix(n), l)
    for _ in range(l - m):
        e = jm @ e - e @ jm
    return e


# ---------------------------------------------------------------------------
# coefficient vectors
# ---------------------------------------------------------------------------

def lm_index(l: int, m: int) -> int:
    return l * l + l + m


def lm_pairs(n: int) -> Iterator[Tuple[int, int]]:
    for l in range(n + 1):
        for m in range(-l, l + 1):
            yield l, m


@lru_cache(maxsize=64)
def basis_tensor(n: int) -> np.ndarray:
    """Array ``B[k]`` = dense ``e(l,m)`` with ``k = lm_index(l, m)``."""
    out = np.zeros(((n + 1) ** 2, n + 1, n + 1))
    for l, m in lm_pairs(n):
        out[lm_index(l, m)] = coupled_basis_dense(n, l, m)
    out.setflags(write=False)
    return out


@dataclass
class CoupledCoefficients:
    """Coefficients ``a_{l,m}`` of ``P = sum a_{l,m} e(l, m)``."""

    n: int
    a: np.ndarray

    def __post_init__(self) -> None:
        self.a = np.asarray(self.a, dtype=complex)
        if self.a.shape != ((self.n + 1) ** 2,):
            raise DomainError("coefficient vector has wrong length")

    def get(self, l: int, m: int) -> complex:
        return complex(self.a[lm_index(l, m)])

    def items(self):
        for l, m in lm_pairs(self.n):
            yield (l, m), self.get(l, m)

    def nonzero(self, tol: float = 0.0) -> Dict[Tuple[int, int], complex]:
        return {k: v for k, v in self.items() if abs(v) > tol}


def decompose(P: np.ndarray) -> CoupledCoefficients:
    """Coordinates of ``P`` in the (real, orthonormal) coupled basis."""
    P = np.asarray(P)
    if P.ndim != 2 or P.shape[0] != P.shape[1] or P.shape[0] < 2:
        raise DomainError("decompose needs a square matrix of size >= 2")
    n = P.shape[0] - 1
    return CoupledCoefficients(n, np.einsum("kij,ij->k", basis_tensor(n), P))


def reconstruct(coeffs: CoupledCoefficients) -> np.ndarray:
    return np.einsum("k,kij->ij", coeffs.a, basis_tensor(coeffs.n))


def product_in_coupled_basis_exact(n: int, l1: int, m1: int, l2: int, m2: int
                                   ) -> Dict[Tuple[int, int], SqrtRational]:
    """Nonzero exact coefficients of ``e(l1,m1) e(l2,m2)`` in the coupled basis."""
    _check_n(n)
    _check_lm(n, l1, m1)
    _check_lm(n, l2, m2)
    m = m1 + m2
    out = {}
    for l in range(max(abs(l1 - l2), abs(m)), min(l1 + l2, n) + 1):
        c = product_coefficient(l1, m1, l2, m2, l, n)
        if c:
            out[(l, m)] = c
    return out


def product_in_coupled_basis(n: int, l1: int, m1: int, l2: int, m2: int) -> CoupledCoefficients:
    a = np.zeros((n + 1) ** 2, dtype=complex)
    for (l, m), c in product_in_coupled_basis_exact(n, l1, m1, l2, m2).items():
        a[lm_index(l, m)] = float(c)
    return CoupledCoefficients(n, a)


@dataclass
class ParityReport:
    n: int
    passed: bool
    checked: int
    counterexample: Optional[dict] = None

    def to_json(self) -> dict:
        return {"n": self.n, "passed": self.passed, "checked": self.checked,
                "counterexample": self.counterexample}


def verify_parity(n: int, method: str = "exact", tol: float = 1e-12) -> ParityReport:
    """Check that commutators of coupled basis vectors only involve ``l`` of
    parity ``l1+l2+1`` and anticommutators only parity ``l1+l2``.

    ``method="exact"`` compares exact product coefficients; ``method="dense"``
    multiplies float matrices and decomposes the result.
    """
    _check_n(n)
    pairs = list(lm_pairs(n))
    checked = 0
    for l1, m1 in pairs:
        for l2, m2 in pairs:
            checked += 1
            if method == "exact":
                ab = product_in_coupled_basis_exact(n, l1, m1, l2, m2)
                ba = product_in_coupled_basis_exact(n, l2, m2, l1, m1)
                for key in set(ab) | set(ba):
                    x = ab.get(key, SqrtRational.zero())
                    y = ba.get(key, SqrtRational.zero())
                    same_parity = (key[0] - l1 - l2) % 2 == 0
                    # commutator x - y must vanish on same parity, anticommutator x + y otherwise
                    bad = (x != y) if same_parity else (x != -y)
                    if bad:
                        return ParityReport(n, False, checked, {
                            "l1": l1, "m1": m1, "l2": l2, "m2": m2, "l": key[0],
                            "ab": str(x), "ba": str(y)})
            elif method == "dense":
                A, B = coupled_basis_dense(n, l1, m1), coupled_basis_dense(n, l2, m2)
                comm = decompose(A @ B - B @ A)
                anti = decompose(A @ B + B @ A)
                for (l, m), v in comm.items():
                    w = anti.get(l, m)
                    bad_val = v if (l - l1 - l2) % 2 == 0 else w
                    if abs(bad_val) > tol:
                        return ParityReport(n, False, checked, {
                            "l1": l1, "m1": m1, "l2": l2, "m2": m2, "l": l,
                            "value": abs(bad_val)})
            else:
                raise DomainError(f"unknown method {method!r}")
    return ParityReport(n, True, checked)
