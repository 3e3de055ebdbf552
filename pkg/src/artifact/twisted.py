"""Twisted products of symbols induced by a symbol correspondence.

For characteristic numbers ``c`` the product of harmonics is

    Y_{l1}^{m1} * Y_{l2}^{m2}
        = (-1)^(n+m) sqrt(n+1) sum_l [l1 l2 l; m1 m2 -m][j] c_l/(c_l1 c_l2) Y_l^m

and the product of general symbols follows by bilinearity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np

from .correspondence import (
    CharacteristicNumbers,
    DegreeTooHigh,
    berezin_chars,
    family_chars,
    reproducing_kernel,
)
from .exact import DomainError
from .sphere import HarmonicVector, pointwise_product
from .su2_basis import lm_index, lm_pairs
from .wigner import product_coefficient

__all__ = [
    "product_table",
    "twisted_product",
    "twisted_commutator",
    "twisted_anticommutator",
    "dual_symbol",
    "pi_n",
    "CheckReport",
    "cartesian_identities_check",
    "verify_symbol_parity",
    "verify_alternate_relation",
    "reproducing_kernel",
]


@lru_cache(maxsize=None)
def product_table(n: int, l1: int, m1: int, l2: int, m2: int) -> Tuple[Tuple[int, float], ...]:
    """``((l, M), ...)`` with ``e(l1,m1) e(l2,m2) = sum_l M e(l, m1+m2)``."""
    m = m1 + m2
    out = []
    for l in range(max(abs(l1 - l2), abs(m)), min(l1 + l2, n) + 1):
        c = product_coefficient(l1, m1, l2, m2, l, n)
        if c:
            out.append((l, float(c)))
    return tuple(out)


def _check_degree(f: HarmonicVector, n: int) -> HarmonicVector:
    if f.degree() > n:
        raise DegreeTooHigh(f"symbol degree {f.degree()} exceeds n={n}")
    return f.with_cap(n)


def twisted_product(f: HarmonicVector, g: HarmonicVector, chars: CharacteristicNumbers) -> HarmonicVector:
    """``f * g`` for the correspondence with characteristic numbers ``chars``."""
    n = chars.n
    f = _check_degree(f, n)
    g = _check_degree(g, n)
    c = chars.array
    root = math.sqrt(n + 1)
    out = np.zeros((n + 1) ** 2, dtype=complex)
    sf, sg = f.support(), g.support()
    for l1, m1 in sf:
        a = f.coeffs[lm_index(l1, m1)] / c[l1]
        for l2, m2 in sg:
            ab = root * a * g.coeffs[lm_index(l2, m2)] / c[l2]
            m = m1 + m2
            for l, M in product_table(n, l1, m1, l2, m2):
                out[lm_index(l, m)] += M * c[l] * ab
    return HarmonicVector(n, out)


def twisted_commutator(f, g, chars) -> HarmonicVector:
    return twisted_product(f, g, chars) - twisted_product(g, f, chars)


def twisted_anticommutator(f, g, chars) -> HarmonicVector:
    return twisted_product(f, g, chars) + twisted_product(g, f, chars)


def dual_symbol(f: HarmonicVector, chars: CharacteristicNumbers) -> HarmonicVector:
    """Map a ``c``-symbol to the ``1/c``-symbol of the same operator."""
    g = _check_degree(f, chars.n)
    return HarmonicVector(chars.n, g.coeffs / chars.per_index() ** 2)


def pi_n(n: int) -> float:
    """``sqrt((n-1)(n+3)/(n(n+2)))``."""
    if n < 1:
        raise DomainError("n must be >= 1")
    return math.sqrt((n - 1) * (n + 3) / (n * (n + 2)))


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------

@dataclass
class CheckReport:
    name: str
    n: int
    passed: bool
    max_residual: float
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "n": self.n, "passed": self.passed,
                "max_residual": self.max_residual, "details": self.details}


_EPS = {("x", "y"): ("z", 1), ("y", "z"): ("x", 1), ("z", "x"): ("y", 1),
        ("y", "x"): ("z", -1), ("z", "y"): ("x", -1), ("x", "z"): ("y", -1)}


def cartesian_identities_check(kind: str, n: int, tol: float = 1e-12) -> CheckReport:
    """Closed forms for twisted products of the coordinate functions.

    ``kind="standard"``: ``a*b = pi_n ab + i eps c / sqrt(n(n+2))`` and
    ``a*a = pi_n a^2 + (1 - pi_n)/3``.
    ``kind="berezin"``: ``a*b = ((n-1)/n) ab + i eps c / n`` and
    ``a*a = ((n-1)/n) a^2 + 1/n``.
    """
    if kind == "standard":
        chars = family_chars("stratonovich", n)
        lin, cross, const = pi_n(n), 1 / math.sqrt(n * (n + 2)), (1 - pi_n(n)) / 3
    elif kind == "berezin":
        chars = berezin_chars(n)
        lin, cross, const = (n - 1) / n, 1 / n, 1 / n
    else:
        raise DomainError(f"unknown kind {kind!r}")
    coords = {a: HarmonicVector.cartesian(a) for a in "xyz"}
    cap = max(n, 2)
    worst = 0.0
    total = HarmonicVector(cap)
    for a in "xyz":
        for b in "xyz":
            got = twisted_product(coords[a], coords[b], chars).with_cap(cap)
            want = lin * pointwise_product(coords[a], coords[b], cap=min(cap, n))
            if a == b:
                want = want + HarmonicVector.constant(const, cap)
                total = total + got
            else:
                c, s = _EPS[(a, b)]
                want = want + coords[c].with_cap(cap) * (1j * s * cross)
            worst = max(worst, got.distance(want))
    sum_sq = total.get(0, 0)
    expected = 1.0 if kind == "standard" else (n + 2) / n
    worst = max(worst, abs(sum_sq - expected), total.with_cap(cap).distance(HarmonicVector.constant(expected, cap)))
    return CheckReport(f"cartesian-{kind}", n, worst <= tol, worst,
                       {"sum_of_squares": sum_sq.real, "expected": expected})


def verify_symbol_parity(chars: CharacteristicNumbers, tol: float = 1e-12) -> CheckReport:
    """Commutators of ``Y_{l1}, Y_{l2}`` only involve ``l`` with ``l1+l2+l`` odd,
    anticommutators only ``l1+l2+l`` even; this covers all six parity rules."""
    n = chars.n
    worst = 0.0
    where = None
    pairs = list(lm_pairs(n))
    for l1, m1 in pairs:
        f = HarmonicVector.basis(l1, m1, n)
        for l2, m2 in pairs:
            g = HarmonicVector.basis(l2, m2, n)
            ab = twisted_product(f, g, chars)
            ba = twisted_product(g, f, chars)
            for l in range(n + 1):
                blk = (ab.block(l) - ba.block(l)) if (l1 + l2 + l) % 2 == 0 else (ab.block(l) + ba.block(l))
                r = float(np.max(np.abs(blk), initial=0.0))
                if r > worst:
                    worst, where = r, {"l1": l1, "m1": m1, "l2": l2, "m2": m2, "l": l}
    return CheckReport("symbol-parity", n, worst <= tol, worst, {"worst_at": where})


def verify_alternate_relation(chars: CharacteristicNumbers, tol: float = 1e-12) -> CheckReport:
    """``Y *_{c-} Y' = Y' *_c Y`` on all basis pairs, where ``c-`` is the alternate."""
    n = chars.n
    alt = chars.alternate()
    worst = 0.0
    pairs = list(lm_pairs(n))
    for l1, m1 in pairs:
        f = HarmonicVector.basis(l1, m1, n)
        for l2, m2 in pairs:
            g = HarmonicVector.basis(l2, m2, n)
            worst = max(worst, twisted_product(f, g, alt).distance(twisted_product(g, f, chars)))
    return CheckReport("alternate-relation", n, worst <= tol, worst)
