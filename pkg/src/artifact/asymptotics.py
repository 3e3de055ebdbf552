"""Large-spin asymptotics of the product symbol and classification of
correspondence sequences.

All type detection here is numerical evidence gathered on a finite grid of
``n`` values.  The definitions are genuine limits, so every report carries
the raw data it was based on.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from .correspondence import CharacteristicNumbers, custom_chars, family_chars
from .exact import DomainError, SqrtRational, TriangleViolation, factorial
from .sphere import HarmonicVector, pointwise_product, poisson_bracket, random_points
from .twisted import twisted_product
from .wigner import cg_000, clebsch_gordan, poisson_p, product_coefficient

__all__ = [
    "Sigma1Counterexample",
    "asymptotic_coeff",
    "normalized_symbol",
    "expansion_residual",
    "loglog_slope",
    "sigma0",
    "sigma0_brute",
    "sigma1",
    "sigma1_brute",
    "sigma_sweep",
    "SequenceReport",
    "classify_sequence",
    "convergence_study",
    "family_generator",
    "resolve_generator",
    "EXAMPLE_GENERATORS",
    "default_n_grid",
]

Generator = Callable[[int, int], float]


class Sigma1Counterexample(AssertionError):
    """Raised when the closed and brute-force sums disagree."""


# ---------------------------------------------------------------------------
# expansion of the product symbol
# ---------------------------------------------------------------------------

def _check_lm(l: int, m: int) -> None:
    if l < 0 or abs(m) > l:
        raise DomainError(f"invalid (l={l}, m={m})")


def asymptotic_coeff(l1: int, m1: int, l2: int, m2: int, l3: int, order: int) -> SqrtRational:
    """Coefficient of ``n^-order`` in the normalized product symbol.

    Order 0 is ``C^{l1 l2 l3}_{m1 m2 m} C000(l1,l2,l3)``, order 1 is
    ``C^{l1 l2 l3}_{m1 m2 m} P(l1,l2,l3)``, with ``m = m1 + m2``.
    """
    for l, m in ((l1, m1), (l2, m2)):
        _check_lm(l, m)
    if l3 < 0:
        raise DomainError("negative l3")
    m = m1 + m2
    if order not in (0, 1):
        raise DomainError("order must be 0 or 1")
    if abs(m) > l3:
        return SqrtRational.zero()
    cg = clebsch_gordan(2 * l1, 2 * m1, 2 * l2, 2 * m2, 2 * l3, 2 * m)
    return cg * (cg_000(l1, l2, l3) if order == 0 else poisson_p(l1, l2, l3))


def normalized_symbol(l1: int, m1: int, l2: int, m2: int, l3: int, n: int) -> SqrtRational:
    """``(-1)^(n+m) sqrt((n+1)(2l3+1)/((2l1+1)(2l2+1))) [l1 l2 l3; m1 m2 -m][j]``, exact."""
    for l in (l1, l2, l3):
        if l > n:
            raise DomainError(f"l={l} exceeds n={n}")
    m = m1 + m2
    if abs(m) > l3:
        return SqrtRational.zero()
    scale = SqrtRational(1, Fraction((n + 1) * (2 * l3 + 1), (2 * l1 + 1) * (2 * l2 + 1)))
    return scale * product_coefficient(l1, m1, l2, m2, l3, n)


def expansion_residual(l1: int, m1: int, l2: int, m2: int, l3: int, n: int) -> float:
    """``|normalized symbol - order0 - order1/n|``.

    The subtraction is done in 60-digit decimal so that residuals far below
    double precision relative to the terms are still resolved.
    """
    import decimal

    ctx = decimal.Context(prec=60)

    def dec(x: SqrtRational) -> decimal.Decimal:
        if not x:
            return decimal.Decimal(0)
        r = x.radicand
        v = ctx.sqrt(ctx.divide(decimal.Decimal(r.numerator), decimal.Decimal(r.denominator)))
        return v if x.sign > 0 else -v

    exact = dec(normalized_symbol(l1, m1, l2, m2, l3, n))
    a0 = dec(asymptotic_coeff(l1, m1, l2, m2, l3, 0))
    a1 = dec(asymptotic_coeff(l1, m1, l2, m2, l3, 1))
    return float(abs(ctx.subtract(ctx.subtract(exact, a0), ctx.divide(a1, n))))


def loglog_slope(ns: Sequence[float], values: Sequence[float]) -> float:
    """Least-squares slope of ``log(values)`` against ``log(ns)``."""
    ns = np.asarray(ns, dtype=float)
    v = np.asarray(values, dtype=float)
    keep = v > 0
    if keep.sum() < 2:
        return float("nan")
    return float(np.polyfit(np.log(ns[keep]), np.log(v[keep]), 1)[0])


# ---------------------------------------------------------------------------
# the alternating sums
# ---------------------------------------------------------------------------

def _check_triangle(l1: int, l2: int, l3: int) -> None:
    if min(l1, l2, l3) < 0 or not (abs(l1 - l2) <= l3 <= l1 + l2):
        raise TriangleViolation(f"({l1},{l2},{l3}) is not a triangle")


def _brute(l1: int, l2: int, l3: int, power: int) -> Fraction:
    _check_triangle(l1, l2, l3)
    ls = (l1, l2, l3)
    pairs = (l1 + l2, l2 + l3, l3 + l1)
    kmin, kmax = max(ls), min(pairs)
    # every R(k) divides M, so the sum is an integer over M
    M = 1
    for l in ls:
        M *= factorial(kmax - l)
    for p in pairs:
        M *= factorial(p - kmin)
    total = 0
    for k in range(kmin, kmax + 1):
        r = 1
        for l in ls:
            r *= factorial(k - l)
        for p in pairs:
            r *= factorial(p - k)
        term = (M // r) * k ** power
        total += -term if k % 2 else term
    return Fraction(total, M)


def sigma0_brute(l1: int, l2: int, l3: int) -> Fraction:
    """``sum_k (-1)^k / R(k)`` over ``max(l_i) <= k <= min(l_i + l_j)``."""
    return _brute(l1, l2, l3, 0)


def sigma1_brute(l1: int, l2: int, l3: int) -> Fraction:
    """``sum_k (-1)^k k / R(k)``."""
    return _brute(l1, l2, l3, 1)


def _Q(l1: int, l2: int, l3: int) -> Fraction:
    h = (l1 + l2 + l3) // 2
    den = 1
    for l in (l1, l2, l3):
        den *= factorial(l) * factorial(h - l)
    return Fraction(factorial(h), den)


def sigma0(l1: int, l2: int, l3: int) -> Fraction:
    """Closed form: ``(-1)^(L/2) Q`` for even ``L``, zero for odd ``L``."""
    _check_triangle(l1, l2, l3)
    L = l1 + l2 + l3
    if L % 2:
        return Fraction(0)
    return (-1) ** (L // 2) * _Q(l1, l2, l3)


def sigma1(l1: int, l2: int, l3: int) -> Fraction:
    """Closed form: ``(-1)^(L/2) (L/2) Q`` for even ``L``, ``(-1)^((L+1)/2) Q`` for odd ``L``.

    The odd case is a conjecture checked by :func:`sigma_sweep`.
    """
    _check_triangle(l1, l2, l3)
    L = l1 + l2 + l3
    if L % 2 == 0:
        return (-1) ** (L // 2) * Fraction(L, 2) * _Q(l1, l2, l3)
    return (-1) ** ((L + 1) // 2) * _Q(l1, l2, l3)


def _triples_with_sum(L: int):
    for l3 in range((L + 2) // 3, L // 2 + 1):
        for l2 in range((L - l3 + 1) // 2, min(l3, L - l3) + 1):
            l1 = L - l3 - l2
            if 0 <= l1 <= l2 and l1 + l2 >= l3:
                yield l1, l2, l3


def _sweep_one(L: int) -> int:
    count = 0
    for l1, l2, l3 in _triples_with_sum(L):
        count += 1
        s0c, s0b = sigma0(l1, l2, l3), sigma0_brute(l1, l2, l3)
        s1c, s1b = sigma1(l1, l2, l3), sigma1_brute(l1, l2, l3)
        if s0c != s0b or s1c != s1b:
            raise Sigma1Counterexample(
                f"closed/brute mismatch at ({l1},{l2},{l3}): "
                f"sigma0 {s0c} vs {s0b}, sigma1 {s1c} vs {s1b}")
    return count


def sigma_sweep(L_max: int, jobs: int = 1) -> int:
    """Compare closed and brute-force sums on every triangle with ``L <= L_max``.

    The sums are symmetric, so only sorted triples are visited.  Returns the
    number of triples checked and raises :class:`Sigma1Counterexample` on the
    first disagreement.
    """
    Ls = range(L_max + 1)
    if jobs <= 1:
        return sum(_sweep_one(L) for L in Ls)
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return sum(ex.map(_sweep_one, Ls))


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

def family_generator(name: str) -> Generator:
    """``(n, l) -> c_l^n`` for a named family."""
    family_chars(name, 1)  # validate the name early

    @lru_cache(maxsize=None)
    def table(n: int):
        return family_chars(name, n).c

    def gen(n: int, l: int) -> float:
        return table(n)[l]

    gen.__name__ = f"family[{name}]"
    return gen


def _ex1(n: int, l: int) -> float:
    return float(n) ** (-l)


def _ex3(n: int, l: int) -> float:
    return 1.0 - math.log(1.0 - (l - 1) / n) if l else 1.0


def _quasinotP(n: int, l: int) -> float:
    return -1.0 if l % 3 == 1 else 1.0


EXAMPLE_GENERATORS: Dict[str, Generator] = {
    "ex1": _ex1,
    "ex3": _ex3,
    "quasinotP": _quasinotP,
}


def resolve_generator(name: str) -> Generator:
    if name in EXAMPLE_GENERATORS:
        return EXAMPLE_GENERATORS[name]
    return family_generator(name)


def default_n_grid(n_max: int = 400, count: int = 24) -> List[int]:
    grid = np.unique(np.round(np.geomspace(8, n_max, count)).astype(int))
    return [int(x) for x in grid]


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

@dataclass
class SequenceReport:
    l_max: int
    n_grid: List[int]
    limits: Dict[int, Optional[float]]
    flags: Dict[str, bool]
    evidence: Dict[str, object] = field(default_factory=dict)
    rate_exponent: Optional[float] = None
    rate_constant: Optional[float] = None

    def to_json(self) -> dict:
        d = asdict(self)
        d["limits"] = {str(k): v for k, v in self.limits.items()}
        d["schema"] = "artifact.sequence-report/1"
        return d


def _extrapolate(ns: np.ndarray, vals: np.ndarray, degree: int = 5) -> float:
    """Value at ``1/n = 0`` of the interpolating polynomial in ``1/n``."""
    k = min(degree + 1, len(ns))
    x = 1.0 / ns[-k:]
    return float(np.polynomial.polynomial.polyfit(x, vals[-k:], k - 1)[0])


def _limit(ns: np.ndarray, vals: np.ndarray, tol: float) -> Optional[float]:
    """Extrapolated limit, or ``None`` when two windows disagree."""
    if len(ns) < 7 or not np.all(np.isfinite(vals)):
        return None
    a = _extrapolate(ns, vals)
    b = _extrapolate(ns[:-1], vals[:-1])
    if abs(a - b) > tol * max(1.0, abs(a)):
        return None
    return a


def classify_sequence(generator: Generator, l_max: int = 6, n_grid: Optional[Sequence[int]] = None,
                      tol: float = 1e-6, path_tol: float = 1e-3) -> SequenceReport:
    """Numerically detect the asymptotic type of ``c_l^n = generator(n, l)``.

    Fixed-``l`` limits use polynomial extrapolation in ``1/n``.  The limit is
    accepted when extrapolations from two overlapping windows agree to
    ``tol``.  Strong-limiting is probed along the paths ``l = n``,
    ``l = n/2`` and ``l = sqrt(n)``: each must converge and all must share
    one limit, both to ``path_tol``.
    """
    if l_max < 1:
        raise DomainError("l_max must be >= 1")
    grid = np.asarray(sorted(set(int(n) for n in (n_grid or default_n_grid()))), dtype=float)
    if len(grid) < 6:
        raise DomainError("n_grid needs at least 6 points")
    limits: Dict[int, Optional[float]] = {}
    pure_terms: Dict[int, Optional[float]] = {}
    for l in range(1, l_max + 1):
        ns = grid[grid >= max(l, 1)]
        vals = np.array([generator(int(n), l) for n in ns], dtype=float)
        limits[l] = _limit(ns, vals, tol)
        if limits[l] is not None:
            target = round(limits[l])
            pure_terms[l] = _limit(ns, ns * (vals - target), max(tol, 1e-4)) if target in (-1, 1) else None

    have = [v for v in limits.values() if v is not None]
    limiting = len(have) == l_max
    pseudo = limiting and all(abs(v) > tol and math.isfinite(v) for v in have)
    quasi = limiting and all(abs(abs(v) - 1) < tol for v in have)
    poisson = limiting and all(abs(limits[l] - 1) < tol for l in limits)
    anti = limiting and all(abs(limits[l] - (-1) ** l) < tol for l in limits)
    pure = (poisson or anti) and all(pure_terms.get(l) is not None and abs(pure_terms[l]) < 1e-4
                                     for l in limits)

    # strong-limiting: joint limit of |c_l^n| along several paths
    paths = {
        "diagonal": lambda n: n,
        "half": lambda n: max(1, n // 2),
        "sqrt": lambda n: max(1, int(round(math.sqrt(n)))),
    }
    path_limits: Dict[str, Optional[float]] = {}
    for name, lfun in paths.items():
        vals = np.array([abs(generator(int(n), lfun(int(n)))) for n in grid], dtype=float)
        path_limits[name] = _limit(grid, vals, path_tol)
    pl = list(path_limits.values())
    strong = limiting and all(v is not None for v in pl) and (max(pl) - min(pl) <= path_tol)

    # convergence rate of sup_l |c_l^n - lim|
    rate_exp = rate_const = None
    if limiting:
        errs = []
        for n in grid:
            e = max(abs(generator(int(n), l) - limits[l]) for l in limits if l <= n)
            errs.append(e)
        errs = np.asarray(errs)
        top = grid >= grid[-1] / 10
        keep = top & (errs > 0)
        if keep.sum() >= 2:
            slope, icpt = np.polyfit(np.log(grid[keep]), np.log(errs[keep]), 1)
            rate_exp, rate_const = float(slope), float(math.exp(icpt))

    flags = {
        "poisson": poisson,
        "anti_poisson": anti,
        "pure": pure,
        "limiting": limiting,
        "pseudo_classical": pseudo,
        "quasi_classical": quasi,
        "strong_limiting": strong,
        "bohr": (poisson or anti) and strong,
        "pure_bohr": pure and strong,
    }
    flags["none"] = not any(flags.values())
    evidence = {"path_limits": path_limits, "pure_terms": {str(k): v for k, v in pure_terms.items()},
                "tol": tol, "path_tol": path_tol}
    return SequenceReport(l_max, [int(n) for n in grid], limits, flags, evidence, rate_exp, rate_const)


# ---------------------------------------------------------------------------
# convergence of twisted products towards classical products
# ---------------------------------------------------------------------------

def convergence_study(generator: Generator, l1: int, m1: int, l2: int, m2: int,
                      n_grid: Sequence[int], samples: int = 2000, seed: int = 0) -> List[dict]:
    """Rows ``{"n", "sym_err", "comm_err"}`` for ``f = Y_l1^m1``, ``g = Y_l2^m2``.

    ``sym_err`` is the sampled sup norm of ``(f*g + g*f)/2 - fg`` and
    ``comm_err`` that of ``n (f*g - g*f)/2 - i{f, g}``.
    """
    _check_lm(l1, m1)
    _check_lm(l2, m2)
    if min(n_grid) < max(l1, l2):
        raise DomainError("every n must be at least max(l1, l2)")
    cap = l1 + l2
    pts = random_points(samples, seed)
    f, g = HarmonicVector.basis(l1, m1), HarmonicVector.basis(l2, m2)
    classical = pointwise_product(f, g, cap).evaluate_xyz(pts)
    bracket = 1j * poisson_bracket(f, g, cap).evaluate_xyz(pts)
    rows = []
    for n in n_grid:
        chars = custom_chars(generator, int(n))
        fg = twisted_product(f, g, chars).with_cap(cap).evaluate_xyz(pts)
        gf = twisted_product(g, f, chars).with_cap(cap).evaluate_xyz(pts)
        rows.append({"n": int(n),
                     "sym_err": float(np.max(np.abs((fg + gf) / 2 - classical))),
                     "comm_err": float(np.max(np.abs(n * (fg - gf) / 2 - bracket)))})
    return rows
