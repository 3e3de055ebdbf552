"""Exact scalar arithmetic shared by the combinatorial modules.

Every Wigner-type quantity in this package has the form ``sign * sqrt(p/q)``
with ``p/q`` a nonnegative rational.  :class:`SqrtRational` is that normal
form.  It is closed under multiplication and division but not addition, so
formulas are arranged as (square-root prefactor) * (rational sum).

Half-integers are passed around as doubled integers: spin ``j`` is the int
``2j``.
"""
from __future__ import annotations

import decimal
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Union

__all__ = [
    "DomainError",
    "TriangleViolation",
    "SqrtRational",
    "factorial",
    "sqrt_rational_mul",
    "sqrt_rational_to_float",
    "triangle_ok",
    "delta_weight",
    "SqrtSum",
    "squarefree_split",
]


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class TriangleViolation(DomainError):
    """Three angular momenta fail the triangle condition."""


# ---------------------------------------------------------------------------
# factorials
# ---------------------------------------------------------------------------

_FACT = [1]
_FACT_LOCK = threading.Lock()


def factorial(k: int) -> int:
    """Return ``k!`` exactly, growing a shared table on demand."""
    if k < 0:
        raise DomainError(f"factorial of negative number {k}")
    table = _FACT
    if k < len(table):
        return table[k]
    with _FACT_LOCK:
        # another thread may have grown the table meanwhile
        while len(table) <= k:
            table.append(table[-1] * len(table))
    return table[k]


# ---------------------------------------------------------------------------
# sign * sqrt(rational)
# ---------------------------------------------------------------------------

_DEC_CTX = decimal.Context(prec=60)
Number = Union[int, Fraction]


@dataclass(frozen=True)
class SqrtRational:
    """The real number ``sign * sqrt(radicand)``.

    Invariants: ``sign in (-1, 0, 1)``, ``radicand >= 0`` and
    ``sign == 0`` exactly when ``radicand == 0``.
    """

    sign: int
    radicand: Fraction

    def __post_init__(self) -> None:
        r = Fraction(self.radicand)
        if r < 0:
            raise DomainError("negative radicand")
        s = int(self.sign)
        if s not in (-1, 0, 1):
            raise DomainError(f"bad sign {self.sign!r}")
        if r == 0 or s == 0:
            s, r = 0, Fraction(0)
        object.__setattr__(self, "sign", s)
        object.__setattr__(self, "radicand", r)

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls) -> "SqrtRational":
        return cls(0, Fraction(0))

    @classmethod
    def one(cls) -> "SqrtRational":
        return cls(1, Fraction(1))

    @classmethod
    def from_rational(cls, q: Number) -> "SqrtRational":
        """Embed a rational number ``q`` (stored as sign(q) * sqrt(q^2))."""
        q = Fraction(q)
        return cls((q > 0) - (q < 0), q * q)

    @classmethod
    def sqrt(cls, q: Number, sign: int = 1) -> "SqrtRational":
        """Return ``sign * sqrt(q)`` for a nonnegative rational ``q``."""
        return cls(sign, Fraction(q))

    @classmethod
    def parse(cls, text: str) -> "SqrtRational":
        """Inverse of :meth:`__str__`."""
        s_part, _, rest = text.strip().partition("*sqrt(")
        if not rest.endswith(")"):
            raise ValueError(f"cannot parse {text!r}")
        return cls(int(s_part), Fraction(rest[:-1]))

    # -- arithmetic -------------------------------------------------------
    def __mul__(self, other: object) -> "SqrtRational":
        if isinstance(other, (int, Fraction)):
            other = SqrtRational.from_rational(other)
        if not isinstance(other, SqrtRational):
            return NotImplemented
        return SqrtRational(self.sign * other.sign, self.radicand * other.radicand)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "SqrtRational":
        if isinstance(other, (int, Fraction)):
            other = SqrtRational.from_rational(other)
        if not isinstance(other, SqrtRational):
            return NotImplemented
        if other.sign == 0:
            raise ZeroDivisionError("division by exact zero")
        return SqrtRational(self.sign * other.sign, self.radicand / other.radicand)

    def __neg__(self) -> "SqrtRational":
        return SqrtRational(-self.sign, self.radicand)

    def __abs__(self) -> "SqrtRational":
        return SqrtRational(abs(self.sign), self.radicand)

    def __bool__(self) -> bool:
        return self.sign != 0

    def square(self) -> Fraction:
        """Exact signed square ``sign * radicand`` (i.e. value*|value|)."""
        return self.sign * self.radicand

    def is_rational(self) -> bool:
        p, q = self.radicand.numerator, self.radicand.denominator
        return math.isqrt(p) ** 2 == p and math.isqrt(q) ** 2 == q

    def as_fraction(self) -> Fraction:
        """The value as a Fraction; raises if it is irrational."""
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        p, q = self.radicand.numerator, self.radicand.denominator
        return Fraction(self.sign * math.isqrt(p), math.isqrt(q))

    # -- conversion -------------------------------------------------------
    @cached_property
    def value(self) -> float:
        return sqrt_rational_to_float(self)

    def __float__(self) -> float:
        return self.value

    def __str__(self) -> str:
        r = self.radicand
        return f"{self.sign}*sqrt({r.numerator}/{r.denominator})"

    def decimal_str(self, digits: int = 17) -> str:
        """Decimal rendering with ``digits`` significant digits."""
        if self.sign == 0:
            return "0"
        ctx = decimal.Context(prec=digits + 10)
        v = ctx.sqrt(ctx.divide(decimal.Decimal(self.radicand.numerator),
                                decimal.Decimal(self.radicand.denominator)))
        v = decimal.Context(prec=digits).plus(v)
        text = format(v, "g") if abs(v.adjusted()) > 15 else format(v, "f")
        return ("-" if self.sign < 0 else "") + text

    def to_json(self) -> dict:
        r = self.radicand
        return {"sign": self.sign, "radicand": f"{r.numerator}/{r.denominator}",
                "decimal": self.value}


def sqrt_rational_mul(a: SqrtRational, b: SqrtRational) -> SqrtRational:
    return a * b


_MAX_RADICAND = Fraction(int(1.7976931348623157e308)) ** 2


def sqrt_rational_to_float(a: SqrtRational) -> float:
    """Nearest double to ``sign * sqrt(p/q)``.

    The square root is taken in 60-digit decimal arithmetic, so the final
    rounding to binary is the only one that matters.
    """
    if a.sign == 0:
        return 0.0
    r = a.radicand
    if r > _MAX_RADICAND:
        raise OverflowError("radicand exceeds double range")
    p, q = r.numerator, r.denominator
    if p < (1 << 52) and q < (1 << 52):
        # both exactly representable; check for perfect squares quickly
        sp, sq = math.isqrt(p), math.isqrt(q)
        if sp * sp == p and sq * sq == q:
            return a.sign * (sp / sq)
    v = _DEC_CTX.sqrt(_DEC_CTX.divide(decimal.Decimal(p), decimal.Decimal(q)))
    return a.sign * float(v)


# ---------------------------------------------------------------------------
# triangle helpers (doubled integers)
# ---------------------------------------------------------------------------

def triangle_ok(a: int, b: int, c: int) -> bool:
    """Triangle condition for doubled spins ``a=2l1, b=2l2, c=2l3``.

    True iff ``|l1-l2| <= l3 <= l1+l2`` and ``l1+l2+l3`` is an integer.
    """
    if a < 0 or b < 0 or c < 0:
        raise DomainError("negative angular momentum")
    return abs(a - b) <= c <= a + b and (a + b + c) % 2 == 0


def delta_weight(a: int, b: int, c: int) -> SqrtRational:
    """``Delta(l1,l2,l3)`` for doubled arguments.

    ``sqrt((l1+l2-l3)! (l3+l1-l2)! (l2+l3-l1)! / (l1+l2+l3+1)!)``.
    """
    if not triangle_ok(a, b, c):
        raise TriangleViolation(f"triangle fails for doubled ({a},{b},{c})")
    num = (factorial((a + b - c) // 2) * factorial((c + a - b) // 2)
           * factorial((b + c - a) // 2))
    return SqrtRational(1, Fraction(num, factorial((a + b + c) // 2 + 1)))


def _delta_sq_int(l1: int, l2: int, l3: int) -> Fraction:
    """Delta squared for plain integer arguments (no checks)."""
    return Fraction(factorial(l1 + l2 - l3) * factorial(l3 + l1 - l2)
                    * factorial(l2 + l3 - l1), factorial(l1 + l2 + l3 + 1))


# ---------------------------------------------------------------------------
# exact sums of square roots
# ---------------------------------------------------------------------------

_TRIAL_LIMIT = 1 << 16


@lru_cache(maxsize=65536)
def squarefree_split(k: int):
    """Return ``(a, s)`` with ``k = a*a*s`` and ``s`` squarefree.

    Trial division handles every factor below 2**16.  A leftover cofactor
    is accepted when it is a perfect square or below the cube of the trial
    limit (then it has at most two prime factors, so it is squarefree unless
    it is a square); anything else raises ``ValueError``.
    Factorial-built radicands never get that far.
    """
    if k < 0:
        raise DomainError("negative argument")
    if k == 0:
        return 0, 1
    a, s = 1, 1
    p = 2
    while p < _TRIAL_LIMIT and p * p <= k:
        if k % p == 0:
            e = 0
            while k % p == 0:
                k //= p
                e += 1
            a *= p ** (e // 2)
            if e % 2:
                s *= p
        p += 1 if p == 2 else 2
    if k > 1:
        r = math.isqrt(k)
        if r * r == k:
            a *= r
        elif k < _TRIAL_LIMIT ** 3:
            s *= k
        else:
            raise ValueError("cofactor too large to classify")
    return a, s


class SqrtSum:
    """Finite sum ``sum_s q_s sqrt(s)`` with squarefree ``s`` and rational ``q_s``.

    Square roots of distinct squarefree integers are linearly independent
    over the rationals, so this representation is canonical and equality
    (in particular equality with zero) is decided exactly.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None) -> None:
        self.terms = {}
        for s, q in (terms or {}).items():
            if q:
                self.terms[s] = Fraction(q)

    @classmethod
    def of(cls, x: SqrtRational) -> "SqrtSum":
        if not x:
            return cls()
        # sqrt(p/q) = sqrt(p q) / q, splitting p and q separately
        p, q = x.radicand.numerator, x.radicand.denominator
        ap, sp = squarefree_split(p)
        aq, sq = squarefree_split(q)
        g = math.gcd(sp, sq)
        return cls({(sp // g) * (sq // g): Fraction(x.sign * ap * aq * g, q)})

    def __add__(self, other) -> "SqrtSum":
        if isinstance(other, SqrtRational):
            other = SqrtSum.of(other)
        out = dict(self.terms)
        for s, q in other.terms.items():
            out[s] = out.get(s, Fraction(0)) + q
        return SqrtSum(out)

    __radd__ = __add__

    def __neg__(self) -> "SqrtSum":
        return SqrtSum({s: -q for s, q in self.terms.items()})

    def __sub__(self, other) -> "SqrtSum":
        if isinstance(other, SqrtRational):
            other = SqrtSum.of(other)
        return self + (-other)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = SqrtSum({1: other})
        elif isinstance(other, SqrtRational):
            other = SqrtSum.of(other)
        if not isinstance(other, SqrtSum):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __float__(self) -> float:
        return float(sum(float(q) * math.sqrt(s) for s, q in self.terms.items()))

    def __repr__(self) -> str:
        body = " + ".join(f"{q}*sqrt({s})" for s, q in sorted(self.terms.items()))
        return f"SqrtSum({body or '0'})"

    @classmethod
    def total(cls, items) -> "SqrtSum":
        acc = cls()
        for x in items:
            acc = acc + x
        return acc
