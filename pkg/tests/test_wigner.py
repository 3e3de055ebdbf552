import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st
from sympy.physics import wigner as sw

from artifact.exact import DomainError, SqrtRational
from artifact.wigner import (
    cg_000,
    clebsch_gordan,
    poisson_p,
    product_coefficient,
    product_symbol,
    wigner_3jm,
    wigner_6j_jjj,
)


def same(ours: SqrtRational, ref) -> bool:
    """Exact comparison against a sympy value of the form rational*sqrt(rational)."""
    ref = sympy.nsimplify(ref)
    sq = sympy.Rational(ref ** 2)
    sign = int(sympy.sign(ref))
    return ours.sign == sign and ours.radicand == Fraction(int(sq.p), int(sq.q))


def half(k):
    return sympy.Rational(k, 2)


@st.composite
def jm_triples(draw, jmax=8):
    j1 = draw(st.integers(0, jmax))
    j2 = draw(st.integers(0, jmax))
    j3 = draw(st.integers(0, jmax).filter(lambda j: (j + j1 + j2) % 2 == 0))
    m1 = draw(st.sampled_from(range(-j1, j1 + 1, 2)))
    m2 = draw(st.sampled_from(range(-j2, j2 + 1, 2)))
    m3 = draw(st.sampled_from(range(-j3, j3 + 1, 2)))
    return j1, m1, j2, m2, j3, m3


# -- Clebsch-Gordan -------------------------------------------------------

@pytest.mark.parametrize("args, want", [
    ((2, 0, 2, 0, 2, 0), SqrtRational.zero()),
    ((2, 0, 2, 0, 0, 0), SqrtRational(-1, Fraction(1, 3))),
    ((2, 2, 2, -2, 2, 0), SqrtRational(1, Fraction(1, 2))),
    ((3, 3, 4, 4, 7, 7), SqrtRational.one()),
])
def test_cg_examples(args, want):
    assert clebsch_gordan(*args) == want


@given(jm_triples())
def test_cg_matches_sympy(t):
    j1, m1, j2, m2, j3, m3 = t
    ours = clebsch_gordan(j1, m1, j2, m2, j3, m1 + m2) if abs(m1 + m2) <= j3 else None
    if ours is None:
        return
    ref = sw.clebsch_gordan(half(j1), half(j2), half(j3), half(m1), half(m2), half(m1 + m2))
    assert same(ours, ref)


@pytest.mark.parametrize("j1, j2", [(1, 1), (2, 3), (4, 4), (5, 2)])
def test_cg_phase_convention(j1, j2):
    for j in range(abs(j1 - j2), j1 + j2 + 1, 2):
        assert clebsch_gordan(j1, j1, j2, j - j1, j, j).sign == 1


def test_cg_zero_when_m_does_not_add_up():
    assert clebsch_gordan(2, 2, 2, 0, 2, 0) == SqrtRational.zero()


@pytest.mark.parametrize("args", [(2, 4, 2, 0, 2, 2), (2, 1, 2, 0, 2, 1)])
def test_cg_rejects_bad_m(args):
    with pytest.raises(DomainError):
        clebsch_gordan(*args)


# -- 3jm and 6j -----------------------------------------------------------

@given(jm_triples())
def test_3jm_matches_sympy(t):
    j1, m1, j2, m2, j3, m3 = t
    ref = sw.wigner_3j(half(j1), half(j2), half(j3), half(m1), half(m2), half(m3))
    assert same(wigner_3jm(*t), ref)


def test_3jm_examples():
    assert wigner_3jm(2, 0, 2, 0, 0, 0) == SqrtRational(-1, Fraction(1, 3))
    assert wigner_3jm(2, 2, 2, 0, 2, 0) == SqrtRational.zero()


@pytest.mark.parametrize("n", range(0, 9))
def test_6j_with_zero_column(n):
    for l in range(n + 1):
        want = SqrtRational((-1) ** (n + l), Fraction(1, (n + 1) * (2 * l + 1)))
        assert wigner_6j_jjj(0, l, l, n) == want


@pytest.mark.parametrize("n", [1, 2, 3, 4, 6])
def test_6j_matches_sympy(n):
    for l1, l2, l3 in itertools.product(range(n + 1), repeat=3):
        ref = sw.wigner_6j(l1, l2, l3, half(n), half(n), half(n))
        assert same(wigner_6j_jjj(l1, l2, l3, n), ref), (l1, l2, l3, n)


def test_6j_permutation_invariant():
    vals = {wigner_6j_jjj(*p, 5) for p in itertools.permutations((1, 2, 3))}
    assert len(vals) == 1


def test_6j_zero_outside_triangle_and_errors():
    assert wigner_6j_jjj(1, 1, 3, 4) == SqrtRational.zero()
    with pytest.raises(DomainError):
        wigner_6j_jjj(5, 1, 4, 2)


# -- product symbol ---------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 5])
def test_identity_column(n):
    for l in range(n + 1):
        for m in range(-l, l + 1):
            v = product_symbol(0, 0, l, m, l, -m, n)
            sign = -1 if (n + m) % 2 else 1
            assert v * sign == SqrtRational(1, Fraction(1, n + 1))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_product_symbol_symmetries(n):
    for l1, l2, l3 in itertools.product(range(n + 1), repeat=3):
        for m1, m2 in itertools.product(range(-l1, l1 + 1), range(-l2, l2 + 1)):
            m3 = -m1 - m2
            if abs(m3) > l3:
                continue
            v = product_symbol(l1, m1, l2, m2, l3, m3, n)
            assert v == product_symbol(l2, m2, l3, m3, l1, m1, n)
            sgn = -1 if (l1 + l2 + l3) % 2 else 1
            assert v * sgn == product_symbol(l1, -m1, l2, -m2, l3, -m3, n)


def test_product_coefficient_identity_factor():
    for n in (1, 3):
        c = product_coefficient(0, 0, 1, 1, 1, n)
        assert c == SqrtRational(1, Fraction(1, n + 1))


# -- C000 and P -------------------------------------------------------------

@pytest.mark.parametrize("ls, want", [((1, 1, 0), SqrtRational(-1, Fraction(1, 3))),
                                     ((1, 1, 2), SqrtRational(1, Fraction(2, 3))),
                                     ((1, 1, 1), SqrtRational.zero())])
def test_cg000_examples(ls, want):
    assert cg_000(*ls) == want


@pytest.mark.parametrize("ls", [ls for ls in itertools.product(range(6), repeat=3)])
def test_cg000_matches_general_cg(ls):
    l1, l2, l3 = ls
    assert cg_000(*ls) == clebsch_gordan(2 * l1, 0, 2 * l2, 0, 2 * l3, 0)


@pytest.mark.parametrize("ls, want", [((1, 1, 1), SqrtRational(-1, Fraction(2))),
                                     ((1, 1, 2), SqrtRational.zero())])
def test_poisson_p_examples(ls, want):
    assert poisson_p(*ls) == want
