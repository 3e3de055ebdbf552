import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.spatial.transform import Rotation

from artifact.correspondence import FAMILY_NAMES, DegreeTooHigh, berezin_chars, family_chars
from artifact.exact import TriangleViolation
from artifact.sphere import HarmonicVector, build_grid, random_points
from artifact.trikernel import (
    GridTooCoarse,
    associativity_check,
    berezin_closed,
    berezin_stratonovich_transform,
    berezin_transform,
    berezin_transform_integral,
    bonarec_check,
    integral_product,
    integral_product_check,
    inverse_berezin_transform,
    invariant_L,
    marginal_check,
    recursive_trikernel,
    stratonovich_berezin_transform,
    stratonovich_closed,
    trikernel_coeff,
    trikernel_invariant,
    trikernel_trace,
    wildberger_closed,
    wildberger_polar,
)

E3 = np.array([0.0, 0.0, 1.0])


def triples(count, seed):
    v = random_points(3 * count, seed).reshape(count, 3, 3)
    return v[:, 0], v[:, 1], v[:, 2]


def test_stratonovich_half_at_pole():
    chars = family_chars("stratonovich", 1)
    assert math.isclose(trikernel_coeff(chars, E3, E3, E3).real, 10 / (16 * math.pi ** 2), rel_tol=1e-14)


@pytest.mark.parametrize("n", [1, 2])
def test_closed_forms(n):
    a, b, c = triples(50, n)
    assert np.allclose(trikernel_coeff(family_chars("stratonovich", n), a, b, c), stratonovich_closed(n, a, b, c),
                       atol=1e-12)
    assert np.allclose(trikernel_coeff(berezin_chars(n), a, b, c), berezin_closed(n, a, b, c), atol=1e-12)


@pytest.mark.parametrize("fam", FAMILY_NAMES)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_trace_oracle(fam, n):
    chars = family_chars(fam, n)
    for a, b, c in zip(*triples(4, 10 + n)):
        assert abs(trikernel_trace(chars, a, b, c) - trikernel_coeff(chars, a, b, c)) < 1e-13


def test_invariant_L_examples():
    a, b, c = triples(20, 3)
    dot = np.sum(a * b, axis=-1)
    det = np.linalg.det(np.stack([a, b, c], axis=-2))
    assert np.allclose(invariant_L(1, 1, 0, a, b, c), -3 * math.sqrt(3) * dot)
    assert np.allclose(invariant_L(1, 1, 1, a, b, c), 1j * 9 * math.sqrt(1.5) * det)
    assert np.allclose(invariant_L(2, 2, 0, a, b, c), 5 * math.sqrt(5) / 2 * (3 * dot ** 2 - 1))
    with pytest.raises(TriangleViolation):
        invariant_L(1, 1, 3, a, b, c)


@pytest.mark.parametrize("ls", [(1, 1, 1), (2, 1, 2), (2, 2, 3), (3, 1, 2), (3, 3, 2)])
def test_invariant_L_reality_and_covariance(ls):
    a, b, c = triples(20, 4)
    L = invariant_L(*ls, a, b, c)
    if sum(ls) % 2:
        assert np.allclose(L.real, 0, atol=1e-12)
    else:
        assert np.allclose(L.imag, 0, atol=1e-12)
    l1, l2, l3 = ls
    assert np.allclose(L, (-1) ** sum(ls) * invariant_L(l2, l1, l3, b, a, c))


@given(st.sampled_from(FAMILY_NAMES), st.integers(1, 4), st.integers(0, 2 ** 31))
def test_coeff_equals_invariant(fam, n, seed):
    chars = family_chars(fam, n)
    a, b, c = triples(10, seed % 10000)
    assert np.allclose(trikernel_coeff(chars, a, b, c), trikernel_invariant(chars, a, b, c), atol=1e-10)


@pytest.mark.parametrize("fam", ["stratonovich", "berezin", "toeplitz-alt"])
def test_rotation_invariance(fam):
    chars = family_chars(fam, 3)
    a, b, c = triples(10, 6)
    R = Rotation.random(random_state=1).as_matrix()
    assert np.allclose(trikernel_coeff(chars, a @ R.T, b @ R.T, c @ R.T), trikernel_coeff(chars, a, b, c),
                       atol=1e-11)


@pytest.mark.parametrize("fam", ["stratonovich", "berezin", "toeplitz"])
def test_alternate_conjugation_and_transposition(fam):
    n = 3
    chars = family_chars(fam, n)
    a, b, c = triples(10, 7)
    L = trikernel_coeff(chars, a, b, c)
    assert np.allclose(trikernel_coeff(chars.alternate(), a, b, c), np.conj(L), atol=1e-12)
    assert np.allclose(trikernel_coeff(chars, b, a, c), np.conj(L), atol=1e-12)


def test_stratonovich_cyclic_symmetry():
    chars = family_chars("stratonovich", 4)
    a, b, c = triples(10, 8)
    L = trikernel_coeff(chars, a, b, c)
    assert np.allclose(L, trikernel_coeff(chars, b, c, a), atol=1e-12)
    assert np.allclose(recursive_trikernel(chars, a, b, c), L, atol=1e-12)


@pytest.mark.parametrize("n", range(0, 6))
def test_wildberger(n):
    assert math.isclose(abs(wildberger_closed(n, E3, E3, E3)), (n + 1) ** 2 / (16 * math.pi ** 2), rel_tol=1e-14)
    if n == 0:
        return
    a, b, c = triples(20, 20 + n)
    W = wildberger_closed(n, a, b, c)
    assert np.allclose(recursive_trikernel(berezin_chars(n), a, b, c), W, atol=1e-10)
    mod, phase = wildberger_polar(n, a, b, c)
    assert np.allclose(np.abs(W), mod, atol=1e-13)
    assert np.allclose(np.exp(1j * phase), W / np.abs(W), atol=1e-10)
    assert np.allclose(recursive_trikernel(berezin_chars(n), b, c, a), W, atol=1e-10)


@pytest.mark.parametrize("n", [1, 3, 6])
def test_transforms(n):
    rng = np.random.default_rng(n)
    f = HarmonicVector.random(n, rng)
    one = HarmonicVector.constant(1.0, n)
    assert berezin_transform(one).distance(one) < 1e-15
    assert inverse_berezin_transform(berezin_transform(f)).distance(f) < 1e-12 * f.norm()
    assert berezin_stratonovich_transform(stratonovich_berezin_transform(f)).distance(f) < 1e-12 * f.norm()
    sb2 = stratonovich_berezin_transform(stratonovich_berezin_transform(f))
    assert sb2.distance(berezin_transform(f)) < 1e-14 * f.norm()
    with pytest.raises(DegreeTooHigh):
        berezin_transform(HarmonicVector.basis(n + 1, 0), n)


def test_berezin_transform_integral_constant():
    n = 5
    val = berezin_transform_integral(HarmonicVector.constant(1.0, 0), n, random_points(3, 0))
    assert np.allclose(val, 1.0)


def test_integral_product_example():
    chars = family_chars("stratonovich", 2)
    f, g = HarmonicVector.basis(1, 1, 2), HarmonicVector.basis(1, -1, 2)
    assert integral_product_check(f, g, chars) <= 1e-8


def test_grid_too_coarse():
    chars = family_chars("stratonovich", 3)
    f = HarmonicVector.basis(1, 0, 3)
    with pytest.raises(GridTooCoarse):
        integral_product(f, f, chars, E3, grid=build_grid(2))


@pytest.mark.parametrize("fam", ["stratonovich", "berezin", "toeplitz-alt"])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_marginal(fam, n):
    chars = family_chars(fam, n)
    for p2, p in zip(*triples(3, n)[:2]):
        assert marginal_check(chars, p2, p) < 1e-12


@pytest.mark.parametrize("fam", ["stratonovich", "berezin"])
def test_associativity_identity(fam):
    chars = family_chars(fam, 1)
    pts = random_points(4, 11)
    assert associativity_check(chars, *pts) < 1e-12


@pytest.mark.parametrize("fam", ["stratonovich", "berezin", "toeplitz"])
@pytest.mark.parametrize("n", [1, 2])
def test_bonarec(fam, n):
    chars = family_chars(fam, n)
    pts = random_points(3, 30 + n)
    assert bonarec_check(chars, *pts) < 1e-10
