import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from artifact.exact import DomainError, SqrtRational, factorial
from artifact.su2_basis import (
    CoupledCoefficients,
    basis_tensor,
    coupled_basis,
    coupled_basis_closed,
    coupled_basis_dense,
    decompose,
    j3_matrix,
    jminus_matrix,
    jplus_matrix,
    lm_index,
    lm_pairs,
    mu_norm,
    product_in_coupled_basis,
    reconstruct,
    unnormalized_e,
    verify_parity,
)


def test_j3_small():
    assert np.allclose(j3_matrix(1), np.diag([0.5, -0.5]))
    assert np.allclose(j3_matrix(2), np.diag([1, 0, -1]))


@pytest.mark.parametrize("n", range(1, 9))
def test_j_operators(n):
    jp, jm, j3 = jplus_matrix(n), jminus_matrix(n), j3_matrix(n)
    assert np.trace(j3) == 0
    assert np.allclose(jp, jm.T)
    assert np.allclose(jp @ jm - jm @ jp, 2 * j3)
    j = n / 2
    casimir = j3 @ j3 + (jp @ jm + jm @ jp) / 2
    assert np.allclose(casimir, j * (j + 1) * np.eye(n + 1))


def test_jminus_entries():
    assert np.allclose(np.diag(jminus_matrix(1), -1), [1])
    assert np.allclose(np.diag(jminus_matrix(2), -1), [math.sqrt(2), math.sqrt(2)])


@pytest.mark.parametrize("n", range(1, 8))
def test_basis_orthonormal(n):
    B = basis_tensor(n).reshape((n + 1) ** 2, -1)
    assert np.allclose(B @ B.T, np.eye((n + 1) ** 2), atol=1e-13)


@pytest.mark.parametrize("n", range(1, 8))
def test_exact_basis_matches_closed_formula(n):
    for l, m in lm_pairs(n):
        assert np.allclose(coupled_basis_dense(n, l, m), coupled_basis_closed(n, l, m), atol=1e-12)


@pytest.mark.parametrize("n", range(1, 7))
def test_transpose_rule(n):
    for l, m in lm_pairs(n):
        assert np.array_equal(coupled_basis_dense(n, l, -m), (-1) ** m * coupled_basis_dense(n, l, m).T)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 8])
def test_mu_norm(n):
    assert mu_norm(n, 0, 0) == SqrtRational(1, Fraction(n + 1))
    assert mu_norm(n, n, n) == SqrtRational.from_rational(factorial(n))
    for l in range(n + 1):
        jp_l = np.linalg.matrix_power(jplus_matrix(n), l)
        assert math.isclose(np.linalg.norm(jp_l), float(mu_norm(n, l, l)), rel_tol=1e-12)
        for m in range(l + 1):
            assert math.isclose(np.linalg.norm(unnormalized_e(n, l, m)), float(mu_norm(n, l, m)), rel_tol=1e-12)


@pytest.mark.parametrize("n", [2, 4, 6])
def test_unnormalized_e_relations(n):
    jp = jplus_matrix(n)
    assert np.array_equal(unnormalized_e(n, 0, 0), np.eye(n + 1))
    for l in range(1, n + 1):
        assert np.allclose(unnormalized_e(n, l, l), np.linalg.matrix_power(jp, l))
        for m in range(-l, l):
            lhs = jp @ unnormalized_e(n, l, m) - unnormalized_e(n, l, m) @ jp
            alpha_sq = (l - m) * (l + m + 1)
            assert np.allclose(lhs, alpha_sq * unnormalized_e(n, l, m + 1))


def test_decompose_examples():
    n = 3
    a = decompose(np.eye(n + 1)).a
    want = np.zeros((n + 1) ** 2)
    want[0] = math.sqrt(n + 1)
    assert np.allclose(a, want)
    a = decompose(coupled_basis_dense(2, 2, 1)).a
    assert np.allclose(a, np.eye(9)[lm_index(2, 1)])


@given(st.integers(1, 6), st.integers(0, 2 ** 31))
def test_decompose_reconstruct_roundtrip(n, seed):
    rng = np.random.default_rng(seed)
    P = rng.normal(size=(n + 1, n + 1)) + 1j * rng.normal(size=(n + 1, n + 1))
    assert np.allclose(reconstruct(decompose(P)), P)


@given(st.integers(1, 6), st.integers(0, 2 ** 31))
def test_hermitian_reality_structure(n, seed):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(n + 1, n + 1)) + 1j * rng.normal(size=(n + 1, n + 1))
    c = decompose(A + A.conj().T)
    for l, m in lm_pairs(n):
        assert abs(c.get(l, -m) - (-1) ** m * np.conj(c.get(l, m))) < 1e-12


def test_identity_factor_product():
    for n in (1, 4):
        for l, m in lm_pairs(n):
            c = product_in_coupled_basis(n, 0, 0, l, m)
            want = np.zeros((n + 1) ** 2)
            want[lm_index(l, m)] = 1 / math.sqrt(n + 1)
            assert np.allclose(c.a, want)


@pytest.mark.parametrize("n", [2, 5])
@pytest.mark.parametrize("method", ["exact", "dense"])
def test_verify_parity_passes(n, method):
    rep = verify_parity(n, method=method)
    assert rep.passed and rep.checked == (n + 1) ** 4


def test_self_commutator_vanishes():
    A = coupled_basis_dense(3, 1, 0)
    assert np.allclose(A @ A - A @ A, 0)


@pytest.mark.parametrize("args", [(2, 3, 0), (2, 1, 2), (0, 0, 0)])
def test_index_errors(args):
    with pytest.raises(DomainError):
        coupled_basis(*args)


def test_coefficient_length_checked():
    with pytest.raises(DomainError):
        CoupledCoefficients(2, np.zeros(4))


def test_basis_matrix_json():
    d = coupled_basis(2, 2, 0).to_json()
    assert d["diag"] == ["1*sqrt(1/6)", "-1*sqrt(2/3)", "1*sqrt(1/6)"]
