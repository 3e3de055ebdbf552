import itertools
import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from artifact.asymptotics import (
    EXAMPLE_GENERATORS,
    SequenceReport,
    Sigma1Counterexample,
    asymptotic_coeff,
    classify_sequence,
    convergence_study,
    default_n_grid,
    expansion_residual,
    family_generator,
    loglog_slope,
    normalized_symbol,
    resolve_generator,
    sigma0,
    sigma0_brute,
    sigma1,
    sigma1_brute,
    sigma_sweep,
)
from artifact.exact import DomainError, SqrtRational, TriangleViolation
from artifact.sphere import bracket_terms, product_terms
from artifact.wigner import cg_000, poisson_p

triangles = st.tuples(st.integers(0, 12), st.integers(0, 12), st.integers(0, 24)).filter(
    lambda t: abs(t[0] - t[1]) <= t[2] <= t[0] + t[1])


def test_asymptotic_coeff_example():
    assert asymptotic_coeff(1, 0, 1, 0, 2, 0) == SqrtRational(1, Fraction(4, 9))
    assert asymptotic_coeff(1, 0, 1, 0, 2, 0).radicand == Fraction(2, 3) ** 2


@pytest.mark.parametrize("ls", [ls for ls in itertools.product(range(4), repeat=3)
                                if abs(ls[0] - ls[1]) <= ls[2] <= ls[0] + ls[1]])
def test_parity_split_of_coefficients(ls):
    l1, l2, l3 = ls
    for m1 in range(-l1, l1 + 1):
        for m2 in range(-l2, l2 + 1):
            a0 = asymptotic_coeff(l1, m1, l2, m2, l3, 0)
            a1 = asymptotic_coeff(l1, m1, l2, m2, l3, 1)
            assert not (a0 and a1)
            if sum(ls) % 2:
                assert not a0
            else:
                assert not a1


def test_coefficients_match_classical_tables():
    # order 0 is the pointwise product coefficient, order 1 the bracket one
    for l1, m1, l2, m2 in itertools.product(range(3), range(-2, 3), range(3), range(-2, 3)):
        if abs(m1) > l1 or abs(m2) > l2:
            continue
        prod = dict(product_terms(l1, m1, l2, m2))
        br = dict(bracket_terms(l1, m1, l2, m2))
        for l3 in range(abs(l1 - l2), l1 + l2 + 1):
            scale = math.sqrt((2 * l1 + 1) * (2 * l2 + 1) / (2 * l3 + 1))
            a0 = float(asymptotic_coeff(l1, m1, l2, m2, l3, 0))
            a1 = float(asymptotic_coeff(l1, m1, l2, m2, l3, 1))
            assert math.isclose(prod.get(l3, 0.0), scale * a0, abs_tol=1e-13)
            assert math.isclose(abs(br.get(l3, 0.0)), abs(scale * a1), abs_tol=1e-13)


def test_order_errors():
    with pytest.raises(DomainError):
        asymptotic_coeff(1, 0, 1, 0, 1, 2)
    with pytest.raises(DomainError):
        normalized_symbol(3, 0, 1, 0, 2, 2)


def test_residual_examples():
    r50, r100 = expansion_residual(1, 0, 1, 0, 2, 50), expansion_residual(1, 0, 1, 0, 2, 100)
    assert 4 * 0.85 <= r50 / r100 <= 4 * 1.15
    ns = [20, 40, 80, 120, 200]
    assert -2.1 <= loglog_slope(ns, [expansion_residual(2, 1, 1, -1, 2, n) for n in ns]) <= -1.9
    for n in (5, 30):
        assert expansion_residual(0, 0, 2, 1, 2, n) == 0.0


def test_loglog_slope_basic():
    ns = np.array([10, 20, 40])
    assert math.isclose(loglog_slope(ns, 3 * ns ** -2.0), -2.0)
    assert math.isnan(loglog_slope(ns, [0, 0, 1]))


@pytest.mark.parametrize("ls, s0, s1", [((1, 1, 2), 1, 2), ((1, 1, 1), 0, 1)])
def test_sigma_examples(ls, s0, s1):
    assert sigma0(*ls) == s0 == sigma0_brute(*ls)
    assert sigma1(*ls) == s1 == sigma1_brute(*ls)


@given(triangles)
def test_sigma_closed_equals_brute(t):
    assert sigma0(*t) == sigma0_brute(*t)
    assert sigma1(*t) == sigma1_brute(*t)
    L = sum(t)
    if L % 2:
        assert sigma0(*t) == 0
    else:
        assert sigma1(*t) == Fraction(L, 2) * sigma0(*t)


def test_sigma_triangle_violation():
    with pytest.raises(TriangleViolation):
        sigma0(1, 1, 3)


def test_sigma_sweep_small():
    assert sigma_sweep(30) == sum(1 for L in range(31) for t in itertools.combinations_with_replacement(range(L + 1), 3)
                                  if sum(t) == L and t[0] + t[1] >= t[2])


def test_sigma_sweep_fails_loudly(monkeypatch):
    import artifact.asymptotics as asym
    monkeypatch.setattr(asym, "sigma1", lambda a, b, c: asym.sigma1_brute(a, b, c) + (1 if (a, b, c) == (1, 2, 2) else 0))
    with pytest.raises(Sigma1Counterexample):
        asym.sigma_sweep(6)


def test_generators():
    assert family_generator("berezin")(2, 1) == pytest.approx(math.sqrt(0.5))
    assert resolve_generator("ex1")(10, 2) == pytest.approx(0.01)
    assert EXAMPLE_GENERATORS["quasinotP"](9, 4) == -1.0
    with pytest.raises(DomainError):
        resolve_generator("nope")
    grid = default_n_grid(400)
    assert grid[0] == 8 and grid[-1] == 400 and grid == sorted(set(grid))


@pytest.mark.parametrize("name, expect", [
    ("stratonovich", dict(poisson=True, pure=True, strong_limiting=True, bohr=True, pure_bohr=True)),
    ("stratonovich-alt", dict(anti_poisson=True, poisson=False, pure=True, pure_bohr=True)),
    ("berezin", dict(poisson=True, pure=False, strong_limiting=False, quasi_classical=True, bohr=False)),
    ("toeplitz", dict(poisson=True, pure=False, strong_limiting=False)),
    ("ex1", dict(limiting=True, strong_limiting=True, pseudo_classical=False, poisson=False)),
    ("ex3", dict(quasi_classical=True, poisson=True, strong_limiting=False)),
    ("quasinotP", dict(quasi_classical=True, pseudo_classical=True, poisson=False, anti_poisson=False)),
])
def test_classification(name, expect):
    rep = classify_sequence(resolve_generator(name), l_max=6)
    for k, v in expect.items():
        assert rep.flags[k] is v, (name, k, rep.flags)
    # structural invariants of the report
    assert not rep.flags["pure"] or rep.flags["poisson"] or rep.flags["anti_poisson"]
    assert rep.flags["bohr"] == ((rep.flags["poisson"] or rep.flags["anti_poisson"]) and rep.flags["strong_limiting"])


def test_report_json():
    rep = classify_sequence(resolve_generator("berezin"), l_max=3)
    d = json.loads(json.dumps(rep.to_json()))
    assert d["schema"] == "artifact.sequence-report/1"
    assert set(d["limits"]) == {"1", "2", "3"}
    assert isinstance(rep, SequenceReport)


def test_classify_errors():
    with pytest.raises(DomainError):
        classify_sequence(resolve_generator("berezin"), l_max=0)
    with pytest.raises(DomainError):
        classify_sequence(resolve_generator("berezin"), n_grid=[10, 20, 30])


NS = [25, 50, 100, 200]


def test_convergence_stratonovich():
    rows = convergence_study(resolve_generator("stratonovich"), 1, 1, 1, -1, NS, samples=2000)
    sym = [r["sym_err"] for r in rows]
    comm = [r["comm_err"] for r in rows]
    assert loglog_slope(NS, sym) <= -1.9
    assert loglog_slope(NS, comm) <= -0.9


def test_convergence_berezin():
    # with a linear factor the Berezin commutator is exact, so use two quadratics
    rows = convergence_study(resolve_generator("berezin"), 2, 0, 2, 1, NS, samples=2000)
    assert abs(loglog_slope(NS, [r["sym_err"] for r in rows]) + 1) < 0.1
    assert abs(loglog_slope(NS, [r["comm_err"] for r in rows]) + 1) < 0.1


def test_convergence_quasinotP_does_not_converge():
    rows = convergence_study(resolve_generator("quasinotP"), 1, 1, 1, -1, NS, samples=500)
    assert min(r["comm_err"] for r in rows) > 1.0


def test_convergence_errors():
    with pytest.raises(DomainError):
        convergence_study(resolve_generator("berezin"), 3, 0, 1, 0, [2, 4])
