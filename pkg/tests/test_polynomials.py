import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from monobasis.errors import DomainError, PreconditionError
from monobasis.multiindex import MultiIndex, iter_monomials
from monobasis.polynomials import (
    HomogeneousPolynomial,
    SupMode,
    TaylorTruncation,
    basis_constant_estimate,
    estimate_p0,
    evaluate,
    exp_functional_taylor,
    length_graded_monotonicity_check,
    make_cloud,
    monomial_sup_block,
    monomial_sup_lorentz,
    monomial_values,
    p0_ratio_exact,
    partial_sum,
    poly_sup_estimate,
    random_length_graded,
    seminorm_p_lambda,
    seminorm_parts,
    tail_seminorms,
)
from monobasis.sequence_spaces import (
    BlockSpec,
    LorentzSpec,
    LorentzWeights,
    Point,
    in_compact_set,
    sample_cloud,
)
from oracles import block_monomial_sup_oracle, lorentz_monomial_sup_oracle

M = MultiIndex.of
BLOCK = BlockSpec((1.0, 0.8, 0.5), 2.0)
LORENTZ = LorentzSpec((1.0, 0.6, 0.4), LorentzWeights.harmonic(3))


def poly(n, k, seed):
    rng = np.random.default_rng(seed)
    ms = list(iter_monomials(n, k))
    return HomogeneousPolynomial(n, zip(ms, rng.standard_normal(len(ms)) + 1j * rng.standard_normal(len(ms))))


def rand_point(rng, d=3, scale=1.0):
    return Point.from_dense(scale * (rng.standard_normal(d) + 1j * rng.standard_normal(d)))


# -- the polynomial type ------------------------------------------------------

def test_construction_normalizes():
    P = HomogeneousPolynomial(2, [(M(0, 2), 1.0), (M(2), 2.0), (M(1, 1), 0.0), (M(2), -1.0)])
    assert P.monomials() == [M(2), M(0, 2)]
    assert P.coefficients() == {M(2): 1.0, M(0, 2): 1.0}
    with pytest.raises(DomainError):
        HomogeneousPolynomial(2, {M(1): 1.0})
    with pytest.raises(ValueError):
        HomogeneousPolynomial(1, {M(1): float("nan")})


def test_eval_examples():
    assert evaluate(HomogeneousPolynomial.monomial(M(1, 1)), Point({1: 2, 2: 3})) == 6
    assert evaluate(HomogeneousPolynomial(3), Point({1: 5})) == 0
    assert evaluate(HomogeneousPolynomial.monomial(M(), 2.5), Point()) == 2.5


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=50)
def test_binomial_expansion(seed):
    rng = np.random.default_rng(seed)
    z = rand_point(rng, 2)
    P = HomogeneousPolynomial(2, {M(2): 1, M(1, 1): 2, M(0, 2): 1})
    assert evaluate(P, z) == pytest.approx((z[1] + z[2]) ** 2, rel=1e-12, abs=1e-12)


@given(st.integers(0, 4), st.integers(0, 2**32 - 1))
@settings(max_examples=50)
def test_linearity_and_homogeneity(n, seed):
    rng = np.random.default_rng(seed)
    P, Q = poly(n, 3, seed), poly(n, 3, seed + 1)
    z = rand_point(rng, 3, 0.5)
    a, b = complex(*rng.standard_normal(2)), complex(*rng.standard_normal(2))
    rhs = a * P.evaluate(z) + b * Q.evaluate(z)
    assert abs((a * P + b * Q).evaluate(z) - rhs) <= 1e-12 * max(1, abs(rhs))
    c = complex(*rng.standard_normal(2))
    expect = c**n * P.evaluate(z)
    assert abs(P.evaluate(c * z) - expect) <= 1e-10 * max(1, abs(expect))


def test_vectorized_evaluation_agrees():
    P = poly(3, 4, 0)
    Z = sample_cloud(BLOCK, 50, 1)
    assert np.allclose(P.evaluate_many(Z), [P.evaluate(Point.from_dense(r)) for r in Z], rtol=1e-12, atol=1e-14)
    # coordinates beyond the array count as zero
    assert (monomial_values([M(0, 0, 0, 0, 0, 0, 0, 1)], Z) == 0).all()


def test_json_roundtrip():
    P = poly(2, 3, 5)
    assert HomogeneousPolynomial.from_json(P.to_json()) == P
    assert HomogeneousPolynomial.from_json([], degree=4) == HomogeneousPolynomial(4)


def test_taylor_truncation_slots():
    with pytest.raises(DomainError):
        TaylorTruncation((HomogeneousPolynomial(1, {M(1): 1}),))
    f = exp_functional_taylor([0.5], 3)
    assert (f - f).n_terms == 0


# -- sup norms ----------------------------------------------------------------

def test_block_sup_examples():
    assert monomial_sup_block(M(2), BlockSpec((1.0,), 1.5)).value == 1
    assert monomial_sup_block(M(0, 1, 1), BlockSpec((1.0, 1.0), 2.0)).value == pytest.approx(0.5)
    assert monomial_sup_block(M(0, 0, 0, 1), BlockSpec((1.0, 1.0), 2.0)).value == 0
    a = monomial_sup_block(M(2), BLOCK).value
    b = monomial_sup_block(M(0, 1, 2), BLOCK).value
    assert monomial_sup_block(M(2, 1, 2), BLOCK).value == pytest.approx(a * b, rel=1e-14)


@pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 3.0])
def test_block_sup_against_grid_and_witness(p):
    spec = BlockSpec((1.0, 0.8, 0.5), p)
    for m in iter_monomials(3, 5):
        est = monomial_sup_block(m, spec)
        assert est.mode is SupMode.EXACT
        assert est.value == pytest.approx(block_monomial_sup_oracle(m, spec.lam, p), rel=1e-6)
        assert in_compact_set(est.witness, spec)
        w = abs(HomogeneousPolynomial.monomial(m).evaluate(est.witness))
        assert w == pytest.approx(est.value, rel=1e-10)


def test_lorentz_sup_examples():
    spec = LorentzSpec((1.0, 1.0, 1.0), LorentzWeights.harmonic(3))
    assert monomial_sup_lorentz(M(1), spec).value == pytest.approx(1.0, rel=1e-12)
    zero = LorentzSpec((0.0, 0.0), LorentzWeights.harmonic(2))
    assert monomial_sup_lorentz(M(1, 1), zero).value == 0
    assert monomial_sup_lorentz(M(0, 0, 0, 1), spec).value == 0


@pytest.mark.parametrize("spec", [LORENTZ, LorentzSpec((1.0, 0.9, 0.9, 0.5), LorentzWeights((1, 0.8, 0.5, 0.5)))])
def test_lorentz_sup_against_grid(spec):
    for n in range(1, 4):
        for m in iter_monomials(n, 3):
            est = monomial_sup_lorentz(m, spec)
            assert in_compact_set(est.witness, spec)
            assert abs(HomogeneousPolynomial.monomial(m).evaluate(est.witness)) == pytest.approx(est.value, rel=1e-10)
            assert est.value == pytest.approx(lorentz_monomial_sup_oracle(m, spec.caps), rel=1e-4)


@pytest.mark.parametrize("m", [M(1, 1, 1), M(2, 0, 1, 1), M(0, 3), M(1, 0, 0, 2), M(0, 0, 0, 1, 1, 1)])
def test_sampled_sup_close_to_closed_form(m):
    exact = monomial_sup_block(m, BLOCK).value
    est = poly_sup_estimate(HomogeneousPolynomial.monomial(m), BLOCK, 100_000, seed=3)
    assert est.mode is SupMode.SAMPLED
    assert exact * (1 - 1e-3) <= est.value <= exact * (1 + 1e-12)
    assert in_compact_set(est.witness, BLOCK)


def test_sampled_sup_zero_polynomial_and_nesting():
    assert poly_sup_estimate(HomogeneousPolynomial(2), BLOCK, 100, seed=0).value == 0
    P = poly(2, 4, 1)
    vals = [poly_sup_estimate(P, BLOCK, b, seed=11).value for b in (10, 100, 1000)]
    assert vals == sorted(vals)
    with pytest.raises(DomainError):
        poly_sup_estimate(P, BLOCK, 0)


# -- seminorms and test functions -----------------------------------------------

def test_exp_taylor_examples():
    assert exp_functional_taylor([0.3, 0.2], 0).terms() == [(M(), 1)]
    f = exp_functional_taylor([0.3, 0.7j], 2)
    assert f.parts[2].coefficients()[M(1, 1)] == pytest.approx(0.3 * 0.7j)
    g = exp_functional_taylor([2.0], 5)
    assert g.parts[5].coefficients() == {M(5): pytest.approx(2.0**5 / 120)}


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=20, deadline=None)
def test_exp_taylor_converges(seed):
    rng = np.random.default_rng(seed)
    phi = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    phi /= np.abs(phi).sum()
    z = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    z *= 2 / np.abs(z).max()
    f = exp_functional_taylor(phi.tolist(), 20)
    exact = np.exp(phi @ z)
    assert abs(f.evaluate(Point.from_dense(z)) - exact) < 1e-8 * abs(exact)


def test_seminorm_is_sum_of_parts():
    f = exp_functional_taylor([0.5, 0.25j], 5)
    Z = make_cloud(BLOCK, 500, 2)
    assert seminorm_p_lambda(f, BLOCK, 500, cloud=Z) == math.fsum(seminorm_parts(f, Z))
    single = TaylorTruncation((HomogeneousPolynomial(0), HomogeneousPolynomial(1), poly(2, 3, 4)))
    assert seminorm_p_lambda(single, BLOCK, 500, cloud=Z) == poly_sup_estimate(single.parts[2], BLOCK, 500, cloud=Z).value


def test_seminorm_single_coordinate_closed_form():
    # one coordinate, |z_1| <= 1: sup |phi^n z^n / n!| = |phi|^n / n!
    spec = BlockSpec((1.0,), 1.0)
    phi = 0.8
    f = exp_functional_taylor([phi], 10)
    exact = math.fsum(phi**n / math.factorial(n) for n in range(11))
    got = seminorm_p_lambda(f, spec, 10_000, seed=0)
    assert got <= exact * (1 + 1e-12)
    assert got == pytest.approx(exact, rel=1e-9)


def test_partial_sums():
    f = exp_functional_taylor([0.5, 0.3], 4)
    assert partial_sum(f, 0).n_terms == 0
    assert partial_sum(f, 10**6) == f
    kept = partial_sum(f, 4).terms()
    assert [m for m, _ in kept] == [M(), M(1), M(0, 1), M(2)]
    with pytest.raises(DomainError):
        partial_sum(f, -1)


def test_tail_seminorms_match_direct_computation():
    f = exp_functional_taylor([0.5, 0.3, 0.2], 5)
    Z = np.abs(make_cloud(BLOCK, 300, 1))
    tails = tail_seminorms(f, Z)
    assert len(tails) == f.n_terms + 1 and tails[-1] == 0
    assert np.all(np.diff(tails) <= 0)
    for N in (0, 3, 10, 40):
        direct = seminorm_p_lambda(f - partial_sum(f, N), BLOCK, 0, cloud=Z)
        assert tails[N] == pytest.approx(direct, rel=1e-12, abs=1e-15)


# -- length-graded monotonicity -------------------------------------------------

def test_monotonicity_random_three_strata():
    rng = np.random.default_rng(0)
    Q = random_length_graded(3, 3, rng)
    Z = make_cloud(BLOCK, 10_000, 0, [1, 2, 3])
    rep = length_graded_monotonicity_check(Q, BLOCK, Z)
    assert rep.holds and rep.sups[0] <= rep.sups[2]


def test_monotonicity_degree_one_and_zero():
    Z = make_cloud(LORENTZ, 500, 0, [1, 2, 3])
    Q = random_length_graded(1, 3, np.random.default_rng(1))
    assert length_graded_monotonicity_check(Q, LORENTZ, Z).holds
    zero = [HomogeneousPolynomial(2) for _ in range(3)]
    rep = length_graded_monotonicity_check(zero, LORENTZ, Z)
    assert rep.holds and rep.sups == (0.0, 0.0, 0.0)


def test_monotonicity_preconditions():
    Q = random_length_graded(2, 3, np.random.default_rng(2))
    with pytest.raises(PreconditionError):
        length_graded_monotonicity_check(Q, BLOCK, sample_cloud(BLOCK, 100, 0))
    with pytest.raises(PreconditionError):
        length_graded_monotonicity_check([Q[1], Q[0]], BLOCK, make_cloud(BLOCK, 10, 0, [1, 2]))


# -- basis constants and p0 -----------------------------------------------------

@pytest.mark.parametrize("spec", [BLOCK, LORENTZ, BlockSpec((1.0, 1.0, 1.0, 1.0), 2.0)])
def test_c1_is_one(spec):
    rep = basis_constant_estimate(1, 4, spec, 10, seed=5, budget=500)
    assert 1.0 <= rep.c_hat <= 1 + 1e-10


def test_basis_constant_report():
    rep = basis_constant_estimate(3, 3, BLOCK, 5, seed=2, budget=300)
    assert rep.c_hat >= 1
    s_, t = rep.worst_cut
    assert 0 < s_ < t == len(list(iter_monomials(3, 3)))
    assert rep.envelope == 1 + 2 * rep.p0_estimate
    assert rep.c_root == pytest.approx(rep.c_hat ** (1 / 3))
    again = basis_constant_estimate(3, 3, BLOCK, 5, seed=2, budget=300)
    assert again == rep
    with pytest.raises(DomainError):
        basis_constant_estimate(0, 3, BLOCK, 1, seed=0)


def test_single_monomial_basis():
    rep = basis_constant_estimate(2, 1, BLOCK, 3, seed=0, budget=50)
    assert rep.c_hat == 1 and rep.worst_cut == (0, 1)


def test_p0_closed_form_cases():
    spec = BlockSpec((1.0, 1.0, 1.0), 1.5)
    # z_1^2 lives in block 1, e*_4 in block 3
    assert p0_ratio_exact(M(2), 3, spec) == pytest.approx(1.0, rel=1e-14)
    # e*_1^n against e*_2 in blocks 1 and 2
    for n in range(1, 5):
        assert p0_ratio_exact(M(n), 1, spec) == pytest.approx(1.0, rel=1e-14)


@pytest.mark.parametrize("spec", [BLOCK, LORENTZ])
def test_p0_at_least_one(spec):
    for n in range(0, 3):
        est = estimate_p0(spec, n, 2, 5, seed=1, budget=300)
        assert est.value >= 1 - 1e-9
        assert est.trials == 5


def test_p0_degenerate_trials_are_counted():
    # coordinate k+1 = 4 vanishes on the first two blocks
    est = estimate_p0(BlockSpec((1.0, 1.0), 2.0), 1, 3, 4, seed=0, budget=50)
    assert est.skipped == 4 and est.value == 1.0
