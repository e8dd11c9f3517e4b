"""Self-checks of the library's invariants, run by ``monobasis invariants``.

Each suite returns an :class:`InvariantResult` holding a pass flag and the
worst residual seen (0 for exact checks that passed).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .multiindex import (
    MultiIndex,
    compatible_rank,
    count_monomials,
    enumerate_monomials,
    global_key,
    iter_monomials,
    rank,
    recursive_extend,
    square_cmp,
    stratum,
)
from .polynomials import (
    HomogeneousPolynomial,
    basis_constant_estimate,
    exp_functional_taylor,
    length_graded_monotonicity_check,
    make_cloud,
    monomial_sup_block,
    random_length_graded,
    seminorm_p_lambda,
    seminorm_parts,
    tail_seminorms,
)
from .sequence_spaces import (
    BlockSpec,
    LorentzSpec,
    LorentzWeights,
    Point,
    block_interval,
    block_of_index,
    block_space_norm,
    constraint_values,
    epsilon_net,
    lorentz_norm,
    lorentz_predual_norm,
    predual_ratios,
    sample_cloud,
)


@dataclass(frozen=True)
class InvariantResult:
    name: str
    passed: bool
    residual: float


def _random_point(rng: np.random.Generator, support: int) -> Point:
    idx = rng.choice(np.arange(1, 3 * support + 1), size=support, replace=False)
    vals = rng.standard_normal(support) + 1j * rng.standard_normal(support)
    return Point(zip(idx.tolist(), vals.tolist()))


def _specs() -> list:
    return [
        BlockSpec((1.0, 0.5, 0.25), 2.0),
        BlockSpec((0.8, 0.8, 0.4), 1.0),
        LorentzSpec((1.0, 0.6, 0.4, 0.3), LorentzWeights.harmonic(4)),
    ]


def _slack(Z: np.ndarray, spec) -> np.ndarray:
    return constraint_values(Z, spec) - np.array(spec.lam)


def _excess(Z: np.ndarray, spec) -> float:
    return float(max(0.0, _slack(Z, spec).max(initial=0.0)))


def partition(rng, budget, trials, perturb):
    bad = 0
    for i in range(1, 100 * 101 // 2 + 1):
        n = block_of_index(i)
        bad += i not in block_interval(n)
    bad += sum(len(block_interval(n)) != n for n in range(1, 101))
    return bad == 0, float(bad)


def norm_axioms(rng, budget, trials, perturb):
    worst = 0.0
    w = LorentzWeights.harmonic(60)
    norms = [lambda z: block_space_norm(z, 1.5), lambda z: lorentz_norm(z, w), lambda z: lorentz_predual_norm(z, w)]
    for _ in range(trials):
        x, y = _random_point(rng, 20), _random_point(rng, 20)
        c = complex(rng.standard_normal(), rng.standard_normal())
        for nrm in norms:
            nx = nrm(x)
            worst = max(worst, abs(nrm(x * c) - abs(c) * nx) / max(nx, 1.0))
            worst = max(worst, nrm(x + y) - nx - nrm(y))
    return worst <= 1e-12, worst


def rearrangement_invariance(rng, budget, trials, perturb):
    worst = 0.0
    w = LorentzWeights.harmonic(20)
    for _ in range(trials):
        z = _random_point(rng, 6)
        perm = rng.permutation(20) + 1
        phases = np.exp(2j * np.pi * rng.random(6))
        y = Point({int(perm[i - 1]): v * ph for (i, v), ph in zip(z.items(), phases)})
        for nrm in (lorentz_norm, lorentz_predual_norm):
            worst = max(worst, abs(nrm(z, w) - nrm(y, w)))
    return worst <= 1e-12, worst


def solidity(rng, budget, trials, perturb):
    worst = 0.0
    for spec in _specs():
        Z = sample_cloud(spec, budget, int(rng.integers(2**31)))
        shrink = rng.random(Z.shape)
        if perturb:
            # deliberately breaks the hypothesis |y_i| <= |z_i|
            shrink = 1.0 + shrink
        Y = Z * shrink * np.exp(2j * np.pi * rng.random(Z.shape))
        worst = max(worst, _excess(Y, spec))
    return worst <= 1e-12, worst


def balancedness(rng, budget, trials, perturb):
    worst = 0.0
    for spec in _specs():
        Z = sample_cloud(spec, budget, int(rng.integers(2**31)))
        c = rng.random((Z.shape[0], 1)) * np.exp(2j * np.pi * rng.random((Z.shape[0], 1)))
        worst = max(worst, _excess(Z * c, spec))
    return worst <= 1e-12, worst


def closedness(rng, budget, trials, perturb):
    worst, tight = 0.0, 0
    for spec in _specs():
        Z = sample_cloud(spec, budget, int(rng.integers(2**31)), boundary=True)
        worst = max(worst, _excess(Z, spec))
        tight += int((np.abs(_slack(Z, spec)).min(axis=1) <= 1e-12).sum())
    return worst <= 1e-12 and tight > 0, worst


def net_covering(rng, budget, trials, perturb):
    worst = 0.0
    for spec, eps in [(BlockSpec((1.0, 0.4), 2.0), 0.9), (LorentzSpec((1.0, 0.5), LorentzWeights.harmonic(2)), 0.8)]:
        net = epsilon_net(spec, eps)
        Z = sample_cloud(spec, budget, int(rng.integers(2**31)))
        d = net.nearest_distances(Z)
        worst = max(worst, float(d.max()) / eps)
    return worst < 1.0, worst


def predual_attainment(rng, budget, trials, perturb):
    bad = 0
    w = LorentzWeights.harmonic(40)
    for _ in range(trials):
        z = _random_point(rng, int(rng.integers(1, 10)))
        r = predual_ratios(z, w)
        bad += int(np.argmax(r)) + 1 > z.nnz
    return bad == 0, float(bad)


def square_order(rng, budget, trials, perturb):
    bad = 0
    for n in range(1, 4):
        ms = list(iter_monomials(n, 5))
        for a, b in itertools.product(ms, repeat=2):
            bad += square_cmp(a, b) != -square_cmp(b, a)
            bad += (square_cmp(a, b) == 0) != (a == b)
            if square_cmp(a, b) < 0:
                bad += a.length > b.length
        for a, b, c in itertools.product(ms, repeat=3):
            if square_cmp(a, b) < 0 and square_cmp(b, c) < 0:
                bad += square_cmp(a, c) >= 0
    return bad == 0, float(bad)


def cardinalities(rng, budget, trials, perturb):
    bad = 0
    for n in range(7):
        for k in range(8):
            brute = sum(1 for e in itertools.product(range(n + 1), repeat=k) if sum(e) == n) if k else int(n == 0)
            bad += brute != count_monomials(n, k)
            bad += brute != len(enumerate_monomials(n, k))
    return bad == 0, float(bad)


def recursion(rng, budget, trials, perturb):
    bad = 0
    for n in range(1, 4):
        bases = [stratum(n, i) for i in range(1, 7)]
        for k in range(1, 7):
            bad += recursive_extend(bases, k) != stratum(n + 1, k)
    return bad == 0, float(bad)


def compatibility(rng, budget, trials, perturb):
    bad = 0
    seen = set()
    for n in range(6):
        ms = list(iter_monomials(n, 5))
        keys = [global_key(m) for m in ms]
        bad += any(a >= b for a, b in zip(keys, keys[1:]))
        bad += any(global_key(m) != compatible_rank(n, rank(m, 5)) for m in ms)
        seen.update(keys)
    bad += len(seen) != sum(count_monomials(n, 5) for n in range(6))
    return bad == 0, float(bad)


def _random_poly(rng, n, k):
    ms = list(iter_monomials(n, k))
    return HomogeneousPolynomial(n, zip(ms, rng.standard_normal(len(ms)) + 1j * rng.standard_normal(len(ms))))


def evaluation(rng, budget, trials, perturb):
    lin = hom = 0.0
    for _ in range(trials):
        n = int(rng.integers(0, 5))
        P, Q = _random_poly(rng, n, 3), _random_poly(rng, n, 3)
        z = Point.from_dense((rng.standard_normal(3) + 1j * rng.standard_normal(3)) / 2)
        a, b = complex(*rng.standard_normal(2)), complex(*rng.standard_normal(2))
        lhs = (P * a + Q * b).evaluate(z)
        rhs = a * P.evaluate(z) + b * Q.evaluate(z)
        lin = max(lin, abs(lhs - rhs) / max(1.0, abs(rhs)))
        c = complex(*rng.standard_normal(2))
        expect = c**n * P.evaluate(z)
        hom = max(hom, abs(P.evaluate(z * c) - expect) / max(1.0, abs(expect)))
    return lin <= 1e-12 and hom <= 1e-10, max(lin, hom)


def sup_dominance(rng, budget, trials, perturb):
    worst = 0.0
    spec = BlockSpec((1.0, 0.8, 0.5), 2.0)
    for m in iter_monomials(3, 6):
        exact = monomial_sup_block(m, spec).value
        Z = sample_cloud(spec, budget, int(rng.integers(2**31)))
        est = float(np.abs(HomogeneousPolynomial.monomial(m).evaluate_many(Z)).max())
        worst = max(worst, (est - exact) / max(exact, 1e-300))
    return worst <= 1e-12, max(worst, 0.0)


def seminorm_additivity(rng, budget, trials, perturb):
    spec = _specs()[0]
    f = exp_functional_taylor([0.5, 0.3j, 0.2], 6)
    Z = make_cloud(spec, budget, 1)
    whole = seminorm_p_lambda(f, spec, budget, cloud=Z)
    parts = math.fsum(seminorm_parts(f, Z))
    return whole == parts, abs(whole - parts)


def monotonicity(rng, budget, trials, perturb):
    worst = -math.inf
    for _ in range(trials):
        spec = _specs()[int(rng.integers(3))]
        n, k = int(rng.integers(1, 5)), int(rng.integers(1, 7))
        Z = make_cloud(spec, max(budget // 10, 50), int(rng.integers(2**31)), range(1, k + 1))
        rep = length_graded_monotonicity_check(random_length_graded(n, k, rng), spec, Z)
        worst = max(worst, rep.worst_excess)
        if not rep.holds:
            return False, worst
    return True, max(worst, 0.0)


def c1_is_one(rng, budget, trials, perturb):
    worst = 0.0
    for spec in _specs():
        c = basis_constant_estimate(1, 4, spec, trials, int(rng.integers(2**31)), budget=max(budget // 10, 50)).c_hat
        worst = max(worst, abs(c - 1.0))
    return worst <= 1e-10, worst


def exp_taylor(rng, budget, trials, perturb):
    worst = 0.0
    for _ in range(trials):
        phi = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        phi /= np.abs(phi).sum()
        z = (rng.standard_normal(3) + 1j * rng.standard_normal(3))
        z *= 2 / np.abs(z).max()
        f = exp_functional_taylor(phi.tolist(), 20)
        exact = np.exp(phi @ z)
        worst = max(worst, abs(f.evaluate(Point.from_dense(z)) - exact) / abs(exact))
    return worst < 1e-8, worst


def tail_decay(rng, budget, trials, perturb):
    spec = BlockSpec((1.0, 0.5, 0.25), 2.0)
    f = exp_functional_taylor([0.5, 0.3, 0.2], 12)
    tails = tail_seminorms(f, np.abs(make_cloud(spec, budget, 2)))
    ok = bool(np.all(np.diff(tails) <= 0)) and bool((tails[:-1] < 1e-6).any())
    return ok, float(tails[-2])


SUITES: dict[str, Callable] = {
    "block_partition": partition,
    "norm_axioms": norm_axioms,
    "rearrangement_invariance": rearrangement_invariance,
    "solidity": solidity,
    "balancedness": balancedness,
    "closedness_witness": closedness,
    "epsilon_net_covering": net_covering,
    "predual_attainment": predual_attainment,
    "square_order_total": square_order,
    "cardinalities": cardinalities,
    "recursive_extend": recursion,
    "compatible_order": compatibility,
    "evaluation_linearity_homogeneity": evaluation,
    "sup_dominance": sup_dominance,
    "seminorm_additivity": seminorm_additivity,
    "length_graded_monotonicity": monotonicity,
    "c1_equals_one": c1_is_one,
    "exp_taylor_consistency": exp_taylor,
    "tail_decay": tail_decay,
}


def run_suites(seed: int, budget: int = 2000, trials: int = 50, perturb: bool = False) -> list[InvariantResult]:
    """Run every suite with its own generator derived from ``seed``."""
    out = []
    for j, (name, fn) in enumerate(SUITES.items()):
        rng = np.random.default_rng([seed, j])
        passed, residual = fn(rng, budget, trials, perturb)
        out.append(InvariantResult(name, bool(passed), float(residual)))
    return out
