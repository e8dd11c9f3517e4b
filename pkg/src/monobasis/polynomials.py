"""Homogeneous polynomials in monomial form, sup norms over A_lambda and basis-constant experiments."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.optimize import minimize

from .errors import DomainError, PreconditionError
from .multiindex import (
    MultiIndex,
    enumerate_monomials,
    global_key,
    iter_monomials,
    square_key,
)
from .sequence_spaces import (
    BlockSpec,
    CompactSetSpec,
    LorentzSpec,
    Point,
    block_of_index,
    close_under_truncation,
    is_truncation_closed,
    sample_cloud,
)

DEGENERATE_TOL = 1e-14


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

class HomogeneousPolynomial:
    """A finite sum ``sum_m c_m z^m`` with every |m| equal to ``degree``.

    Terms are kept in square order; zero coefficients are dropped.
    """

    __slots__ = ("degree", "_terms")

    def __init__(self, degree: int, terms: Mapping[MultiIndex, complex] | Iterable[tuple[MultiIndex, complex]] = ()):
        if degree < 0:
            raise DomainError("degree must be >= 0")
        if isinstance(terms, Mapping):
            terms = terms.items()
        acc: dict[MultiIndex, complex] = {}
        for m, c in terms:
            if not isinstance(m, MultiIndex):
                m = MultiIndex(tuple(m))
            if m.degree != degree:
                raise DomainError(f"monomial {m!r} has degree {m.degree}, expected {degree}")
            c = complex(c)
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise ValueError("coefficients must be finite")
            acc[m] = acc.get(m, 0j) + c
        self.degree = degree
        self._terms = tuple(sorted(((m, c) for m, c in acc.items() if c != 0), key=lambda t: square_key(t[0])))

    @classmethod
    def monomial(cls, m: MultiIndex, c: complex = 1.0) -> "HomogeneousPolynomial":
        return cls(m.degree, {m: c})

    @property
    def terms(self) -> tuple[tuple[MultiIndex, complex], ...]:
        return self._terms

    def coefficients(self) -> dict[MultiIndex, complex]:
        return dict(self._terms)

    def monomials(self) -> list[MultiIndex]:
        return [m for m, _ in self._terms]

    def coefficient_array(self) -> np.ndarray:
        return np.array([c for _, c in self._terms], dtype=complex)

    @property
    def max_length(self) -> int:
        return max((m.length for m, _ in self._terms), default=0)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def stratum(self, u: int) -> "HomogeneousPolynomial":
        """Terms whose monomials have length exactly u."""
        return HomogeneousPolynomial(self.degree, [(m, c) for m, c in self._terms if m.length == u])

    def __add__(self, other: "HomogeneousPolynomial") -> "HomogeneousPolynomial":
        if not isinstance(other, HomogeneousPolynomial):
            return NotImplemented
        if other.degree != self.degree and not (self.is_zero() or other.is_zero()):
            raise DomainError("cannot add homogeneous polynomials of different degrees")
        deg = self.degree if not self.is_zero() else other.degree
        return HomogeneousPolynomial(deg, self._terms + other._terms)

    def __neg__(self) -> "HomogeneousPolynomial":
        return HomogeneousPolynomial(self.degree, [(m, -c) for m, c in self._terms])

    def __sub__(self, other: "HomogeneousPolynomial") -> "HomogeneousPolynomial":
        return self + (-other)

    def __mul__(self, a: complex) -> "HomogeneousPolynomial":
        if isinstance(a, HomogeneousPolynomial):
            return NotImplemented
        return HomogeneousPolynomial(self.degree, [(m, complex(a) * c) for m, c in self._terms])

    __rmul__ = __mul__

    def times_coordinate(self, k: int) -> "HomogeneousPolynomial":
        """The product e*_k . P, of degree one higher."""
        return HomogeneousPolynomial(self.degree + 1, [(m.times(k), c) for m, c in self._terms])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, HomogeneousPolynomial) and self.degree == other.degree and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.degree, self._terms))

    def __repr__(self) -> str:
        return f"HomogeneousPolynomial({self.degree}, {len(self._terms)} terms)"

    def evaluate(self, z: Point) -> complex:
        total = 0j
        for m, c in self._terms:
            v = c
            for k, e in enumerate(m.exponents, start=1):
                if e:
                    v *= z[k] ** e
            total += v
        return total

    def evaluate_many(self, Z: np.ndarray) -> np.ndarray:
        if not self._terms:
            return np.zeros(np.atleast_2d(Z).shape[0], dtype=complex)
        return monomial_values(self.monomials(), Z) @ self.coefficient_array()

    def to_json(self) -> list[dict]:
        return [{"m": m.to_json(), "c": [c.real, c.imag]} for m, c in self._terms]

    @classmethod
    def from_json(cls, obj: Sequence[Mapping], degree: int | None = None) -> "HomogeneousPolynomial":
        terms = [(MultiIndex.from_json(t["m"]), complex(*t["c"])) for t in obj]
        if degree is None:
            degrees = {m.degree for m, _ in terms}
            if len(degrees) > 1:
                raise DomainError("terms of mixed degree")
            degree = degrees.pop() if degrees else 0
        return cls(degree, terms)


@dataclass(frozen=True)
class TaylorTruncation:
    """Homogeneous parts P_0, ..., P_N of a truncated Taylor series."""

    parts: tuple[HomogeneousPolynomial, ...]

    def __post_init__(self):
        parts = tuple(self.parts)
        for d, P in enumerate(parts):
            if P.degree != d and not P.is_zero():
                raise DomainError(f"slot {d} holds a polynomial of degree {P.degree}")
        object.__setattr__(self, "parts", tuple(P if P.degree == d else HomogeneousPolynomial(d) for d, P in enumerate(parts)))

    @property
    def max_degree(self) -> int:
        return len(self.parts) - 1

    def terms(self) -> list[tuple[MultiIndex, complex]]:
        return [t for P in self.parts for t in P.terms]

    @property
    def n_terms(self) -> int:
        return sum(len(P) for P in self.parts)

    def evaluate(self, z: Point) -> complex:
        return sum((P.evaluate(z) for P in self.parts), 0j)

    def evaluate_many(self, Z: np.ndarray) -> np.ndarray:
        out = np.zeros(np.atleast_2d(Z).shape[0], dtype=complex)
        for P in self.parts:
            out += P.evaluate_many(Z)
        return out

    def __sub__(self, other: "TaylorTruncation") -> "TaylorTruncation":
        n = max(len(self.parts), len(other.parts))
        a = self.parts + tuple(HomogeneousPolynomial(d) for d in range(len(self.parts), n))
        b = other.parts + tuple(HomogeneousPolynomial(d) for d in range(len(other.parts), n))
        return TaylorTruncation(tuple(x - y for x, y in zip(a, b)))

    def to_json(self) -> list[list[dict]]:
        return [P.to_json() for P in self.parts]


def evaluate(P: HomogeneousPolynomial | TaylorTruncation, z: Point) -> complex:
    return P.evaluate(z)


def monomial_values(monomials: Sequence[MultiIndex], Z: np.ndarray) -> np.ndarray:
    """Matrix of z^m, one row per row of Z and one column per monomial.

    Coordinates beyond ``Z.shape[1]`` count as zero.  Powers are built by
    repeated multiplication, so a row and its truncation share bit-identical
    values on the monomials that the truncation does not kill.
    """
    Z = np.atleast_2d(np.asarray(Z, dtype=complex))
    B, d = Z.shape
    top: dict[int, int] = {}
    for m in monomials:
        for k, e in enumerate(m.exponents, start=1):
            top[k] = max(top.get(k, 0), e)
    powers: dict[int, list[np.ndarray]] = {}
    for k, emax in top.items():
        if k > d:
            continue
        col = Z[:, k - 1]
        pw = [None, col]
        for _ in range(2, emax + 1):
            pw.append(pw[-1] * col)
        powers[k] = pw
    out = np.empty((B, len(monomials)), dtype=complex)
    for j, m in enumerate(monomials):
        if m.length > d:
            out[:, j] = 0
            continue
        v = np.ones(B, dtype=complex)
        for k, e in enumerate(m.exponents, start=1):
            if e:
                v = v * powers[k][e]
        out[:, j] = v
    return out


# ---------------------------------------------------------------------------
# sup norms
# ---------------------------------------------------------------------------

class SupMode(str, enum.Enum):
    EXACT = "exact_closed_form"
    SAMPLED = "sampled_lower_bound"
    OPTIMIZED = "optimized_lower_bound"


@dataclass(frozen=True)
class SupEstimate:
    value: float
    mode: SupMode
    witness: Point
    budget: int = 0

    def to_json(self) -> dict:
        return {"value": self.value, "mode": self.mode.value, "witness": self.witness.to_json(), "budget": self.budget}


def monomial_sup_block(m: MultiIndex, spec: BlockSpec) -> SupEstimate:
    """Exact sup of |z^m| over a block-type A_lambda.

    Blocks are independent, and inside block n the maximum of prod |z_i|^{m_i}
    under sum |z_i|^p <= lambda_n^p sits at |z_i|^p = lambda_n^p m_i / M_n
    (M_n the block degree), giving lambda_n^{M_n} prod (m_i / M_n)^{m_i / p}.
    """
    if not isinstance(spec, BlockSpec):
        raise PreconditionError("block variant required")
    by_block: dict[int, list[tuple[int, int]]] = {}
    for k, e in enumerate(m.exponents, start=1):
        if e:
            by_block.setdefault(block_of_index(k), []).append((k, e))
    value = 1.0
    coords: dict[int, float] = {}
    for n, items in by_block.items():
        lam = spec.lam_at(n)
        if lam == 0:
            return SupEstimate(0.0, SupMode.EXACT, Point())
        M = sum(e for _, e in items)
        value *= lam ** M * math.prod((e / M) ** (e / spec.p) for _, e in items)
        for k, e in items:
            coords[k] = lam * (e / M) ** (1.0 / spec.p)
    return SupEstimate(value, SupMode.EXACT, Point(coords))


def _lorentz_profile(mu: np.ndarray, caps: np.ndarray, rng: np.random.Generator, restarts: int) -> np.ndarray:
    """Best non-increasing profile rho maximizing sum mu_j log rho_j under top-k sum caps."""
    d = len(mu)
    L = len(caps)
    # caps on prefix sums of a sorted profile of length d
    pref = np.array([caps[k] for k in range(min(d, L))] + [np.inf] * max(0, d - L))
    pref[d - 1] = min(pref[d - 1], caps[d - 1:].min()) if d <= L else pref[d - 1]
    logcap = np.log(pref)

    def feasible_scale(rho):
        P = np.cumsum(np.sort(rho)[::-1])
        with np.errstate(divide="ignore"):
            return float(np.min(np.where(P > 0, pref / P, np.inf)))

    def neg_obj(y):
        return -float(mu @ y)

    def neg_grad(y):
        return -mu

    cons = []
    for k in range(1, d + 1):
        if not np.isfinite(logcap[k - 1]):
            continue

        def f(y, k=k):
            a = y[:k].max()
            return logcap[k - 1] - (a + math.log(np.exp(y[:k] - a).sum()))

        def g(y, k=k):
            out = np.zeros(d)
            w = np.exp(y[:k] - y[:k].max())
            out[:k] = -w / w.sum()
            return out

        cons.append({"type": "ineq", "fun": f, "jac": g})
    if d > 1:
        D = np.zeros((d - 1, d))
        D[np.arange(d - 1), np.arange(d - 1)] = 1
        D[np.arange(d - 1), np.arange(1, d)] = -1
        cons.append({"type": "ineq", "fun": lambda y: D @ y, "jac": lambda y: D})

    starts = [mu / mu.sum()]
    for _ in range(restarts - 1):
        starts.append(np.sort(rng.dirichlet(np.ones(d)))[::-1])
    best_rho, best_val = None, -np.inf
    for rho0 in starts:
        rho0 = rho0 * 0.9 * feasible_scale(rho0)
        res = minimize(neg_obj, np.log(rho0), jac=neg_grad, constraints=cons, method="SLSQP",
                       options={"maxiter": 500, "ftol": 1e-15})
        rho = np.sort(np.exp(res.x))[::-1]
        rho = rho * min(1.0, feasible_scale(rho))
        val = float(mu @ np.log(rho))
        if val > best_val:
            best_rho, best_val = rho, val
    return best_rho


def monomial_sup_lorentz(m: MultiIndex, spec: LorentzSpec, restarts: int = 6, seed: int = 0) -> SupEstimate:
    """Numerical sup of |z^m| over a Lorentz-type A_lambda (a certified lower bound).

    Only the moduli on supp(m) matter.  By rearrangement the largest moduli go
    to the largest exponents, leaving a concave maximization over a sorted
    profile, solved in log coordinates from several starts.  The returned
    witness is rescaled into A_lambda before its value is taken.
    """
    if not isinstance(spec, LorentzSpec):
        raise PreconditionError("lorentz variant required")
    if m.length == 0:
        return SupEstimate(1.0, SupMode.EXACT, Point())
    if m.length > spec.dim or spec.caps.min(initial=np.inf) <= 0:
        return SupEstimate(0.0, SupMode.EXACT, Point())
    support = sorted(m.support(), key=lambda k: (-m[k], k))
    mu = np.array([m[k] for k in support], dtype=float)
    rho = _lorentz_profile(mu, spec.caps, np.random.default_rng(seed), restarts)
    witness = Point(dict(zip(support, rho.tolist())))
    value = math.prod(abs(witness[k]) ** m[k] for k in support)
    return SupEstimate(value, SupMode.OPTIMIZED, witness)


def monomial_sup(m: MultiIndex, spec: CompactSetSpec) -> SupEstimate:
    if isinstance(spec, BlockSpec):
        return monomial_sup_block(m, spec)
    return monomial_sup_lorentz(m, spec)


def make_cloud(spec: CompactSetSpec, budget: int, seed: int, cut_lengths: Iterable[int] = ()) -> np.ndarray:
    """Sample cloud of A_lambda, closed under zeroing coordinates past each cut."""
    return close_under_truncation(sample_cloud(spec, budget, seed), cut_lengths)


def sup_on_cloud(P: HomogeneousPolynomial | TaylorTruncation, Z: np.ndarray) -> tuple[float, int]:
    vals = np.abs(P.evaluate_many(Z))
    if vals.size == 0:
        return 0.0, -1
    j = int(np.argmax(vals))
    return float(vals[j]), j


def poly_sup_estimate(P: HomogeneousPolynomial, spec: CompactSetSpec, budget: int,
                      cut_lengths: Iterable[int] = (), seed: int = 0,
                      cloud: np.ndarray | None = None) -> SupEstimate:
    """Lower bound for sup |P| over A_lambda: the max over a truncation-closed sample cloud."""
    if budget < 1 and cloud is None:
        raise DomainError("budget must be >= 1")
    Z = make_cloud(spec, budget, seed, cut_lengths) if cloud is None else cloud
    value, j = sup_on_cloud(P, Z)
    witness = Point.from_dense(Z[j]) if j >= 0 else Point()
    return SupEstimate(value, SupMode.SAMPLED, witness, Z.shape[0])


# ---------------------------------------------------------------------------
# seminorms, test functions and partial sums
# ---------------------------------------------------------------------------

def seminorm_parts(f: TaylorTruncation, Z: np.ndarray) -> list[float]:
    """Sampled sup of each homogeneous part over the cloud Z."""
    return [sup_on_cloud(P, Z)[0] for P in f.parts]


def seminorm_p_lambda(f: TaylorTruncation, spec: CompactSetSpec, budget: int, seed: int = 0,
                      cloud: np.ndarray | None = None) -> float:
    """p_lambda(f) = sum over degrees of sup_{A_lambda} |P_n|, each sup taken on one shared cloud."""
    Z = make_cloud(spec, budget, seed) if cloud is None else cloud
    return math.fsum(seminorm_parts(f, Z))


def exp_functional_taylor(phi: Sequence[complex], N: int) -> TaylorTruncation:
    """Taylor parts of z -> exp(sum phi_i z_i) up to degree N.

    The coefficient of z^m in (phi . z)^n / n! is prod phi_i^{m_i} / m_i!.
    """
    phi = [complex(x) for x in phi]
    parts = []
    for n in range(N + 1):
        terms = []
        for m in iter_monomials(n, len(phi)):
            c = 1 + 0j
            for i, e in enumerate(m.exponents):
                c *= phi[i] ** e / math.factorial(e)
            terms.append((m, c))
        parts.append(HomogeneousPolynomial(n, terms))
    return TaylorTruncation(tuple(parts))


def partial_sum(f: TaylorTruncation, N: int) -> TaylorTruncation:
    """Keep the first N monomials of f in the compatible order."""
    if N < 0:
        raise DomainError("N must be >= 0")
    keep = {m for m, _ in sorted(f.terms(), key=lambda t: global_key(t[0]))[:N]}
    return TaylorTruncation(tuple(
        HomogeneousPolynomial(P.degree, [(m, c) for m, c in P.terms if m in keep]) for P in f.parts))


def tail_seminorms(f: TaylorTruncation, Z: np.ndarray) -> np.ndarray:
    """p_lambda(f - S_N f) on the cloud Z for every N = 0, ..., n_terms.

    Per degree, the tails are reverse cumulative sums over the terms in
    compatible order, so removing a term is one subtraction per cloud point.
    """
    ordered = sorted(f.terms(), key=lambda t: global_key(t[0]))
    T = len(ordered)
    degrees = [m.degree for m, _ in ordered]
    nd = len(f.parts)
    sup_tables = []
    for n in range(nd):
        P = f.parts[n]
        if P.is_zero():
            sup_tables.append(np.zeros(1))
            continue
        terms = monomial_values(P.monomials(), Z) * P.coefficient_array()
        R = np.cumsum(terms[:, ::-1], axis=1)[:, ::-1]
        sups = np.abs(R).max(axis=0) if R.shape[0] else np.zeros(R.shape[1])
        sup_tables.append(np.append(sups, 0.0))
    removed = np.zeros((T + 1, nd), dtype=int)
    for N, n in enumerate(degrees, start=1):
        removed[N] = removed[N - 1]
        removed[N, n] += 1
    S = np.column_stack([sup_tables[n][removed[:, n]] for n in range(nd)])
    return S.sum(axis=1)


# ---------------------------------------------------------------------------
# the monotonicity inequality across length strata
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MonotonicityReport:
    sups: tuple[float, ...]
    holds: bool
    worst_excess: float
    worst_pair: tuple[int, int] | None

    def to_json(self) -> dict:
        return {"sups": list(self.sups), "holds": self.holds, "worst_excess": self.worst_excess,
                "worst_pair": list(self.worst_pair) if self.worst_pair else None}


def _stratum_sums(Q: Sequence[HomogeneousPolynomial], Z: np.ndarray) -> np.ndarray:
    """Columns G_t(z) = Q_1(z) + ... + Q_t(z), accumulated left to right."""
    cols = []
    for P in Q:
        if P.is_zero():
            cols.append(np.zeros(Z.shape[0], dtype=complex))
        else:
            terms = monomial_values(P.monomials(), Z) * P.coefficient_array()
            cols.append(np.cumsum(terms, axis=1)[:, -1])
    return np.cumsum(np.column_stack(cols), axis=1) if cols else np.zeros((Z.shape[0], 0), dtype=complex)


def length_graded_monotonicity_check(Q: Sequence[HomogeneousPolynomial], spec: CompactSetSpec | None,
                                     cloud: np.ndarray) -> MonotonicityReport:
    """Check ||Q_1 + ... + Q_s|| <= ||Q_1 + ... + Q_t|| for all s < t on a cloud.

    ``Q[u-1]`` must only contain monomials of length exactly u, and the cloud
    must contain the u-truncation of each of its points.  The inequality is
    then exact: the t-sum at the s-truncation of z equals the s-sum at z.
    """
    for u, P in enumerate(Q, start=1):
        if any(m.length != u for m in P.monomials()):
            raise PreconditionError(f"Q_{u} has a monomial of length other than {u}")
    if not is_truncation_closed(cloud, range(1, len(Q) + 1)):
        raise PreconditionError("cloud is not closed under coordinate truncation")
    G = _stratum_sums(Q, cloud)
    sups = np.abs(G).max(axis=0) if G.shape[0] else np.zeros(G.shape[1])
    worst, pair = 0.0, None
    for s_ in range(len(Q)):
        for t in range(s_ + 1, len(Q)):
            excess = sups[s_] - sups[t]
            if pair is None or excess > worst:
                worst, pair = excess, (s_ + 1, t + 1)
    return MonotonicityReport(tuple(sups.tolist()), bool(pair is None or worst <= 0), float(worst), pair)


def random_length_graded(n: int, k: int, rng: np.random.Generator) -> list[HomogeneousPolynomial]:
    """Random Q_1..Q_k with Q_u a complex Gaussian combination of degree-n monomials of length u."""
    Q = []
    for u in range(1, k + 1):
        monos = [m for m in iter_monomials(n, u) if m.length == u]
        c = (rng.standard_normal(len(monos)) + 1j * rng.standard_normal(len(monos))) / math.sqrt(2)
        Q.append(HomogeneousPolynomial(n, zip(monos, c)))
    return Q


# ---------------------------------------------------------------------------
# basis constants and p0
# ---------------------------------------------------------------------------

def _complex_normal(rng: np.random.Generator, size: int) -> np.ndarray:
    return (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / math.sqrt(2)


@dataclass(frozen=True)
class P0Estimate:
    value: float
    degree: int
    k: int
    trials: int
    skipped: int

    def __float__(self) -> float:
        return self.value


def p0_ratio(S: HomogeneousPolynomial, k: int, Z: np.ndarray) -> float | None:
    """||e*_{k+1}|| ||S|| / ||e*_{k+1} S|| on the cloud Z; None if the denominator degenerates."""
    coord = np.abs(Z[:, k]) if Z.shape[1] > k else np.zeros(Z.shape[0])
    a = float(coord.max(initial=0.0))
    b = float(np.abs(S.evaluate_many(Z)).max(initial=0.0))
    c = float(np.abs(S.times_coordinate(k + 1).evaluate_many(Z)).max(initial=0.0))
    if c < DEGENERATE_TOL:
        return None
    return a * b / c


def p0_ratio_exact(m: MultiIndex, k: int, spec: BlockSpec) -> float:
    """The same ratio for a single monomial S = z^m, from closed-form sups."""
    num = spec.lam_at(block_of_index(k + 1)) * monomial_sup_block(m, spec).value
    return num / monomial_sup_block(m.times(k + 1), spec).value


def estimate_p0(spec: CompactSetSpec, n: int, k: int, trials: int, seed: int, budget: int = 2000) -> P0Estimate:
    """Largest observed ||e*_{k+1}|| ||S|| / ||e*_{k+1} S|| over random degree-n S on coordinates 1..k.

    Every ratio is >= 1 on a shared cloud, since max |xy| <= max |x| max |y|.
    """
    if k < 1:
        raise DomainError("k must be >= 1")
    monos = list(iter_monomials(n, k))
    best, skipped = 1.0, 0
    for t in range(trials):
        rng = np.random.default_rng(seed + t)
        S = HomogeneousPolynomial(n, zip(monos, _complex_normal(rng, len(monos))))
        Z = sample_cloud(spec, budget, seed + t)
        r = p0_ratio(S, k, Z)
        if r is None:
            skipped += 1
            continue
        best = max(best, r)
    return P0Estimate(best, n, k, trials, skipped)


@dataclass(frozen=True)
class BasisConstantReport:
    degree: int
    k: int
    c_hat: float
    worst_cut: tuple[int, int]
    worst_alpha: tuple[complex, ...]
    p0_estimate: float
    trials: int
    skipped: int
    budget: int
    c_root: float = field(init=False)
    envelope: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "c_root", self.c_hat ** (1.0 / self.degree))
        object.__setattr__(self, "envelope", 1 + 2 * self.p0_estimate)

    def to_json(self) -> dict:
        return {
            "degree": self.degree, "k": self.k, "c_hat": self.c_hat, "c_root": self.c_root,
            "worst_cut": list(self.worst_cut),
            "worst_alpha": [[a.real, a.imag] for a in self.worst_alpha],
            "p0_estimate": self.p0_estimate, "envelope": self.envelope,
            "trials": self.trials, "skipped": self.skipped, "budget": self.budget,
        }


def basis_constant_ratios(alpha: np.ndarray, monomials: Sequence[MultiIndex], Z: np.ndarray) -> np.ndarray | None:
    """||sum_{m<=s} alpha_m z^m|| / ||sum_{m<=T} alpha_m z^m|| on Z for s = 1..T-1."""
    terms = monomial_values(monomials, Z) * alpha
    C = np.cumsum(terms, axis=1)
    sups = np.abs(C).max(axis=0)
    if sups[-1] < DEGENERATE_TOL:
        return None
    return sups[:-1] / sups[-1]


def basis_constant_estimate(n: int, k: int, spec: CompactSetSpec, trials: int, seed: int,
                            budget: int = 2000, p0_trials: int | None = None) -> BasisConstantReport:
    """Randomized lower bound for the basis constant of the square-ordered degree-n monomials.

    Each trial draws complex Gaussian coefficients on the monomials of length
    <= k and one cloud closed under truncation at lengths 1..k; all cuts s
    against the full sum t = T are compared on that cloud.  The single-monomial
    probe (alpha = e_1, s = 1) contributes the ratio 1.
    """
    if n < 1 or k < 1:
        raise DomainError("n and k must be >= 1")
    monos = list(enumerate_monomials(n, k))
    T = len(monos)
    best = 1.0
    cut = (1, T) if T > 1 else (0, 1)
    alpha_best = tuple([1 + 0j] + [0j] * (T - 1))
    skipped = 0
    if T > 1:
        for t in range(trials):
            rng = np.random.default_rng(seed + t)
            alpha = _complex_normal(rng, T)
            Z = make_cloud(spec, budget, seed + t, range(1, k + 1))
            ratios = basis_constant_ratios(alpha, monos, Z)
            if ratios is None:
                skipped += 1
                continue
            j = int(np.argmax(ratios))
            if ratios[j] > best:
                best, cut, alpha_best = float(ratios[j]), (j + 1, T), tuple(alpha.tolist())
    p0 = 1.0
    for kk in range(1, k):
        p0 = max(p0, estimate_p0(spec, n - 1, kk, trials if p0_trials is None else p0_trials, seed, budget).value)
    return BasisConstantReport(n, k, best, cut, alpha_best, p0, trials, skipped, budget)
