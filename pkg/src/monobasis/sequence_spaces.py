"""Finitely supported sequences in c0(+ l^i_p) and d_*(w, 1), and the compact sets A_lambda.

Two representations are used throughout:

* :class:`Point`, an immutable sparse vector with 1-based indices, for the
  public per-point API and for JSON exchange;
* dense complex arrays of shape ``(count, dim)`` ("clouds"), where column ``j``
  holds coordinate ``j + 1``.  All sampling and sup estimation works on these.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence, Union

import numpy as np

from .errors import DomainError, PreconditionError

MEMBERSHIP_TOL = 1e-12

# sampler mixing rates
BOUNDARY_RATE = 0.5
TIGHT_RATE = 0.25
SPARSE_RATE = 0.5
KEEP_RATE = 0.5


# ---------------------------------------------------------------------------
# points
# ---------------------------------------------------------------------------

class Point:
    """Finitely supported complex sequence ``z = sum z_i e_i`` (indices start at 1).

    Zero entries are dropped on construction, so two points compare equal iff
    they have the same nonzero coordinates.
    """

    __slots__ = ("_items",)

    def __init__(self, entries: Mapping[int, complex] | Iterable[tuple[int, complex]] = ()):
        if isinstance(entries, Mapping):
            entries = entries.items()
        acc: dict[int, complex] = {}
        for i, v in entries:
            i = int(i)
            if i < 1:
                raise DomainError(f"coordinate indices start at 1, got {i}")
            v = complex(v)
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ValueError(f"non-finite value at index {i}")
            acc[i] = acc.get(i, 0j) + v
        self._items = tuple(sorted((i, v) for i, v in acc.items() if v != 0))

    @classmethod
    def from_dense(cls, values: Sequence[complex] | np.ndarray) -> "Point":
        return cls((j + 1, v) for j, v in enumerate(np.asarray(values).tolist()) if v != 0)

    @classmethod
    def unit(cls, i: int, value: complex = 1.0) -> "Point":
        return cls({i: value})

    def items(self) -> tuple[tuple[int, complex], ...]:
        return self._items

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self._items)

    @property
    def nnz(self) -> int:
        return len(self._items)

    @property
    def length(self) -> int:
        """Largest index in the support, 0 for the zero point."""
        return self._items[-1][0] if self._items else 0

    def moduli(self) -> np.ndarray:
        return np.array([abs(v) for _, v in self._items], dtype=float)

    def to_dense(self, dim: int | None = None) -> np.ndarray:
        dim = self.length if dim is None else dim
        if self.length > dim:
            raise PreconditionError(f"support reaches index {self.length} > dim {dim}")
        out = np.zeros(dim, dtype=complex)
        for i, v in self._items:
            out[i - 1] = v
        return out

    def truncate(self, c: int) -> "Point":
        """Copy with every coordinate of index > c set to zero."""
        return Point((i, v) for i, v in self._items if i <= c)

    def __getitem__(self, i: int) -> complex:
        for j, v in self._items:
            if j == i:
                return v
        return 0j

    def __iter__(self) -> Iterator[tuple[int, complex]]:
        return iter(self._items)

    def __add__(self, other: "Point") -> "Point":
        if not isinstance(other, Point):
            return NotImplemented
        return Point(self._items + other._items)

    def __neg__(self) -> "Point":
        return Point((i, -v) for i, v in self._items)

    def __sub__(self, other: "Point") -> "Point":
        if not isinstance(other, Point):
            return NotImplemented
        return self + (-other)

    def __mul__(self, c: complex) -> "Point":
        if isinstance(c, Point):
            return NotImplemented
        c = complex(c)
        return Point((i, c * v) for i, v in self._items)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Point) and self._items == other._items

    def __hash__(self) -> int:
        return hash(self._items)

    def __repr__(self) -> str:
        body = ", ".join(f"{i}: {v!r}" for i, v in self._items)
        return f"Point({{{body}}})"

    def to_json(self) -> dict[str, list[float]]:
        return {str(i): [v.real, v.imag] for i, v in self._items}

    @classmethod
    def from_json(cls, obj: Mapping[str, Sequence[float]]) -> "Point":
        entries = []
        for key, val in obj.items():
            if isinstance(val, (int, float)):
                val = [val, 0.0]
            if len(val) != 2:
                raise ValueError(f"entry {key!r} must be [re, im]")
            entries.append((int(key), complex(val[0], val[1])))
        return cls(entries)


# ---------------------------------------------------------------------------
# block layout of c0(+ l^i_p)
# ---------------------------------------------------------------------------

def s(n: int) -> int:
    """Triangular numbers: s(0) = 0, s(n) = 1 + 2 + ... + n."""
    if n < 0:
        raise DomainError("s(n) needs n >= 0")
    return n * (n + 1) // 2


def block_interval(n: int) -> range:
    """Coordinates of the n-th block, I(n) = [s(n-1)+1, s(n)]."""
    if n < 1:
        raise DomainError("I(n) is defined for n >= 1")
    return range(s(n - 1) + 1, s(n) + 1)


def block_layout(n: int) -> tuple[int, range]:
    return s(n), block_interval(n)


def block_of_index(i: int) -> int:
    """The unique n with i in I(n)."""
    if i < 1:
        raise DomainError("coordinate indices start at 1")
    n = (math.isqrt(8 * i + 1) - 1) // 2
    if s(n) < i:
        n += 1
    return n


# ---------------------------------------------------------------------------
# weights and compact set descriptions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LorentzWeights:
    """Finite prefix w_1 = 1 >= w_2 >= ... > 0 of a Lorentz weight sequence."""

    prefix: tuple[float, ...]
    partial_sums: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        w = tuple(float(x) for x in self.prefix)
        if not w:
            raise DomainError("weight prefix must be non-empty")
        if not all(math.isfinite(x) and x > 0 for x in w):
            raise DomainError("weights must be finite and positive")
        if abs(w[0] - 1.0) > 1e-12:
            raise DomainError(f"w_1 must equal 1, got {w[0]}")
        if any(b > a for a, b in zip(w, w[1:])):
            raise DomainError("weights must be non-increasing")
        object.__setattr__(self, "prefix", w)
        object.__setattr__(self, "partial_sums", tuple(np.cumsum(w).tolist()))

    @classmethod
    def harmonic(cls, length: int) -> "LorentzWeights":
        return cls(tuple(1.0 / i for i in range(1, length + 1)))

    def __len__(self) -> int:
        return len(self.prefix)

    def W(self, k: int) -> float:
        """Partial sum w_1 + ... + w_k."""
        return self.partial_sums[k - 1]


def _check_lambda(lam) -> tuple[float, ...]:
    lam = tuple(float(x) for x in lam)
    if not all(math.isfinite(x) and x >= 0 for x in lam):
        raise DomainError("lambda entries must be finite and >= 0")
    return lam


@dataclass(frozen=True)
class BlockSpec:
    """A_lambda in c0(+ l^i_p): block n has l^p norm at most lambda_n (0 past the prefix)."""

    lam: tuple[float, ...]
    p: float

    variant = "block"

    def __post_init__(self):
        object.__setattr__(self, "lam", _check_lambda(self.lam))
        p = float(self.p)
        if not (math.isfinite(p) and p >= 1):
            raise DomainError(f"p must lie in [1, inf), got {self.p}")
        object.__setattr__(self, "p", p)

    @property
    def dim(self) -> int:
        """Number of coordinates that can be nonzero on A_lambda."""
        return s(len(self.lam))

    def lam_at(self, m: int) -> float:
        return self.lam[m - 1] if 1 <= m <= len(self.lam) else 0.0


@dataclass(frozen=True)
class LorentzSpec:
    """A_lambda in d_*(w, 1), restricted to coordinates 1..len(lam).

    The constraint for k = 1..len(lam) reads ``sum_{i<=k} [z]_i <= lambda_k W_k``.
    """

    lam: tuple[float, ...]
    weights: LorentzWeights

    variant = "lorentz"

    def __post_init__(self):
        object.__setattr__(self, "lam", _check_lambda(self.lam))
        if not isinstance(self.weights, LorentzWeights):
            object.__setattr__(self, "weights", LorentzWeights(tuple(self.weights)))
        if len(self.weights) < len(self.lam):
            raise PreconditionError(
                f"weight prefix ({len(self.weights)}) shorter than lambda prefix ({len(self.lam)})")

    @property
    def dim(self) -> int:
        return len(self.lam)

    def lam_at(self, m: int) -> float:
        return self.lam[m - 1] if 1 <= m <= len(self.lam) else 0.0

    @property
    def caps(self) -> np.ndarray:
        """Bounds lambda_k W_k on the sum of the k largest moduli."""
        return np.array(self.lam) * np.array(self.weights.partial_sums[:len(self.lam)])


CompactSetSpec = Union[BlockSpec, LorentzSpec]


def spec_to_json(spec: CompactSetSpec) -> dict:
    if isinstance(spec, BlockSpec):
        return {"variant": "block", "lambda": list(spec.lam), "p": spec.p}
    return {"variant": "lorentz", "lambda": list(spec.lam), "weights": list(spec.weights.prefix)}


def spec_from_json(obj: Mapping) -> CompactSetSpec:
    variant = obj.get("variant")
    if variant == "block":
        return BlockSpec(tuple(obj["lambda"]), obj["p"])
    if variant == "lorentz":
        return LorentzSpec(tuple(obj["lambda"]), LorentzWeights(tuple(obj["weights"])))
    raise ValueError(f"unknown variant {variant!r}")


# ---------------------------------------------------------------------------
# norms on points
# ---------------------------------------------------------------------------

def block_space_norm(z: Point, p: float) -> float:
    """sup_n (sum_{i in I(n)} |z_i|^p)^(1/p), visiting only blocks that meet the support."""
    sums: dict[int, list[float]] = defaultdict(list)
    for i, v in z:
        sums[block_of_index(i)].append(abs(v) ** p)
    return max((math.fsum(t) ** (1.0 / p) for t in sums.values()), default=0.0)


def decreasing_rearrangement(z: Point) -> list[float]:
    """Moduli of the nonzero coordinates, sorted non-increasing (ties by index)."""
    keyed = sorted(((-abs(v), i) for i, v in z))
    return [-m for m, _ in keyed]


def _require_prefix(n: int, w: LorentzWeights) -> None:
    if n > len(w):
        raise PreconditionError(f"weight prefix of length {len(w)} cannot cover support of size {n}")


def lorentz_norm(z: Point, w: LorentzWeights) -> float:
    """Norm of d(w, 1): sum_i [z]_i w_i."""
    r = decreasing_rearrangement(z)
    _require_prefix(len(r), w)
    return math.fsum(a * b for a, b in zip(r, w.prefix))


def predual_ratios(z: Point, w: LorentzWeights) -> list[float]:
    """(sum_{i<=k} [z]_i) / W_k for k = 1..nnz(z)."""
    r = decreasing_rearrangement(z)
    _require_prefix(len(r), w)
    acc, out = 0.0, []
    for k, x in enumerate(r, start=1):
        acc += x
        out.append(acc / w.W(k))
    return out


def lorentz_predual_norm(z: Point, w: LorentzWeights) -> float:
    """Norm of d_*(w, 1).  Past nnz(z) the numerator is constant, so k <= nnz(z) suffices."""
    return max(predual_ratios(z, w), default=0.0)


def ambient_norm(z: Point, spec: CompactSetSpec) -> float:
    if isinstance(spec, BlockSpec):
        return block_space_norm(z, spec.p)
    return lorentz_predual_norm(z, spec.weights)


def in_compact_set(z: Point, spec: CompactSetSpec, tol: float = MEMBERSHIP_TOL) -> bool:
    if isinstance(spec, BlockSpec):
        sums: dict[int, list[float]] = defaultdict(list)
        for i, v in z:
            sums[block_of_index(i)].append(abs(v) ** spec.p)
        return all(math.fsum(t) ** (1.0 / spec.p) <= spec.lam_at(n) + tol for n, t in sums.items())
    if z.length > spec.dim:
        return False
    r = decreasing_rearrangement(z)
    acc = 0.0
    for k in range(1, spec.dim + 1):
        if k <= len(r):
            acc += r[k - 1]
        if acc / spec.weights.W(k) > spec.lam[k - 1] + tol:
            return False
    return True


# ---------------------------------------------------------------------------
# dense (cloud) versions
# ---------------------------------------------------------------------------

def _pad(Z: np.ndarray, dim: int) -> np.ndarray:
    Z = np.atleast_2d(np.asarray(Z, dtype=complex))
    if Z.shape[1] < dim:
        Z = np.hstack([Z, np.zeros((Z.shape[0], dim - Z.shape[1]), dtype=complex)])
    return Z


def block_norms_dense(Z: np.ndarray, p: float, nblocks: int | None = None) -> np.ndarray:
    """Per-block l^p norms, shape (count, nblocks)."""
    Z = np.atleast_2d(np.asarray(Z, dtype=complex))
    if nblocks is None:
        nblocks = block_of_index(Z.shape[1]) if Z.shape[1] else 0
    Z = _pad(Z, s(nblocks))
    A = np.abs(Z) ** p
    out = np.empty((Z.shape[0], nblocks))
    for n in range(1, nblocks + 1):
        out[:, n - 1] = A[:, s(n - 1):s(n)].sum(axis=1) ** (1.0 / p)
    return out


def block_space_norm_dense(Z: np.ndarray, p: float) -> np.ndarray:
    N = block_norms_dense(Z, p)
    return N.max(axis=1) if N.shape[1] else np.zeros(N.shape[0])


def rearranged_partial_sums(Z: np.ndarray) -> np.ndarray:
    """Row-wise cumulative sums of the decreasing rearrangement of the moduli."""
    A = np.abs(np.atleast_2d(np.asarray(Z, dtype=complex)))
    return np.cumsum(-np.sort(-A, axis=1), axis=1)


def predual_norm_dense(Z: np.ndarray, w: LorentzWeights) -> np.ndarray:
    P = rearranged_partial_sums(Z)
    if P.shape[1] == 0:
        return np.zeros(P.shape[0])
    _require_prefix(P.shape[1], w)
    return (P / np.array(w.partial_sums[:P.shape[1]])).max(axis=1)


def ambient_norm_dense(Z: np.ndarray, spec: CompactSetSpec) -> np.ndarray:
    if isinstance(spec, BlockSpec):
        return block_space_norm_dense(Z, spec.p)
    return predual_norm_dense(Z, spec.weights)


def constraint_values(Z: np.ndarray, spec: CompactSetSpec) -> np.ndarray:
    """Left-hand sides of the defining constraints, one column per lambda entry."""
    Z = np.atleast_2d(np.asarray(Z, dtype=complex))
    L = len(spec.lam)
    if isinstance(spec, BlockSpec):
        return block_norms_dense(Z[:, :spec.dim], spec.p, L)
    P = rearranged_partial_sums(_pad(Z[:, :L], L))
    return P / np.array(spec.weights.partial_sums[:L])


def in_compact_set_dense(Z: np.ndarray, spec: CompactSetSpec, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
    Z = np.atleast_2d(np.asarray(Z, dtype=complex))
    ok = (constraint_values(Z, spec) <= np.array(spec.lam) + tol).all(axis=1)
    if Z.shape[1] > spec.dim:
        # coordinates past the lambda prefix are forced to vanish
        ok &= ~(Z[:, spec.dim:] != 0).any(axis=1)
    return ok


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def _uniforms_per_point(spec: CompactSetSpec) -> int:
    if isinstance(spec, BlockSpec):
        return 2 + 2 * len(spec.lam) + 3 * spec.dim
    return 3 + 4 * spec.dim


def _sample_block(spec: BlockSpec, U: np.ndarray, boundary: bool) -> np.ndarray:
    B, L, d, p = U.shape[0], len(spec.lam), spec.dim, spec.p
    on_boundary = (U[:, 0] < BOUNDARY_RATE) if boundary else np.zeros(B, bool)
    sparse = U[:, 1] < SPARSE_RATE
    u_rad, u_tight = U[:, 2:2 + L], U[:, 2 + L:2 + 2 * L]
    off = 2 + 2 * L
    u_exp, u_keep, u_phase = U[:, off:off + d], U[:, off + d:off + 2 * d], U[:, off + 2 * d:off + 3 * d]

    e = -np.log1p(-u_exp)
    e = e * (~sparse[:, None] | (u_keep < KEEP_RATE))
    Z = np.zeros((B, d), dtype=complex)
    for n in range(1, L + 1):
        cols = slice(s(n - 1), s(n))
        eb = e[:, cols]
        tot = eb.sum(axis=1)
        t = eb / np.where(tot > 0, tot, 1.0)[:, None]
        tight = on_boundary | (u_tight[:, n - 1] < TIGHT_RATE)
        rho = spec.lam[n - 1] * np.where(tight, 1.0, u_rad[:, n - 1] ** (1.0 / n))
        Z[:, cols] = (rho[:, None] * t ** (1.0 / p)) * np.exp(2j * np.pi * u_phase[:, cols])
    return Z


def _sample_lorentz(spec: LorentzSpec, U: np.ndarray, boundary: bool) -> np.ndarray:
    B, L = U.shape[0], spec.dim
    on_boundary = (U[:, 0] < BOUNDARY_RATE) if boundary else np.zeros(B, bool)
    sparse = U[:, 1] < SPARSE_RATE
    u_scale = U[:, 2]
    u_exp, u_keep = U[:, 3:3 + L], U[:, 3 + L:3 + 2 * L]
    u_phase, u_perm = U[:, 3 + 2 * L:3 + 3 * L], U[:, 3 + 3 * L:3 + 4 * L]

    e = -np.log1p(-u_exp)
    e = e * (~sparse[:, None] | (u_keep < KEEP_RATE))
    r = -np.sort(-e, axis=1)
    P = np.cumsum(r, axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(P > 0, spec.caps / np.where(P > 0, P, 1.0), np.inf)
    c = ratio.min(axis=1) if L else np.zeros(B)
    c = np.where(np.isfinite(c), c, 0.0)
    scale = np.where(on_boundary, c, c * u_scale ** (1.0 / max(L, 1)))
    r = r * scale[:, None]
    Z = np.zeros((B, L), dtype=complex)
    np.put_along_axis(Z, np.argsort(u_perm, axis=1), r.astype(complex), axis=1)
    return Z * np.exp(2j * np.pi * u_phase)


def sample_cloud(spec: CompactSetSpec, budget: int, seed: int, boundary: bool = True) -> np.ndarray:
    """``budget`` members of A_lambda as rows of a (budget, spec.dim) complex array.

    Each row consumes a fixed number of uniforms from one stream, so the cloud
    for a smaller budget is a prefix of the cloud for a larger one.
    """
    if budget < 0:
        raise DomainError("budget must be >= 0")
    U = np.random.default_rng(seed).random((budget, _uniforms_per_point(spec)))
    if isinstance(spec, BlockSpec):
        return _sample_block(spec, U, boundary)
    return _sample_lorentz(spec, U, boundary)


def sample_point(spec: CompactSetSpec, seed: int, boundary: bool = True) -> Point:
    return Point.from_dense(sample_cloud(spec, 1, seed, boundary)[0])


def close_under_truncation(Z: np.ndarray, cuts: Iterable[int]) -> np.ndarray:
    """Append, for every row and every cut c, the row with coordinates > c zeroed."""
    Z = np.atleast_2d(np.asarray(Z, dtype=complex))
    parts = [Z]
    for c in sorted(set(cuts)):
        if c < Z.shape[1]:
            T = Z.copy()
            T[:, max(c, 0):] = 0
            parts.append(T)
    return np.vstack(parts)


def is_truncation_closed(Z: np.ndarray, cuts: Iterable[int]) -> bool:
    # adding 0 turns -0.0 into 0.0 so that byte comparison matches value comparison
    Z = np.ascontiguousarray(np.atleast_2d(np.asarray(Z, dtype=complex))) + 0
    rows = {r.tobytes() for r in Z}
    for c in cuts:
        if c >= Z.shape[1]:
            continue
        T = Z.copy()
        T[:, max(c, 0):] = 0
        if any(r.tobytes() not in rows for r in np.ascontiguousarray(T)):
            return False
    return True


# ---------------------------------------------------------------------------
# epsilon nets
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class EpsilonNet(Sequence):
    """Finite eps-net of A_lambda built on a grid of spacing ``step`` in each real direction.

    ``grid`` holds integer coordinates (re_1, im_1, re_2, im_2, ...) of the
    ``dim`` gridded coordinates; net points are ``grid * step``.  Every member
    z of A_lambda is within eps of the net point obtained by rounding the real
    and imaginary parts of its first ``dim`` coordinates toward zero, which is
    itself a member because A_lambda is solid.
    """

    spec: CompactSetSpec
    eps: float
    step: float
    dim: int
    grid: np.ndarray

    def __post_init__(self):
        keys = {row.tobytes() for row in np.ascontiguousarray(self.grid)}
        object.__setattr__(self, "_keys", keys)

    def __len__(self) -> int:
        return self.grid.shape[0]

    def __getitem__(self, j):
        if isinstance(j, slice):
            return [self[i] for i in range(*j.indices(len(self)))]
        return Point.from_dense(self.dense()[j])

    def dense(self) -> np.ndarray:
        """Net points as a (size, dim) complex array."""
        g = self.grid.astype(float) * self.step if self.dim else self.grid.astype(float)
        return g[:, 0::2] + 1j * g[:, 1::2]

    def witness_grid(self, Z: np.ndarray) -> np.ndarray:
        Z = _pad(Z, self.dim)[:, :self.dim]
        if not self.dim:
            return np.zeros((Z.shape[0], 0), dtype=np.int64)
        G = np.empty((Z.shape[0], 2 * self.dim), dtype=np.int64)
        G[:, 0::2] = np.trunc(Z.real / self.step)
        G[:, 1::2] = np.trunc(Z.imag / self.step)
        return G

    def contains_grid(self, G: np.ndarray) -> np.ndarray:
        G = np.ascontiguousarray(G, dtype=np.int64)
        return np.array([row.tobytes() in self._keys for row in G], dtype=bool)

    def covering_distances(self, Z: np.ndarray) -> np.ndarray:
        """Distance from each row to its rounding witness; inf if the witness is not a net point."""
        Z = np.atleast_2d(np.asarray(Z, dtype=complex))
        G = self.witness_grid(Z)
        W = G[:, 0::2] * self.step + 1j * (G[:, 1::2] * self.step) if self.dim else G.astype(complex)
        D = Z.copy()
        D[:, :self.dim] -= W
        dist = ambient_norm_dense(D, self.spec)
        return np.where(self.contains_grid(G), dist, np.inf)

    def nearest_distances(self, Z: np.ndarray, max_pairs: int = 1_000_000) -> np.ndarray:
        """Brute-force distance from each row to the whole net (ambient norm)."""
        Z = _pad(Z, self.dim)
        N = self.dense()
        chunk = max(1, max_pairs // len(N))
        out = np.empty(Z.shape[0])
        for a in range(0, Z.shape[0], chunk):
            blk = Z[a:a + chunk]
            D = np.repeat(blk, N.shape[0], axis=0)
            D[:, :self.dim] -= np.tile(N, (blk.shape[0], 1))
            out[a:a + chunk] = ambient_norm_dense(D, self.spec).reshape(blk.shape[0], -1).min(axis=1)
        return out


def _disk_grid(radius: float, step: float) -> np.ndarray:
    R = int(math.floor(radius / step + 1e-9))
    a = np.arange(-R, R + 1)
    A, Bm = np.meshgrid(a, a, indexing="ij")
    pts = np.stack([A.ravel(), Bm.ravel()], axis=1)
    mod = np.hypot(pts[:, 0] * step, pts[:, 1] * step)
    return pts[mod <= radius + MEMBERSHIP_TOL]


def _grid_points(G: np.ndarray, step: float) -> np.ndarray:
    return G[:, 0::2] * step + 1j * (G[:, 1::2] * step)


def epsilon_net(spec: CompactSetSpec, eps: float, max_size: int = 2_000_000) -> EpsilonNet:
    """Finite eps-net of A_lambda contained in A_lambda.

    Block variant: keep the blocks 1..m0 where lambda_m > eps/2 and grid them
    with step eps / (2 sqrt(2) m0^(1/p)); the dropped tail has norm <= eps/2.
    Lorentz variant: a coordinate cut cannot bound the tail of a
    rearrangement-invariant set, so either the whole set lies in the eps/2 ball
    (net = {0}) or all len(lambda) coordinates are gridded, with step
    eps / (2 sqrt(2) L / W_L).
    """
    if not eps > 0:
        raise DomainError("eps must be positive")
    half = eps / 2
    if isinstance(spec, BlockSpec):
        big = [m for m in range(1, len(spec.lam) + 1) if spec.lam[m - 1] > half]
        m0 = max(big, default=0)
        if m0 == 0:
            return EpsilonNet(spec, eps, math.inf, 0, np.zeros((1, 0), dtype=np.int64))
        step = eps / (2 * math.sqrt(2) * m0 ** (1.0 / spec.p))
        factors = []
        for n in range(1, m0 + 1):
            lam = spec.lam[n - 1]
            disk = _disk_grid(lam, step)
            part = np.zeros((1, 0), dtype=np.int64)
            acc = np.zeros(1)
            for _ in range(n):
                mods = np.abs(_grid_points(disk, step)[:, 0]) ** spec.p
                new_acc = (acc[:, None] + mods[None, :]).ravel()
                keep = new_acc ** (1.0 / spec.p) <= lam + MEMBERSHIP_TOL
                part = np.hstack([np.repeat(part, len(disk), axis=0), np.tile(disk, (len(part), 1))])[keep]
                acc = new_acc[keep]
                if len(part) > max_size:
                    raise DomainError(f"eps-net too large (> {max_size} points); increase eps")
            factors.append(part)
        size = math.prod(len(f) for f in factors)
        if size > max_size:
            raise DomainError(f"eps-net too large ({size} points); increase eps")
        grid = factors[0]
        for f in factors[1:]:
            grid = np.hstack([np.repeat(grid, len(f), axis=0), np.tile(f, (len(grid), 1))])
        return EpsilonNet(spec, eps, step, s(m0), grid)

    L = spec.dim
    if max(spec.lam, default=0.0) <= half:
        return EpsilonNet(spec, eps, math.inf, 0, np.zeros((1, 0), dtype=np.int64))
    step = eps / (2 * math.sqrt(2) * L / spec.weights.W(L))
    disk = _disk_grid(spec.lam[0], step)
    caps = spec.caps
    grid = np.zeros((1, 0), dtype=np.int64)
    for j in range(1, L + 1):
        grid = np.hstack([np.repeat(grid, len(disk), axis=0), np.tile(disk, (len(grid), 1))])
        # a prefix of a member is a member, so prune on the first j coordinates
        P = rearranged_partial_sums(_grid_points(grid, step))
        grid = grid[(P <= caps[:j] + MEMBERSHIP_TOL * np.array(spec.weights.partial_sums[:j])).all(axis=1)]
        if len(grid) > max_size:
            raise DomainError(f"eps-net too large (> {max_size} points); increase eps")
    grid = grid[in_compact_set_dense(_grid_points(grid, step), spec)]
    return EpsilonNet(spec, eps, step, L, grid)
