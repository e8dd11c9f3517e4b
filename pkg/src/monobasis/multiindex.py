"""Multi-indices, the square ordering of monomials and a compatible global ordering."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import DomainError, PreconditionError


@dataclass(frozen=True)
class MultiIndex:
    """Exponents (m_1, m_2, ..., m_l) of the monomial z_1^m_1 ... z_l^m_l.

    Stored densely with trailing zeros stripped, so ``len(exponents)`` is the
    length l(m) and the empty tuple is the constant monomial.
    """

    exponents: tuple[int, ...] = ()

    def __post_init__(self):
        e = [int(x) for x in self.exponents]
        if any(x < 0 for x in e):
            raise DomainError("exponents must be >= 0")
        while e and e[-1] == 0:
            e.pop()
        object.__setattr__(self, "exponents", tuple(e))

    @classmethod
    def of(cls, *exponents: int) -> "MultiIndex":
        return cls(tuple(exponents))

    @classmethod
    def from_sparse(cls, mapping: Mapping[int, int]) -> "MultiIndex":
        mapping = {int(k): int(v) for k, v in mapping.items() if int(v) != 0}
        if any(k < 1 for k in mapping):
            raise DomainError("coordinate indices start at 1")
        top = max(mapping, default=0)
        return cls(tuple(mapping.get(k, 0) for k in range(1, top + 1)))

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    @property
    def length(self) -> int:
        return len(self.exponents)

    def __getitem__(self, k: int) -> int:
        """Exponent of coordinate k (1-based); 0 outside the stored range."""
        return self.exponents[k - 1] if 1 <= k <= len(self.exponents) else 0

    def support(self) -> tuple[int, ...]:
        return tuple(k for k, e in enumerate(self.exponents, start=1) if e)

    def times(self, k: int) -> "MultiIndex":
        """Multi-index of z^m * z_k."""
        e = list(self.exponents) + [0] * max(0, k - len(self.exponents))
        e[k - 1] += 1
        return MultiIndex(tuple(e))

    def __add__(self, other: "MultiIndex") -> "MultiIndex":
        n = max(self.length, other.length)
        return MultiIndex(tuple(self[k] + other[k] for k in range(1, n + 1)))

    def to_sparse(self) -> dict[int, int]:
        return {k: e for k, e in enumerate(self.exponents, start=1) if e}

    def to_json(self) -> dict[str, int]:
        return {str(k): e for k, e in self.to_sparse().items()}

    @classmethod
    def from_json(cls, obj: Mapping[str, int]) -> "MultiIndex":
        return cls.from_sparse({int(k): v for k, v in obj.items()})

    def __repr__(self) -> str:
        return f"MultiIndex({self.exponents!r})"


def degree_and_length(m: MultiIndex) -> tuple[int, int]:
    return m.degree, m.length


def square_key(m: MultiIndex) -> tuple[int, tuple[int, ...]]:
    # length first, then exponents read from the highest coordinate down
    return m.length, m.exponents[::-1]


def square_cmp(m: MultiIndex, other: MultiIndex) -> int:
    """-1, 0 or 1 as m is less than, equal to or greater than ``other`` in square order.

    m < other iff l(m) < l(other), or the lengths agree and at the highest
    coordinate where they differ m has the smaller exponent.
    """
    a, b = square_key(m), square_key(other)
    return (a > b) - (a < b)


def count_monomials(n: int, k_max: int) -> int:
    """Number of multi-indices with degree n and length <= k_max."""
    if k_max == 0:
        return int(n == 0)
    return math.comb(n + k_max - 1, k_max - 1)


def _weak_compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    # lexicographic order of (m_parts, ..., m_1)
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _weak_compositions(total - first, parts - 1):
            yield (first,) + rest


def iter_monomials(n: int, k_max: int) -> Iterator[MultiIndex]:
    """Degree-n multi-indices of length <= k_max, lazily, in square order."""
    if n < 0 or k_max < 0:
        raise DomainError("degree and length bound must be >= 0")
    if n == 0:
        yield MultiIndex()
        return
    if k_max == 0:
        return
    for desc in _weak_compositions(n, k_max):
        yield MultiIndex(desc[::-1])


@dataclass(frozen=True)
class OrderedMonomialBasis(Sequence):
    """Square-ordered degree-n monomials of length at most ``max_length``."""

    degree: int
    max_length: int
    elements: tuple[MultiIndex, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __getitem__(self, r):
        return self.elements[r]

    def __iter__(self) -> Iterator[MultiIndex]:
        return iter(self.elements)

    def index(self, m: MultiIndex, *args) -> int:
        if m.degree != self.degree or m.length > self.max_length:
            raise ValueError(f"{m!r} is not in this basis")
        return rank(m, self.max_length)

    def to_json(self) -> list[dict[str, int]]:
        return [m.to_json() for m in self.elements]


def enumerate_monomials(n: int, k_max: int) -> OrderedMonomialBasis:
    return OrderedMonomialBasis(n, k_max, tuple(iter_monomials(n, k_max)))


def stratum(n: int, k: int) -> list[MultiIndex]:
    """Square-ordered degree-n multi-indices of length exactly k."""
    if n == 0:
        return [MultiIndex()] if k == 0 else []
    if k == 0:
        return []
    return [m.times(k) for m in iter_monomials(n - 1, k)]


def recursive_extend(bases: Sequence[Sequence[MultiIndex]], k: int) -> list[MultiIndex]:
    """Ordered basis of P_k(^{n+1}X) from the ordered bases of P_i(^nX), i = 1..k.

    ``bases[i-1]`` lists the degree-n monomials of length i.  The inputs are
    concatenated in order and every element is multiplied by z_k.
    """
    if k < 1 or len(bases) < k:
        raise PreconditionError(f"need ordered bases for lengths 1..{k}")
    joined = [m for i in range(k) for m in bases[i]]
    degrees = {m.degree for m in joined}
    if len(degrees) > 1:
        raise PreconditionError("input bases mix degrees")
    for i in range(k):
        if any(m.length != i + 1 for m in bases[i]):
            raise PreconditionError(f"basis {i + 1} contains a monomial of another length")
    keys = [square_key(m) for m in joined]
    if any(a >= b for a, b in zip(keys, keys[1:])):
        raise PreconditionError("input bases are not strictly square-ordered")
    return [m.times(k) for m in joined]


def rank(m: MultiIndex, k_max: int) -> int:
    """0-based position of m in ``enumerate_monomials(|m|, k_max)``.

    The position does not depend on k_max once k_max >= l(m).
    """
    if m.length > k_max:
        raise DomainError(f"length {m.length} exceeds k_max = {k_max}")
    remaining, r = m.degree, 0
    for j in range(k_max, 1, -1):
        for v in range(m[j]):
            r += math.comb(remaining - v + j - 2, j - 2)
        remaining -= m[j]
    return r


def unrank(n: int, r: int, k_max: int) -> MultiIndex:
    """Inverse of :func:`rank` on degree-n multi-indices of length <= k_max."""
    total = count_monomials(n, k_max)
    if not 0 <= r < total:
        raise DomainError(f"rank {r} out of range [0, {total})")
    if n == 0:
        return MultiIndex()
    e = [0] * k_max
    remaining = n
    for j in range(k_max, 1, -1):
        v = 0
        while True:
            block = math.comb(remaining - v + j - 2, j - 2)
            if r < block:
                break
            r -= block
            v += 1
        e[j - 1] = v
        remaining -= v
    e[0] = remaining
    return MultiIndex(tuple(e))


def compatible_rank(n: int, r: int) -> int:
    """Global position of the r-th degree-n monomial: pairs ordered by n + r, then n."""
    if n < 0 or r < 0:
        raise DomainError("degree and rank must be >= 0")
    d = n + r
    return d * (d + 1) // 2 + n


def compatible_unrank(g: int) -> tuple[int, int]:
    if g < 0:
        raise DomainError("global position must be >= 0")
    d = (math.isqrt(8 * g + 1) - 1) // 2
    n = g - d * (d + 1) // 2
    return n, d - n


def global_key(m: MultiIndex) -> int:
    """Position of z^m in the compatible ordering used for partial sums."""
    return compatible_rank(m.degree, rank(m, max(m.length, 1)))


def iter_in_compatible_order(multi_indices: Iterable[MultiIndex]) -> list[MultiIndex]:
    return sorted(multi_indices, key=global_key)
