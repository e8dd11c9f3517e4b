"""Brute-force reference computations used by the tests."""
import itertools

import numpy as np


def zoom_grid_max(f, hi, pts=41, iters=80, shrink=0.8):
    """Maximize f over [0, hi]^d by grid refinement around the best point so far.

    Points outside the domain of interest should get -inf from ``f``.
    """
    hi = np.asarray(hi, dtype=float)
    lo_box, hi_box = np.zeros_like(hi), hi.copy()
    best_x, best_v = None, -np.inf
    for _ in range(iters):
        axes = [np.linspace(a, b, pts) for a, b in zip(lo_box, hi_box)]
        X = np.array(list(itertools.product(*axes)))
        v = f(X)
        j = int(np.argmax(v))
        if v[j] > best_v:
            best_v, best_x = float(v[j]), X[j]
        if best_x is None:
            return -np.inf
        half = (hi_box - lo_box) * shrink / 2
        lo_box = np.maximum(best_x - half, 0.0)
        hi_box = np.minimum(best_x + half, hi)
    return best_v


def ray_grid_max(exponents, gauge):
    """sup of prod r_i^{e_i} over {r >= 0 : gauge(r) <= 1} for a positively homogeneous gauge.

    The objective is homogeneous of degree |e|, so each direction x on the
    simplex contributes prod x^e / gauge(x)^|e|; directions are grid searched.
    """
    e = np.asarray(exponents, dtype=float)
    d, deg = len(e), e.sum()
    if d == 1:
        return 1.0 / gauge(np.ones((1, 1)))[0] ** deg

    def value(Y):
        X = np.column_stack([Y, 1.0 - Y.sum(axis=1)])
        out = np.full(len(X), -np.inf)
        ok = (X > 0).all(axis=1)
        g = gauge(X[ok])
        with np.errstate(divide="ignore"):
            out[ok] = np.where(g > 0, np.prod(X[ok] ** e, axis=1) / g ** deg, np.inf)
        return out

    pts = 41 if d <= 3 else 15
    return zoom_grid_max(value, np.ones(d - 1), pts=pts)


def block_monomial_sup_oracle(m, lam, p):
    """Grid-searched sup of |z^m| over the block A_lambda, one block at a time."""
    total = 1.0
    n, start = 1, 1
    while start <= m.length:
        e = [m[i] for i in range(start, start + n) if m[i] > 0]
        if e:
            lam_n = lam[n - 1] if n <= len(lam) else 0.0
            if lam_n == 0:
                return 0.0
            total *= ray_grid_max(e, lambda X: (X ** p).sum(axis=1) ** (1 / p) / lam_n)
        start += n
        n += 1
    return total


def lorentz_monomial_sup_oracle(m, caps):
    """Grid-searched sup of |z^m| under the top-k sum bounds ``caps``, on supp(m)."""
    caps = np.asarray(caps, dtype=float)
    if m.length > len(caps) or caps.min() <= 0:
        return 0.0
    e = [m[i] for i in m.support()]
    d = len(e)

    def gauge(X):
        P = np.cumsum(-np.sort(-X, axis=1), axis=1)
        full = np.column_stack([P, np.repeat(P[:, -1:], len(caps) - d, axis=1)])
        return (full / caps).max(axis=1)

    return ray_grid_max(e, gauge)


def lorentz_norm_by_permutations(moduli, w):
    """max over all orderings sigma of sum_i |z_sigma(i)| w_i (exhaustive)."""
    moduli = np.asarray(moduli, dtype=float)
    if moduli.size == 0:
        return 0.0
    perms = np.array(list(itertools.permutations(range(moduli.size))))
    return float((moduli[perms] @ np.asarray(w[:moduli.size], dtype=float)).max())
