"""Independent reference computations shared by the tests.

Everything here enumerates or integrates directly, without touching the
package's solver code paths, so it can serve as an oracle for them.
"""

import itertools

import numpy as np
from scipy import stats


def brute_max_matching(d):
    """Optimal square matching by permutation enumeration.

    Strict improvement keeps the lexicographically first optimum.
    """
    d = np.asarray(d, dtype=float)
    n = d.shape[0]
    best_val = -np.inf
    best = None
    for perm in itertools.permutations(range(n)):
        val = sum(d[i, perm[i]] for i in range(n))
        if val > best_val:
            best_val, best = val, perm
    return dict(enumerate(best)), best_val


def brute_full_optimum(values, k, l):
    """Exhaustive optimum over the entire feasible set, slot tuples included.

    values: (n, k*l) rate matrix. Every subframe injection is combined
    with every per-vehicle slot tuple; use only on tiny instances.
    """
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    best_val = -np.inf
    best_pairs = None
    for inj in itertools.permutations(range(l), n):
        for slots in itertools.product(range(k), repeat=n):
            val = sum(values[i, inj[i] * k + slots[i]] for i in range(n))
            if val > best_val:
                best_val = val
                best_pairs = {i: inj[i] * k + slots[i] for i in range(n)}
    return best_pairs, best_val


def assignment_to_x(pairs, k, l):
    """Vehicle-major indicator vector of an assignment."""
    x = np.zeros(k * l * l, dtype=np.int64)
    for i, sc in pairs.items():
        x[i * k * l + sc] = 1
    return x


def clamped_normal_mean(mu, sigma, lo, hi):
    """E[clip(X, lo, hi)] for X ~ N(mu, sigma), by the censored-moment formula."""
    a = (lo - mu) / sigma
    b = (hi - mu) / sigma
    phi = stats.norm.pdf
    Phi = stats.norm.cdf
    return (lo * Phi(a)
            + hi * (1.0 - Phi(b))
            + mu * (Phi(b) - Phi(a))
            - sigma * (phi(b) - phi(a)))
