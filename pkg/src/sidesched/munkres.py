"""Maximum-weight perfect matching on a square matrix.

Shortest-augmenting-path variant of the Kuhn-Munkres algorithm with dual
potentials, O(n^3) overall. Maximization is turned into a non-negative
minimization by subtracting every weight from the matrix maximum; the
per-matrix constant offset never changes which matching is optimal, so
adding any constant to all weights leaves the argmax intact.

Tie-breaking is deterministic: among equally tight columns the lowest
index wins, and an earlier predecessor is kept over a later equal one.
"""

from __future__ import annotations

import numpy as np


def max_weight_assignment(weights):
    """Best column per row under the one-to-one constraint.

    Returns ``(col_of_row, total)`` where ``col_of_row[i]`` is the column
    matched to row ``i`` and ``total`` is the matching weight, summed in
    row order.
    """
    w = np.asarray(weights, dtype=float)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {w.shape}")
    if w.size == 0:
        raise ValueError("matrix must be non-empty")
    if not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite")
    n = w.shape[0]
    cost = w.max() - w

    # col_row[j]: row matched to column j, -1 while free; column n is the
    # virtual root holding the row currently being inserted.
    col_row = np.full(n + 1, -1, dtype=np.int64)
    u = np.zeros(n)      # row potentials
    v = np.zeros(n + 1)  # column potentials
    for i in range(n):
        col_row[n] = i
        j0 = n
        minv = np.full(n, np.inf)            # tightest slack seen per column
        way = np.full(n, n, dtype=np.int64)  # predecessor column in the tree
        used = np.zeros(n + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = col_row[j0]
            fidx = np.flatnonzero(~used[:n])
            slack = cost[i0, fidx] - u[i0] - v[fidx]
            improved = slack < minv[fidx]
            upd = fidx[improved]
            minv[upd] = slack[improved]
            way[upd] = j0
            j1 = fidx[np.argmin(minv[fidx])]
            delta = minv[j1]
            # grow potentials so tree edges stay tight
            usedj = np.flatnonzero(used)
            u[col_row[usedj]] += delta
            v[usedj] -= delta
            minv[fidx] -= delta
            j0 = j1
            if col_row[j0] < 0:
                break
        # augment: pull matches back along the alternating path
        while j0 != n:
            j1 = way[j0]
            col_row[j0] = col_row[j1]
            j0 = int(j1)

    col_of_row = np.empty(n, dtype=np.int64)
    col_of_row[col_row[:n]] = np.arange(n)
    total = float(w[np.arange(n), col_of_row].sum())
    return col_of_row, total
