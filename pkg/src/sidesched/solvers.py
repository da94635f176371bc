"""Assignment methods: optimal matching, greedy, feasible-random, brute force.

Every method returns an ``Assignment`` mapping vehicle indices to global
subchannel indices with at most one vehicle per subframe. The optimal
route (``solve_proposed``) works on the compressed square problem; the
baselines work directly on a rate matrix. ``solve_oracle`` enumerates
the whole feasible set and is capped to small instances.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .errors import CapacityError, ConstraintViolation, InfeasibleError, ShapeError
from .grid import ResourceGrid, subframe_of
from .munkres import max_weight_assignment

if TYPE_CHECKING:
    from .assignment import ReducedProblem
    from .sideinfo import RateMatrix

METHODS = ("proposed", "greedy", "random", "oracle")

# Brute-force caps: L! injections stop being cheap fast.
ORACLE_MAX_L = 8
ORACLE_MAX_K = 4


@dataclass
class Assignment:
    """Chosen subchannel per vehicle for one cluster."""

    cluster_id: int
    pairs: dict[int, int]  # vehicle index -> global subchannel index
    method: str


@dataclass
class SolveStats:
    """Sum rates of one solve; decision is what the scheduler believed."""

    sum_rate_decision_bps: float
    sum_rate_truth_bps: float
    runtime_s: float = 0.0


def verify_assignment(assignment: Assignment, grid: ResourceGrid) -> None:
    """Raise ConstraintViolation when two vehicles share a subframe."""
    owner = {}
    for i in sorted(assignment.pairs):
        sc = assignment.pairs[i]
        sf = subframe_of(grid, sc)
        if sf in owner:
            j = owner[sf]
            raise ConstraintViolation(
                f"vehicles {j} and {i} share subframe {sf} "
                f"(subchannels {assignment.pairs[j]} and {sc})")
        owner[sf] = i


def solve_proposed(reduced: ReducedProblem) -> dict[int, int]:
    """Optimal vehicle-to-subframe bijection on the compressed weights."""
    d = np.asarray(reduced.d, dtype=float)
    cols, _ = max_weight_assignment(d)
    return {i: int(cols[i]) for i in range(d.shape[0])}


def solve_greedy(decision: RateMatrix, grid: ResourceGrid) -> Assignment:
    """First-come first-served baseline.

    Vehicles in ascending index order take the best decision-rate
    subchannel among subframes nobody claimed yet; ties go to the lowest
    subchannel index.
    """
    vals = decision.values
    n = vals.shape[0]
    if vals.shape[1] != grid.n_subchannels:
        raise ShapeError(
            f"rate matrix has {vals.shape[1]} columns, grid has {grid.n_subchannels}")
    if n > grid.l:
        raise InfeasibleError(f"{n} vehicles exceed {grid.l} subframes")
    free = np.ones(grid.l, dtype=bool)
    pairs = {}
    for i in range(n):
        masked = np.where(np.repeat(free, grid.k), vals[i], -np.inf)
        sc = int(np.argmax(masked))  # first hit = lowest index on ties
        pairs[i] = sc
        free[sc // grid.k] = False
    return Assignment(decision.cluster_id, pairs, "greedy")


def solve_random(grid: ResourceGrid, n_vehicles: int, rng,
                 cluster_id: int = 0) -> Assignment:
    """Feasible-random baseline: uniform subframe injection, uniform slot."""
    if n_vehicles < 1:
        raise ValueError("n_vehicles must be positive")
    if n_vehicles > grid.l:
        raise InfeasibleError(f"{n_vehicles} vehicles exceed {grid.l} subframes")
    frames = rng.permutation(grid.l)[:n_vehicles]
    slots = rng.integers(0, grid.k, size=n_vehicles)
    pairs = {i: int(frames[i]) * grid.k + int(slots[i]) for i in range(n_vehicles)}
    return Assignment(cluster_id, pairs, "random")


def solve_oracle(decision: RateMatrix, grid: ResourceGrid,
                 max_l: int = ORACLE_MAX_L, max_k: int = ORACLE_MAX_K) -> Assignment:
    """Exhaustive optimum over every subframe injection and slot choice.

    Slot choices factor per vehicle (one vehicle per subframe), so each
    injection is scored from a per-vehicle scan of its K slots. Ties keep
    the lexicographically first injection and the lowest slot.
    """
    if grid.l > max_l or grid.k > max_k:
        raise CapacityError(
            f"oracle capped at l <= {max_l} and k <= {max_k}, "
            f"got l={grid.l}, k={grid.k}")
    vals = decision.values
    n = vals.shape[0]
    if vals.shape[1] != grid.n_subchannels:
        raise ShapeError(
            f"rate matrix has {vals.shape[1]} columns, grid has {grid.n_subchannels}")
    if n > grid.l:
        raise InfeasibleError(f"{n} vehicles exceed {grid.l} subframes")
    rows = vals.tolist()
    best_rate = []
    best_slot = []
    for i in range(n):
        rates_i = []
        slots_i = []
        for f in range(grid.l):
            base = f * grid.k
            r_best, s_best = rows[i][base], 0
            for s in range(1, grid.k):
                r = rows[i][base + s]
                if r > r_best:
                    r_best, s_best = r, s
            rates_i.append(r_best)
            slots_i.append(s_best)
        best_rate.append(rates_i)
        best_slot.append(slots_i)
    best_total = -np.inf
    best_inj = None
    for inj in itertools.permutations(range(grid.l), n):
        total = 0.0
        for rates_i, f in zip(best_rate, inj):
            total += rates_i[f]
        if total > best_total:
            best_total, best_inj = total, inj
    pairs = {i: f * grid.k + best_slot[i][f] for i, f in enumerate(best_inj)}
    return Assignment(decision.cluster_id, pairs, "oracle")


def evaluate(assignment: Assignment, decision: RateMatrix, truth: RateMatrix,
             dummy_mask=None, runtime_s: float = 0.0):
    """Strip dummies; return SolveStats and per-real-vehicle truth rates.

    Rates come back in ascending vehicle order. Both sums cover real
    vehicles only.
    """
    rows = [i for i in sorted(assignment.pairs)
            if dummy_mask is None or not dummy_mask[i]]
    cols = [assignment.pairs[i] for i in rows]
    truth_rates = truth.values[rows, cols].astype(float)
    dec_sum = float(decision.values[rows, cols].sum())
    stats = SolveStats(dec_sum, float(truth_rates.sum()), runtime_s)
    return stats, truth_rates
