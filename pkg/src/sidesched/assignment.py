"""Square reduction of the constrained per-cluster matching problem.

The full problem pairs L vehicles (dummies included) with the K*L
subchannels of a window under two constraint families: every vehicle
takes exactly one subchannel, and every subframe serves exactly one
vehicle. Since a subframe admits a single vehicle, only that vehicle's
best in-subframe slot can appear in an optimum, so each K-wide block
collapses to one macro choice. That leaves an L x L table of block
maxima plus the slot attaining each maximum; solving the square problem
and re-expanding the stored slots loses nothing of the sum rate.

Cost vectors are vehicle-major: entry i*(K*L) + k is vehicle i on global
subchannel k, with k = l*K + slot.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, ConstraintViolation, ShapeError
from .solvers import Assignment

#: Largest L for which the full constraint matrix may be materialized.
#: Reduced-form solves carry no such cap.
DEFAULT_L_CAP = 64


@dataclass(frozen=True)
class FullProblem:
    """Explicit form: weights plus the binary constraint rows."""

    cost: np.ndarray         # (K*L*L,) vehicle-major weights
    constraints: np.ndarray  # (2L, K*L*L); A @ x == 1 for feasible x
    k: int
    l: int


@dataclass(frozen=True)
class ReducedProblem:
    """Square form after per-subframe block compression."""

    d: np.ndarray            # (L, L) block maxima, or softened values
    argmax_slot: np.ndarray  # (L, L) in-subframe slot attaining each maximum
    k: int
    l: int


def _check_cost(cost_vector, k: int, l: int) -> np.ndarray:
    c = np.asarray(cost_vector, dtype=float).ravel()
    if k < 1 or l < 1:
        raise ValueError(f"need k >= 1 and l >= 1, got k={k}, l={l}")
    if c.size != k * l * l:
        raise ShapeError(
            f"cost vector has {c.size} entries, expected k*l*l = {k * l * l}")
    if not np.all(np.isfinite(c)):
        raise ValueError("cost entries must be finite")
    return c


def build_constraint_matrix(k: int, l: int, l_cap: int = DEFAULT_L_CAP) -> np.ndarray:
    """Tensor expansion of the one-per-vehicle / one-per-subframe rows.

    Rows 0..L-1 tie each vehicle to exactly one of its K*L entries; rows
    L..2L-1 tie each subframe to exactly one vehicle. Every column holds
    exactly two ones, one from each family.
    """
    if k < 1 or l < 1:
        raise ValueError(f"need k >= 1 and l >= 1, got k={k}, l={l}")
    if l > l_cap:
        raise CapacityError(
            f"full constraint matrix for l={l} exceeds the cap of {l_cap}; "
            "use the reduced form instead")
    eye = np.eye(l, dtype=np.int8)
    per_vehicle = np.kron(eye, np.ones((1, k * l), dtype=np.int8))
    per_subframe = np.kron(np.ones((1, l), dtype=np.int8),
                           np.kron(eye, np.ones((1, k), dtype=np.int8)))
    return np.vstack([per_vehicle, per_subframe])


def build_full_problem(cost_vector, k: int, l: int,
                       l_cap: int = DEFAULT_L_CAP) -> FullProblem:
    c = _check_cost(cost_vector, k, l)
    return FullProblem(c, build_constraint_matrix(k, l, l_cap), k, l)


def compress(cost_vector, k: int, l: int, beta: float | None = None) -> ReducedProblem:
    """Per-(vehicle, subframe) block maxima over the K in-subframe slots.

    ``beta`` switches the values to the log-sum-exp softening
    (1/beta) * log(sum(exp(beta * c))) per block, which approaches the
    exact maximum from above within (ln K) / beta. The stored argmax is
    the exact one either way, ties resolved to the lowest slot.
    """
    c = _check_cost(cost_vector, k, l)
    blocks = c.reshape(l, l, k)  # (vehicle, subframe, slot)
    argmax_slot = blocks.argmax(axis=2).astype(np.int64)
    exact = blocks.max(axis=2)
    if beta is None:
        d = exact
    else:
        if beta <= 0:
            raise ValueError("beta must be positive")
        d = exact + np.log(np.exp(beta * (blocks - exact[:, :, None])).sum(axis=2)) / beta
    return ReducedProblem(d, argmax_slot, k, l)


def expand_solution(reduced_assignment: dict, reduced: ReducedProblem,
                    k: int | None = None, *, cluster_id: int = 0,
                    method: str = "proposed") -> Assignment:
    """Vehicle-to-subframe bijection back to global subchannel indices.

    Each vehicle lands on the stored best slot of its subframe, i.e.
    subchannel l*K + argmax_slot[vehicle, l].
    """
    k = reduced.k if k is None else k
    l = reduced.l
    items = sorted(reduced_assignment.items())
    if [i for i, _ in items] != list(range(l)) or \
            sorted(f for _, f in items) != list(range(l)):
        raise ConstraintViolation(
            "reduced assignment must map vehicles 0..L-1 onto subframes 0..L-1 "
            "one-to-one")
    pairs = {i: f * k + int(reduced.argmax_slot[i, f]) for i, f in items}
    return Assignment(cluster_id=cluster_id, pairs=pairs, method=method)
