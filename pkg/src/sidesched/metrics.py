"""Rate statistics over Monte-Carlo runs: CDFs, summary criteria, sweeps."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .errors import InfeasibleError
from .pipeline import RANDOM_STREAM, SCENARIO_STREAM, derive_seed, run_cell
from .scenario import Cluster

if TYPE_CHECKING:
    from .cli import ExperimentConfig


@dataclass
class EvalReport:
    """Pooled per-vehicle rates of one (method, bits) series, in bits/s."""

    method: str
    bits: int
    samples: np.ndarray
    highest_bps: float
    average_bps: float
    worst_bps: float
    std_dev_bps: float  # population convention
    cdf: list  # (rate_x_bps, Pr(rate < rate_x)) pairs


def build_report(samples, grid_points: int = 30, method: str = "",
                 bits: int = 0) -> EvalReport:
    """Summary stats plus the empirical strict-below CDF on an even grid.

    Probabilities are Pr(rate < x); the final grid point closes the curve
    at exactly 1. All-equal samples degenerate to a two-point jump.
    """
    s = np.asarray(samples, dtype=float).ravel()
    if s.size == 0:
        raise ValueError("samples must be non-empty")
    if not np.all(np.isfinite(s)):
        raise ValueError("samples must be finite")
    if grid_points < 2:
        raise ValueError("grid_points must be at least 2")
    lo, hi = float(s.min()), float(s.max())
    ordered = np.sort(s)
    if hi > lo:
        xs = np.linspace(lo, hi, grid_points)
        probs = np.searchsorted(ordered, xs, side="left") / s.size
        probs[-1] = 1.0
    else:
        xs = np.array([lo, np.nextafter(lo, np.inf)])
        probs = np.array([0.0, 1.0])
    cdf = list(zip(xs.tolist(), probs.tolist()))
    return EvalReport(method, bits, s, hi, float(s.mean()), lo,
                      float(s.std()), cdf)


@dataclass(frozen=True)
class SweepRow:
    method: str
    bits: int
    n_vehicles: int
    worst_rate_mean_bps: float


def sweep_density(config: ExperimentConfig, n_vehicles_list, bits_list,
                  repetitions: int) -> list[SweepRow]:
    """Mean-over-repetitions worst vehicle rate per (method, bits, N).

    Within one (repetition, N) cell the scenario draw is shared across
    methods and bit depths, so series differ only by algorithm and side
    information granularity.
    """
    grid = config.grid
    for n in n_vehicles_list:
        if n > grid.l:
            raise InfeasibleError(
                f"sweep point N={n} exceeds {grid.l} subframes")
    rows = []
    for method in config.methods:
        for bits in bits_list:
            for n in n_vehicles_list:
                worst = []
                for rep in range(repetitions):
                    cluster = Cluster(id=n, n_vehicles=n)
                    cell = run_cell(
                        grid, config.scenario, cluster, bits, method,
                        scenario_seed=derive_seed(
                            config.master_seed, SCENARIO_STREAM, rep, n),
                        solver_seed=derive_seed(
                            config.master_seed, RANDOM_STREAM, rep, n),
                        quant_lo_db=config.quant_lo_db,
                        quant_hi_db=config.quant_hi_db,
                        repetition=rep)
                    worst.append(cell.vehicle_rates_bps.min())
                rows.append(SweepRow(method, bits, n, float(np.mean(worst))))
    return rows
