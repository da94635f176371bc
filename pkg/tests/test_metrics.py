"""Report statistics, CDF conventions, density sweep."""

import numpy as np
import pytest

from sidesched.cli import ExperimentConfig
from sidesched.errors import InfeasibleError
from sidesched.grid import ResourceGrid
from sidesched.metrics import build_report, sweep_density
from sidesched.scenario import ScenarioModel


def tiny_config(**over):
    base = dict(
        grid=ResourceGrid(k=2, l=8),
        scenario=ScenarioModel(kind="uniform", seed=0),
        cluster_sizes=(8,),
        bits_list=(0,),
        methods=("proposed",),
        repetitions=3,
        master_seed=404,
    )
    base.update(over)
    return ExperimentConfig(**base)


class TestBuildReport:
    def test_all_equal_samples_jump(self):
        rep = build_report([5.0, 5.0, 5.0])
        xs = [x for x, _ in rep.cdf]
        ps = [p for _, p in rep.cdf]
        assert ps == [0.0, 1.0]
        assert xs[0] == 5.0
        assert xs[1] > 5.0  # jump closes immediately above the atom
        assert rep.highest_bps == rep.worst_bps == rep.average_bps == 5.0
        assert rep.std_dev_bps == 0.0

    def test_two_samples_summary(self):
        rep = build_report([2.0, 4.0], grid_points=3)
        assert rep.average_bps == 3.0
        assert rep.std_dev_bps == 1.0  # population convention
        assert rep.worst_bps == 2.0
        assert rep.highest_bps == 4.0
        # strict inequality: only the sample at 2 lies below 3
        assert rep.cdf[1] == (3.0, 0.5)
        assert rep.cdf[0] == (2.0, 0.0)
        assert rep.cdf[-1] == (4.0, 1.0)

    def test_cdf_monotone_and_closed(self):
        rng = np.random.default_rng(12)
        rep = build_report(rng.exponential(2.0, 500), grid_points=40)
        ps = np.array([p for _, p in rep.cdf])
        xs = np.array([x for x, _ in rep.cdf])
        assert ps[0] == 0.0
        assert ps[-1] == 1.0
        assert np.all(np.diff(ps) >= 0)
        assert np.all(np.diff(xs) > 0)
        assert len(rep.cdf) == 40

    def test_uniform_cdf_tracks_identity(self):
        # Dvoretzky-Kiefer-Wolfowitz style check on 10**4 uniforms
        rng = np.random.default_rng(77)
        s = rng.random(10_000)
        rep = build_report(s, grid_points=101)
        xs = np.array([x for x, _ in rep.cdf])
        ps = np.array([p for _, p in rep.cdf])
        span = xs[-1] - xs[0]
        ideal = (xs - xs[0]) / span
        assert np.max(np.abs(ps - ideal)) < 0.02

    def test_summary_ordering_holds(self):
        rng = np.random.default_rng(31)
        rep = build_report(rng.uniform(1, 9, 1000))
        assert rep.worst_bps <= rep.average_bps <= rep.highest_bps

    def test_tags_carried(self):
        rep = build_report([1.0, 2.0], method="greedy", bits=3)
        assert (rep.method, rep.bits) == ("greedy", 3)

    def test_rejects_empty_and_bad_grid(self):
        with pytest.raises(ValueError):
            build_report([])
        with pytest.raises(ValueError):
            build_report([1.0], grid_points=1)
        with pytest.raises(ValueError):
            build_report([np.nan])


class TestSweepDensity:
    def test_deterministic(self):
        cfg = tiny_config()
        a = sweep_density(cfg, [2, 6], [0], 2)
        b = sweep_density(cfg, [2, 6], [0], 2)
        assert a == b

    def test_row_grid(self):
        cfg = tiny_config(methods=("proposed", "greedy"))
        rows = sweep_density(cfg, [2, 4], [0, 2], 1)
        keys = {(r.method, r.bits, r.n_vehicles) for r in rows}
        assert len(rows) == 8
        assert ("greedy", 2, 4) in keys

    def test_congestion_lowers_worst_rate(self):
        # lightly loaded beats fully loaded for the optimal method
        cfg = tiny_config(repetitions=100)
        rows = sweep_density(cfg, [2, 8], [0], 100)
        by_n = {r.n_vehicles: r.worst_rate_mean_bps for r in rows}
        assert by_n[2] >= by_n[8]

    def test_rejects_overload(self):
        with pytest.raises(InfeasibleError):
            sweep_density(tiny_config(), [9], [0], 1)
