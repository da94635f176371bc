"""Per-cluster SINR side information: synthetic models and CSV ingestion.

A cluster's side information is an N x (K*L) matrix of fine-grained SINR
in dB, one row per vehicle and one column per subchannel of the window.
The scheduling math consumes only this matrix, so where it comes from is
pluggable: seeded statistical models here, or externally measured values
via ``ingest_sinr``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleError, ParseError, ShapeError
from .grid import ResourceGrid

SCENARIO_KINDS = ("uniform", "gaussian", "two-state")

#: Transmit power (dBm) the synthetic SINR levels are calibrated to.
REFERENCE_P_T_DBM = 23.0


@dataclass(frozen=True)
class Cluster:
    """A co-scheduled vehicle group sharing one window of subchannels."""

    id: int
    n_vehicles: int
    vehicle_ids: tuple[str, ...] = ()  # optional opaque labels, row order

    def __post_init__(self):
        if self.n_vehicles < 1:
            raise ValueError(f"cluster {self.id} needs at least one vehicle")
        if self.vehicle_ids:
            if len(self.vehicle_ids) != self.n_vehicles:
                raise ValueError(
                    f"cluster {self.id}: {len(self.vehicle_ids)} ids for "
                    f"{self.n_vehicles} vehicles")
            if len(set(self.vehicle_ids)) != len(self.vehicle_ids):
                raise ValueError(f"cluster {self.id}: duplicate vehicle ids")


def make_clusters(sizes) -> list[Cluster]:
    """Clusters with globally unique vehicle labels, one per size entry."""
    return [
        Cluster(j, n, tuple(f"c{j}-v{i}" for i in range(n)))
        for j, n in enumerate(sizes)
    ]


@dataclass
class SinrMatrix:
    """Finite SINR values in dB, vehicles along rows, subchannels along columns."""

    cluster_id: int
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2:
            raise ShapeError(
                f"SINR matrix must be 2-D, got ndim={self.values.ndim}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("SINR values must be finite")


@dataclass(frozen=True)
class ScenarioModel:
    """Synthetic SINR generator parameters. All levels are in dB.

    ``uniform`` draws on [floor, ceil]. ``gaussian`` draws around
    ``mean_db``. ``two-state`` first puts each vehicle in a good or a bad
    channel state (bad with probability ``p_bad``), then draws its whole
    row around that state's center, so subchannel variation rides on a
    per-vehicle level. Gaussian and two-state levels shift with transmit
    power relative to the reference; everything clamps to [floor, ceil].
    """

    kind: str = "uniform"
    mean_db: float = 10.0
    std_db: float = 8.0
    bad_mean_db: float = -5.0   # low-state center, two-state only
    p_bad: float = 0.2          # low-state probability, two-state only
    sinr_floor_db: float = -15.0
    sinr_ceil_db: float = 35.0
    p_t_dbm: float = 23.0       # transmit power behind the levels
    seed: int = 0

    def __post_init__(self):
        if self.kind not in SCENARIO_KINDS:
            raise ValueError(
                f"unknown scenario kind {self.kind!r}, expected one of {SCENARIO_KINDS}")
        if not self.sinr_floor_db < self.sinr_ceil_db:
            raise ValueError("sinr_floor_db must be below sinr_ceil_db")
        if self.std_db < 0:
            raise ValueError("std_db must be non-negative")
        if not 0.0 <= self.p_bad <= 1.0:
            raise ValueError("p_bad must lie in [0, 1]")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


def generate_sinr(model: ScenarioModel, cluster: Cluster, grid: ResourceGrid) -> SinrMatrix:
    """Draw the cluster's SINR matrix.

    Deterministic in (model.seed, cluster.id): the stream is split per
    cluster, so regenerating any one cluster gives identical values
    regardless of generation order.
    """
    rng = np.random.default_rng(
        np.random.SeedSequence(entropy=model.seed, spawn_key=(cluster.id,)))
    shape = (cluster.n_vehicles, grid.n_subchannels)
    shift = model.p_t_dbm - REFERENCE_P_T_DBM
    if model.kind == "uniform":
        # support pinned to the clamp range; power shift has nothing to move
        vals = rng.uniform(model.sinr_floor_db, model.sinr_ceil_db, shape)
    elif model.kind == "gaussian":
        vals = rng.normal(model.mean_db + shift, model.std_db, shape)
    else:  # two-state
        # state is a property of the vehicle, not of the subchannel
        bad_row = rng.random((cluster.n_vehicles, 1)) < model.p_bad
        centers = np.where(bad_row, model.bad_mean_db, model.mean_db) + shift
        vals = rng.normal(centers, model.std_db, shape)
    vals = np.clip(vals, model.sinr_floor_db, model.sinr_ceil_db)
    return SinrMatrix(cluster.id, vals)


def ingest_sinr(path, cluster: Cluster, grid: ResourceGrid) -> SinrMatrix:
    """Read externally produced SINR values.

    Expected layout: header ``vehicle,<k0>,<k1>,...`` naming one column
    per subchannel, then one row per vehicle whose first cell is the
    vehicle label. Errors carry the 1-based data row and column.
    """
    expected = grid.n_subchannels
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file") from None
        if not header or header[0].strip().lower() != "vehicle":
            raise ParseError(f"{path}: header must start with 'vehicle'")
        if len(header) - 1 != expected:
            raise ShapeError(
                f"{path}: header names {len(header) - 1} subchannel columns, "
                f"grid has {expected}")
        rows = []
        for r, record in enumerate(reader, start=1):
            if len(record) - 1 != expected:
                raise ShapeError(
                    f"{path}: row {r} has {len(record) - 1} value columns, "
                    f"expected {expected}")
            parsed = []
            for c, cell in enumerate(record[1:], start=1):
                try:
                    x = float(cell)
                except ValueError:
                    raise ParseError(
                        f"{path}: row {r}, column {c}: {cell!r} is not a number",
                        row=r, col=c) from None
                if not math.isfinite(x):
                    raise ParseError(
                        f"{path}: row {r}, column {c}: non-finite value {cell!r}",
                        row=r, col=c)
                parsed.append(x)
            rows.append(parsed)
    if len(rows) != cluster.n_vehicles:
        raise ShapeError(
            f"{path}: {len(rows)} vehicle rows for a cluster of {cluster.n_vehicles}")
    return SinrMatrix(cluster.id, np.array(rows, dtype=float))


def pad_to_square(matrix: SinrMatrix, grid: ResourceGrid, floor_db: float = -15.0):
    """Append dummy vehicles at the floor SINR until there are L rows.

    Dummies make the matching square so one vehicle can sit in every
    subframe. A dummy row is constant across subchannels, hence it never
    displaces a real vehicle from its optimum. Returns the padded matrix
    and a boolean mask, True where a row is a dummy.
    """
    n, cols = matrix.values.shape
    if cols != grid.n_subchannels:
        raise ShapeError(
            f"matrix has {cols} subchannel columns, grid has {grid.n_subchannels}")
    if n > grid.l:
        raise InfeasibleError(
            f"{n} vehicles exceed {grid.l} subframes; a subframe holds one "
            "vehicle per cluster")
    dummy_mask = np.zeros(grid.l, dtype=bool)
    dummy_mask[n:] = True
    if n == grid.l:
        return SinrMatrix(matrix.cluster_id, matrix.values.copy()), dummy_mask
    pad = np.full((grid.l - n, grid.n_subchannels), float(floor_db))
    padded = np.vstack([matrix.values, pad])
    return SinrMatrix(matrix.cluster_id, padded), dummy_mask
