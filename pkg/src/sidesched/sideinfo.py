"""Linear SINR quantization and the SINR-to-rate mapping.

Assignments are decided on quantized reconstructions but judged on the
fine-grained values, so rate matrices come as a (decision, truth) pair.
The quantizer is uniform over a dB range with midpoint reconstruction;
bin width is (hi - lo) / 2**bits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scenario import SinrMatrix


@dataclass(frozen=True)
class QuantizerSpec:
    """Uniform b-bit quantizer over [lo_db, hi_db]."""

    bits: int
    lo_db: float = -15.0
    hi_db: float = 35.0

    def __post_init__(self):
        if not 1 <= self.bits <= 8:
            raise ValueError(f"bits must lie in [1, 8], got {self.bits}")
        if not self.lo_db < self.hi_db:
            raise ValueError("lo_db must be below hi_db")

    @property
    def levels(self) -> int:
        return 2 ** self.bits

    @property
    def bin_width_db(self) -> float:
        return (self.hi_db - self.lo_db) / self.levels


def quantize(q: QuantizerSpec, sinr_db):
    """Map SINR to (bin index, midpoint reconstruction in dB).

    Values are clamped to [lo, hi] first; the top edge folds into the
    last bin. Scalar in gives (int, float) out, arrays are elementwise.
    """
    width = q.bin_width_db
    x = np.clip(np.asarray(sinr_db, dtype=float), q.lo_db, q.hi_db)
    idx = np.minimum(np.floor((x - q.lo_db) / width), q.levels - 1).astype(np.int64)
    recon = q.lo_db + (idx + 0.5) * width
    if np.ndim(sinr_db) == 0:
        return int(idx), float(recon)
    return idx, recon


def rate_from_sinr(b_hz: float, sinr_db):
    """Achievable rate b_hz * log2(1 + linear SINR), in bits/s."""
    if b_hz <= 0:
        raise ValueError("b_hz must be positive")
    rate = b_hz * np.log2(1.0 + 10.0 ** (np.asarray(sinr_db, dtype=float) / 10.0))
    if np.ndim(sinr_db) == 0:
        return float(rate)
    return rate


@dataclass
class RateMatrix:
    """Per-(vehicle, subchannel) rates in bits/s; non-negative and finite."""

    cluster_id: int
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2:
            raise ValueError(f"rate matrix must be 2-D, got ndim={self.values.ndim}")
        if not np.all(np.isfinite(self.values)) or np.any(self.values < 0):
            raise ValueError("rates must be finite and non-negative")


def build_rate_matrices(sinr: SinrMatrix, q: QuantizerSpec | None, b_hz: float):
    """(decision, truth) rate pair for one cluster.

    The decision matrix is what the scheduler sees: rates of the
    quantized reconstructions, or the fine-grained rates themselves when
    ``q`` is None (ideal feedback). The truth matrix always holds the
    fine-grained rates.
    """
    truth_vals = rate_from_sinr(b_hz, sinr.values)
    if q is None:
        decision_vals = truth_vals.copy()
    else:
        _, recon = quantize(q, sinr.values)
        decision_vals = rate_from_sinr(b_hz, recon)
    return (RateMatrix(sinr.cluster_id, decision_vals),
            RateMatrix(sinr.cluster_id, truth_vals))
