"""Sidelink time-frequency grid and semi-persistent reservation timing.

The allotable spectrum is a lattice of K subchannels per subframe over L
subframes, repeating every scheduling window. Global subchannel indices
are zero-based and row-major over (subframe, in-subframe slot), so index
k lives in subframe k // K. One-based labels, where an external data
source uses them, are converted at I/O boundaries only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

#: Reservation durations (seconds) a scheduler may grant, per Release 14.
DEFAULT_T_SPS_POOL_S = (1.0, 4.0, 8.0)


@dataclass(frozen=True)
class ResourceGrid:
    """Immutable lattice geometry: ``k`` subchannels per subframe, ``l`` subframes."""

    k: int               # subchannels per subframe
    l: int               # subframes per scheduling window
    t_ms: float = 1.0    # subframe duration
    b_hz: float = 1.26e6  # bandwidth of one subchannel

    def __post_init__(self):
        if self.k < 1 or self.l < 1:
            raise ValueError(f"grid needs k >= 1 and l >= 1, got k={self.k}, l={self.l}")
        if self.t_ms <= 0 or self.b_hz <= 0:
            raise ValueError("t_ms and b_hz must be positive")

    @property
    def n_subchannels(self) -> int:
        """Total subchannels in one window."""
        return self.k * self.l

    @property
    def window_ms(self) -> float:
        return self.t_ms * self.l


def subframe_of(grid: ResourceGrid, k: int) -> int:
    """Subframe owning global subchannel index ``k``.

    Consecutive runs of ``grid.k`` indices share a subframe, which
    partitions the index range into ``grid.l`` disjoint blocks.
    """
    if not 0 <= k < grid.n_subchannels:
        raise IndexError(
            f"subchannel index {k} outside [0, {grid.n_subchannels})")
    return k // grid.k


@dataclass(frozen=True)
class SpsTimer:
    """Countdown, in whole windows, of one semi-persistent reservation.

    A fresh timer covers ceil(t_sps / window) windows; at zero the
    reservation has lapsed and the vehicle needs reselection.
    """

    t_sps_s: float
    window_ms: float
    remaining_windows: int = -1  # derived from the durations when negative

    def __post_init__(self):
        if self.t_sps_s <= 0 or self.window_ms <= 0:
            raise ValueError("t_sps_s and window_ms must be positive")
        if self.remaining_windows < 0:
            object.__setattr__(
                self, "remaining_windows",
                math.ceil(self.t_sps_s * 1000.0 / self.window_ms))

    @property
    def needs_reselection(self) -> bool:
        return self.remaining_windows == 0


def tick_window(timer: SpsTimer) -> SpsTimer:
    """One elapsed window: decrement, saturating at zero."""
    if timer.remaining_windows <= 0:
        return timer
    return replace(timer, remaining_windows=timer.remaining_windows - 1)


def draw_t_sps(rng, pool=DEFAULT_T_SPS_POOL_S) -> float:
    """Uniform draw of a reservation duration from the pool."""
    if not pool:
        raise ValueError("t_sps pool must be non-empty")
    return float(pool[int(rng.integers(0, len(pool)))])
