from __future__ import annotations as __future_annotations__

from .__types__ import ConsistencyReport, RowKey, SweepResult, WindowStats
from .consistency import online_offline_consistency
from .offline import (
    count_threshold_crossings,
    default_probability_grid,
    estimate_bitflips,
    expected_bitflips,
    windowize,
    write_sweep_csv,
    write_windows_csv,
)

__all__ = [
    "ConsistencyReport",
    "RowKey",
    "SweepResult",
    "WindowStats",
    "count_threshold_crossings",
    "default_probability_grid",
    "estimate_bitflips",
    "expected_bitflips",
    "online_offline_consistency",
    "windowize",
    "write_sweep_csv",
    "write_windows_csv",
]
