import math
from dataclasses import dataclass

import numpy as np

from src.models.errors import DegenerateGridError


@dataclass(frozen=True)
class RateCurve:
    """Rates (nats per channel use) or ratios over an increasing snr grid."""

    snr_grid: tuple
    values: tuple
    label: str = ""

    def __post_init__(self):
        if len(self.snr_grid) != len(self.values):
            raise DegenerateGridError(f"grid has {len(self.snr_grid)} points but {len(self.values)} values")
        if any(b <= a for a, b in zip(self.snr_grid, self.snr_grid[1:])):
            raise DegenerateGridError("snr grid must be strictly increasing")

    @property
    def decades(self):
        if len(self.snr_grid) < 2:
            return 0.0
        return math.log10(self.snr_grid[-1] / self.snr_grid[0])


def snr_db_grid(start_db, stop_db, step_db):
    """Inclusive dB grid converted to linear snr values."""
    if not step_db > 0:
        raise DegenerateGridError(f"snr step must be > 0 dB, got {step_db}")
    if stop_db < start_db:
        raise DegenerateGridError(f"snr stop {stop_db} dB is below start {start_db} dB")
    count = int(round((stop_db - start_db) / step_db)) + 1
    db = start_db + step_db * np.arange(count)
    return db, 10.0 ** (db / 10.0)


def least_squares_prelog(curve):
    """Slope of values against ln(1 + snr) over the top half of the grid.

    Returns (slope, residual) with residual the largest absolute deviation
    of the fitted points from the line.
    """
    x = np.log1p(np.asarray(curve.snr_grid, dtype=float))
    y = np.asarray(curve.values, dtype=float)
    top = slice(len(x) // 2, None)
    slope, intercept = np.polyfit(x[top], y[top], 1)
    residual = float(np.max(np.abs(y[top] - (slope * x[top] + intercept))))
    return float(slope), residual
