import math

import numpy as np
import pytest

from src.algorithms.curves import RateCurve, least_squares_prelog, snr_db_grid
from src.models.errors import DegenerateGridError


def test_snr_db_grid_is_inclusive():
    db, snr = snr_db_grid(0.0, 30.0, 10.0)
    np.testing.assert_allclose(db, [0.0, 10.0, 20.0, 30.0])
    np.testing.assert_allclose(snr, [1.0, 10.0, 100.0, 1000.0])


@pytest.mark.parametrize("args", [(0.0, 10.0, 0.0), (20.0, 10.0, 1.0)])
def test_snr_db_grid_validation(args):
    with pytest.raises(DegenerateGridError):
        snr_db_grid(*args)


def test_rate_curve_validation():
    with pytest.raises(DegenerateGridError):
        RateCurve((1.0, 10.0), (0.1,))
    with pytest.raises(DegenerateGridError):
        RateCurve((10.0, 1.0), (0.1, 0.2))
    assert RateCurve((1.0, 1e4), (0.0, 1.0)).decades == pytest.approx(4.0)


def test_fit_uses_the_top_half():
    snr = np.logspace(0, 8, 9)
    values = np.log1p(snr)
    values[:4] = 0.0
    slope, residual = least_squares_prelog(RateCurve(tuple(snr), tuple(values)))
    assert slope == pytest.approx(1.0)
    assert residual == pytest.approx(0.0, abs=1e-9)
    assert math.isfinite(slope)
