import math

import numpy as np
import pytest

from src.algorithms.maxent import (
    GAMMA_MIN,
    corollary1_bound,
    hmax,
    hmax_asymptote,
    m_of_delta,
    maxent_density,
    solve_maxent,
)
from src.models.errors import OutOfFamilyError


def test_uniform_endpoint():
    solution = solve_maxent(GAMMA_MIN)
    assert solution.alpha == pytest.approx(0.0, abs=1e-12)
    assert solution.c == pytest.approx(1 / (2 * math.pi))
    assert solution.h_max == pytest.approx(math.log(2 * math.pi))
    assert hmax(1 / math.pi) == pytest.approx(1.83788, abs=1e-5)


def test_gamma_two():
    solution = solve_maxent(2.0)
    assert solution.alpha == pytest.approx(0.6968, abs=1e-4)
    assert solution.c == pytest.approx(0.09191, abs=1e-5)


@pytest.mark.parametrize("gamma", [GAMMA_MIN, 0.5, 2.0, 7.5, 25.0])
def test_residuals(gamma):
    residuals = solve_maxent(gamma).residuals()
    assert residuals.normalization < 1e-9
    assert residuals.constraint < 1e-9
    assert residuals.entropy < 1e-8


def test_density_shape():
    solution = solve_maxent(3.0)
    assert maxent_density(solution, -0.5) == pytest.approx(solution.c * 0.5 ** -solution.alpha)
    assert maxent_density(solution, 2.0) == pytest.approx(solution.c)
    assert maxent_density(solution, 4.0) == 0.0


def test_out_of_family():
    with pytest.raises(OutOfFamilyError, match="1/pi"):
        solve_maxent(0.1)


def test_hmax_is_decreasing():
    assert hmax(10.0) < hmax(5.0) < hmax(1.0)


@pytest.mark.parametrize("gamma, expected", [(10.0, -6.00427), (math.e, -0.02513)])
def test_asymptote_values(gamma, expected):
    assert hmax_asymptote(gamma) == pytest.approx(expected, abs=1e-5)


def test_asymptote_convergence():
    gaps = [abs(hmax(g) - hmax_asymptote(g)) for g in (10.0, 20.0, 40.0)]
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 0.1


def test_threshold():
    m_half = m_of_delta(0.5)
    assert m_half == pytest.approx(13.2548166, abs=1e-6)
    assert m_of_delta(0.25) >= m_half >= m_of_delta(1.0)
    gamma = 2 * m_half
    assert -hmax(gamma) >= 2 * gamma / 3


def test_threshold_crossing():
    m_half = m_of_delta(0.5)
    assert -hmax(m_half) == pytest.approx(2 * m_half / 3, abs=1e-5)


@pytest.mark.parametrize("delta", [0.0, -1.0, 11.0])
def test_threshold_domain(delta):
    with pytest.raises(ValueError):
        m_of_delta(delta)


def test_corollary1_bound_branches(stream):
    m_half = m_of_delta(0.5)
    assert corollary1_bound(math.log(2 * math.pi), 0.5) == pytest.approx(m_half)
    assert corollary1_bound(-10.0, 0.5) == pytest.approx(max(m_half, 15.0))
    theta = np.abs(stream.uniform(-math.pi, math.pi, 100_000))
    measured = float(np.mean(np.log(np.maximum(1 / theta, 1.0))))
    assert measured <= corollary1_bound(math.log(2 * math.pi), 0.5)


@pytest.mark.parametrize("gamma", [1e8, 1e16, 1e17])
def test_huge_gamma(gamma):
    solution = solve_maxent(gamma)
    assert 0.0 < solution.alpha <= 1.0
    assert solution.c == pytest.approx(0.5 / gamma, rel=1e-6)
    assert math.isfinite(solution.h_max)
    assert solution.h_max == pytest.approx(hmax_asymptote(gamma), rel=1e-9)


def test_residuals_past_quadrature_reach():
    residuals = solve_maxent(1e17).residuals()
    assert all(math.isnan(value) for value in residuals)
    assert solve_maxent(1e10).residuals().normalization < 1e-6
