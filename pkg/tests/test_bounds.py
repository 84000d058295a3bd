import math

import numpy as np
import pytest

from src.algorithms.bounds import (
    ALLOCATION_CAP,
    CONSTANTS_VERSION,
    M_HALF,
    bound_sweep,
    derive_constants,
    half_sum_bound,
    lemma6_delta,
    lemma6_worst_case,
    random_lemma6_instance,
    sum_rate_upper_bound,
    waterfill_allocation,
)
from src.models.errors import BudgetViolationError, DegenerateGridError, InvalidCaseError
from src.models.fading import ChannelConfig, FadingModel, model_moments
from src.models.laws import DiscreteLaw, RayleighLaw

LOG_2PIE = math.log(2 * math.pi * math.e)


def test_constants():
    constants = derive_constants()
    assert constants.m_half == pytest.approx(M_HALF, abs=1e-6)
    assert constants.version == CONSTANTS_VERSION
    assert constants.gamma_prime - constants.gamma == pytest.approx(1 / math.e + 2.5 * LOG_2PIE)
    assert constants.gamma_prime - constants.gamma == pytest.approx(7.54089, abs=1e-5)
    floor = math.log(math.pi / 2) + 4.5 * math.log(2 * math.pi) - 0.25 * LOG_2PIE
    assert constants.gamma >= floor
    assert constants.gamma == pytest.approx(floor + 3 * constants.m_half)


def test_constants_are_deterministic():
    assert derive_constants.__wrapped__() == derive_constants.__wrapped__()


def test_term_constants_composition(gaussian_config):
    report = sum_rate_upper_bound(gaussian_config)
    moments = model_moments(gaussian_config.model_a)
    error_terms = -6.0 * math.log(2 * math.pi * math.e * 0.01)
    assert error_terms == pytest.approx(10.603, abs=1e-3)
    rest = (4.0 / 3.0 * derive_constants().gamma_prime
            + 2.0 * moments.log_plus_norm / 3.0 + 4.0 * moments.log_plus_inv_norm / 3.0
            + 6.0 * math.log(2.02))
    assert report.term_constants == pytest.approx(error_terms + rest)


def test_symmetrized_half_sums(ring_config):
    config = ChannelConfig(FadingModel.gaussian_iid(1.0, 0.1), FadingModel.ring_phase(0.8, 0.3), power=1e4)
    for cfg in (config, ring_config):
        total = sum_rate_upper_bound(cfg).total
        halves = half_sum_bound(cfg) + half_sum_bound(cfg, swap=True)
        assert total == pytest.approx(2.0 / 3.0 * halves)


def test_ratio_deviation(gaussian_config):
    report = sum_rate_upper_bound(gaussian_config.with_snr(1e12))
    log_snr = math.log1p(1e12)
    assert report.ratio == pytest.approx(report.total / log_snr)
    assert report.ratio - (report.term_log_a + report.term_log_h) / log_snr == pytest.approx(
        report.term_constants / log_snr)
    assert (report.term_log_a + report.term_log_h) / log_snr == pytest.approx(2.0 / 3.0, abs=0.02)


def test_bound_increments(gaussian_config):
    low = sum_rate_upper_bound(gaussian_config.with_snr(1e10)).total
    high = sum_rate_upper_bound(gaussian_config.with_snr(1e12)).total
    assert high - low == pytest.approx(2.0 / 3.0 * math.log(100.0), abs=1e-8)


@pytest.mark.parametrize("fixture", ["gaussian_config", "ring_config"])
def test_sweep_slope(fixture, request):
    config = request.getfixturevalue(fixture)
    sweep = bound_sweep(config, np.logspace(6, 12, 7))
    assert sweep.slope == pytest.approx(2.0 / 3.0, abs=1e-3)
    assert len(sweep.reports) == 7
    assert sweep.ratios.values[-1] == pytest.approx(sweep.reports[-1].ratio)


def test_ratios_are_monotone_at_high_snr(gaussian_config):
    ratios = bound_sweep(gaussian_config, np.logspace(20, 60, 5)).ratios.values
    # positive constants: ratios fall toward 2/3
    assert all(b < a for a, b in zip(ratios, ratios[1:]))
    assert ratios[-1] > 2.0 / 3.0


def test_slope_ignores_error_variance():
    for eps in (0.1, 0.2):
        model = FadingModel.gaussian_iid(1.0, eps)
        sweep = bound_sweep(ChannelConfig(model, model), np.logspace(8, 14, 7))
        assert sweep.slope == pytest.approx(2.0 / 3.0, abs=1e-3)


@pytest.mark.parametrize("grid", [
    np.logspace(6, 7, 5),
    [1e2, 1e8, 1e10],
    [1e2, 1e4, 1e3, 1e9],
    [0.0, 1e2, 1e4, 1e8],
])
def test_degenerate_grids(gaussian_config, grid):
    with pytest.raises(DegenerateGridError):
        bound_sweep(gaussian_config, grid)


# --- power allocation -------------------------------------------------------------

def test_constant_allocation_loses_by_jensen():
    law = RayleighLaw(1.0)
    assert lemma6_delta(law, lambda s: 10.0, 10.0, 1.0) <= 0.0


def test_two_atom_worst_case():
    law = DiscreteLaw((0.5, 1.5), (0.5, 0.5))
    worst = lemma6_worst_case(law, 100.0, 1.0)
    assert worst.delta <= ALLOCATION_CAP
    assert float(np.sum(worst.probs * worst.allocation)) == pytest.approx(100.0)
    assert worst.delta == pytest.approx(waterfill_allocation(law, 100.0, 1.0).delta, abs=1e-6)
    mapping = dict(zip(worst.values, worst.allocation))
    assert lemma6_delta(law, mapping, 100.0, 1.0) == pytest.approx(worst.delta)


def test_allocation_validation():
    law = DiscreteLaw((0.5, 1.5), (0.5, 0.5))
    with pytest.raises(BudgetViolationError):
        lemma6_delta(law, [300.0, 0.0], 100.0, 1.0)
    with pytest.raises(BudgetViolationError):
        lemma6_delta(law, [-1.0, 1.0], 100.0, 1.0)
    with pytest.raises(InvalidCaseError):
        lemma6_delta(law, {0.5: 1.0}, 100.0, 1.0)
    with pytest.raises(InvalidCaseError):
        lemma6_delta(law, [1.0, 1.0, 1.0], 100.0, 1.0)
    with pytest.raises(InvalidCaseError):
        lemma6_delta(law, [1.0, 1.0], 0.0, 1.0)


@pytest.mark.slow
def test_random_allocation_instances(stream):
    worst = max(lemma6_worst_case(*random_lemma6_instance(child)).delta for child in stream.spawn(100))
    assert worst <= ALLOCATION_CAP + 1e-6
