"""Sum-rate upper bound for the two-user fading broadcast channel.

All terms are single-letter: the fading is memoryless, so the normalized
error entropies reduce to h(err | estimate) of one channel use.
"""
import logging
import math
from collections.abc import Mapping
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from src.algorithms.curves import RateCurve, least_squares_prelog
from src.algorithms.maxent import m_of_delta
from src.models.errors import BudgetViolationError, DegenerateGridError, InvalidCaseError
from src.models.fading import model_moments
from src.models.laws import DiscreteLaw, RayleighLaw, UniformLaw

logger = logging.getLogger(__name__)

CONSTANTS_VERSION = 1
# M(1/2) as computed for this constants version
M_HALF = 13.2548166
M_HALF_TOL = 1e-6
LOG2PIE = math.log(2 * math.pi * math.e)
MIN_SWEEP_DECADES = 4.0
MIN_SWEEP_POINTS = 4

ALLOCATION_CAP = 1.0 / math.e
SEARCH_ATOMS = 64
SEARCH_STEP_TOL = 1e-8
SEARCH_MAX_ITER = 20_000
ARMIJO = 1e-4


@dataclass(frozen=True)
class DerivedConstants:
    m_half: float
    gamma: float
    gamma_prime: float
    version: int = CONSTANTS_VERSION


@lru_cache(maxsize=1)
def derive_constants():
    """Threshold M(1/2) and the universal constants of the entropy bounds."""
    m_half = m_of_delta(0.5)
    if abs(m_half - M_HALF) > M_HALF_TOL:
        logger.warning("M(1/2) = %.9g drifted from the pinned %.9g of constants v%d", m_half, M_HALF, CONSTANTS_VERSION)
    gamma = (math.log(math.pi / 2) + 3.0 * m_half + 4.5 * math.log(2 * math.pi)
             - 0.25 * LOG2PIE)
    gamma_prime = gamma + math.log(math.e) / math.e + 2.5 * LOG2PIE
    logger.debug("constants v%d: M(1/2)=%.9g gamma=%.9g gamma'=%.9g",
                 CONSTANTS_VERSION, m_half, gamma, gamma_prime)
    return DerivedConstants(m_half, gamma, gamma_prime)


@dataclass(frozen=True)
class BoundReport:
    snr: float
    term_log_a: float
    term_log_h: float
    term_constants: float
    total: float
    ratio: float


@dataclass(frozen=True)
class BoundSweep:
    reports: tuple
    totals: RateCurve
    ratios: RateCurve
    slope: float
    residual: float


@lru_cache(maxsize=None)
def _link_moments(model):
    return model_moments(model)


def _constant_terms(mom_a, mom_h):
    gamma_prime = derive_constants().gamma_prime
    return (4.0 / 3.0 * gamma_prime
            - 3.0 * mom_a.err_cond_entropy - 3.0 * mom_h.err_cond_entropy
            + (mom_a.log_plus_norm + mom_h.log_plus_norm) / 3.0
            + 2.0 / 3.0 * (mom_a.log_plus_inv_norm + mom_h.log_plus_inv_norm)
            + 3.0 * math.log(mom_a.second_moment) + 3.0 * math.log(mom_h.second_moment))


def sum_rate_upper_bound(config):
    mom_a = _link_moments(config.model_a)
    mom_h = _link_moments(config.model_h)
    snr = config.snr
    term_log_a = math.log1p(mom_a.second_moment * snr) / 3.0
    term_log_h = math.log1p(mom_h.second_moment * snr) / 3.0
    term_constants = _constant_terms(mom_a, mom_h)
    total = term_log_a + term_log_h + term_constants
    return BoundReport(snr, term_log_a, term_log_h, term_constants, total, total / math.log1p(snr))


def half_sum_bound(config, swap=False):
    """Bound on R_Y + R_Z/2 (R_Y/2 + R_Z with swap=True).

    The sum-rate bound is two thirds of the sum of both orientations.
    """
    model_a, model_h = (config.model_h, config.model_a) if swap else (config.model_a, config.model_h)
    mom_a = _link_moments(model_a)
    mom_h = _link_moments(model_h)
    return (0.5 * math.log1p(mom_a.second_moment * config.snr)
            - 4.5 * mom_a.err_cond_entropy
            + derive_constants().gamma_prime
            + 0.5 * mom_h.log_plus_norm + mom_a.log_plus_inv_norm
            + 4.5 * math.log(mom_a.second_moment))


def _check_grid(snr_grid):
    grid = np.asarray(snr_grid, dtype=float)
    if grid.ndim != 1 or len(grid) < MIN_SWEEP_POINTS:
        raise DegenerateGridError(f"need at least {MIN_SWEEP_POINTS} snr points, got {grid.size}")
    if not np.all(np.isfinite(grid)) or np.any(grid <= 0):
        raise DegenerateGridError("snr values must be finite and positive")
    if np.any(np.diff(grid) <= 0):
        raise DegenerateGridError("snr grid must be strictly increasing")
    decades = math.log10(grid[-1] / grid[0])
    if decades < MIN_SWEEP_DECADES:
        raise DegenerateGridError(f"snr grid spans {decades:.2f} decades, need at least {MIN_SWEEP_DECADES:g}")
    return grid


def bound_sweep(config, snr_grid, label="sum-rate bound"):
    grid = _check_grid(snr_grid)
    reports = tuple(sum_rate_upper_bound(config.with_snr(float(snr))) for snr in grid)
    totals = RateCurve(tuple(grid), tuple(r.total for r in reports), label)
    ratios = RateCurve(tuple(grid), tuple(r.ratio for r in reports), f"{label} ratio")
    slope, residual = least_squares_prelog(totals)
    return BoundSweep(reports, totals, ratios, slope, residual)


# --- power allocation gap --------------------------------------------------------

@dataclass(frozen=True)
class PowerAllocation:
    values: np.ndarray
    probs: np.ndarray
    allocation: np.ndarray
    delta: float


def _atoms(s_law):
    atoms = s_law.atoms(SEARCH_ATOMS)
    values = np.asarray(atoms.values, dtype=float)
    probs = np.asarray(atoms.probs, dtype=float)
    keep = probs > 0
    return values[keep], probs[keep]


def _allocation_values(values, allocation):
    if callable(allocation):
        return np.array([float(allocation(v)) for v in values])
    if isinstance(allocation, Mapping):
        try:
            return np.array([float(allocation[v]) for v in values])
        except KeyError as exc:
            raise InvalidCaseError(f"allocation has no entry for S = {exc.args[0]}") from None
    q = np.asarray(allocation, dtype=float)
    if q.shape != values.shape:
        raise InvalidCaseError(f"allocation has {q.size} entries for {values.size} atoms")
    return q


def _delta(values, probs, q, power_budget, sigma2):
    achieved = 0.5 * np.sum(probs * np.log(2 * math.pi * math.e * (values ** 2 * q + sigma2)))
    second_moment = float(np.sum(probs * values ** 2))
    reference = 0.5 * math.log(2 * math.pi * math.e * (second_moment * power_budget + sigma2))
    return float(achieved - reference)


def lemma6_delta(s_law, allocation, power_budget, sigma2):
    """Gain of the conditional power allocation over the average-power Gaussian bound."""
    if not (power_budget > 0 and sigma2 > 0):
        raise InvalidCaseError(f"power budget and noise variance must be > 0, got {power_budget}, {sigma2}")
    values, probs = _atoms(s_law)
    q = _allocation_values(values, allocation)
    if not np.all(np.isfinite(q)) or np.any(q < 0):
        raise BudgetViolationError("allocation must be finite and nonnegative")
    spent = float(np.sum(probs * q))
    if spent > power_budget * (1 + 1e-9):
        raise BudgetViolationError(f"allocation spends {spent:.6g} on average, budget is {power_budget:.6g}")
    return _delta(values, probs, q, power_budget, sigma2)


def _project_budget(y, probs, budget):
    """Projection onto {q >= 0, sum p q = budget} in the p-weighted metric."""
    order = np.argsort(-y)
    ys, ps = y[order], probs[order]
    tau = (np.cumsum(ps * ys) - budget) / np.cumsum(ps)
    k = np.flatnonzero(ys - tau > 0)[-1]
    return np.maximum(y - tau[k], 0.0)


def waterfill_allocation(s_law, power_budget, sigma2):
    values, probs = _atoms(s_law)
    q = np.zeros_like(values)
    active = values != 0
    if active.any():
        floor = sigma2 / values[active] ** 2
        q[active] = _project_budget(-floor, probs[active], power_budget)
    return PowerAllocation(values, probs, q, _delta(values, probs, q, power_budget, sigma2))


def lemma6_worst_case(s_law, power_budget, sigma2):
    """Projected-gradient ascent of the allocation gap, started from constant power."""
    values, probs = _atoms(s_law)
    s2 = values ** 2

    def objective(q):
        return 0.5 * float(np.sum(probs * np.log(s2 * q + sigma2)))

    q = np.full_like(values, float(power_budget))
    value = objective(q)
    step = power_budget / max(float(np.max(s2 / sigma2)), 1e-12)
    for _ in range(SEARCH_MAX_ITER):
        grad = 0.5 * s2 / (s2 * q + sigma2)
        while True:
            candidate = _project_budget(q + step * grad, probs, power_budget)
            candidate_value = objective(candidate)
            if candidate_value >= value + ARMIJO * float(np.sum(probs * grad * (candidate - q))) or step < 1e-300:
                break
            step *= 0.5
        moved = float(np.max(np.abs(candidate - q)))
        q, value = candidate, candidate_value
        step *= 2.0
        if moved <= SEARCH_STEP_TOL * max(1.0, power_budget):
            break
    else:
        logger.info("allocation search stopped after %d iterations", SEARCH_MAX_ITER)

    found = PowerAllocation(values, probs, q, _delta(values, probs, q, power_budget, sigma2))
    reference = waterfill_allocation(s_law, power_budget, sigma2)
    if abs(found.delta - reference.delta) > 1e-6:
        logger.warning("projected-gradient allocation %.9g differs from water-filling %.9g", found.delta, reference.delta)
    return found


def random_s_law(stream):
    kind = stream.integers(3)
    if kind == 0:
        size = int(stream.integers(2, 6))
        values = tuple(float(v) for v in stream.uniform(0.0, 3.0, size))
        return DiscreteLaw(values, tuple(float(p) for p in stream.dirichlet(np.ones(size))))
    if kind == 1:
        return UniformLaw(0.0, float(stream.uniform(0.5, 3.0)))
    return RayleighLaw(float(stream.uniform(0.3, 2.0)))


def random_lemma6_instance(stream):
    s_law = random_s_law(stream)
    budget = float(10.0 ** stream.uniform(-2.0, 4.0))
    sigma2 = float(10.0 ** stream.uniform(-1.0, 1.0))
    return s_law, budget, sigma2
