"""Maximum-entropy densities on [-pi, pi) under a log+ constraint.

The maximizer of h(Theta) subject to E[log+ 1/|Theta|] = gamma has the
form c/|t|^alpha on |t| <= 1 and c on 1 < |t| <= pi. Writing
u = 1/(1 - alpha), normalization gives c = 1/(2(u + pi - 1)), the
constraint gives gamma = u^2/(u + pi - 1), and the entropy is
-ln c - alpha*gamma.
"""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy.optimize import bisect, brentq

from src.algorithms.quadrature import integrate
from src.models.errors import OutOfFamilyError

logger = logging.getLogger(__name__)

GAMMA_MIN = 1.0 / math.pi
ALPHA_TOL = 1e-10
U_RTOL = 1e-12
THRESHOLD_TOL = 1e-10
RESIDUAL_TOL = 1e-9
RESIDUAL_MIN_GAP = 1e-14
DELTA_MAX = 10.0


class MaxentResiduals(NamedTuple):
    normalization: float
    constraint: float
    entropy: float


@dataclass(frozen=True)
class MaxentSolution:
    gamma: float
    alpha: float
    c: float
    h_max: float

    def residuals(self):
        """Quadrature check of the closed-form normalization, constraint and entropy.

        All three are nan once 1 - alpha falls below QUADPACK's reach for
        the t^-alpha weight (gamma around 1e14 and up).
        """
        a, c = self.alpha, self.c
        if 1.0 - a < RESIDUAL_MIN_GAP:
            logger.debug("alpha %.17g too close to 1 for the quadrature check", a)
            return MaxentResiduals(math.nan, math.nan, math.nan)
        # int_0^1 t^-a dt and int_0^1 t^-a ln t dt, singular weight handled by QUADPACK
        mass = integrate(lambda t: 1.0, 0.0, 1.0, weight='alg', wvar=(-a, 0.0))
        log_mass = integrate(lambda t: 1.0, 0.0, 1.0, weight='alg-loga', wvar=(-a, 0.0))

        total = 2.0 * c * (mass + math.pi - 1.0)
        constraint = -2.0 * c * log_mass
        entropy = -2.0 * (c * math.log(c) * mass - c * a * log_mass) - 2.0 * (math.pi - 1.0) * c * math.log(c)
        return MaxentResiduals(
            normalization=abs(total - 1.0),
            constraint=abs(constraint - self.gamma),
            entropy=abs(entropy - self.h_max),
        )


def _u_closed_form(gamma):
    return 0.5 * (gamma + math.sqrt(gamma * gamma + 4.0 * gamma * (math.pi - 1.0)))


def _constraint_value(u):
    return u * u / (u + math.pi - 1.0)


def solve_maxent(gamma):
    gamma = float(gamma)
    if not math.isfinite(gamma):
        raise OutOfFamilyError(f"gamma must be finite, got {gamma}")
    if gamma < GAMMA_MIN:
        raise OutOfFamilyError(
            f"gamma = {gamma:.6g} is below 1/pi = {GAMMA_MIN:.6g}, the smallest constraint value "
            "the c/|t|^alpha family (0 <= alpha < 1) can realize"
        )

    u = max(1.0, _u_closed_form(gamma))
    alpha = 1.0 - 1.0 / u

    if gamma > GAMMA_MIN:
        # constraint value is increasing in u and doubling u overshoots it
        u_bisect = bisect(lambda v: _constraint_value(v) - gamma, 1.0, 2.0 * u + 1.0,
                          xtol=ALPHA_TOL, rtol=U_RTOL)
        if abs(u_bisect - u) > 10 * (ALPHA_TOL + U_RTOL * u):
            logger.warning("bisection u %.12g disagrees with the closed form %.12g at gamma %g",
                           u_bisect, u, gamma)

    c = 1.0 / (2.0 * (u + math.pi - 1.0))
    h_max = -math.log(c) - alpha * gamma
    return MaxentSolution(gamma=gamma, alpha=alpha, c=c, h_max=h_max)


def hmax(gamma):
    return solve_maxent(gamma).h_max


def hmax_asymptote(gamma):
    if not gamma > 0:
        raise ValueError(f"gamma must be > 0, got {gamma}")
    return -(gamma - math.log(gamma) - math.log(2 * math.e))


def maxent_density(solution, theta):
    t = np.abs(np.asarray(theta, dtype=float))
    with np.errstate(divide='ignore'):
        inner = solution.c * np.power(t, -solution.alpha)
    return np.where(t <= 1.0, inner, np.where(t <= math.pi, solution.c, 0.0))


@lru_cache(maxsize=None)
def m_of_delta(delta):
    """Smallest gamma past which -hmax(gamma) >= gamma/(1 + delta).

    -hmax is convex (its slope is alpha, which grows with gamma) and is
    below the line at gamma = 1/pi, so the crossing is unique; a doubling
    scan brackets it and brentq refines it.
    """
    if not 0 < delta <= DELTA_MAX:
        raise ValueError(f"delta must be in (0, {DELTA_MAX:g}], got {delta}")

    def excess(gamma):
        return -hmax(gamma) - gamma / (1.0 + delta)

    lo = GAMMA_MIN
    hi = 2.0 * lo
    while excess(hi) < 0:
        lo, hi = hi, 2.0 * hi
    threshold = brentq(excess, lo, hi, xtol=THRESHOLD_TOL)
    logger.debug("M(%g) = %.9g", delta, threshold)
    return threshold


def corollary1_bound(h_theta, delta):
    if not delta > 0:
        raise ValueError(f"delta must be > 0, got {delta}")
    return max(m_of_delta(delta), -(1.0 + delta) * h_theta)
