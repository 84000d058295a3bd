"""Differential-entropy machinery.

Closed-form Gaussian entropies, the Kozachenko-Leonenko nearest-neighbour
estimator with bootstrap standard errors, a histogram cross-check,
log+ moment functionals, and the polar (magnitude/phase) decomposition.
All values are in nats.
"""
import logging
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.spatial import cKDTree
from scipy.special import digamma

from src.models.errors import DegenerateSampleError, NotPositiveDefiniteError, OriginSampleError

logger = logging.getLogger(__name__)

CLOSED_FORM = "closed-form"
KNN = "knn"
HISTOGRAM = "histogram"
METHODS = (CLOSED_FORM, KNN, HISTOGRAM)

DEFAULT_K = 4
BOOTSTRAP_RESAMPLES = 32
MIN_SAMPLES = 1000
POLAR_MIN_SAMPLES = 10_000
MAX_COLLAPSED_FRACTION = 0.01
BOOTSTRAP_SEED = 0

_UNIT_BALL_VOLUME = {1: 2.0, 2: math.pi}


@dataclass(frozen=True)
class EntropyEstimate:
    value: float
    std_error: float = 0.0
    n_samples: int = 0
    method: str = CLOSED_FORM

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown entropy method {self.method!r}")
        if self.method == CLOSED_FORM and self.std_error != 0:
            raise ValueError("closed-form entropies carry no sampling error")
        if self.method != CLOSED_FORM and not self.std_error > 0:
            raise ValueError(f"{self.method} estimates need a positive std_error, got {self.std_error}")

    @classmethod
    def closed_form(cls, value):
        return cls(float(value), 0.0, 0, CLOSED_FORM)


@dataclass(frozen=True)
class PolarEntropyReport:
    h_w: EntropyEstimate
    h_r: EntropyEstimate
    h_theta: EntropyEstimate
    e_log_r: float
    e_log_r_se: float = 0.0

    @property
    def lemma3_gap(self):
        # h(Theta) - (h(W) - h(R) - E[ln R]); nonnegative, zero iff R and Theta independent
        return self.h_theta.value - (self.h_w.value - self.h_r.value - self.e_log_r)

    @property
    def combined_se(self):
        return math.sqrt(self.h_w.std_error ** 2 + self.h_r.std_error ** 2
                         + self.h_theta.std_error ** 2 + self.e_log_r_se ** 2)


class LogPlusMoments(NamedTuple):
    log_plus: float
    log_plus_inv: float
    log_plus_se: float
    log_plus_inv_se: float
    infinite: bool


def gaussian_entropy(dim, covariance):
    cov = np.atleast_2d(np.asarray(covariance, dtype=float))
    if dim not in (1, 2) or cov.shape != (dim, dim):
        raise ValueError(f"expected a {dim}x{dim} covariance, got shape {cov.shape}")
    if not np.allclose(cov, cov.T):
        raise NotPositiveDefiniteError("covariance is not symmetric")
    try:
        chol = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(f"covariance is not positive definite: {cov.tolist()}") from exc
    log_det = 2.0 * float(np.sum(np.log(np.diag(chol))))
    return 0.5 * (dim * math.log(2 * math.pi * math.e) + log_det)


def _as_points(samples):
    x = np.asarray(samples, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2 or x.shape[1] not in (1, 2):
        raise ValueError(f"samples must be scalars or 2-vectors, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("samples contain NaN or Inf")
    return x


def _bootstrap_se(terms, stream):
    if stream is None:
        stream = np.random.default_rng(BOOTSTRAP_SEED)
    n = len(terms)
    means = np.empty(BOOTSTRAP_RESAMPLES)
    for b in range(BOOTSTRAP_RESAMPLES):
        means[b] = terms[stream.integers(0, n, size=n)].mean()
    return float(means.std(ddof=1))


def estimate_entropy_knn(samples, k=DEFAULT_K, stream=None):
    """Kozachenko-Leonenko estimate with Euclidean balls.

    h = psi(n) - psi(k) + ln V_d + (d/n) sum ln r_k(i), r_k(i) being the
    distance from point i to its k-th neighbour. The standard error is a
    bootstrap over the per-point log-distance terms, so resampling never
    creates duplicate points.
    """
    x = _as_points(samples)
    n, dim = x.shape
    if n < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples, got {n}")
    if not 1 <= k < n:
        raise ValueError(f"k must be in [1, n), got {k}")
    if np.all(x == x[0]):
        raise DegenerateSampleError("all samples are identical")

    distances, _ = cKDTree(x).query(x, k=k + 1)
    radius = distances[:, k]
    collapsed = radius <= 0
    if collapsed.mean() > MAX_COLLAPSED_FRACTION:
        raise DegenerateSampleError(
            f"{collapsed.mean():.1%} of points have a zero k-th neighbour distance (duplicates)"
        )
    if collapsed.any():
        logger.info("dropping %d duplicate-collapsed points from the kNN estimate", int(collapsed.sum()))
        radius = radius[~collapsed]

    terms = dim * np.log(radius)
    kept = len(radius)
    const = digamma(kept) - digamma(k) + math.log(_UNIT_BALL_VOLUME[dim])
    value = float(const + terms.mean())
    return EntropyEstimate(value, _bootstrap_se(terms, stream), kept, KNN)


def estimate_entropy_histogram(samples, stream=None):
    x = _as_points(samples)
    n, dim = x.shape
    if n < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples, got {n}")
    if np.all(x == x[0]):
        raise DegenerateSampleError("all samples are identical")

    if dim == 1:
        edges = [np.histogram_bin_edges(x[:, 0], bins="fd")]
    else:
        bins = max(10, int(round(n ** 0.25)))
        edges = [np.histogram_bin_edges(x[:, j], bins=bins) for j in range(dim)]
    cell = np.prod(np.meshgrid(*[np.diff(e) for e in edges], indexing="ij"), axis=0)

    def plug_in(points):
        counts, _ = np.histogramdd(points, bins=edges)
        p = counts / len(points)
        mask = p > 0
        return float(-np.sum(p[mask] * np.log(p[mask] / cell[mask])))

    if stream is None:
        stream = np.random.default_rng(BOOTSTRAP_SEED)
    resampled = [plug_in(x[stream.integers(0, n, size=n)]) for _ in range(BOOTSTRAP_RESAMPLES)]
    return EntropyEstimate(plug_in(x), float(np.std(resampled, ddof=1)), n, HISTOGRAM)


def estimate_log_plus_moments(samples):
    """Sample means of log+(x) and log+(1/x) with standard errors."""
    x = np.asarray(samples, dtype=float).ravel()
    if x.size == 0:
        raise ValueError("no samples")
    if np.any(np.isnan(x)) or np.any(x < 0):
        raise ValueError("log+ moments need nonnegative samples")

    n = x.size
    log_plus_terms = np.log(np.maximum(x, 1.0))
    log_plus = float(log_plus_terms.mean())
    log_plus_se = float(log_plus_terms.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0

    if np.any(x == 0):
        return LogPlusMoments(log_plus, math.inf, log_plus_se, math.inf, True)

    log_plus_inv_terms = np.log(np.maximum(1.0 / x, 1.0))
    log_plus_inv = float(log_plus_inv_terms.mean())
    log_plus_inv_se = float(log_plus_inv_terms.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return LogPlusMoments(log_plus, log_plus_inv, log_plus_se, log_plus_inv_se, False)


def wrap_angle(theta):
    """Reduce angles modulo 2*pi into [-pi, pi)."""
    return np.mod(np.asarray(theta, dtype=float) + math.pi, 2 * math.pi) - math.pi


def polar_stats(samples, k=DEFAULT_K, stream=None):
    w = np.asarray(samples, dtype=float).reshape(-1, 2)
    n = len(w)
    if n < POLAR_MIN_SAMPLES:
        raise ValueError(f"need at least {POLAR_MIN_SAMPLES} samples, got {n}")
    r = np.hypot(w[:, 0], w[:, 1])
    if np.any(r <= 0):
        raise OriginSampleError(f"{int(np.sum(r <= 0))} samples sit at the origin; the phase is undefined")
    theta = wrap_angle(np.arctan2(w[:, 1], w[:, 0]))

    if stream is None:
        stream = np.random.default_rng(BOOTSTRAP_SEED)
    s_w, s_r, s_theta = stream.spawn(3)

    log_r = np.log(r)
    return PolarEntropyReport(
        h_w=estimate_entropy_knn(w, k, s_w),
        h_r=estimate_entropy_knn(r, k, s_r),
        h_theta=estimate_entropy_knn(theta, k, s_theta),
        e_log_r=float(log_r.mean()),
        e_log_r_se=float(log_r.std(ddof=1) / math.sqrt(n)),
    )
