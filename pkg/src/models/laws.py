"""Distribution descriptors used by the inequality checks.

Scalar laws describe signals and scale factors, planar laws describe
signal pairs (X, Y) or vectors X in R^2, angle laws describe phases on
[-pi, pi). Every law can sample itself from an explicit numpy stream.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy import stats
from scipy.integrate import simpson
from scipy.special import entr

from src.algorithms.entropy import wrap_angle
from src.algorithms.quadrature import integrate
from src.models.errors import InvalidCaseError

QUANTILE_ATOMS = 64
WRAP_TERMS = 5
PROJECTION_GRID = 801
PROJECTION_CHUNK = 512
TAIL_STDS = 12.0


def _check_finite(name, *values):
    for v in values:
        if not math.isfinite(v):
            raise InvalidCaseError(f"{name} must be finite, got {v}")


def _quantile_atoms(frozen, n):
    q = (np.arange(n) + 0.5) / n
    return DiscreteLaw(tuple(float(v) for v in frozen.ppf(q)), tuple([1.0 / n] * n))


# --- scalar laws -------------------------------------------------------------

@dataclass(frozen=True)
class DiscreteLaw:
    values: tuple
    probs: tuple

    is_gaussian = False

    def __post_init__(self):
        if len(self.values) == 0 or len(self.values) != len(self.probs):
            raise InvalidCaseError("discrete law needs matching, nonempty values and probs")
        _check_finite("atom", *self.values)
        if any(p < 0 for p in self.probs) or abs(sum(self.probs) - 1.0) > 1e-9:
            raise InvalidCaseError(f"atom probabilities must be nonnegative and sum to 1, got {self.probs}")

    @classmethod
    def point_mass(cls, value):
        return cls((float(value),), (1.0,))

    def sample(self, stream, n):
        return stream.choice(np.asarray(self.values, dtype=float), p=np.asarray(self.probs), size=n)

    def expect(self, fn):
        return sum(p * fn(v) for v, p in zip(self.values, self.probs) if p > 0)

    def second_moment(self):
        return self.expect(lambda v: v * v)

    def atoms(self, n=QUANTILE_ATOMS):
        return self


@dataclass(frozen=True)
class GaussianLaw:
    var: float
    mean: float = 0.0

    is_gaussian = True

    def __post_init__(self):
        _check_finite("gaussian parameters", self.var, self.mean)
        if self.var < 0:
            raise InvalidCaseError(f"variance must be >= 0, got {self.var}")

    def sample(self, stream, n):
        return stream.normal(self.mean, math.sqrt(self.var), size=n)

    def second_moment(self):
        return self.mean ** 2 + self.var

    def atoms(self, n=QUANTILE_ATOMS):
        if self.var == 0:
            return DiscreteLaw.point_mass(self.mean)
        return _quantile_atoms(stats.norm(self.mean, math.sqrt(self.var)), n)


@dataclass(frozen=True)
class UniformLaw:
    lo: float
    hi: float

    is_gaussian = False

    def __post_init__(self):
        _check_finite("uniform bounds", self.lo, self.hi)
        if not self.hi > self.lo:
            raise InvalidCaseError(f"uniform law needs lo < hi, got [{self.lo}, {self.hi}]")

    def sample(self, stream, n):
        return stream.uniform(self.lo, self.hi, size=n)

    def second_moment(self):
        return (self.lo ** 2 + self.lo * self.hi + self.hi ** 2) / 3.0

    def atoms(self, n=QUANTILE_ATOMS):
        return _quantile_atoms(stats.uniform(self.lo, self.hi - self.lo), n)


@dataclass(frozen=True)
class RayleighLaw:
    scale: float

    is_gaussian = False

    def __post_init__(self):
        _check_finite("rayleigh scale", self.scale)
        if not self.scale > 0:
            raise InvalidCaseError(f"rayleigh scale must be > 0, got {self.scale}")

    def sample(self, stream, n):
        return stream.rayleigh(self.scale, size=n)

    def second_moment(self):
        return 2.0 * self.scale ** 2

    def atoms(self, n=QUANTILE_ATOMS):
        return _quantile_atoms(stats.rayleigh(scale=self.scale), n)


@dataclass(frozen=True)
class GaussianMixtureLaw:
    means: tuple
    stds: tuple
    weights: tuple

    is_gaussian = False

    def __post_init__(self):
        if not len(self.means) == len(self.stds) == len(self.weights) > 0:
            raise InvalidCaseError("mixture needs matching, nonempty means, stds and weights")
        _check_finite("mixture parameters", *self.means, *self.stds)
        if any(s <= 0 for s in self.stds):
            raise InvalidCaseError(f"mixture stds must be > 0, got {self.stds}")
        if any(w < 0 for w in self.weights) or abs(sum(self.weights) - 1.0) > 1e-9:
            raise InvalidCaseError(f"mixture weights must be nonnegative and sum to 1, got {self.weights}")

    def sample(self, stream, n):
        comp = stream.choice(len(self.weights), p=np.asarray(self.weights), size=n)
        return stream.normal(np.asarray(self.means)[comp], np.asarray(self.stds)[comp])

    def second_moment(self):
        return sum(w * (m * m + s * s) for m, s, w in zip(self.means, self.stds, self.weights))


# --- planar laws ---------------------------------------------------------------

@dataclass(frozen=True)
class Gaussian2Law:
    cov: tuple
    mean: tuple = (0.0, 0.0)

    is_gaussian = True

    def __post_init__(self):
        cov = self.covariance
        if cov.shape != (2, 2) or not np.all(np.isfinite(cov)):
            raise InvalidCaseError(f"covariance must be a finite 2x2 matrix, got {self.cov}")
        if not np.allclose(cov, cov.T) or np.linalg.eigvalsh(cov)[0] < -1e-12:
            raise InvalidCaseError(f"covariance must be symmetric positive semidefinite, got {self.cov}")
        _check_finite("mean", *self.mean)

    @classmethod
    def isotropic(cls, var):
        return cls(((float(var), 0.0), (0.0, float(var))))

    @classmethod
    def from_matrix(cls, cov, mean=(0.0, 0.0)):
        cov = np.asarray(cov, dtype=float)
        return cls(tuple(tuple(float(v) for v in row) for row in cov), tuple(float(m) for m in mean))

    @property
    def covariance(self):
        return np.asarray(self.cov, dtype=float)

    @property
    def is_isotropic(self):
        cov = self.covariance
        return cov[0, 1] == 0 and cov[0, 0] == cov[1, 1] and self.mean == (0.0, 0.0)

    def sample(self, stream, n):
        return stream.multivariate_normal(np.asarray(self.mean), self.covariance, size=n, method='eigh')

    def second_moment(self):
        return float(np.trace(self.covariance) + np.dot(self.mean, self.mean))

    def projection_entropies(self, directions, noise_var):
        """h(v^T X + U) for each row v of directions, U ~ N(0, noise_var)."""
        v = np.atleast_2d(np.asarray(directions, dtype=float))
        var = np.einsum('ni,ij,nj->n', v, self.covariance, v) + noise_var
        return 0.5 * np.log(2 * math.pi * math.e * var)


@dataclass(frozen=True)
class Mixture2Law:
    components: tuple
    weights: tuple

    is_gaussian = False

    def __post_init__(self):
        if len(self.components) == 0 or len(self.components) != len(self.weights):
            raise InvalidCaseError("planar mixture needs matching, nonempty components and weights")
        if any(w < 0 for w in self.weights) or abs(sum(self.weights) - 1.0) > 1e-9:
            raise InvalidCaseError(f"mixture weights must be nonnegative and sum to 1, got {self.weights}")

    def sample(self, stream, n):
        comp = stream.choice(len(self.weights), p=np.asarray(self.weights), size=n)
        out = np.empty((n, 2))
        for k, component in enumerate(self.components):
            idx = np.flatnonzero(comp == k)
            if idx.size:
                out[idx] = component.sample(stream, idx.size)
        return out

    def second_moment(self):
        return sum(w * c.second_moment() for c, w in zip(self.components, self.weights))

    def projection_entropies(self, directions, noise_var):
        """h(v^T X + U) per row v: entropy of a 1-D Gaussian mixture by Simpson's rule."""
        v = np.atleast_2d(np.asarray(directions, dtype=float))
        means = np.stack([v @ np.asarray(c.mean) for c in self.components], axis=1)
        stds = np.sqrt(np.stack(
            [np.einsum('ni,ij,nj->n', v, c.covariance, v) + noise_var for c in self.components], axis=1))
        weights = np.asarray(self.weights)

        out = np.empty(len(v))
        for start in range(0, len(v), PROJECTION_CHUNK):
            m = means[start:start + PROJECTION_CHUNK]
            s = stds[start:start + PROJECTION_CHUNK]
            lo = np.min(m - TAIL_STDS * s, axis=1)
            hi = np.max(m + TAIL_STDS * s, axis=1)
            grid = lo[:, None] + (hi - lo)[:, None] * np.linspace(0.0, 1.0, PROJECTION_GRID)[None, :]
            density = np.einsum('k,nkg->ng', weights, stats.norm.pdf(grid[:, None, :], m[:, :, None], s[:, :, None]))
            out[start:start + PROJECTION_CHUNK] = simpson(entr(density), x=grid, axis=1)
        return out


# --- angle laws ---------------------------------------------------------------

@dataclass(frozen=True)
class UniformAngle:

    def sample(self, stream, n):
        return stream.uniform(-math.pi, math.pi, size=n)

    def pdf(self, theta):
        return np.full_like(np.asarray(theta, dtype=float), 1.0 / (2 * math.pi))

    def entropy(self):
        return math.log(2 * math.pi)

    def expect(self, fn):
        return integrate(lambda t: fn(t) / (2 * math.pi), -math.pi, math.pi)

    def atoms(self, n=QUANTILE_ATOMS):
        theta = -math.pi + 2 * math.pi * (np.arange(n) + 0.5) / n
        return theta, np.full(n, 1.0 / n)

    def singular_points(self):
        return []

    def log_sin_infimum(self):
        return -math.log(2.0)


@dataclass(frozen=True)
class PointMassAngle:
    theta0: float

    def __post_init__(self):
        if not -math.pi <= self.theta0 < math.pi:
            raise InvalidCaseError(f"angle must lie in [-pi, pi), got {self.theta0}")

    def sample(self, stream, n):
        return np.full(n, self.theta0)

    def entropy(self):
        return -math.inf

    def expect(self, fn):
        return fn(self.theta0)

    def atoms(self, n=QUANTILE_ATOMS):
        return np.array([self.theta0]), np.array([1.0])

    def log_sin_infimum(self):
        return -math.inf


@dataclass(frozen=True)
class WrappedGaussianAngle:
    mu: float
    std: float

    def __post_init__(self):
        _check_finite("wrapped gaussian parameters", self.mu, self.std)
        if not self.std > 0:
            raise InvalidCaseError(f"wrapped gaussian std must be > 0, got {self.std}")

    def sample(self, stream, n):
        return wrap_angle(stream.normal(self.mu, self.std, size=n))

    def pdf(self, theta):
        t = np.asarray(theta, dtype=float)
        shifts = 2 * math.pi * np.arange(-WRAP_TERMS, WRAP_TERMS + 1)
        return np.sum(stats.norm.pdf(t[..., None] + shifts, self.mu, self.std), axis=-1)

    def singular_points(self):
        return [float(wrap_angle(self.mu))]

    def entropy(self):
        return integrate(lambda t: float(entr(self.pdf(t))), -math.pi, math.pi, points=self.singular_points())

    def expect(self, fn):
        return integrate(lambda t: fn(t) * float(self.pdf(t)), -math.pi, math.pi, points=self.singular_points())

    def atoms(self, n=QUANTILE_ATOMS):
        q = (np.arange(n) + 0.5) / n
        return wrap_angle(stats.norm.ppf(q, self.mu, self.std)), np.full(n, 1.0 / n)

    def log_sin_infimum(self):
        # ln|sin x| = -ln 2 - sum_k cos(2kx)/k; every term is smallest at phi = mu
        terms = int(math.ceil(math.sqrt(20.0) / self.std)) + 1
        k = np.arange(1, terms + 1)
        return -math.log(2.0) - float(np.sum(np.exp(-2.0 * k * k * self.std ** 2) / k))
