import logging
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import stats

from src.algorithms.entropy import estimate_log_plus_moments
from src.algorithms.quadrature import integrate
from src.models.errors import ConfigError, InfiniteMomentError
from src.models.vectors import Vec2

logger = logging.getLogger(__name__)

GAUSSIAN_IID = "gaussian-iid"
RING_PHASE = "ring-phase"
FAMILIES = (GAUSSIAN_IID, RING_PHASE)

MC_MIN_DRAWS = 10_000
MC_DEFAULT_DRAWS = 100_000


@dataclass(frozen=True)
class FadingModel:
    """Joint law of the (estimate, error) fading pair of one link.

    gaussian-iid: estimate and error are independent isotropic zero-mean
    Gaussians with per-component stds s and eps.
    ring-phase: estimate uniform on the circle of radius rho, error
    isotropic Gaussian with per-component std eps.
    """

    family: str
    s: float = 0.0
    eps: float = 0.1
    rho: float = 0.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError("family", f"unknown fading family {self.family!r}, expected one of {', '.join(FAMILIES)}")
        for key in ("s", "eps", "rho"):
            if not math.isfinite(getattr(self, key)):
                raise ConfigError(key, "must be finite")
        if self.eps <= 0:
            raise ConfigError("eps", f"must be > 0, got {self.eps}: the error entropy h(err | estimate) "
                                     "must be finite, which needs a nondegenerate estimation error")
        if self.family == GAUSSIAN_IID and self.s < 0:
            raise ConfigError("s", f"must be >= 0, got {self.s}")
        if self.family == RING_PHASE and self.rho <= 0:
            raise ConfigError("rho", f"must be > 0, got {self.rho}")

    @classmethod
    def gaussian_iid(cls, s, eps):
        return cls(GAUSSIAN_IID, s=float(s), eps=float(eps))

    @classmethod
    def ring_phase(cls, rho, eps):
        return cls(RING_PHASE, eps=float(eps), rho=float(rho))

    def second_moment(self):
        if self.family == GAUSSIAN_IID:
            return 2.0 * (self.s ** 2 + self.eps ** 2)
        return self.rho ** 2 + 2.0 * self.eps ** 2

    def err_entropy(self):
        # two independent N(0, eps^2) components
        return math.log(2 * math.pi * math.e * self.eps ** 2)

    def get_representation(self):
        if self.family == GAUSSIAN_IID:
            return {'family': self.family, 's': self.s, 'eps': self.eps}
        return {'family': self.family, 'rho': self.rho, 'eps': self.eps}


@dataclass(frozen=True)
class FadingDraw:
    hat: Vec2
    err: Vec2

    @property
    def fading(self):
        return self.hat + self.err


@dataclass(frozen=True)
class ChannelConfig:
    model_a: FadingModel
    model_h: FadingModel
    noise_var: float = 1.0
    power: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.noise_var) and self.noise_var > 0):
            raise ConfigError("noise_var", f"must be > 0, got {self.noise_var}")
        if not (math.isfinite(self.power) and self.power > 0):
            raise ConfigError("power", f"must be > 0, got {self.power}")

    @property
    def snr(self):
        return self.power / self.noise_var

    def with_snr(self, snr):
        return replace(self, power=snr * self.noise_var)


@dataclass(frozen=True)
class MomentSet:
    second_moment: float
    log_plus_norm: float
    log_plus_inv_norm: float
    err_cond_entropy: float
    log_norm: float
    method: str = "quadrature"
    log_plus_se: float = 0.0
    log_plus_inv_se: float = 0.0

    def __post_init__(self):
        for name in ("second_moment", "log_plus_norm", "log_plus_inv_norm", "err_cond_entropy", "log_norm"):
            if not math.isfinite(getattr(self, name)):
                raise InfiniteMomentError(f"moment {name} is not finite")


def sample_fading(model, stream, n):
    """Draw n (estimate, error) pairs as two (n, 2) arrays."""
    if model.family == GAUSSIAN_IID:
        hat = stream.normal(0.0, model.s, size=(n, 2)) if model.s > 0 else np.zeros((n, 2))
    else:
        phase = stream.uniform(-math.pi, math.pi, size=n)
        hat = model.rho * np.column_stack((np.cos(phase), np.sin(phase)))
    err = stream.normal(0.0, model.eps, size=(n, 2))
    return hat, err


def realize_fading(model, stream):
    hat, err = sample_fading(model, stream, 1)
    return FadingDraw(Vec2.from_array(hat[0]), Vec2.from_array(err[0]))


def receive(x, fading, noise_std, stream, size=None):
    """Received symbol fading^T x + N with N ~ N(0, noise_std^2)."""
    if not noise_std > 0:
        raise ValueError(f"noise_std must be > 0, got {noise_std}")
    noise = stream.normal(0.0, noise_std, size=size)
    if size is None:
        return fading.dot(x) + float(noise)
    return fading.dot(x) + noise


def composite_norm_law(model):
    """Frozen scipy law of the norm of the realized fading hat + err."""
    if model.family == GAUSSIAN_IID:
        return stats.rayleigh(scale=math.sqrt(model.s ** 2 + model.eps ** 2))
    return stats.rice(model.rho / model.eps, scale=model.eps)


def model_moments(model, stream=None, n_mc=MC_DEFAULT_DRAWS, method="quadrature"):
    if method == "quadrature":
        law = composite_norm_law(model)
        centre = float(law.mean())
        hi = centre + 40.0 * float(law.std())
        log_plus = integrate(lambda r: math.log(r) * law.pdf(r), 1.0, hi, points=[centre])
        log_plus_inv = integrate(lambda r: -math.log(r) * law.pdf(r), 0.0, min(1.0, hi), points=[centre])
        return MomentSet(
            second_moment=model.second_moment(),
            log_plus_norm=log_plus,
            log_plus_inv_norm=log_plus_inv,
            err_cond_entropy=model.err_entropy(),
            log_norm=log_plus - log_plus_inv,
        )

    if method != "monte-carlo":
        raise ValueError(f"unknown moment method {method!r}")
    if n_mc < MC_MIN_DRAWS:
        raise ValueError(f"n_mc must be >= {MC_MIN_DRAWS} on the Monte-Carlo path, got {n_mc}")

    hat, err = sample_fading(model, stream, n_mc)
    norms = np.linalg.norm(hat + err, axis=1)
    moments = estimate_log_plus_moments(norms)
    if moments.infinite:
        raise InfiniteMomentError("a fading draw hit the origin exactly; E[log+ 1/|A|] diverges")
    logger.debug("Monte-Carlo moments for %s from %d draws", model.family, n_mc)
    return MomentSet(
        second_moment=model.second_moment(),
        log_plus_norm=moments.log_plus,
        log_plus_inv_norm=moments.log_plus_inv,
        err_cond_entropy=model.err_entropy(),
        log_norm=moments.log_plus - moments.log_plus_inv,
        method="monte-carlo",
        log_plus_se=moments.log_plus_se,
        log_plus_inv_se=moments.log_plus_inv_se,
    )
