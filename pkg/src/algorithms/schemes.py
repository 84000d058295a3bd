"""Achievable sum rates of concrete transmission schemes by Monte-Carlo.

All schemes use Gaussian signalling with interference treated as noise on
the real channel, so each user gets 1/2 ln(1 + SINR) nats per channel use.
"""
import logging
import math
from dataclasses import dataclass
from multiprocessing import Pool

import numpy as np
from tqdm import tqdm

from src.algorithms.curves import RateCurve, least_squares_prelog
from src.models.errors import GeometryError, InsufficientSpanError, InvalidCaseError, NearCollinearError
from src.models.fading import sample_fading
from src.models.vectors import Vec2

logger = logging.getLogger(__name__)

ZF_IMPERFECT = "zf-imperfect"
ZF_PERFECT = "zf-perfect"
SINGLE_USER = "single-user"
COOPERATIVE = "cooperative"
SCHEMES = (ZF_IMPERFECT, ZF_PERFECT, SINGLE_USER, COOPERATIVE)

COLLINEAR_SIN_TOL = 1e-6
MAX_SKIP_FRACTION = 0.05
MIN_DRAWS = 10_000
CHUNK_DRAWS = 25_000
MIN_FIT_POINTS = 4
MIN_FIT_DECADES = 3.0


@dataclass(frozen=True)
class Scheme:
    tag: str
    power_split: float = 0.5

    def __post_init__(self):
        if self.tag not in SCHEMES:
            raise InvalidCaseError(f"unknown scheme {self.tag!r}, expected one of {', '.join(SCHEMES)}")
        if not 0.0 <= self.power_split <= 1.0:
            raise InvalidCaseError(f"power_split must lie in [0, 1], got {self.power_split}")


@dataclass(frozen=True)
class SimResult:
    snr: float
    rate_y: float
    rate_z: float
    sum_rate: float
    n_mc: int
    std_error: float
    skipped: int = 0


def zf_precoders(a_hat, h_hat):
    """Unit zero-forcing beamformers: w_y orthogonal to h_hat, w_z orthogonal to a_hat."""
    norm_a, norm_h = a_hat.norm(), h_hat.norm()
    if norm_a == 0 or norm_h == 0:
        raise NearCollinearError("zero channel estimate, the precoders are undefined")
    sine = (a_hat.c1 * h_hat.c2 - a_hat.c2 * h_hat.c1) / (norm_a * norm_h)
    if abs(sine) < COLLINEAR_SIN_TOL:
        raise NearCollinearError(f"estimates are collinear (|sin| = {abs(sine):.3g})")
    w_y = Vec2(-h_hat.c2, h_hat.c1) * (1.0 / norm_h)
    if a_hat.dot(w_y) < 0:
        w_y = w_y * -1.0
    w_z = Vec2(-a_hat.c2, a_hat.c1) * (1.0 / norm_a)
    if h_hat.dot(w_z) < 0:
        w_z = w_z * -1.0
    return w_y, w_z


def _zf_directions(a_hat, h_hat):
    norm_a = np.hypot(a_hat[:, 0], a_hat[:, 1])
    norm_h = np.hypot(h_hat[:, 0], h_hat[:, 1])
    cross = a_hat[:, 0] * h_hat[:, 1] - a_hat[:, 1] * h_hat[:, 0]
    with np.errstate(divide='ignore', invalid='ignore'):
        valid = (norm_a > 0) & (norm_h > 0) & (np.abs(cross) >= COLLINEAR_SIN_TOL * norm_a * norm_h)
        w_y = np.column_stack((-h_hat[:, 1], h_hat[:, 0])) / norm_h[:, None]
        w_z = np.column_stack((-a_hat[:, 1], a_hat[:, 0])) / norm_a[:, None]
    w_y *= np.where(np.einsum('ni,ni->n', a_hat, w_y) < 0, -1.0, 1.0)[:, None]
    w_z *= np.where(np.einsum('ni,ni->n', h_hat, w_z) < 0, -1.0, 1.0)[:, None]
    return w_y, w_z, valid


def zf_rates(a_hat, h_hat, a, h, p_y, p_z, noise_var):
    """Per-draw zero-forcing rates with precoders built from (a_hat, h_hat).

    Returns (rate_y, rate_z, valid); rates are nan where the estimates are
    collinear and the draw must be skipped.
    """
    a_hat, h_hat, a, h = (np.atleast_2d(np.asarray(v, dtype=float)) for v in (a_hat, h_hat, a, h))
    w_y, w_z, valid = _zf_directions(a_hat, h_hat)

    def gain(v, w):
        return np.einsum('ni,ni->n', v, w) ** 2

    rate_y = 0.5 * np.log1p(gain(a, w_y) * p_y / (gain(a, w_z) * p_z + noise_var))
    rate_z = 0.5 * np.log1p(gain(h, w_z) * p_z / (gain(h, w_y) * p_y + noise_var))
    rate_y[~valid] = np.nan
    rate_z[~valid] = np.nan
    return rate_y, rate_z, valid


# --- per-scheme kernels: (config, snr, split, stream, n) -> (rate_y, rate_z, valid) ---

def _draw(config, stream, n):
    a_stream, h_stream = stream.spawn(2)
    hat_a, err_a = sample_fading(config.model_a, a_stream, n)
    hat_h, err_h = sample_fading(config.model_h, h_stream, n)
    return hat_a, hat_a + err_a, hat_h, hat_h + err_h


def _zf_imperfect(config, snr, split, stream, n):
    hat_a, a, hat_h, h = _draw(config, stream, n)
    energy = snr * config.noise_var
    return zf_rates(hat_a, hat_h, a, h, split * energy, (1 - split) * energy, config.noise_var)


def _zf_perfect(config, snr, split, stream, n):
    _, a, _, h = _draw(config, stream, n)
    energy = snr * config.noise_var
    return zf_rates(a, h, a, h, split * energy, (1 - split) * energy, config.noise_var)


def _single_user(config, snr, split, stream, n):
    hat_a, a, _, _ = _draw(config, stream, n)
    norm = np.hypot(hat_a[:, 0], hat_a[:, 1])
    valid = norm > 0
    with np.errstate(divide='ignore', invalid='ignore'):
        projection = np.einsum('ni,ni->n', a, hat_a) / norm
    rate_y = 0.5 * np.log1p(projection ** 2 * snr)
    rate_y[~valid] = np.nan
    return rate_y, np.where(valid, 0.0, np.nan), valid


def _cooperative(config, snr, split, stream, n):
    _, a, _, h = _draw(config, stream, n)
    c = snr / 2.0
    norm2_a = np.einsum('ni,ni->n', a, a)
    norm2_h = np.einsum('ni,ni->n', h, h)
    det_g = a[:, 0] * h[:, 1] - a[:, 1] * h[:, 0]
    # det(I + c G G^T) for the 2x2 stack G of a^T and h^T
    total = 0.5 * np.log1p(c * (norm2_a + norm2_h) + c * c * det_g ** 2)
    rate_y = 0.5 * np.log1p(c * norm2_a)
    return rate_y, total - rate_y, np.ones(n, dtype=bool)


def get_scheme(tag):
    schemes = {
        ZF_IMPERFECT: _zf_imperfect,
        ZF_PERFECT: _zf_perfect,
        SINGLE_USER: _single_user,
        COOPERATIVE: _cooperative,
    }
    return schemes.get(tag)


def _simulate_chunk(task):
    tag, split, config, snr, stream, n = task
    rate_y, rate_z, valid = get_scheme(tag)(config, snr, split, stream, n)
    rate_y, rate_z = rate_y[valid], rate_z[valid]
    total = rate_y + rate_z
    return np.array([valid.sum(), n - valid.sum(), rate_y.sum(), rate_z.sum(), total.sum(), (total ** 2).sum()])


def _chunk_sizes(n_mc, chunk_draws):
    full, rest = divmod(n_mc, chunk_draws)
    return [chunk_draws] * full + ([rest] if rest else [])


def scheme_sum_rate(scheme, config, snr, n_mc, stream, workers=1, chunk_draws=CHUNK_DRAWS):
    """Average rates of one scheme at one snr.

    The draws are cut into fixed-size chunks, each on its own child stream,
    so results only depend on (stream, n_mc, chunk_draws) and not on the
    number of workers.
    """
    if n_mc < MIN_DRAWS:
        raise InvalidCaseError(f"n_mc must be >= {MIN_DRAWS}, got {n_mc}")
    if not (math.isfinite(snr) and snr > 0):
        raise InvalidCaseError(f"snr must be finite and > 0, got {snr}")
    sizes = _chunk_sizes(n_mc, chunk_draws)
    tasks = [(scheme.tag, scheme.power_split, config, snr, child, size)
             for child, size in zip(stream.spawn(len(sizes)), sizes)]
    if workers > 1:
        with Pool(processes=workers) as pool:
            partials = pool.map(_simulate_chunk, tasks)
    else:
        partials = [_simulate_chunk(task) for task in tasks]

    kept, skipped, sum_y, sum_z, sum_total, sum_sq = np.sum(np.stack(partials), axis=0)
    kept, skipped = int(kept), int(skipped)
    if skipped:
        logger.info("%s at snr %.4g: skipped %d of %d near-collinear draws", scheme.tag, snr, skipped, n_mc)
    if skipped > MAX_SKIP_FRACTION * n_mc:
        raise GeometryError(f"{scheme.tag}: {skipped / n_mc:.1%} of draws were degenerate, "
                            f"more than {MAX_SKIP_FRACTION:.0%}")

    mean = sum_total / kept
    variance = max(sum_sq / kept - mean * mean, 0.0) * kept / max(kept - 1, 1)
    return SimResult(snr=float(snr), rate_y=float(sum_y / kept), rate_z=float(sum_z / kept),
                     sum_rate=float(sum_y / kept + sum_z / kept), n_mc=kept,
                     std_error=math.sqrt(variance / kept), skipped=skipped)


def sim_sweep(scheme, config, snr_grid, n_mc, stream, workers=1, progress=False):
    """SimResults over a grid, one child stream per snr point."""
    grid = [float(s) for s in snr_grid]
    results = []
    for snr, child in tqdm(list(zip(grid, stream.spawn(len(grid)))), desc=scheme.tag, disable=not progress):
        results.append(scheme_sum_rate(scheme, config, snr, n_mc, child, workers=workers))
    curve = RateCurve(tuple(grid), tuple(r.sum_rate for r in results), scheme.tag)
    return results, curve


def prelog_fit(curve):
    if len(curve.snr_grid) < MIN_FIT_POINTS:
        raise InsufficientSpanError(f"need at least {MIN_FIT_POINTS} points, got {len(curve.snr_grid)}")
    if curve.decades < MIN_FIT_DECADES:
        raise InsufficientSpanError(
            f"grid spans {curve.decades:.2f} decades, need at least {MIN_FIT_DECADES:g}")
    return least_squares_prelog(curve)
