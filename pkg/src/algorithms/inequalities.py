"""Numerical checks of the entropy inequalities behind the sum-rate bound.

Each check returns GapReports with gap = lhs - rhs, so a nonnegative gap
means the inequality held. Closed-form cases must pass exactly (up to
quadrature tolerance); Monte-Carlo cases pass when the gap is above
-3 combined standard errors.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import stats
from scipy.optimize import minimize_scalar
from scipy.special import entr

from src.algorithms.bounds import derive_constants, lemma6_worst_case, random_lemma6_instance, ALLOCATION_CAP
from src.algorithms.entropy import (
    DEFAULT_K,
    MIN_SAMPLES,
    EntropyEstimate,
    estimate_entropy_knn,
    estimate_log_plus_moments,
    gaussian_entropy,
    polar_stats,
    wrap_angle,
)
from src.algorithms.maxent import GAMMA_MIN, corollary1_bound, solve_maxent
from src.algorithms.quadrature import integrate
from src.models.errors import CollinearAnglesError, InfiniteMomentError, InvalidCaseError
from src.models.fading import GAUSSIAN_IID, FadingModel, composite_norm_law, model_moments, sample_fading
from src.models.laws import (
    DiscreteLaw,
    Gaussian2Law,
    GaussianLaw,
    GaussianMixtureLaw,
    Mixture2Law,
    RayleighLaw,
    UniformAngle,
    WrappedGaussianAngle,
)
from src.models.streams import make_stream

logger = logging.getLogger(__name__)

CLOSED_FORM_GAUSSIAN = "closed-form-gaussian"
MONTE_CARLO = "monte-carlo"
MODES = (CLOSED_FORM_GAUSSIAN, MONTE_CARLO)

CLOSED_FORM_TOL = 1e-9
SE_MULTIPLIER = 3.0
DEFAULT_CASE_SAMPLES = 20_000
COLLINEAR_TOL = 1e-12
LOG_SIN_GRID = 36
ANGLE_ATOMS = 16
SUP_GRID = 36
NORM_ATOMS = 32
LOG_2PI = math.log(2 * math.pi)
LOG_2PIE = math.log(2 * math.pi * math.e)

SUITE_SEEDS = {1: 1001, 2: 1002, 3: 1003, 4: 1004, 5: 1005, 6: 1006}
SUITE_TRIALS = {1: 20, 2: 50, 3: 10, 4: 25, 5: 25, 6: 100}


@dataclass(frozen=True)
class InequalityCase:
    """One instance of an inequality: signal law, noise, and the lemma-specific laws.

    s_law/t_law are scale-factor laws (Lemma 2), theta_law an angle law on
    [-pi, pi) (Lemma 4), a_model/h_model the fading laws (Lemma 5).
    """

    x_law: object
    noise_var: float = 1.0
    s_law: object = None
    t_law: object = None
    theta_law: object = None
    a_model: FadingModel = None
    h_model: FadingModel = None
    mode: str = CLOSED_FORM_GAUSSIAN
    n_samples: int = DEFAULT_CASE_SAMPLES
    label: str = ""

    def __post_init__(self):
        if self.mode not in MODES:
            raise InvalidCaseError(f"unknown mode {self.mode!r}, expected one of {', '.join(MODES)}")
        if not (math.isfinite(self.noise_var) and self.noise_var > 0):
            raise InvalidCaseError(f"noise_var must be > 0, got {self.noise_var}")
        for name in ("x_law", "s_law", "t_law"):
            law = getattr(self, name)
            if law is not None and not math.isfinite(law.second_moment()):
                raise InvalidCaseError(f"{name} has an infinite second moment")
        if self.mode == CLOSED_FORM_GAUSSIAN and not self.x_law.is_gaussian:
            raise InvalidCaseError("closed-form mode needs a Gaussian signal law")
        if self.mode == MONTE_CARLO and self.n_samples < MIN_SAMPLES:
            raise InvalidCaseError(f"n_samples must be >= {MIN_SAMPLES}, got {self.n_samples}")


@dataclass(frozen=True)
class GapReport:
    label: str
    lhs: float
    rhs: float
    gap: float
    combined_se: float
    passed: bool
    mode: str

    @classmethod
    def build(cls, label, lhs, rhs, combined_se=0.0, mode=CLOSED_FORM_GAUSSIAN, tolerance=CLOSED_FORM_TOL):
        if mode == CLOSED_FORM_GAUSSIAN and combined_se != 0:
            raise ValueError("closed-form reports carry no standard error")
        if rhs == -math.inf or lhs == math.inf:
            gap = math.inf
        else:
            gap = lhs - rhs
        threshold = -tolerance if mode == CLOSED_FORM_GAUSSIAN else -SE_MULTIPLIER * combined_se
        return cls(label, float(lhs), float(rhs), float(gap), float(combined_se), bool(gap >= threshold), mode)

    def as_row(self):
        return {
            'check': self.label, 'lhs': self.lhs, 'rhs': self.rhs, 'gap': self.gap,
            'combined_se': self.combined_se, 'pass': self.passed, 'mode': self.mode,
        }


def _log_plus(x):
    return math.log(x) if x > 1 else 0.0


def _log_plus_inv(x):
    if x == 0:
        return math.inf
    return -math.log(x) if x < 1 else 0.0


def _stream(stream):
    return stream if stream is not None else make_stream()


# --- scale factors ---------------------------------------------------------------

def lemma2_check(case, stream=None):
    """Average entropy of sX + U against tX + U minus the log+ penalties."""
    if case.s_law is None or case.t_law is None:
        raise InvalidCaseError("lemma 2 needs both s_law and t_law")
    s_atoms, t_atoms = case.s_law.atoms(), case.t_law.atoms()
    weights = {}
    for atoms, slot in ((s_atoms, 0), (t_atoms, 1)):
        for value, prob in zip(atoms.values, atoms.probs):
            weights.setdefault(value, [0.0, 0.0])[slot] += prob
    scales = sorted(weights)

    if case.mode == CLOSED_FORM_GAUSSIAN:
        var = case.x_law.var
        entropies = {v: EntropyEstimate.closed_form(0.5 * math.log(2 * math.pi * math.e * (v * v * var + case.noise_var)))
                     for v in scales}
    else:
        stream = _stream(stream)
        x = case.x_law.sample(stream, case.n_samples)
        u = stream.normal(0.0, math.sqrt(case.noise_var), size=case.n_samples)
        # one signal/noise draw shared by every scale value
        entropies = {v: estimate_entropy_knn(v * x + u, stream=child)
                     for v, child in zip(scales, stream.spawn(len(scales)))}

    lhs = sum(weights[v][0] * entropies[v].value for v in scales)
    first = sum(weights[v][1] * entropies[v].value for v in scales)
    penalty = t_atoms.expect(lambda t: _log_plus(abs(t))) + s_atoms.expect(lambda s: _log_plus_inv(abs(s)))
    se = math.sqrt(sum((weights[v][0] - weights[v][1]) ** 2 * entropies[v].std_error ** 2 for v in scales))
    return GapReport.build(case.label or "lemma2", lhs, first - penalty, se, case.mode)


# --- directions and angles ---------------------------------------------------------

def _require_planar(case):
    if not isinstance(case.x_law, (Gaussian2Law, Mixture2Law)):
        raise InvalidCaseError("this check needs a planar law for (X, Y)")


def _direction(theta):
    return np.array([math.cos(theta), math.sin(theta)])


def _noisy_pairs(case, stream):
    xy = case.x_law.sample(stream, case.n_samples)
    return xy + stream.normal(0.0, math.sqrt(case.noise_var), size=(case.n_samples, 2))


def _projection_entropy(case, theta):
    return float(case.x_law.projection_entropies(_direction(theta)[None, :], case.noise_var)[0])


def directional_entropy(theta, case, stream=None):
    """h((X+U)cos(theta) + (Y+V)sin(theta))."""
    _require_planar(case)
    if case.mode == CLOSED_FORM_GAUSSIAN:
        return EntropyEstimate.closed_form(_projection_entropy(case, theta))
    stream = _stream(stream)
    pairs = _noisy_pairs(case, stream)
    return estimate_entropy_knn(pairs @ _direction(theta), stream=stream)


def log_sin_average(theta_law, phi):
    """E[ln|sin(Theta - phi)|] by quadrature split at the logarithmic singularities."""
    singular = [float(wrap_angle(phi)), float(wrap_angle(phi + math.pi))]

    def integrand(t):
        s = abs(math.sin(t - phi))
        return math.log(s) * float(theta_law.pdf(t)) if s > 0 else 0.0

    return integrate(integrand, -math.pi, math.pi, points=singular + theta_law.singular_points())


def log_sin_search(theta_law):
    """inf over phi of E[ln|sin(Theta - phi)|]: coarse grid, then a bounded scalar search."""
    # the average is pi-periodic in phi
    grid = np.linspace(0.0, math.pi, LOG_SIN_GRID, endpoint=False)
    values = [log_sin_average(theta_law, phi) for phi in grid]
    best = int(np.argmin(values))
    half_width = math.pi / LOG_SIN_GRID
    result = minimize_scalar(lambda phi: log_sin_average(theta_law, phi),
                             bounds=(grid[best] - half_width, grid[best] + half_width),
                             method='bounded', options={'xatol': 1e-8})
    return min(values[best], float(result.fun))


def log_sin_infimum(theta_law):
    if hasattr(theta_law, 'log_sin_infimum'):
        return theta_law.log_sin_infimum()
    return log_sin_search(theta_law)


def lemma4_check(case, stream=None):
    """Average directional entropy against its three lower bounds.

    Returns reports for the log-sine bound, the threshold bound in M(1/2),
    and the h(Theta) bound with the universal constant gamma.
    """
    _require_planar(case)
    if case.theta_law is None:
        raise InvalidCaseError("lemma 4 needs theta_law")
    constants = derive_constants()
    sigma2 = case.noise_var
    h_theta = case.theta_law.entropy()
    log_sin = log_sin_infimum(case.theta_law)

    if case.mode == CLOSED_FORM_GAUSSIAN:
        lhs = case.theta_law.expect(lambda t: _projection_entropy(case, t))
        lam_max = float(np.linalg.eigvalsh(case.x_law.covariance)[-1])
        h_sup = 0.5 * math.log(2 * math.pi * math.e * (lam_max + sigma2))
        se = 0.0
    else:
        stream = _stream(stream)
        pairs = _noisy_pairs(case, stream)
        thetas, weights = case.theta_law.atoms(ANGLE_ATOMS)
        sup_grid = np.linspace(0.0, math.pi, SUP_GRID, endpoint=False)
        children = stream.spawn(len(thetas) + len(sup_grid))
        averaged = [estimate_entropy_knn(pairs @ _direction(t), stream=c) for t, c in zip(thetas, children)]
        lhs = float(sum(w * e.value for w, e in zip(weights, averaged)))
        se_lhs = math.sqrt(sum((w * e.std_error) ** 2 for w, e in zip(weights, averaged)))
        # H(theta + pi) = H(theta), so half a turn covers the supremum
        directional = [estimate_entropy_knn(pairs @ _direction(t), stream=c)
                       for t, c in zip(sup_grid, children[len(thetas):])]
        top = max(directional, key=lambda e: e.value)
        h_sup = top.value
        se = math.sqrt(se_lhs ** 2 + 0.25 * top.std_error ** 2)

    base = 0.5 * h_sup + 0.25 * math.log(2 * math.pi * math.e * sigma2)
    threshold = max(constants.m_half, -1.5 * h_theta)
    rhs_log_sin = base + log_sin
    rhs_threshold = base - math.log(math.pi / 2) - 3.0 * threshold
    rhs_entropy = 0.5 * h_sup + 0.25 * math.log(sigma2) + 4.5 * h_theta - constants.gamma
    label = case.label or "lemma4"
    return [
        GapReport.build(f"{label}-log-sine", lhs, rhs_log_sin, se, case.mode),
        GapReport.build(f"{label}-threshold", lhs, rhs_threshold, se, case.mode),
        GapReport.build(f"{label}-entropy", lhs, rhs_entropy, se, case.mode),
    ]


def rotation_identity_gap(theta1, theta2, case):
    """|J(theta1, theta2) - J(0, pi/2) - ln|sin(theta2 - theta1)|| from Gaussian log-determinants."""
    if case.mode != CLOSED_FORM_GAUSSIAN or not isinstance(case.x_law, Gaussian2Law):
        raise InvalidCaseError("the rotation identity is checked on closed-form planar Gaussian cases")
    sine = math.sin(theta2 - theta1)
    if abs(sine) < COLLINEAR_TOL:
        raise CollinearAnglesError(f"angles {theta1} and {theta2} are collinear; both sides are -inf")
    cov = case.x_law.covariance + case.noise_var * np.eye(2)
    rows = np.array([_direction(theta1), _direction(theta2)])
    joint = gaussian_entropy(2, rows @ cov @ rows.T)
    return abs(joint - gaussian_entropy(2, cov) - math.log(abs(sine)))


def sine_bound_margin(xi):
    """|sin xi| minus its piecewise-linear lower bound; nonnegative on [-pi, pi)."""
    x = np.asarray(xi, dtype=float)
    nearest = np.minimum(np.abs(x), np.minimum(np.abs(x - math.pi), np.abs(x + math.pi)))
    margin = np.abs(np.sin(x)) - (2.0 / math.pi) * nearest
    return float(margin) if margin.ndim == 0 else margin


# --- fading vectors ---------------------------------------------------------------

def _expect_norm(model, fn):
    law = composite_norm_law(model)
    centre, spread = float(law.mean()), float(law.std())
    return integrate(lambda r: fn(r) * float(law.pdf(r)), 0.0, centre + 40.0 * spread, points=[centre])


def _norm_entropy(model):
    """h(|A|) of the composite fading norm."""
    if model.family == GAUSSIAN_IID:
        return float(composite_norm_law(model).entropy())
    return _rice_entropy(model.rho, model.eps)


def _rice_entropy(nu, eps):
    law = stats.rice(nu / eps, scale=eps)
    centre, spread = float(law.mean()), float(law.std())
    lo = max(0.0, centre - 12.0 * spread)
    return integrate(lambda r: float(entr(law.pdf(r))), lo, centre + 12.0 * spread, points=[centre])


def conditional_norm_entropy(model):
    """h(|A| | A_hat): the norm of estimate + error given the estimate."""
    if model.family == GAUSSIAN_IID:
        if model.s == 0:
            return _rice_entropy(0.0, model.eps)
        atoms = RayleighLaw(model.s).atoms(NORM_ATOMS)
        return atoms.expect(lambda r: _rice_entropy(r, model.eps))
    return _rice_entropy(model.rho, model.eps)


def _polar_term_closed_form(model, moments):
    """h(A) - h(|A|) - E[ln |A|], exact for the rotation-invariant fading families."""
    if model.family == GAUSSIAN_IID:
        per_component = model.s ** 2 + model.eps ** 2
        h_a = gaussian_entropy(2, per_component * np.eye(2))
        return h_a - _norm_entropy(model) - moments.log_norm
    # isotropic law: the polar decomposition holds with equality and the phase is uniform
    return LOG_2PI


def lemma5_check(case, stream=None):
    """Conditional output entropy at Terminal Y against the four lower bounds.

    X is drawn independently of the estimates, so conditioning on the
    estimate S = A_hat leaves the output entropies unchanged.
    """
    _require_planar(case)
    if case.a_model is None or case.h_model is None:
        raise InvalidCaseError("lemma 5 needs a_model and h_model")
    a_model, h_model = case.a_model, case.h_model
    sigma2 = case.noise_var
    gamma = derive_constants().gamma
    common = 0.25 * math.log(sigma2) - gamma
    err_entropy = a_model.err_entropy()
    cond_norm = conditional_norm_entropy(a_model)
    m2 = a_model.second_moment()
    jensen_term = err_entropy - 0.5 * math.log(2 * math.pi * math.e * m2) - 0.5 * math.log(m2)
    label = case.label or "lemma5"

    if case.mode == CLOSED_FORM_GAUSSIAN:
        if not case.x_law.is_isotropic:
            raise InvalidCaseError("closed-form lemma 5 needs an isotropic Gaussian X")
        p = case.x_law.covariance[0, 0]

        def output_entropy(r):
            return 0.5 * math.log(2 * math.pi * math.e * (p * r * r + sigma2))

        mom_a, mom_h = model_moments(a_model), model_moments(h_model)
        lhs = _expect_norm(a_model, output_entropy)
        base = (0.5 * _expect_norm(h_model, output_entropy) - 0.5 * mom_h.log_plus_norm
                - mom_a.log_plus_inv_norm + common)
        terms = (LOG_2PI, _polar_term_closed_form(a_model, mom_a),
                 err_entropy - cond_norm - mom_a.log_norm, jensen_term)
        return [GapReport.build(f"{label}-{name}", lhs, base + 4.5 * term, 0.0, case.mode)
                for name, term in zip(("angle", "polar", "conditional", "jensen"), terms)]

    stream = _stream(stream)
    s_a, s_h, s_polar = stream.spawn(3)
    hat_a, err_a = sample_fading(a_model, s_a, case.n_samples)
    hat_h, err_h = sample_fading(h_model, s_h, case.n_samples)
    a, h = hat_a + err_a, hat_h + err_h
    norm_a, norm_h = np.hypot(a[:, 0], a[:, 1]), np.hypot(h[:, 0], h[:, 1])
    if np.any(norm_a == 0):
        raise InfiniteMomentError("a fading draw of A hit the origin")

    inner_a = case.x_law.projection_entropies(a, sigma2)
    inner_h = case.x_law.projection_entropies(h, sigma2)
    log_plus_h = np.log(np.maximum(norm_h, 1.0))
    log_plus_inv_a = np.log(np.maximum(1.0 / norm_a, 1.0))
    # per-draw lhs minus the shared part of every right-hand side
    excess = inner_a - 0.5 * inner_h + 0.5 * log_plus_h + log_plus_inv_a - common
    lhs = float(inner_a.mean())
    n = case.n_samples

    polar = polar_stats(a, stream=s_polar)
    polar_term = polar.h_w.value - polar.h_r.value - polar.e_log_r
    polar_se = math.sqrt(polar.h_w.std_error ** 2 + polar.h_r.std_error ** 2 + polar.e_log_r_se ** 2)

    def report(name, per_draw, term, term_se):
        mean = float(per_draw.mean())
        se = math.sqrt(float(per_draw.std(ddof=1)) ** 2 / n + (4.5 * term_se) ** 2)
        # lhs - rhs = mean(per_draw) - 4.5 term
        return GapReport.build(f"{label}-{name}", lhs, lhs - (mean - 4.5 * term), se, case.mode)

    conditional_draws = excess + 4.5 * np.log(norm_a)
    return [
        report("angle", excess, polar.h_theta.value, polar.h_theta.std_error),
        report("polar", excess, polar_term, polar_se),
        report("conditional", conditional_draws, err_entropy - cond_norm, 0.0),
        report("jensen", excess, jensen_term, 0.0),
    ]


# --- single-variable checks -------------------------------------------------------------

def lemma1_check(theta_samples, stream=None):
    """Estimated h(Theta) against the max-entropy value at the measured log+ constraint."""
    theta = np.asarray(theta_samples, dtype=float).ravel()
    if np.any(theta < -math.pi) or np.any(theta >= math.pi):
        raise InvalidCaseError("angle samples must lie in [-pi, pi)")
    moments = estimate_log_plus_moments(np.abs(theta))
    if moments.infinite:
        raise InfiniteMomentError("an angle sample is exactly 0; the log+ constraint diverges")
    measured = moments.log_plus_inv
    estimate = estimate_entropy_knn(theta, stream=stream)
    if measured >= GAMMA_MIN:
        solution = solve_maxent(measured)
        bound, slope = solution.h_max, solution.alpha
    else:
        # below the family's range the uniform density is the unconstrained maximizer
        bound, slope = LOG_2PI, 0.0
    se = math.hypot(estimate.std_error, slope * moments.log_plus_inv_se)
    return GapReport.build("lemma1", bound, estimate.value, se, MONTE_CARLO)


def lemma3_check(samples, k=DEFAULT_K, stream=None):
    report = polar_stats(samples, k=k, stream=stream)
    rhs = report.h_w.value - report.h_r.value - report.e_log_r
    return GapReport.build("lemma3", report.h_theta.value, rhs, report.combined_se, MONTE_CARLO)


def corollary1_check(theta_law, delta, shifts, stream=None, n=DEFAULT_CASE_SAMPLES):
    """E[log+ 1/|Theta - a|], with Theta - a reduced to [-pi, pi), against the threshold bound."""
    bound = corollary1_bound(theta_law.entropy(), delta)
    theta = theta_law.sample(_stream(stream), n)
    reports = []
    for shift in shifts:
        moments = estimate_log_plus_moments(np.abs(wrap_angle(theta - shift)))
        reports.append(GapReport.build(f"corollary1-shift{shift:+.4f}", bound, moments.log_plus_inv,
                                       moments.log_plus_inv_se, MONTE_CARLO))
    return reports


# --- randomized cases -------------------------------------------------------------

def _log_uniform(stream, lo, hi):
    return float(10.0 ** stream.uniform(math.log10(lo), math.log10(hi)))


def _random_covariance(stream, lo=0.05, hi=5.0):
    eig = np.array([_log_uniform(stream, lo, hi), _log_uniform(stream, lo, hi)])
    phi = stream.uniform(-math.pi, math.pi)
    rot = np.array([[math.cos(phi), -math.sin(phi)], [math.sin(phi), math.cos(phi)]])
    cov = rot @ np.diag(eig) @ rot.T
    return 0.5 * (cov + cov.T)


def _random_mixture2(stream):
    size = int(stream.integers(2, 4))
    components = tuple(Gaussian2Law.from_matrix(_random_covariance(stream, 0.1, 2.0), stream.uniform(-1.5, 1.5, 2))
                       for _ in range(size))
    return Mixture2Law(components, tuple(float(w) for w in stream.dirichlet(np.ones(size))))


def _random_scale_law(stream):
    values = tuple(_log_uniform(stream, 0.25, 4.0) for _ in range(3))
    return DiscreteLaw(values, tuple(float(p) for p in stream.dirichlet(np.ones(3))))


def random_lemma2_case(stream, mode=MONTE_CARLO, n_samples=DEFAULT_CASE_SAMPLES):
    if mode == CLOSED_FORM_GAUSSIAN:
        x_law = GaussianLaw(_log_uniform(stream, 0.1, 10.0))
    else:
        size = int(stream.integers(2, 4))
        x_law = GaussianMixtureLaw(tuple(float(m) for m in stream.uniform(-2.0, 2.0, size)),
                                   tuple(float(s) for s in stream.uniform(0.3, 1.5, size)),
                                   tuple(float(w) for w in stream.dirichlet(np.ones(size))))
    return InequalityCase(x_law=x_law, noise_var=_log_uniform(stream, 0.1, 2.0),
                          s_law=_random_scale_law(stream), t_law=_random_scale_law(stream),
                          mode=mode, n_samples=n_samples)


def random_lemma4_case(stream, mode=MONTE_CARLO, n_samples=10_000):
    theta_law = WrappedGaussianAngle(float(stream.uniform(-math.pi, math.pi)), _log_uniform(stream, 0.05, 2.0))
    return InequalityCase(x_law=Gaussian2Law.from_matrix(_random_covariance(stream)),
                          noise_var=_log_uniform(stream, 0.1, 2.0), theta_law=theta_law,
                          mode=mode, n_samples=n_samples)


def random_lemma5_case(stream, n_samples=10_000):
    a_model = FadingModel.ring_phase(float(stream.uniform(0.5, 2.0)), _log_uniform(stream, 0.05, 0.5))
    h_model = FadingModel.gaussian_iid(float(stream.uniform(0.5, 1.5)), _log_uniform(stream, 0.05, 0.5))
    return InequalityCase(x_law=_random_mixture2(stream), noise_var=_log_uniform(stream, 0.1, 2.0),
                          a_model=a_model, h_model=h_model, mode=MONTE_CARLO, n_samples=n_samples)


def random_polar_law(stream):
    if stream.random() < 0.5:
        return Gaussian2Law.from_matrix(_random_covariance(stream), stream.uniform(-1.0, 1.0, 2))
    return _random_mixture2(stream)


def random_angle_density(stream):
    if stream.random() < 0.2:
        return UniformAngle()
    return WrappedGaussianAngle(float(stream.uniform(-1.0, 1.0)), _log_uniform(stream, 0.03, 3.0))


# --- suite trials -------------------------------------------------------------------

def _lemma1_trial(stream):
    case_stream, eval_stream = stream.spawn(2)
    law = random_angle_density(case_stream)
    return [lemma1_check(law.sample(case_stream, DEFAULT_CASE_SAMPLES), stream=eval_stream)]


def _lemma2_trial(stream):
    case_stream, eval_stream = stream.spawn(2)
    return [lemma2_check(random_lemma2_case(case_stream), eval_stream)]


def _lemma3_trial(stream):
    case_stream, eval_stream = stream.spawn(2)
    law = random_polar_law(case_stream)
    return [lemma3_check(law.sample(case_stream, DEFAULT_CASE_SAMPLES), stream=eval_stream)]


def _lemma4_trial(stream):
    case_stream, eval_stream = stream.spawn(2)
    return lemma4_check(random_lemma4_case(case_stream), eval_stream)


def _lemma5_trial(stream):
    case_stream, eval_stream = stream.spawn(2)
    return lemma5_check(random_lemma5_case(case_stream), eval_stream)


def _lemma6_trial(stream):
    s_law, budget, sigma2 = random_lemma6_instance(stream)
    worst = lemma6_worst_case(s_law, budget, sigma2)
    return [GapReport.build("lemma6", ALLOCATION_CAP, worst.delta, tolerance=1e-6)]


def get_verifier(lemma):
    verifiers = {
        1: _lemma1_trial,
        2: _lemma2_trial,
        3: _lemma3_trial,
        4: _lemma4_trial,
        5: _lemma5_trial,
        6: _lemma6_trial,
    }
    return verifiers.get(lemma)


def run_suite(lemma, trials, stream):
    """Reports of `trials` randomized instances, each on its own child stream."""
    verifier = get_verifier(lemma)
    if verifier is None:
        raise InvalidCaseError(f"no verifier for lemma {lemma}; expected one of 1-6")
    return [verifier(child) for child in stream.spawn(trials)]
