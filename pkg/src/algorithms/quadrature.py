import logging

from scipy.integrate import quad

from src.models.errors import IntegrationError

logger = logging.getLogger(__name__)

QUAD_TOL = 1e-9


def integrate(fn, lo, hi, points=None, tol=QUAD_TOL, weight=None, wvar=None):
    """Adaptive quadrature of fn over [lo, hi].

    Raises IntegrationError when QUADPACK reports a failure and its error
    estimate is above the requested tolerance.
    """
    if hi <= lo:
        return 0.0

    kwargs = {}
    if weight is not None:
        kwargs['weight'] = weight
        kwargs['wvar'] = wvar
    elif points is not None:
        inner = [p for p in points if lo < p < hi]
        if inner:
            kwargs['points'] = inner

    result = quad(fn, lo, hi, epsabs=tol, epsrel=tol, limit=200, full_output=1, **kwargs)
    value, abserr = result[0], result[1]

    if len(result) > 3:
        if abserr > 10 * tol * max(1.0, abs(value)):
            raise IntegrationError(
                f"quadrature over [{lo:.6g}, {hi:.6g}] did not reach {tol:g}: "
                f"error estimate {abserr:.3g} ({result[3].splitlines()[0]})"
            )
        logger.debug("quadrature warning on [%g, %g], accepted with error %g", lo, hi, abserr)

    return value
