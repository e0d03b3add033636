"""
Special functions.
"""

from typing import Union

import numpy as np

from ..errors import DomainError

HALLEY_TOLERANCE = 1e-14
HALLEY_MAX_ITERATIONS = 100
LOG_FORM_THRESHOLD = 1e250

ArrayLike = Union[float, np.ndarray]


def lambert_w0(x: ArrayLike) -> ArrayLike:
    """
    Principal branch W0 of the Lambert function for x >= 0, i.e. the w >= 0 solving
    w * exp(w) = x.

    Halley iteration started from ln(1 + x) (Corless et al., 1996). Accepts scalars or
    arrays; returns a float for scalar input.
    """
    values = np.asarray(x, dtype=np.float64)
    scalar = values.ndim == 0
    values = np.atleast_1d(values)
    if np.any(np.isnan(values)) or np.any(values < 0):
        raise DomainError("lambert_w0 is defined here for x >= 0 only")
    if np.any(np.isinf(values)):
        raise DomainError("lambert_w0 argument must be finite")

    w = np.log1p(values)
    # w * exp(w) overflows near the top of the float range; iterate w + ln w = ln x there
    huge = values > LOG_FORM_THRESHOLD
    if huge.any():
        w[huge] = _lambert_w0_log_form(values[huge])
    active = (values > 0) & ~huge
    w[values == 0] = 0.0
    for _ in range(HALLEY_MAX_ITERATIONS):
        if not active.any():
            break
        wa = w[active]
        ew = np.exp(wa)
        f = wa * ew - values[active]
        wp1 = wa + 1.0
        step = f / (ew * wp1 - (wa + 2.0) * f / (2.0 * wp1))
        w[active] = wa - step
        converged = np.abs(step) <= HALLEY_TOLERANCE * (1.0 + np.abs(w[active]))
        idx = np.flatnonzero(active)
        active[idx[converged]] = False

    return float(w[0]) if scalar else w.reshape(np.shape(x))


def _lambert_w0_log_form(values: np.ndarray) -> np.ndarray:
    log_x = np.log(values)
    w = log_x - np.log(log_x)
    for _ in range(HALLEY_MAX_ITERATIONS):
        step = (w + np.log(w) - log_x) / (1.0 + 1.0 / w)
        w = w - step
        if np.all(np.abs(step) <= HALLEY_TOLERANCE * (1.0 + np.abs(w))):
            break
    return w
