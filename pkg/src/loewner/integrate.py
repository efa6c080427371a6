"""Adaptive embedded Runge-Kutta integration for complex-valued ODEs.

A single Dormand-Prince 5(4) stepper drives every flow in the package.  The
state may be a complex scalar or a 1-d complex ndarray (jets, joint
variational systems); the right-hand side is any callable f(t, y) returning
the same shape.

Two hooks cover the needs of Loewner flows:

* ``stop(t, y)`` is checked on accepted states and halts integration early;
  flows use it to report swallowing instead of grinding into a singularity.
* ``refine(t, y)`` marks states near a singular denominator.  A proposed
  step landing there is rejected and retried at half the size until the step
  is small, which resolves close passages without forbidding them.

Trial stages may land where the right-hand side is undefined (outside a
field's domain, exactly on a pole) even when the solution itself stays
clear.  An ArgumentError or ZeroDivisionError raised at a trial stage
therefore rejects the step instead of propagating; only a failure at an
accepted state escapes, and a step collapsing below the floor while the
right-hand side keeps failing raises IntegrationError.

References
----------
Dormand & Prince, "A family of embedded Runge-Kutta formulae",
J. Comp. Appl. Math. 6 (1980) 19-26.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ArgumentError, IntegrationError

# Butcher tableau, c-nodes / stage weights / 5th order / error weights.
_C = (0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0)
_A = (
    (),
    (1.0 / 5.0,),
    (3.0 / 40.0, 9.0 / 40.0),
    (44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0),
    (19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0),
    (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0,
     -5103.0 / 18656.0),
    (35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0,
     11.0 / 84.0),
)
_B5 = (35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0,
       11.0 / 84.0, 0.0)
# b5 - b4; the embedded 4th order solution supplies the error estimate.
_E = (71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0,
      -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0)

_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
_SAFETY = 0.9


@dataclass
class IntegrationResult:
    t: float
    y: object
    stopped: bool
    n_steps: int
    n_rejected: int


def _weighted_sum(terms):
    acc = None
    for c, k in terms:
        if c == 0.0:
            continue
        acc = c * k if acc is None else acc + c * k
    return acc


def _error_norm(err, y_old, y_new, rtol, atol) -> float:
    if isinstance(err, np.ndarray):
        scale = atol + rtol * np.maximum(np.abs(y_old), np.abs(y_new))
        val = float(np.max(np.abs(err) / scale))
    else:
        scale = atol + rtol * max(abs(y_old), abs(y_new))
        val = abs(err) / scale
    return val if math.isfinite(val) else math.inf


def _is_finite(y) -> bool:
    if isinstance(y, np.ndarray):
        return bool(np.all(np.isfinite(y)))
    return math.isfinite(y.real) and math.isfinite(y.imag)


def dopri5(
    f: Callable,
    t0: float,
    y0,
    t1: float,
    rtol: float = 1e-9,
    atol: float = 1e-12,
    stop: Callable | None = None,
    refine: Callable | None = None,
    max_steps: int = 200_000,
    first_step: float | None = None,
) -> IntegrationResult:
    """Integrate dy/dt = f(t, y) from t0 forward to t1.

    Parameters
    ----------
    f : callable
        Right-hand side f(t, y); must return the same shape as y.
    t0, t1 : float
        Time span, t1 >= t0.
    rtol, atol : float
        Local error control: per step the estimate is kept below
        atol + rtol * |y| componentwise.
    stop : callable, optional
        Predicate on accepted states; when true, integration halts and the
        result is flagged ``stopped``.
    refine : callable, optional
        Predicate marking states near a singular denominator; forces small
        steps there (see module docstring).
    max_steps : int
        Budget of accepted plus rejected steps.
    first_step : float, optional
        Initial trial step; default min(span, 1).

    Raises
    ------
    IntegrationError
        On step-size underflow or an exhausted step budget.
    """
    if t1 < t0:
        raise ArgumentError(f"dopri5 integrates forward; got span [{t0}, {t1}]")
    span = t1 - t0
    y = y0
    t = t0
    if span == 0.0:
        return IntegrationResult(t, y, False, 0, 0)
    if stop is not None and stop(t, y):
        return IntegrationResult(t, y, True, 0, 0)

    h = first_step if first_step is not None else min(span, 1.0)
    h = min(h, span)
    h_floor = 1e-14 * max(1.0, abs(t0), abs(t1))
    # steps this small are allowed to enter a refine region
    h_near = max(1e-6 * span, 4.0 * h_floor)

    k = [None] * 7
    k[0] = f(t, y)
    n_steps = 0
    n_rejected = 0
    domain_failed = False

    while True:
        remaining = t1 - t
        if remaining <= h_floor:
            # below time resolution; snap to the endpoint
            t = t1
            break
        if n_steps + n_rejected >= max_steps:
            raise IntegrationError(
                f"step budget {max_steps} exhausted at t = {t:.12g}")
        h = min(h, remaining)
        if h < h_floor:
            note = ("; right-hand side undefined arbitrarily close to the "
                    "state" if domain_failed else "")
            raise IntegrationError(
                f"step size underflow at t = {t:.12g}{note}")

        try:
            for i in range(1, 7):
                incr = _weighted_sum(zip(_A[i], k))
                k[i] = f(t + _C[i] * h, y + h * incr if incr is not None else y)
        except (ArgumentError, ZeroDivisionError):
            n_rejected += 1
            domain_failed = True
            h *= 0.5
            continue
        domain_failed = False
        y_new = y + h * _weighted_sum(zip(_B5, k))
        err = h * _weighted_sum(zip(_E, k))

        if not _is_finite(y_new):
            err_norm = math.inf
        else:
            err_norm = _error_norm(err, y, y_new, rtol, atol)

        if err_norm > 1.0:
            n_rejected += 1
            h *= max(_MIN_FACTOR, _SAFETY * err_norm ** -0.2)
            continue
        if refine is not None and h > h_near and refine(t + h, y_new):
            n_rejected += 1
            h *= 0.5
            continue

        t_new = t + h
        k[0] = k[6]  # first-same-as-last
        t, y = t_new, y_new
        n_steps += 1
        if stop is not None and stop(t, y):
            return IntegrationResult(t, y, True, n_steps, n_rejected)
        factor = _MAX_FACTOR if err_norm == 0.0 else min(
            _MAX_FACTOR, _SAFETY * err_norm ** -0.2)
        h *= max(factor, _MIN_FACTOR)

    return IntegrationResult(t, y, False, n_steps, n_rejected)
