"""Loewner chain coefficients by integrating-factor quadrature.

For the chain f_s(z) = e^s z + a2(s) z^2 + a3(s) z^3 + ... attached to a
unimodular driving k, the coefficient ODEs close triangularly and integrate
in closed quadrature form:

    a2(s) = -2 e^{2s} int_s^inf e^{-tau} k(tau) dtau
    a3(s) = -e^{3s}  int_s^inf e^{-3tau} (2 e^tau k^2 + 4 a2 k) dtau

Both are evaluated in one backward pass over [s, T_max] of the coupled
system for y_m = e^{-m t} a_m(t), whose value at infinity vanishes; the
adaptive stepper is then exactly an adaptive quadrature of the integrals
above, with the tail beyond T_max bounded by 2 e^{-(T_max - s)}.  The
normalized coefficients b_m = e^{-s} a_m obey |b2| <= 2, |b3| <= 3, with
equality for constant driving.

:func:`coeffs_from_jet` cross-checks through an unrelated code path: the
truncated power series of the flow itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .driving import DrivingTerm
from .errors import ArgumentError, DrivingError
from .integrate import dopri5
from .radial import chain_jet

TAIL_HORIZON = 40.0
QUADRATURE_TOL = 1e-10

BOUND_B2 = 2.0
BOUND_B3 = 3.0
BOUND_SLACK = 1e-8


def herglotz_coeffs(k: complex, j: int) -> complex:
    """Taylor coefficient p_j = 2 k^j of (1 + k z)/(1 - k z); p_0 = 1."""
    if j < 0:
        raise ArgumentError(f"coefficient index must be nonnegative, got {j}")
    if j == 0:
        return 1.0 + 0.0j
    return 2.0 * complex(k) ** j


def _check_driving(driving: DrivingTerm, s: float, t_max: float) -> None:
    if driving.codomain != "unimodular":
        raise DrivingError("chain coefficients need a unimodular driving")
    if t_max - s < TAIL_HORIZON - 1e-9:
        raise ArgumentError(
            f"need T_max - s >= {TAIL_HORIZON:g} for a negligible tail, "
            f"got {t_max - s:g}")
    if driving.t_max < t_max - 1e-9:
        raise DrivingError(
            f"driving must be defined on [{s:g}, {t_max:g}]")


def _backward_pass(s: float, driving: DrivingTerm,
                   t_max: float) -> tuple[complex, complex, float]:
    """One reverse sweep for (a2, a3); returns them with the tail bound."""
    T = t_max
    edges = np.concatenate(([s], driving.breakpoints(s, T), [T]))
    Y = np.zeros(2, dtype=complex)
    # walk the t-cells from the far end back toward s
    for a, b in zip(edges[-2::-1], edges[::-1]):
        if driving.is_piecewise_constant:
            kc = driving.value_at(a)
            k_of_sigma = lambda _sig, kc=kc: kc
        else:
            k_of_sigma = lambda sig: driving.value_at(T - sig)

        def rhs(sig, y, k_of_sigma=k_of_sigma):
            t = T - sig
            k = k_of_sigma(sig)
            e1 = math.exp(-t)
            d2 = -2.0 * e1 * k
            d3 = -2.0 * e1 * e1 * k * k - 4.0 * e1 * k * y[0]
            return np.array([d2, d3])

        res = dopri5(rhs, T - b, Y, T - a, rtol=1e-12, atol=1e-14)
        Y = res.y
    a2 = math.exp(2.0 * s) * Y[0]
    a3 = math.exp(3.0 * s) * Y[1]
    tail = 2.0 * math.exp(-(T - s))
    return complex(a2), complex(a3), tail


def a2_quadrature(s: float, driving: DrivingTerm,
                  t_max: float | None = None) -> complex:
    """Second chain coefficient a2(s); Koebe driving k = -1 gives 2 e^s."""
    t_max = s + TAIL_HORIZON if t_max is None else t_max
    _check_driving(driving, s, t_max)
    a2, _, _ = _backward_pass(s, driving, t_max)
    return a2


def a3_quadrature(s: float, driving: DrivingTerm,
                  t_max: float | None = None) -> complex:
    """Third chain coefficient a3(s); Koebe driving k = -1 gives 3 e^s."""
    t_max = s + TAIL_HORIZON if t_max is None else t_max
    _check_driving(driving, s, t_max)
    _, a3, _ = _backward_pass(s, driving, t_max)
    return a3


@dataclass(frozen=True)
class CoefficientResult:
    """Chain coefficients with normalized values and their bound check."""

    s: float
    a2: complex
    a3: complex
    b2: complex
    b3: complex
    bounds_pass: bool
    error_budget: float


def bieberbach_verify(driving: DrivingTerm, s: float = 0.0,
                      t_max: float | None = None) -> CoefficientResult:
    """Compute (a2, a3), normalize to (b2, b3), and check |b2|<=2, |b3|<=3.

    The error budget is the quadrature tolerance plus the truncation tail
    2 e^{-(T_max - s)}.
    """
    t_max = s + TAIL_HORIZON if t_max is None else t_max
    _check_driving(driving, s, t_max)
    a2, a3, tail = _backward_pass(s, driving, t_max)
    b2 = math.exp(-s) * a2
    b3 = math.exp(-s) * a3
    ok = (abs(b2) <= BOUND_B2 + BOUND_SLACK) and (abs(b3) <= BOUND_B3 + BOUND_SLACK)
    return CoefficientResult(s=s, a2=a2, a3=a3, b2=b2, b3=b3,
                             bounds_pass=bool(ok),
                             error_budget=QUADRATURE_TOL + tail)


def coeffs_from_jet(s: float, driving: DrivingTerm,
                    t_max: float | None = None,
                    tol: float = 1e-9) -> tuple[complex, complex]:
    """(a2, a3) through the flow's own power series, for cross-validation.

    Runs the renormalized jet of the flow to a horizon where its
    coefficients stabilize below tol; independent of the quadrature path.
    """
    horizon = TAIL_HORIZON if t_max is None else t_max - s
    if horizon <= 0:
        raise ArgumentError("t_max must exceed s")
    jet = chain_jet(s, driving, order=3, tol=tol, max_horizon=horizon)
    return complex(jet.coeffs[2]), complex(jet.coeffs[3])
