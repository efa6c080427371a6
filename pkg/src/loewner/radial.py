"""Radial Loewner flows in the unit disc.

The evolution family phi_{s,t} solves

    d/dt phi_{s,t}(z) = -phi (1 + k(t) phi) / (1 - k(t) phi),   phi_{s,s} = id,

for a unimodular driving k.  This module integrates that flow for points
(:func:`evolve`) and for truncated power series (:func:`evolve_jet`),
computes the associated Loewner chain f_s = lim e^t phi_{s,t}
(:func:`chain_point`, :func:`chain_jet`), and runs the reverse flow

    d/dt g = +g (1 + k(t) g) / (1 - k(t) g),   g(0) = z,

whose modulus grows monotonically and which may be swallowed at the
boundary (:func:`reverse_evolve`, :func:`radial_sle_flow`).

Point flows and chains are integrated in renormalized variables: the chain
integrates v = e^t phi directly, and jets integrate u = e^(t-s) W where W is
the jet of phi_{s,t}.  In those variables the forcing decays like e^(s-t),
so horizons converge geometrically, and the linear jet coefficient of u is
preserved exactly by the stepper: the computed phi'(0) is e^(s-t) to the
accuracy of the exponential alone.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .driving import DrivingTerm
from .errors import ArgumentError, ConvergenceError, DrivingError
from .geometry import check_disc_point
from .integrate import dopri5
from .jets import DEFAULT_ORDER, Jet, div_coeffs, mul_coeffs

SWALLOW_EPS = 1e-7
# proposed steps landing with |1 - k w| below this are re-taken smaller
DENOMINATOR_GUARD = 1e-3

DEFAULT_REL_TOL = 1e-9
DEFAULT_ABS_TOL = 1e-12

CHAIN_STEP = 1.0
CHAIN_MAX_HORIZON = 60.0


@dataclass(frozen=True)
class ChainValue:
    """A Loewner chain evaluation with its convergence certificate."""

    value: complex
    increment: float     # |last horizon increment|, below the requested tol
    horizon: float       # time at which the scan stopped


@dataclass(frozen=True)
class FlowOutcome:
    """Result of a reverse flow: a value, or a swallow time."""

    value: complex | None
    swallowed: bool
    swallow_time: float | None = None

    def require_value(self) -> complex:
        from .errors import SwallowedError
        if self.swallowed:
            raise SwallowedError(self.swallow_time)
        return self.value


def radial_field(w: complex, k: complex) -> complex:
    """Vector field value -w (1 + k w) / (1 - k w)."""
    return -w * (1.0 + k * w) / (1.0 - k * w)


def _require_unimodular(driving: DrivingTerm) -> None:
    if driving.codomain != "unimodular":
        raise DrivingError("radial flows need a unimodular driving term")


def _require_domain(driving: DrivingTerm, s: float, t: float) -> None:
    if s < driving.t_min - 1e-12 or t > driving.t_max + 1e-12:
        raise DrivingError(
            f"driving domain [{driving.t_min:g}, {driving.t_max:g}] does not "
            f"cover [{s:g}, {t:g}]")


def _cell_edges(driving: DrivingTerm, s: float, t: float) -> np.ndarray:
    return np.concatenate(([s], driving.breakpoints(s, t), [t]))


def _integrate_cells(driving, s, t, y0, make_rhs, make_refine=None,
                     make_stop=None, rtol=DEFAULT_REL_TOL,
                     atol=DEFAULT_ABS_TOL):
    """Integrate over [s, t] splitting at driving knots.

    make_rhs(k_of_t) builds the RHS given a time-to-value callable; for
    piecewise-constant drivings the value is frozen per cell so the stepper
    never samples across a jump.
    """
    y = y0
    edges = _cell_edges(driving, s, t)
    for a, b in zip(edges[:-1], edges[1:]):
        if driving.is_piecewise_constant:
            kc = driving.value_at(a)
            k_of_t = lambda _t, kc=kc: kc
        else:
            k_of_t = driving.value_at
        rhs = make_rhs(k_of_t)
        res = dopri5(
            rhs, a, y, b, rtol=rtol, atol=atol,
            stop=make_stop(k_of_t) if make_stop is not None else None,
            refine=make_refine(k_of_t) if make_refine is not None else None,
        )
        y = res.y
        if res.stopped:
            return res.t, y, True
    return t, y, False


def evolve(z: complex, s: float, t: float, driving: DrivingTerm,
           rel_tol: float = DEFAULT_REL_TOL,
           abs_tol: float = DEFAULT_ABS_TOL) -> complex:
    """Evaluate phi_{s,t}(z) for s <= t.

    The origin is fixed and |phi| never exceeds |z|; with k = -1 this is the
    flow whose chain is the Koebe function.
    """
    z = check_disc_point(z)
    if t < s:
        raise ArgumentError(f"evolve needs s <= t, got s={s}, t={t}")
    _require_unimodular(driving)
    _require_domain(driving, s, t)
    if z == 0 or t == s:
        return z

    def make_rhs(k_of_t):
        return lambda tt, w: radial_field(w, k_of_t(tt))

    def make_refine(k_of_t):
        return lambda tt, w: abs(1.0 - k_of_t(tt) * w) < DENOMINATOR_GUARD

    _, w, _ = _integrate_cells(driving, s, t, z, make_rhs, make_refine,
                               rtol=rel_tol, atol=abs_tol)
    return w


def _jet_rhs_factory(s: float, order: int):
    """RHS of the renormalized jet flow du/dt = -2 k (u * W) / (1 - k W).

    Here W = e^(s-t) u is the jet of phi_{s,t}.  The constant and linear
    coefficients of the RHS vanish identically, so u[0] = 0 and u[1] = 1
    are preserved exactly in floating point.
    """
    def make_rhs(k_of_t):
        def rhs(tt, u):
            k = k_of_t(tt)
            w = math.exp(s - tt) * u
            den = -k * w
            den[0] = den[0] + 1.0
            return (-2.0 * k) * div_coeffs(mul_coeffs(u, w), den)
        return rhs
    return make_rhs


def evolve_jet(s: float, t: float, driving: DrivingTerm,
               order: int = DEFAULT_ORDER,
               rel_tol: float = DEFAULT_REL_TOL,
               abs_tol: float = DEFAULT_ABS_TOL) -> Jet:
    """Jet of phi_{s,t} at the origin, truncated at ``order``.

    The linear coefficient is e^(s-t) exactly (up to the exponential), and
    the constant coefficient is exactly zero.
    """
    if t < s:
        raise ArgumentError(f"evolve_jet needs s <= t, got s={s}, t={t}")
    if order < 1:
        raise ArgumentError("jet order must be at least 1")
    _require_unimodular(driving)
    _require_domain(driving, s, t)
    u0 = Jet.identity(order).coeffs
    _, u, _ = _integrate_cells(driving, s, t, u0, _jet_rhs_factory(s, order),
                               rtol=rel_tol, atol=abs_tol)
    return Jet(math.exp(s - t) * u)


def _chain_scan(driving, s, state0, make_rhs, distance, tol, rtol, atol,
                max_horizon):
    """Advance horizons in unit steps until increments fall below tol."""
    t_cap = min(s + max_horizon, driving.t_max)
    if t_cap <= s:
        raise DrivingError("driving domain does not extend beyond s")
    state, t = state0, s
    while t < t_cap - 1e-12:
        t_next = min(t + CHAIN_STEP, t_cap)
        _, new_state, _ = _integrate_cells(driving, t, t_next, state,
                                           make_rhs, rtol=rtol, atol=atol)
        inc = distance(new_state, state)
        state, t = new_state, t_next
        if inc < tol:
            return state, inc, t
    raise ConvergenceError(
        f"chain increments did not fall below {tol:g} by t = {t_cap:g}")


def chain_point(z: complex, s: float, driving: DrivingTerm,
                tol: float = 1e-8,
                rel_tol: float = DEFAULT_REL_TOL,
                abs_tol: float = DEFAULT_ABS_TOL,
                max_horizon: float = CHAIN_MAX_HORIZON) -> ChainValue:
    """Loewner chain value f_s(z) = lim_t e^t phi_{s,t}(z).

    Integrates v = e^t phi directly; the horizon grows in unit increments
    until successive values differ by less than tol.  Satisfies
    f_t(phi_{s,t}(z)) = f_s(z).
    """
    z = check_disc_point(z)
    _require_unimodular(driving)
    if z == 0:
        return ChainValue(0.0 + 0.0j, 0.0, s)

    def make_rhs(k_of_t):
        def rhs(tt, v):
            k = k_of_t(tt)
            w = cmath.exp(-tt) * v
            return -2.0 * k * v * w / (1.0 - k * w)
        return rhs

    v0 = cmath.exp(s) * z
    value, inc, horizon = _chain_scan(
        driving, s, v0, make_rhs, lambda a, b: abs(a - b), tol, rel_tol,
        abs_tol, max_horizon)
    return ChainValue(value, inc, horizon)


def chain_jet(s: float, driving: DrivingTerm,
              order: int = DEFAULT_ORDER,
              tol: float = 1e-9,
              rel_tol: float = 1e-11,
              abs_tol: float = 1e-13,
              max_horizon: float = 40.0) -> Jet:
    """Jet of the chain map f_s = lim e^t phi_{s,t}, truncated at ``order``.

    The linear coefficient is e^s.  Horizons advance in unit steps until
    the renormalized jet stabilizes coefficientwise below tol.
    """
    _require_unimodular(driving)
    u0 = Jet.identity(order).coeffs
    u, _, _ = _chain_scan(
        driving, s, u0, _jet_rhs_factory(s, order),
        lambda a, b: float(np.max(np.abs(a - b))), tol, rel_tol, abs_tol,
        max_horizon)
    return Jet(math.exp(s) * u)


def reverse_evolve(z: complex, t: float, driving: DrivingTerm,
                   swallow_eps: float = SWALLOW_EPS,
                   rel_tol: float = DEFAULT_REL_TOL,
                   abs_tol: float = DEFAULT_ABS_TOL) -> FlowOutcome:
    """Reverse radial flow dg/dt = g (1 + k g) / (1 - k g) from g(0) = z.

    |g| grows monotonically; if it reaches 1 - swallow_eps before time t the
    point is reported swallowed with the time of the crossing.
    """
    z = check_disc_point(z)
    if t < 0:
        raise ArgumentError(f"reverse flow horizon must be nonnegative, got {t}")
    _require_unimodular(driving)
    _require_domain(driving, 0.0, t)
    if z == 0:
        return FlowOutcome(0.0 + 0.0j, False)

    def make_rhs(k_of_t):
        return lambda tt, g: g * (1.0 + k_of_t(tt) * g) / (1.0 - k_of_t(tt) * g)

    def make_refine(k_of_t):
        return lambda tt, g: abs(1.0 - k_of_t(tt) * g) < DENOMINATOR_GUARD

    def make_stop(k_of_t):
        return lambda tt, g: 1.0 - abs(g) < swallow_eps

    t_end, g, stopped = _integrate_cells(
        driving, 0.0, t, z, make_rhs, make_refine, make_stop,
        rtol=rel_tol, atol=abs_tol)
    if stopped:
        return FlowOutcome(None, True, t_end)
    return FlowOutcome(g, False)


def radial_sle_flow(z: complex, kappa: float, seed: int, T: float,
                    n: int) -> FlowOutcome:
    """Reverse radial flow under SLE driving exp(-i sqrt(kappa) B_t).

    Deterministic in the seed; kappa = 0 reduces to the constant driving 1.
    """
    from .driving import radial_sle_driving
    driving = radial_sle_driving(seed=seed, kappa=kappa, T=T, n=n)
    return reverse_evolve(z, T, driving)
