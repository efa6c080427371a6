"""Chordal Loewner flows in the upper half-plane.

The upward (forward) flow solves dg/dt = 2 / (g - k(t)) with g_0 = id and a
real driving k; the hull at time T is the set of starting points swallowed
by then, and hcap(T) normalizes g_T(z) = z + 2T/z + O(1/z^2) at infinity.
The downward flow composes the inverted one-cell maps in reverse
chronological order, which evaluates f_T = g_T^{-1}; seeding it just above
the driving value traces the hull boundary curve.

Piecewise-constant drivings use exact per-cell maps (see
``_chordal_numpy``); other drivings are either integrated adaptively
(:func:`solve_upward`, :func:`inverse_map`) or frozen on the evaluation
grid (:func:`trace`, :func:`hcap_estimate`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .driving import DrivingTerm
from .errors import ArgumentError, DrivingError, NumericalError
from .integrate import dopri5

SWALLOW_EPS = 1e-7
POLE_GUARD = 1e-3
TRACE_CELLS_PER_UNIT = 10_000

DEFAULT_REL_TOL = 1e-9
DEFAULT_ABS_TOL = 1e-12


def _require_real(driving: DrivingTerm) -> None:
    if driving.codomain != "real":
        raise DrivingError("chordal flows need a real driving term")


def _check_upper(z: complex, name: str = "z") -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ArgumentError(f"{name} must be finite, got {z}")
    if z.imag < 0:
        raise ArgumentError(f"{name} = {z} is not in the closed upper half-plane")
    return z


def up_step(w: complex, xi: float, delta: float) -> complex:
    """Exact upward map over one frozen cell: w -> xi + sqrt((w-xi)^2 + 4 delta)."""
    w = _check_upper(w, "w")
    if delta <= 0:
        raise ArgumentError(f"cell duration must be positive, got {delta}")
    return xi + kernels.sqrt_upper_scalar((w - xi) ** 2 + 4.0 * delta)


def down_step(w: complex, xi: float, delta: float) -> complex:
    """Inverse of :func:`up_step`: w -> xi + sqrt((w-xi)^2 - 4 delta)."""
    w = _check_upper(w, "w")
    if delta <= 0:
        raise ArgumentError(f"cell duration must be positive, got {delta}")
    return xi + kernels.sqrt_upper_scalar((w - xi) ** 2 - 4.0 * delta)


def _frozen_cells(driving: DrivingTerm, T: float,
                  cells_per_unit: int = TRACE_CELLS_PER_UNIT):
    """Left-frozen discretization of the driving over [0, T].

    Piecewise-constant drivings keep their own cells (the freeze is exact);
    anything else is sampled on a uniform grid.
    """
    if driving.is_piecewise_constant:
        knots = driving.breakpoints(0.0, T)
        edges = np.concatenate(([0.0], knots, [T]))
    else:
        n = max(1, math.ceil(T * cells_per_unit))
        edges = np.linspace(0.0, T, n + 1)
    xi = np.ascontiguousarray(
        np.real(driving.values_at(edges[:-1])), dtype=float)
    dt = np.ascontiguousarray(np.diff(edges), dtype=float)
    return edges, xi, dt


@dataclass(frozen=True)
class UpflowOutcome:
    """g_T(z), or the swallow time if the point entered the hull first."""

    value: complex | None
    swallowed: bool
    swallow_time: float | None = None


def solve_upward(z: complex, T: float, driving: DrivingTerm,
                 swallow_eps: float = SWALLOW_EPS,
                 rel_tol: float = DEFAULT_REL_TOL,
                 abs_tol: float = DEFAULT_ABS_TOL) -> UpflowOutcome:
    """Evaluate the forward chordal flow g_T(z).

    Im g decreases strictly along the flow.  A point passing within
    swallow_eps of the driving value is reported swallowed at the closest
    approach; with driving 0, z = 2i and T = 1 the flow completes exactly
    onto the driving value (the tip preimage), which is a completion.
    """
    z = _check_upper(z)
    if T <= 0:
        raise ArgumentError(f"horizon must be positive, got {T}")
    _require_real(driving)
    if driving.t_max < T - 1e-12:
        raise DrivingError("driving not defined up to the horizon")

    if driving.is_piecewise_constant:
        edges, xi, dt = _frozen_cells(driving, T)
        value, cell, sigma = kernels.up_flow(z, xi, dt, swallow_eps)
        if cell >= 0:
            return UpflowOutcome(None, True, float(edges[cell] + sigma))
        return UpflowOutcome(value, False)

    # smooth driving: adaptive integration with a closest-approach stop
    def rhs(t, g):
        return 2.0 / (g - driving.value_at(t))

    def stop(t, g):
        return abs(g - driving.value_at(t)) < swallow_eps

    def refine(t, g):
        return abs(g - driving.value_at(t)) < POLE_GUARD

    res = dopri5(rhs, 0.0, z, T, rtol=rel_tol, atol=abs_tol,
                 stop=stop, refine=refine)
    if res.stopped:
        return UpflowOutcome(None, True, res.t)
    return UpflowOutcome(res.y, False)


def inverse_map(z: complex, t: float, driving: DrivingTerm,
                rel_tol: float = DEFAULT_REL_TOL,
                abs_tol: float = DEFAULT_ABS_TOL) -> complex:
    """Evaluate f_t(z) = g_t^{-1}(z), the downward flow from z.

    Implemented as the downflow with time-reversed driving: the inverted
    cell maps are applied last step first.  For large |z| it satisfies
    f_t(z) = z - 2t/z + O(1/z^2).
    """
    z = _check_upper(z)
    if t < 0:
        raise ArgumentError(f"time must be nonnegative, got {t}")
    _require_real(driving)
    if t == 0:
        return z
    if driving.t_max < t - 1e-12:
        raise DrivingError("driving not defined up to the requested time")

    if driving.is_piecewise_constant:
        _, xi, dt = _frozen_cells(driving, t)
        return kernels.down_flow(z, xi, dt)

    def rhs(s, u):
        return -2.0 / (u - driving.value_at(t - s))

    def refine(s, u):
        return abs(u - driving.value_at(t - s)) < POLE_GUARD

    return dopri5(rhs, 0.0, z, t, rtol=rel_tol, atol=abs_tol,
                  refine=refine).y


@dataclass(frozen=True)
class TracePolyline:
    """A sampled hull boundary curve with per-point validity flags."""

    times: np.ndarray
    points: np.ndarray
    valid: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        points = np.asarray(self.points, dtype=complex)
        valid = np.asarray(self.valid, dtype=bool)
        if not (len(times) == len(points) == len(valid)):
            raise ArgumentError("times, points and valid must have equal length")
        if np.any(np.diff(times) <= 0):
            raise ArgumentError("trace times must be strictly increasing")
        if np.any(points.imag[valid] < 0):
            raise ArgumentError("valid trace points must stay in Im >= 0")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "valid", valid)

    def __len__(self) -> int:
        return len(self.times)

    def to_csv(self, path_or_file) -> None:
        """Write rows t,re,im with 17 significant digits and LF endings."""
        own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
        fh = open(path_or_file, "w", newline="\n") if own else path_or_file
        try:
            fh.write("t,re,im\n")
            for t, p in zip(self.times, self.points):
                fh.write(f"{t:.17g},{p.real:.17g},{p.imag:.17g}\n")
        finally:
            if own:
                fh.close()


def default_seed_height(T: float) -> float:
    """Default trace seed height 1e-6 * max(1, sqrt(T))."""
    return 1e-6 * max(1.0, math.sqrt(T))


def trace(T: float, n: int, driving: DrivingTerm,
          y0: float | None = None) -> TracePolyline:
    """Trace the hull boundary at times j T / n, j = 0..n.

    Each point is the downward flow of the seed k(t_j) + i y0 over [0, t_j]
    with the driving frozen on the trace grid, so point j only depends on
    cells up to j and restrictions to coarser horizons match exactly.
    Non-finite results (branch failures) are flagged invalid rather than
    raised.
    """
    if T <= 0:
        raise ArgumentError(f"horizon must be positive, got {T}")
    if n < 1:
        raise ArgumentError(f"need at least one cell, got n = {n}")
    _require_real(driving)
    if driving.t_max < T - 1e-12:
        raise DrivingError("driving not defined up to the horizon")
    if y0 is None:
        y0 = default_seed_height(T)
    if y0 <= 0:
        raise ArgumentError(f"seed height must be positive, got {y0}")

    times = np.linspace(0.0, T, n + 1)
    k = np.real(driving.values_at(times)).astype(float)
    xi = np.ascontiguousarray(k[:-1])
    dt = np.ascontiguousarray(np.diff(times))
    seeds = np.ascontiguousarray(k[1:] + 1j * y0, dtype=complex)
    pts = kernels.trace_points(xi, dt, seeds)
    points = np.concatenate(([k[0] + 1j * y0], pts))
    valid = np.isfinite(points)
    points = np.where(valid, points, np.nan + 1j * np.nan)
    return TracePolyline(times=times, points=points, valid=valid)


@dataclass(frozen=True)
class HcapEstimate:
    """Least-squares fit of f_t(z) = z + c/z + ... over far-field probes."""

    c: complex
    residual: float
    radius: float
    n_probes: int


def hcap_estimate(t: float, driving: DrivingTerm, R: float = 1000.0,
                  m: int = 8, fit_tol: float = 1e-3) -> HcapEstimate:
    """Estimate the 1/z coefficient of f_t; equals -2t for any driving.

    Probes R e^(i theta) for m angles spread in (0, pi) are flowed down and
    c is fit by least squares.  The fit residual is checked against
    fit_tol * max(1, |c|).
    """
    if t <= 0:
        raise ArgumentError(f"time must be positive, got {t}")
    if R <= 10.0:
        raise ArgumentError("probe radius must comfortably exceed the hull")
    if m < 4:
        raise ArgumentError("need at least 4 probes")
    _require_real(driving)
    if driving.t_max < t - 1e-12:
        raise DrivingError("driving not defined up to the requested time")

    theta = np.pi * (np.arange(m) + 0.5) / m
    z = R * np.exp(1j * theta)
    _, xi, dt = _frozen_cells(driving, t)
    f = kernels.down_flow_batch(z, xi, dt)
    w = 1.0 / z
    c = complex(np.sum(np.conj(w) * (f - z)) / np.sum(np.abs(w) ** 2))
    residual = float(np.max(np.abs(f - z - c * w)))
    if residual > fit_tol * max(1.0, abs(c)):
        raise NumericalError(
            f"far-field fit residual {residual:.3e} exceeds tolerance; "
            "increase R or refine the driving grid")
    return HcapEstimate(c=c, residual=residual, radius=R, n_probes=m)


def chordal_sle_trace(kappa: float, seed: int, T: float, n: int,
                      y0: float | None = None) -> TracePolyline:
    """SLE(kappa) trace: Brownian driving from ``seed`` on the trace grid.

    Deterministic in the seed: the same (kappa, seed, T, n, y0) always
    yields the identical polyline.
    """
    from .driving import brownian_driving
    driving = brownian_driving(seed=seed, kappa=kappa, T=T, n=n)
    return trace(T, n, driving, y0=y0)
