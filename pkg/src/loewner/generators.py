"""Infinitesimal generators of holomorphic semiflows on the disc.

A holomorphic H on the unit disc generates a one-parameter semigroup of
self-maps iff Re[2 conj(z) H(z) + (1 - |z|^2) H'(z)] <= 0 on the disc.
Equivalent characterizations implemented here:

* the sign test itself (:func:`generator_test`), evaluated on a concentric
  grid with a deterministic worst-point witness;
* the representation H(z) = a - conj(a) z^2 - z q(z) with Re q >= 0
  (:func:`extract_a_q`);
* the factorization H(z) = (z - tau)(conj(tau) z - 1) p(z) with Re p >= 0
  and |tau| <= 1, recovered numerically by :func:`berkson_porta`;
* contraction of the Poincare distance along orbits
  (:func:`orbit_contraction_check`).

Time-dependent fields G(z, t) built from a moving (tau, p) pair drive
non-autonomous evolution families (:func:`general_evolve`); the autonomous
case is :func:`semigroup_point`.  :func:`product_formula_check` verifies
that iterated short evolutions converge to the frozen-field semigroup, and
:func:`commutation_check` measures whether the family commutes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ArgumentError, DecompositionError
from .geometry import disc_grid, poincare_distance
from .integrate import dopri5

DEFAULT_GRID_N = 24
DEFAULT_GEN_TOL = 1e-9
DEFAULT_RE_TOL = 1e-8
FLOW_REL_TOL = 1e-10
FLOW_ABS_TOL = 1e-13

_FD_STEP_FACTOR = 1e-5


class FieldSpec:
    """A holomorphic vector field given by black-box evaluators.

    ``fn(z)`` (autonomous) or ``fn(z, t)`` (time-dependent) must accept
    complex scalars; numpy-vectorized callables are used directly on
    arrays, anything else is looped.  If no derivative evaluator is given,
    H' is computed by 4-point finite differences with step
    1e-5 * (1 - |z|), so derivatives are only available inside the disc.
    """

    def __init__(self, fn: Callable, deriv: Callable | None = None,
                 time_dependent: bool = False):
        self.fn = fn
        self.deriv = deriv
        self.time_dependent = time_dependent

    # -- evaluation ---------------------------------------------------------

    def _raw(self, fn, z, t):
        return fn(z, t) if self.time_dependent else fn(z)

    def __call__(self, z, t: float = 0.0):
        z = np.asarray(z, dtype=complex)
        try:
            out = np.asarray(self._raw(self.fn, z, t), dtype=complex)
            if out.shape != z.shape:
                out = np.broadcast_to(out, z.shape).copy()
        except (TypeError, ValueError):
            flat = [complex(self._raw(self.fn, w, t)) for w in np.atleast_1d(z)]
            out = np.array(flat, dtype=complex).reshape(z.shape)
        return out[()] if z.ndim == 0 else out

    def eval_scalar(self, z: complex, t: float = 0.0) -> complex:
        return complex(self._raw(self.fn, complex(z), t))

    def derivative(self, z, t: float = 0.0):
        if self.deriv is not None:
            spec = FieldSpec(self.deriv, time_dependent=self.time_dependent)
            return spec(z, t)
        z = np.asarray(z, dtype=complex)
        h = _FD_STEP_FACTOR * (1.0 - np.abs(z))
        if np.any(h <= 0):
            raise ArgumentError(
                "finite-difference derivatives need points inside the disc")
        num = (-self(z + 2 * h, t) + 8 * self(z + h, t)
               - 8 * self(z - h, t) + self(z - 2 * h, t))
        return num / (12.0 * h)

    def frozen(self, t: float) -> "FieldSpec":
        """Autonomous view z -> G(z, t) at a fixed time."""
        if not self.time_dependent:
            return self
        fn = self.fn
        deriv = self.deriv
        return FieldSpec(
            lambda z, fn=fn, t=t: fn(z, t),
            deriv=None if deriv is None else (lambda z, d=deriv, t=t: d(z, t)),
            time_dependent=False,
        )


@dataclass(frozen=True)
class GeneratorVerdict:
    """Outcome of the sign test, with the worst grid point as witness."""

    accepted: bool
    max_violation: float
    witness: complex
    grid_n: int
    tol: float


def generator_test(H: FieldSpec, grid_n: int = DEFAULT_GRID_N,
                   tol: float = DEFAULT_GEN_TOL) -> GeneratorVerdict:
    """Evaluate Re[2 conj(z) H + (1 - |z|^2) H'] on the concentric grid.

    H generates iff the expression is <= 0 everywhere; acceptance allows
    tol of numerical slack.  The witness is the maximizing grid point,
    ties resolved toward smaller radius, then smaller angle.
    """
    z = disc_grid(grid_n)
    val = 2.0 * np.conj(z) * H(z) + (1.0 - np.abs(z) ** 2) * H.derivative(z)
    E = np.real(val)
    i = int(np.argmax(E))  # grid is ordered by (radius, angle)
    return GeneratorVerdict(accepted=bool(E[i] <= tol),
                            max_violation=float(E[i]),
                            witness=complex(z[i]), grid_n=grid_n, tol=tol)


def extract_a_q(H: FieldSpec) -> tuple[complex, FieldSpec]:
    """Split H(z) = a - conj(a) z^2 - z q(z); returns (a, q).

    a = H(0); the removable singularity of q at 0 is filled with -H'(0).
    H is a generator iff Re q >= 0 on the disc.
    """
    a = complex(H(np.asarray(0.0 + 0.0j)))
    qdot0 = -complex(H.derivative(np.asarray(0.0 + 0.0j)))

    def q_fn(z):
        z = np.asarray(z, dtype=complex)
        small = np.abs(z) < 1e-12
        zsafe = np.where(small, 1.0, z)
        out = (a - np.conj(a) * z * z - H(z)) / zsafe
        return np.where(small, qdot0, out)

    return a, FieldSpec(q_fn)


# -- Denjoy-Wolff factorization ---------------------------------------------

@dataclass(frozen=True)
class DecompositionResult:
    """H = (z - tau)(conj(tau) z - 1) p with the recovered tau and p."""

    tau: complex
    p: FieldSpec
    residual: float    # max |(z-tau)(conj(tau) z - 1) p(z) - H(z)| on the grid
    violation: float   # max(0, -min Re p) on the grid


def _quotient_field(H: FieldSpec, tau: complex) -> FieldSpec:
    interior = abs(tau) < 1.0 - 1e-9
    if interior:
        limit = -complex(H.derivative(np.asarray(tau))) / (1.0 - abs(tau) ** 2)

    def p_fn(z):
        z = np.asarray(z, dtype=complex)
        den = (z - tau) * (np.conj(tau) * z - 1.0)
        near = np.abs(z - tau) < 1e-8
        den = np.where(near, 1.0, den)
        out = H(z) / den
        if interior:
            out = np.where(near, limit, out)
        return out

    return FieldSpec(p_fn)


_PROBE_DEPTHS = (1e-3, 1e-5, 1e-7)
_PROBE_ANGLES = np.linspace(-1.4, 1.4, 17)


def _quotient_violation(H: FieldSpec, tau: complex, grid: np.ndarray) -> float:
    p = _quotient_field(H, tau)
    pts = grid
    if abs(tau) >= 1.0 - 1e-9:
        # a misplaced boundary tau leaves a double pole in the quotient, and
        # no Re >= 0 function has one: probing just inside the circle next
        # to tau catches the sign flip the coarse grid cannot resolve
        local = np.concatenate([
            tau * (1.0 - d * np.exp(1j * _PROBE_ANGLES))
            for d in _PROBE_DEPTHS])
        pts = np.concatenate((grid, local))
    vals = p(pts)
    keep = np.abs(pts - tau) >= 1e-8
    worst = float(np.min(np.real(vals[keep]))) if np.any(keep) else 0.0
    if abs(tau) < 1.0 - 1e-9:
        # include the filled value at tau itself
        worst = min(worst, float(np.real(p(np.asarray(tau)))))
    return max(0.0, -worst)


def berkson_porta(H: FieldSpec, boundary_grid: int = 720,
                  grid_n: int = DEFAULT_GRID_N,
                  re_tol: float = DEFAULT_RE_TOL,
                  interior_search: bool = True) -> DecompositionResult:
    """Recover the Denjoy-Wolff point tau and the factor p from H.

    Newton iteration on H from 25 starting points finds interior zeros; the
    candidate whose quotient p has the least negative real part wins.  If
    no interior candidate is admissible the unit circle is scanned on
    ``boundary_grid`` points and locally refined.  ``interior_search=False``
    skips the Newton stage and goes straight to the circle scan, for fields
    known to fix no interior point.

    Raises
    ------
    DecompositionError
        If no tau makes Re p >= -re_tol on the test grid; the best
        candidate and its violation ride along on the exception.
    """
    grid = disc_grid(grid_n)
    scale = float(np.max(np.abs(H(grid)))) + 1e-300
    if scale < 1e-14:
        raise ArgumentError("cannot decompose the zero field")

    # Newton multi-start for interior zeros of H
    radii = (0.0, 0.3, 0.55, 0.75, 0.9) if interior_search else ()
    angles = 2.0 * np.pi * np.arange(5) / 5.0
    candidates: list[complex] = []
    for r in radii:
        for ang in angles:
            tau = r * math.cos(ang) + 1j * r * math.sin(ang)
            for _ in range(50):
                try:
                    f = H.eval_scalar(tau)
                    fp = complex(H.derivative(np.asarray(tau)))
                except (ArgumentError, ZeroDivisionError, OverflowError):
                    tau = None
                    break
                if fp == 0:
                    tau = None
                    break
                step = f / fp
                tau = tau - step
                if not (math.isfinite(tau.real) and math.isfinite(tau.imag)):
                    tau = None
                    break
                if abs(tau) > 1.2:
                    tau = None
                    break
                if abs(step) < 1e-13:
                    break
            if tau is None or abs(tau) > 1.0 + 1e-6:
                continue
            if abs(tau) > 1.0:
                tau = tau / abs(tau)
            if abs(H.eval_scalar(tau)) > 1e-8 * scale and abs(tau) < 1.0 - 1e-9:
                continue
            if all(abs(tau - c) > 1e-8 for c in candidates):
                candidates.append(tau)

    best_tau = None
    best_viol = math.inf
    for tau in candidates:
        viol = _quotient_violation(H, tau, grid)
        if viol < best_viol:
            best_tau, best_viol = tau, viol

    if best_viol > re_tol:
        # boundary scan with successive local refinement
        thetas = 2.0 * np.pi * np.arange(boundary_grid) / boundary_grid
        viols = np.array([
            _quotient_violation(H, complex(np.exp(1j * th)), grid)
            for th in thetas])
        j = int(np.argmin(viols))
        theta, width = float(thetas[j]), 2.0 * np.pi / boundary_grid
        best_b_theta, best_b_viol = theta, float(viols[j])
        for _ in range(14):
            local = theta + np.linspace(-width, width, 9)
            lv = [
                _quotient_violation(H, complex(np.exp(1j * th)), grid)
                for th in local]
            jj = int(np.argmin(lv))
            theta = float(local[jj])
            if lv[jj] < best_b_viol:
                best_b_theta, best_b_viol = theta, float(lv[jj])
            width /= 4.0
        if best_b_viol < best_viol:
            best_tau = complex(np.exp(1j * best_b_theta))
            best_viol = best_b_viol

    if best_tau is None or best_viol > re_tol:
        raise DecompositionError(
            f"no admissible Denjoy-Wolff point (best violation {best_viol:.3e})",
            best_tau=best_tau, violation=best_viol)

    p = _quotient_field(H, best_tau)
    den = (grid - best_tau) * (np.conj(best_tau) * grid - 1.0)
    keep = np.abs(grid - best_tau) >= 1e-8
    residual = float(np.max(np.abs(
        den[keep] * p(grid[keep]) - H(grid[keep]))))
    return DecompositionResult(tau=best_tau, p=p, residual=residual,
                               violation=best_viol)


# -- flows -------------------------------------------------------------------

def _check_interior(z: complex) -> complex:
    z = complex(z)
    if abs(z) >= 1.0:
        raise ArgumentError(f"z = {z} is not in the open unit disc")
    return z


def semigroup_point(H: FieldSpec, z: complex, t: float,
                    rel_tol: float = FLOW_REL_TOL,
                    abs_tol: float = FLOW_ABS_TOL,
                    validate: bool = True) -> complex:
    """Semigroup orbit point phi_t(z) of the autonomous field H."""
    z = _check_interior(z)
    if t < 0:
        raise ArgumentError(f"semigroup time must be nonnegative, got {t}")
    if validate:
        verdict = generator_test(H)
        if not verdict.accepted:
            raise ArgumentError(
                f"field is not a generator (violation {verdict.max_violation:.3e} "
                f"at {verdict.witness:.6g})")
    res = dopri5(lambda _t, w: H.eval_scalar(w), 0.0, z, t,
                 rtol=rel_tol, atol=abs_tol)
    return res.y


def _flow_with_exit(H: FieldSpec, z: complex, t: float,
                    exit_margin: float = 1e-9):
    """Integrate the orbit, halting if it reaches |w| >= 1 - exit_margin."""
    res = dopri5(lambda _t, w: H.eval_scalar(w), 0.0, z, t,
                 rtol=FLOW_REL_TOL, atol=FLOW_ABS_TOL,
                 stop=lambda _t, w: abs(w) >= 1.0 - exit_margin)
    return res.y, res.stopped


def orbit_contraction_check(H: FieldSpec, probe_pairs=None,
                            horizon: float = 2.0, n_samples: int = 5,
                            tol: float = 1e-9) -> bool:
    """Check that orbits contract the Poincare distance.

    Returns False if any orbit escapes toward the boundary or any sampled
    distance increases beyond tol; both happen exactly for non-generators.
    Group orbits (rotations) keep the distance constant and pass.
    """
    if probe_pairs is None:
        probe_pairs = ((0.3 + 0.0j, -0.2 + 0.4j),
                       (0.5j, -0.5 + 0.0j),
                       (0.6 + 0.0j, 0.1 + 0.1j))
    taus = np.linspace(0.0, horizon, n_samples + 1)[1:]
    for z0, w0 in probe_pairs:
        z, w = _check_interior(z0), _check_interior(w0)
        dist = poincare_distance(z, w)
        t_prev = 0.0
        for t_next in taus:
            z, z_exit = _flow_with_exit(H, z, t_next - t_prev)
            w, w_exit = _flow_with_exit(H, w, t_next - t_prev)
            if z_exit or w_exit:
                return False
            new_dist = poincare_distance(z, w)
            if new_dist > dist + tol:
                return False
            dist = new_dist
            t_prev = t_next
    return True


# -- time-dependent fields ---------------------------------------------------

def herglotz_field(tau_fn: Callable, p_fn: Callable) -> FieldSpec:
    """Time-dependent field G(z, t) = (z - tau(t)) (conj(tau(t)) z - 1) p(z, t).

    With tau = 0 and p = (1 + k(t) z) / (1 - k(t) z) this is the radial
    field -z (1 + k z)/(1 - k z).
    """
    def fn(z, t):
        tau = complex(tau_fn(t))
        if abs(tau) > 1.0 + 1e-9:
            raise ArgumentError(f"tau(t) must satisfy |tau| <= 1, got {tau}")
        return (z - tau) * (np.conj(tau) * z - 1.0) * p_fn(z, t)

    return FieldSpec(fn, time_dependent=True)


def herglotz_eval(tau_fn: Callable, p_fn: Callable, z, t: float):
    """Evaluate the (tau, p) field at (z, t)."""
    return herglotz_field(tau_fn, p_fn)(z, t)


def general_evolve(G: FieldSpec, z: complex, s: float, t: float,
                   rel_tol: float = FLOW_REL_TOL,
                   abs_tol: float = FLOW_ABS_TOL,
                   validate: bool = True,
                   samples_per_unit: int = 32,
                   validation_grid_n: int = 16,
                   validation_tol: float = 1e-7) -> complex:
    """Evolution family value phi_{s,t}(z) of a time-dependent field.

    When ``validate`` is set, the field frozen at sampled times (32 per
    unit interval) must pass :func:`generator_test` first.
    """
    z = _check_interior(z)
    if t < s:
        raise ArgumentError(f"need s <= t, got s={s}, t={t}")
    if t == s:
        return z
    if validate:
        n_samples = max(2, math.ceil((t - s) * samples_per_unit) + 1)
        for ts in np.linspace(s, t, n_samples):
            verdict = generator_test(G.frozen(float(ts)),
                                     grid_n=validation_grid_n,
                                     tol=validation_tol)
            if not verdict.accepted:
                raise ArgumentError(
                    f"frozen field at t = {ts:.6g} is not a generator "
                    f"(violation {verdict.max_violation:.3e})")
    res = dopri5(lambda tt, w: G.eval_scalar(w, tt), s, z, t,
                 rtol=rel_tol, atol=abs_tol)
    return res.y


@dataclass(frozen=True)
class ProductFormulaResult:
    """Iterated-composition errors against the frozen-field semigroup."""

    m_values: tuple
    errors: tuple
    targets: tuple


def product_formula_check(G: FieldSpec, t: float, r: float,
                          m_values=(8, 16, 32, 64),
                          probes=(0.3 + 0.0j, -0.2 + 0.4j, 0.5j)
                          ) -> ProductFormulaResult:
    """Compare (phi_{t, t+r/m})^m against the semigroup of G(., t).

    For autonomous fields the error sits at integrator tolerance for every
    m; for genuinely time-dependent fields it decays as m grows, which is
    the trajectory-level content of the product formula.
    """
    if r <= 0:
        raise ArgumentError(f"need r > 0, got {r}")
    H = G.frozen(t)
    verdict = generator_test(H)
    if not verdict.accepted:
        raise ArgumentError("frozen field at t is not a generator")
    targets = tuple(semigroup_point(H, z, r, validate=False) for z in probes)
    errors = []
    for m in m_values:
        if m < 1:
            raise ArgumentError("m values must be positive")
        dt = r / m
        worst = 0.0
        for z, target in zip(probes, targets):
            x = z
            for _ in range(m):
                x = general_evolve(G, x, t, t + dt, validate=False)
            worst = max(worst, abs(x - target))
        errors.append(worst)
    return ProductFormulaResult(m_values=tuple(m_values),
                                errors=tuple(errors), targets=targets)


def commutation_check(G: FieldSpec,
                      interval_a: tuple = (0.0, 0.5),
                      interval_b: tuple = (0.5, 1.2),
                      probes=(0.3 + 0.0j, -0.2 + 0.4j, 0.4j)) -> float:
    """Max over probes of |phi_a(phi_b(z)) - phi_b(phi_a(z))|.

    Vanishing residual (at integrator tolerance) characterizes separable
    fields G(z, t) = g(t) H(z); genuinely time-dependent direction fields
    leave a macroscopic residual.
    """
    (s, t), (u, v) = interval_a, interval_b
    worst = 0.0
    for z in probes:
        ab = general_evolve(G, general_evolve(G, z, u, v, validate=False),
                            s, t, validate=False)
        ba = general_evolve(G, general_evolve(G, z, s, t, validate=False),
                            u, v, validate=False)
        worst = max(worst, abs(ab - ba))
    return worst
