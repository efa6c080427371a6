"""Pure numpy implementation of the chordal stepping kernels.

Mirror of the compiled module ``loewner._chordal_kernels``; one of the two
is selected at import time by ``loewner._backend``.  All kernels work with
the exact one-cell solutions of the chordal equation under a frozen driving
value xi:

    upward   g: w -> xi + sqrt((w - xi)^2 + 4 dt)
    downward f: w -> xi + sqrt((w - xi)^2 - 4 dt)

with the square root branch chosen in the closed upper half-plane:
principal root, sign-flipped when its imaginary part is negative, and the
nonnegative real root on the real line.
"""

from __future__ import annotations

import cmath

import numpy as np

BACKEND_NAME = "numpy"


def sqrt_upper(x: np.ndarray) -> np.ndarray:
    """Square root with values in the closed upper half-plane (vectorized)."""
    u = np.sqrt(np.asarray(x, dtype=complex))
    u = np.where(u.imag < 0.0, -u, u)
    on_axis = u.imag == 0.0
    if np.any(on_axis):
        u = np.where(on_axis, np.abs(u.real) + 0.0j, u)
    return u


def sqrt_upper_scalar(x: complex) -> complex:
    u = cmath.sqrt(x)
    if u.imag < 0.0:
        u = -u
    if u.imag == 0.0:
        u = abs(u.real) + 0.0j
    return u


def up_flow(w0: complex, xi: np.ndarray, dt: np.ndarray,
            swallow_eps: float) -> tuple[complex, int, float]:
    """Compose upward cell maps chronologically from w0.

    Returns (value, cell_index, sigma): cell_index is -1 when the flow ran
    to completion; otherwise the point passed within swallow_eps of the
    driving value sigma into cell cell_index, i.e. it was swallowed.

    Within one cell |g(sigma) - xi|^2 = |q + 4 sigma| with q = (g0 - xi)^2,
    so the closest approach is exactly computable; a collision at the very
    end of the final cell is a completed flow (the tip preimage maps to the
    driving value), not a swallow.
    """
    w = complex(w0)
    eps2 = swallow_eps * swallow_eps
    n = len(xi)
    for c in range(n):
        u = w - xi[c]
        q = u * u
        sigma = min(max(-q.real / 4.0, 0.0), dt[c])
        if sigma < dt[c] and abs(q + 4.0 * sigma) < eps2:
            return w, c, sigma
        w = xi[c] + sqrt_upper_scalar(q + 4.0 * dt[c])
    return w, -1, 0.0


def up_flow_batch(w0: np.ndarray, xi: np.ndarray, dt: np.ndarray,
                  swallow_eps: float):
    """Vectorized :func:`up_flow` over a batch of start points.

    Returns (values, cells, sigmas); cells[i] == -1 marks completion, else
    the swallow cell with offset sigmas[i].
    """
    w = np.array(w0, dtype=complex)
    cells = np.full(w.shape, -1, dtype=np.int64)
    sigmas = np.zeros(w.shape, dtype=float)
    active = np.ones(w.shape, dtype=bool)
    eps2 = swallow_eps * swallow_eps
    for c in range(len(xi)):
        if not np.any(active):
            break
        u = w[active] - xi[c]
        q = u * u
        sigma = np.clip(-q.real / 4.0, 0.0, dt[c])
        hit = (sigma < dt[c]) & (np.abs(q + 4.0 * sigma) < eps2)
        idx = np.flatnonzero(active)
        hit_idx = idx[hit]
        cells[hit_idx] = c
        sigmas[hit_idx] = sigma[hit]
        active[hit_idx] = False
        go_idx = idx[~hit]
        w[go_idx] = xi[c] + sqrt_upper(q[~hit] + 4.0 * dt[c])
    return w, cells, sigmas


def down_flow(z0: complex, xi: np.ndarray, dt: np.ndarray) -> complex:
    """Compose inverted cell maps in reverse chronological order from z0."""
    w = complex(z0)
    for c in range(len(xi) - 1, -1, -1):
        u = w - xi[c]
        w = xi[c] + sqrt_upper_scalar(u * u - 4.0 * dt[c])
    return w


def down_flow_batch(z0: np.ndarray, xi: np.ndarray, dt: np.ndarray) -> np.ndarray:
    w = np.array(z0, dtype=complex)
    for c in range(len(xi) - 1, -1, -1):
        u = w - xi[c]
        w = xi[c] + sqrt_upper(u * u - 4.0 * dt[c])
    return w


def trace_points(xi: np.ndarray, dt: np.ndarray,
                 seeds: np.ndarray) -> np.ndarray:
    """Hull boundary points under the inverse maps, one per grid time.

    seeds[j] seeds the point for time t_{j+1}; the result is
    out[j] = D_0(D_1(... D_j(seeds[j]))) where D_c inverts cell c.  The
    stage loop activates seed j when c reaches j and applies each D_c to
    every already-active point, an O(n^2) recurrence with the same per-point
    operation order as the scalar version.
    """
    n = len(xi)
    out = np.empty(n, dtype=complex)
    for c in range(n - 1, -1, -1):
        out[c] = seeds[c]
        u = out[c:] - xi[c]
        out[c:] = xi[c] + sqrt_upper(u * u - 4.0 * dt[c])
    return out
