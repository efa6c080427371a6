"""Hyperbolic geometry of the unit disc and the half-plane chart.

Everything here is elementary and exact up to rounding: disc automorphisms,
the Poincare distance, the disc Kobayashi metric (which coincides with the
Poincare metric), and the Cayley transform between the disc and the upper
half-plane.  These are the primitives the flow modules validate against.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ArgumentError

# Points this close to the unit circle are treated as boundary, not interior.
INTERIOR_EPS = 1e-12


def check_disc_point(z: complex, name: str = "z") -> complex:
    """Return z as a complex number, or raise if it is not in the open disc."""
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ArgumentError(f"{name} must be finite, got {z}")
    if abs(z) >= 1.0:
        raise ArgumentError(f"{name} = {z} is not in the open unit disc")
    return z


def mobius(z: complex, w: complex) -> complex:
    """Disc automorphism T_z(w) = (z - w) / (1 - conj(z) w).

    T_z swaps 0 and z and is an involution on the disc.
    """
    z = check_disc_point(z)
    w = check_disc_point(w, "w")
    return (z - w) / (1.0 - z.conjugate() * w)


def poincare_distance(z: complex, w: complex) -> float:
    """Poincare distance omega(z, w) = (1/2) log((1+r)/(1-r)), r = |T_z(w)|."""
    r = abs(mobius(z, w))
    return 0.5 * math.log((1.0 + r) / (1.0 - r))


def kobayashi_disc(z: complex, v: complex) -> float:
    """Infinitesimal disc metric |v| / (1 - |z|^2) at z in direction v."""
    z = check_disc_point(z)
    return abs(v) / (1.0 - abs(z) ** 2)


def cayley(z: complex) -> complex:
    """Cayley transform z -> i (1 + z) / (1 - z), disc onto upper half-plane."""
    z = complex(z)
    if z == 1:
        raise ArgumentError("the Cayley transform has a pole at z = 1")
    return 1j * (1.0 + z) / (1.0 - z)


def inverse_cayley(w: complex) -> complex:
    """Inverse of :func:`cayley`: w -> (w - i) / (w + i)."""
    w = complex(w)
    if w == -1j:
        raise ArgumentError("the inverse Cayley transform has a pole at w = -i")
    return (w - 1j) / (w + 1j)


def disc_grid(grid_n: int) -> np.ndarray:
    """Concentric evaluation grid: radii j/grid_n (j < grid_n), 4*grid_n angles.

    The origin appears once; every other circle carries 4*grid_n equispaced
    points.  Used by the generator tests, kept here so all modules probe the
    same geometry.
    """
    if grid_n < 16:
        raise ArgumentError(f"grid_n must be at least 16, got {grid_n}")
    angles = 2.0 * np.pi * np.arange(4 * grid_n) / (4 * grid_n)
    ring = np.exp(1j * angles)
    radii = np.arange(1, grid_n) / grid_n
    pts = (radii[:, None] * ring[None, :]).ravel()
    return np.concatenate(([0.0 + 0.0j], pts))
