"""Truncated power series (jets) at the origin.

A :class:`Jet` stores coefficients c[0..order] of a series c0 + c1 z + ...
truncated at a fixed order.  Multiplication is the Cauchy product truncated
to the common order; division requires an invertible denominator (c0 != 0)
and runs the standard triangular recurrence.  Order 8 is the package default
and is what the flow solvers propagate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError

DEFAULT_ORDER = 8


def _coerce(coeffs) -> np.ndarray:
    arr = np.asarray(coeffs, dtype=complex)
    if arr.ndim != 1 or arr.size == 0:
        raise ArgumentError("jet coefficients must be a non-empty 1-d sequence")
    return arr.copy()


@dataclass(frozen=True)
class Jet:
    """Coefficients of a power series truncated at ``order = len(coeffs) - 1``."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _coerce(self.coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, value: complex, order: int = DEFAULT_ORDER) -> "Jet":
        c = np.zeros(order + 1, dtype=complex)
        c[0] = value
        return cls(c)

    @classmethod
    def identity(cls, order: int = DEFAULT_ORDER) -> "Jet":
        """The series z itself: (0, 1, 0, ..., 0)."""
        c = np.zeros(order + 1, dtype=complex)
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    def __call__(self, z: complex) -> complex:
        """Evaluate by Horner's rule (truncation error not estimated)."""
        acc = 0.0 + 0.0j
        for c in self.coeffs[::-1]:
            acc = acc * z + c
        return acc

    def __add__(self, other: "Jet") -> "Jet":
        return Jet(self.coeffs + _match(self, other).coeffs)

    def __sub__(self, other: "Jet") -> "Jet":
        return Jet(self.coeffs - _match(self, other).coeffs)

    def __mul__(self, other):
        if isinstance(other, Jet):
            return jet_mul(self, other)
        return jet_scale(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return jet_div(self, other)
        return jet_scale(self, 1.0 / other)

    def __neg__(self) -> "Jet":
        return Jet(-self.coeffs)


def _match(a: Jet, b: Jet) -> Jet:
    if a.order != b.order:
        raise ArgumentError(f"jet orders differ: {a.order} vs {b.order}")
    return b


def mul_coeffs(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Cauchy product of coefficient arrays, truncated to their length."""
    return np.convolve(a, b)[: len(a)]


def div_coeffs(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Quotient of coefficient arrays; b[0] must be nonzero."""
    if b[0] == 0:
        raise ArgumentError("jet division needs an invertible denominator")
    n = len(a)
    out = np.empty(n, dtype=complex)
    out[0] = a[0] / b[0]
    for m in range(1, n):
        # c_m = (a_m - sum_{j<m} c_j b_{m-j}) / b_0
        out[m] = (a[m] - np.dot(out[:m], b[m:0:-1])) / b[0]
    return out


def jet_mul(a: Jet, b: Jet) -> Jet:
    """Cauchy product truncated at the common order."""
    _match(a, b)
    return Jet(mul_coeffs(a.coeffs, b.coeffs))


def jet_div(a: Jet, b: Jet) -> Jet:
    """Series quotient a / b; requires b.coeffs[0] != 0."""
    _match(a, b)
    return Jet(div_coeffs(a.coeffs, b.coeffs))


def jet_scale(a: Jet, c: complex) -> Jet:
    """Scalar multiple c * a."""
    return Jet(a.coeffs * complex(c))
