"""Driving terms for the flow equations.

A :class:`DrivingTerm` is a time-dependent scalar: unimodular (on the unit
circle) for radial flows, real for chordal flows.  Three kinds exist:
constants, c*sqrt(t) laws, and sampled tables with piecewise-constant or
piecewise-linear interpolation.  Brownian driving for SLE is a
piecewise-constant table built from a counter-based generator keyed by the
seed, so the same seed always reproduces the same path regardless of how
many paths are drawn around it or in what order.

Unimodularity is enforced at the sample points; piecewise-linear
interpolation between unimodular samples may enter the open disc, which the
radial field tolerates.

Tables round-trip through CSV (header ``t,value`` for real tables,
``t,re,im`` for unimodular ones) with 17 significant digits.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError, DrivingError

UNIMODULAR_TOL = 1e-9

PIECEWISE_CONSTANT = "piecewise-constant"
PIECEWISE_LINEAR = "piecewise-linear"


@dataclass(frozen=True)
class BrownianPath:
    """A sampled path of sqrt(kappa) * B_t on a uniform grid over [0, T].

    ``values[0]`` is the starting value and the n increments are independent
    normals of variance kappa * T / n, drawn from a Philox stream keyed by
    ``seed``.
    """

    seed: int
    kappa: float
    T: float
    n: int
    start: float = 0.0
    values: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.kappa < 0:
            raise ArgumentError(f"kappa must be nonnegative, got {self.kappa}")
        if self.T <= 0 or self.n < 1:
            raise ArgumentError("need T > 0 and n >= 1")
        rng = np.random.Generator(np.random.Philox(key=int(self.seed)))
        steps = rng.standard_normal(self.n)
        vals = np.empty(self.n + 1, dtype=float)
        vals[0] = self.start
        vals[1:] = self.start + math.sqrt(self.kappa * self.T / self.n) * np.cumsum(steps)
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.T, self.n + 1)


@dataclass(frozen=True)
class DrivingTerm:
    """A scalar driving term defined on [t_min, t_max].

    kind is one of "constant", "sqrt", "table"; codomain is "real" or
    "unimodular".  Tables carry their sample times and values plus an
    interpolation mode.
    """

    kind: str
    codomain: str
    constant: complex = 0.0
    coefficient: float = 0.0
    times: np.ndarray | None = None
    values: np.ndarray | None = None
    interpolation: str = PIECEWISE_CONSTANT

    # -- constructors -----------------------------------------------------

    @staticmethod
    def _check_codomain_values(values: np.ndarray, codomain: str) -> np.ndarray:
        if codomain == "real":
            if np.any(np.abs(np.imag(values)) != 0.0):
                raise DrivingError("real driving values must have zero imaginary part")
            return np.real(values).astype(float)
        if codomain == "unimodular":
            values = np.asarray(values, dtype=complex)
            if np.any(np.abs(np.abs(values) - 1.0) > UNIMODULAR_TOL):
                worst = float(np.max(np.abs(np.abs(values) - 1.0)))
                raise DrivingError(
                    f"unimodular driving values must lie on the unit circle "
                    f"(worst deviation {worst:.3e})")
            return values
        raise DrivingError(f"unknown codomain {codomain!r}")

    def __post_init__(self):
        if self.kind not in ("constant", "sqrt", "table"):
            raise DrivingError(f"unknown driving kind {self.kind!r}")
        if self.codomain not in ("real", "unimodular"):
            raise DrivingError(f"unknown codomain {self.codomain!r}")
        if self.kind == "table":
            t = np.asarray(self.times, dtype=float)
            v = np.asarray(self.values)
            if t.ndim != 1 or len(t) < 2 or len(t) != len(v):
                raise DrivingError("a table needs matching times/values with >= 2 samples")
            if not np.all(np.diff(t) > 0):
                raise DrivingError("table times must be strictly increasing")
            if self.interpolation not in (PIECEWISE_CONSTANT, PIECEWISE_LINEAR):
                raise DrivingError(f"unknown interpolation {self.interpolation!r}")
            v = self._check_codomain_values(v, self.codomain)
            t.flags.writeable = False
            v.flags.writeable = False
            object.__setattr__(self, "times", t)
            object.__setattr__(self, "values", v)

    # -- evaluation --------------------------------------------------------

    @property
    def t_min(self) -> float:
        return float(self.times[0]) if self.kind == "table" else 0.0

    @property
    def t_max(self) -> float:
        return float(self.times[-1]) if self.kind == "table" else math.inf

    def _check_domain(self, t):
        lo, hi = self.t_min, self.t_max
        t = np.asarray(t, dtype=float)
        if np.any(t < lo - 1e-12) or np.any(t > hi + 1e-12):
            raise DrivingError(
                f"driving evaluated outside its domain [{lo:g}, {hi:g}]")

    def values_at(self, t) -> np.ndarray:
        """Vectorized evaluation; scalar in gives 0-d array out."""
        self._check_domain(t)
        t = np.asarray(t, dtype=float)
        if self.kind == "constant":
            return np.broadcast_to(self.constant, t.shape).copy()
        if self.kind == "sqrt":
            return self.coefficient * np.sqrt(np.maximum(t, 0.0))
        if self.interpolation == PIECEWISE_CONSTANT:
            idx = np.searchsorted(self.times, t, side="right") - 1
            idx = np.clip(idx, 0, len(self.values) - 1)
            return self.values[idx]
        if self.codomain == "real":
            return np.interp(t, self.times, self.values)
        return (np.interp(t, self.times, self.values.real)
                + 1j * np.interp(t, self.times, self.values.imag))

    def value_at(self, t: float):
        """Evaluate at a single time; float for real tables, complex otherwise."""
        out = self.values_at(float(t))[()]
        return float(out.real) if self.codomain == "real" else complex(out)

    # -- structure queries used by the solvers -----------------------------

    @property
    def is_piecewise_constant(self) -> bool:
        return self.kind == "constant" or (
            self.kind == "table" and self.interpolation == PIECEWISE_CONSTANT)

    def breakpoints(self, s: float, t: float) -> np.ndarray:
        """Knot times strictly inside (s, t); integrators split there."""
        if self.kind != "table" or t <= s:
            return np.empty(0, dtype=float)
        inside = (self.times > s + 1e-15) & (self.times < t - 1e-15)
        return self.times[inside].copy()

    # -- CSV ----------------------------------------------------------------

    def to_csv(self, path) -> None:
        """Write a table driving to CSV (17 significant digits, LF endings)."""
        if self.kind != "table":
            raise DrivingError("only table drivings are exportable")
        with open(path, "w", newline="\n") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            if self.codomain == "real":
                writer.writerow(["t", "value"])
                for t, v in zip(self.times, self.values):
                    writer.writerow([f"{t:.17g}", f"{v:.17g}"])
            else:
                writer.writerow(["t", "re", "im"])
                for t, v in zip(self.times, self.values):
                    writer.writerow([f"{t:.17g}", f"{v.real:.17g}", f"{v.imag:.17g}"])

    @classmethod
    def from_csv(cls, path, interpolation: str = PIECEWISE_CONSTANT) -> "DrivingTerm":
        """Read a table driving; the header decides the codomain."""
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        if not rows:
            raise DrivingError(f"empty driving file {path}")
        header = [h.strip() for h in rows[0]]
        body = [r for r in rows[1:] if r]
        if header == ["t", "value"]:
            times = np.array([float(r[0]) for r in body])
            values = np.array([float(r[1]) for r in body])
            codomain = "real"
        elif header == ["t", "re", "im"]:
            times = np.array([float(r[0]) for r in body])
            values = np.array([float(r[1]) + 1j * float(r[2]) for r in body])
            codomain = "unimodular"
        else:
            raise DrivingError(
                f"unrecognized driving CSV header {header!r}; "
                "expected 't,value' or 't,re,im'")
        return make_table(times, values, codomain, interpolation)


def make_constant(value, codomain: str) -> DrivingTerm:
    """Constant driving; unimodular constants must sit on the unit circle."""
    vals = DrivingTerm._check_codomain_values(np.array([value]), codomain)
    return DrivingTerm(kind="constant", codomain=codomain, constant=vals[0])


def make_sqrt(coefficient: float) -> DrivingTerm:
    """Real driving c * sqrt(t) on [0, inf)."""
    if not math.isfinite(coefficient):
        raise DrivingError("sqrt driving needs a finite coefficient")
    return DrivingTerm(kind="sqrt", codomain="real", coefficient=float(coefficient))


def make_table(times, values, codomain: str,
               interpolation: str = PIECEWISE_CONSTANT) -> DrivingTerm:
    return DrivingTerm(kind="table", codomain=codomain,
                       times=np.asarray(times, dtype=float),
                       values=np.asarray(values),
                       interpolation=interpolation)


def brownian_driving(seed: int, kappa: float, T: float, n: int,
                     start: float = 0.0) -> DrivingTerm:
    """Chordal SLE driving sqrt(kappa) B_t as a piecewise-constant table."""
    path = BrownianPath(seed=seed, kappa=kappa, T=T, n=n, start=start)
    return make_table(path.times, path.values, "real", PIECEWISE_CONSTANT)


def radial_sle_driving(seed: int, kappa: float, T: float, n: int,
                       start: float = 0.0) -> DrivingTerm:
    """Radial SLE driving exp(-i sqrt(kappa) B_t), piecewise-constant."""
    path = BrownianPath(seed=seed, kappa=kappa, T=T, n=n, start=start)
    return make_table(path.times, np.exp(-1j * path.values), "unimodular",
                      PIECEWISE_CONSTANT)
