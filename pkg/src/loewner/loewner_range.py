"""Classify the range of a general evolution as plane-like or disc-like.

The hyperbolic length of a tangent vector carried along the flow of a
vector field G,

    beta(t) = |delta(t)| / (1 - |phi(t)|^2),
    phi' = G(phi, t),  delta' = G'(phi, t) delta,

is nonincreasing for any admissible G.  Whether it decays to zero or
stagnates at a positive value separates the two regimes this module
reports: total decay means the evolution eventually forgets hyperbolic
scale (plane-like range), stagnation means the flow stays an isometry up
to bounded distortion (disc-like).  Sampling at exponentially spaced
horizons makes both patterns cheap to detect and hard to fake with a
slowly-varying field.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError
from .generators import FieldSpec, generator_test
from .geometry import check_disc_point, kobayashi_disc
from .integrate import dopri5

PLANE = "plane"
DISC = "disc"
UNDETERMINED = "undetermined"

# horizons s + 2^j after the two warmup samples at s and s+1
_HORIZON_OFFSETS = (0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0)

ZERO_EPS = 1e-8          # beta below this counts as fully decayed
DECAY_RATIO = 0.95       # and the last five ratios must stay under this
STAGNATION_EPS = 1e-6    # relative change that counts as stalled
STAGNATION_FLOOR = 1e-4  # stalled values must stay above this
BOUNDARY_EPS = 1e-9      # stop when 1 - |phi|^2 falls below this

# frozen-time admissibility screens for time-dependent fields
_SLICE_TIMES = (0.0, 1.0, 4.0, 16.0)


@dataclass(frozen=True)
class RangeVerdict:
    classification: str
    beta: float
    decay_ratio: float
    horizon: float
    samples: tuple[tuple[float, float], ...]
    probe: tuple[complex, complex] | None = None


def _classify(values: list[float]) -> str | None:
    ratios = [values[i] / values[i - 1] if values[i - 1] > 0 else 0.0
              for i in range(1, len(values))]
    if values[-1] < ZERO_EPS and len(ratios) >= 5 \
            and all(r <= DECAY_RATIO for r in ratios[-5:]):
        return PLANE
    if len(ratios) >= 2 and values[-1] > STAGNATION_FLOOR:
        rel = [abs(values[i] - values[i - 1]) / values[i - 1]
               for i in (len(values) - 2, len(values) - 1)]
        if all(r < STAGNATION_EPS for r in rel):
            return DISC
    return None


def beta_estimate(G: FieldSpec, s: float, z: complex, v: complex,
                  rel_tol: float = 1e-10, abs_tol: float = 1e-13,
                  validate: bool = True) -> RangeVerdict:
    """Track beta along the orbit of z and classify its decay.

    The verdict records every sampled (t, beta) pair, the last value, the
    last successive ratio, and the horizon actually reached.  Sampling
    stops early once decisive, or once the orbit comes within BOUNDARY_EPS
    of the unit circle, where the denominator has no precision left (an
    orbit attracted to a boundary fixed point gets there in finite time
    numerically); samples gathered before that still classify.

    Autonomous fields are screened by the disc-flow inequality up front.
    A time-dependent field is screened the only way a pointwise test can:
    its frozen-time slices at a few sample times must each pass.
    """
    check_disc_point(z, "z")
    if v == 0:
        raise ArgumentError("tangent vector v must be nonzero")
    if validate:
        slices = _SLICE_TIMES if G.time_dependent else (0.0,)
        for off in slices:
            verdict = generator_test(G.frozen(s + off) if G.time_dependent
                                     else G)
            if not verdict.accepted:
                when = f" at t = {s + off:g}" if G.time_dependent else ""
                raise ArgumentError(
                    f"field fails the disc-flow inequality{when} "
                    f"(violation {verdict.max_violation:.3g} "
                    f"at {verdict.witness})")

    dG = G.derivative

    def rhs(t, y):
        phi, delta = y
        return np.array([G.eval_scalar(phi, t),
                         complex(dG(np.asarray(phi), t)) * delta])

    def near_circle(t, y):
        return 1.0 - abs(y[0]) ** 2 < BOUNDARY_EPS

    horizons = [s + off for off in _HORIZON_OFFSETS]
    state = np.array([z, v], dtype=complex)
    values = [kobayashi_disc(z, v)]
    samples = [(s, values[0])]
    verdict = None
    reached = s
    for t0, t1 in zip(horizons, horizons[1:]):
        res = dopri5(rhs, t0, state, t1, rtol=rel_tol, atol=abs_tol,
                     stop=near_circle)
        state = res.y
        reached = res.t
        if res.stopped:
            break
        phi, delta = state
        values.append(abs(delta) / (1.0 - abs(phi) ** 2))
        samples.append((t1, values[-1]))
        verdict = _classify(values)
        if verdict is not None:
            break
    ratio = values[-1] / values[-2] if len(values) > 1 and values[-2] > 0 else 0.0
    return RangeVerdict(classification=verdict or UNDETERMINED,
                        beta=values[-1], decay_ratio=ratio,
                        horizon=reached, samples=tuple(samples))


DEFAULT_PROBES = ((0.3 + 0.0j, 1.0 + 0.0j),
                  (-0.2 + 0.4j, 0.5 + 0.5j))


def classify_range(G: FieldSpec,
                   probes: tuple[tuple[complex, complex], ...] = DEFAULT_PROBES,
                   s: float = 0.0, rel_tol: float = 1e-10,
                   abs_tol: float = 1e-13) -> RangeVerdict:
    """Aggregate beta_estimate over probes.

    Any probe that witnesses full decay settles the question (plane);
    otherwise an undetermined probe keeps the question open; disc is
    reported only when every probe stagnates.
    """
    if not probes:
        raise ArgumentError("need at least one probe")
    verdicts = []
    for z, v in probes:
        r = beta_estimate(G, s, z, v, rel_tol=rel_tol, abs_tol=abs_tol)
        verdicts.append(RangeVerdict(classification=r.classification,
                                     beta=r.beta, decay_ratio=r.decay_ratio,
                                     horizon=r.horizon, samples=r.samples,
                                     probe=(z, v)))
    for want in (PLANE, UNDETERMINED, DISC):
        for r in verdicts:
            if r.classification == want:
                return r
    raise AssertionError("unreachable")
