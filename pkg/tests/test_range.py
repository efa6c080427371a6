import math

import numpy as np
import pytest

from loewner.errors import ArgumentError
from loewner.generators import FieldSpec
from loewner.loewner_range import (DISC, PLANE, UNDETERMINED, beta_estimate,
                                   classify_range)


def contracting():
    return FieldSpec(lambda z: -z, deriv=lambda z: -1.0 + 0 * z)


def rotating():
    return FieldSpec(lambda z: 1j * z, deriv=lambda z: 1j + 0 * z)


def test_beta_closed_form_for_linear_field():
    # G = -z: phi = e^(-t) z, delta = e^(-t) v, so
    # beta(t) = e^(-t) |v| / (1 - e^(-2t) |z|^2)
    z, v = 0.3 + 0.1j, 1.0 + 0.5j
    res = beta_estimate(contracting(), 0.0, z, v)
    for t, got in res.samples:
        want = math.exp(-t) * abs(v) / (1 - math.exp(-2 * t) * abs(z) ** 2)
        assert got == pytest.approx(want, rel=1e-8)


def test_plane_classification():
    res = beta_estimate(contracting(), 0.0, 0.3 + 0j, 1.0 + 0j)
    assert res.classification == PLANE
    assert res.beta < 1e-8
    assert res.decay_ratio < 0.95
    assert res.samples[0][0] == 0.0


def test_disc_classification():
    # rotations are isometries: beta is constant in t
    res = beta_estimate(rotating(), 0.0, 0.3 + 0j, 1.0 + 0j)
    assert res.classification == DISC
    want = 1.0 / (1 - 0.09)
    assert res.beta == pytest.approx(want, rel=1e-9)
    # decided early: no need to integrate past the first few horizons
    assert res.horizon <= 4.0


def test_undetermined_for_slow_decay():
    # G = -z/1000 decays too slowly to settle within the horizon ladder
    H = FieldSpec(lambda z: -1e-3 * z, deriv=lambda z: -1e-3 + 0 * z)
    res = beta_estimate(H, 0.0, 0.3 + 0j, 1.0 + 0j)
    assert res.classification == UNDETERMINED
    assert res.horizon == 64.0


def test_classify_range_precedence():
    assert classify_range(contracting()).classification == PLANE
    r = classify_range(rotating())
    assert r.classification == DISC
    assert r.probe is not None


def test_nonzero_start_time():
    res = beta_estimate(contracting(), 2.0, 0.2 + 0j, 1.0 + 0j)
    assert res.samples[0][0] == 2.0
    assert res.classification == PLANE


def test_validation():
    with pytest.raises(ArgumentError):
        beta_estimate(contracting(), 0.0, 0.3, 0.0)        # zero tangent
    with pytest.raises(ArgumentError):
        beta_estimate(contracting(), 0.0, 1.3, 1.0)        # outside disc
    expanding = FieldSpec(lambda z: z, deriv=lambda z: 1.0 + 0 * z)
    with pytest.raises(ArgumentError):
        beta_estimate(expanding, 0.0, 0.3, 1.0)            # not a generator
    with pytest.raises(ArgumentError):
        classify_range(contracting(), probes=())


def test_time_dependent_field_screened_by_frozen_slices():
    G = FieldSpec(lambda z, t: -(1 + 0 * t) * z,
                  deriv=lambda z, t: -1.0 + 0 * z, time_dependent=True)
    res = beta_estimate(G, 0.0, 0.25 + 0.1j, 1.0 + 0j)
    assert res.classification == PLANE
    # z*t passes at t = 0 (zero field) but its t = 1 slice is expanding
    bad = FieldSpec(lambda z, t: z * t, time_dependent=True)
    with pytest.raises(ArgumentError, match="disc-flow inequality at t = 1"):
        beta_estimate(bad, 0.0, 0.3, 1.0)


def test_boundary_attracted_orbit_still_classifies():
    # flow of 1 - z^2 is a family of disc automorphisms running to the
    # boundary fixed point 1; beta is constant, and the trial steps that
    # overshoot the circle must not abort the integration
    res = classify_range(FieldSpec(lambda z: 1 - z * z))
    assert res.classification == DISC
    assert res.beta == pytest.approx(1.0 / (1.0 - 0.09), rel=1e-8)


def test_escaping_orbit_stops_at_circle():
    # with validation off, an orbit that genuinely leaves the disc stops
    # at the circle and reports honestly instead of crashing; the crossing
    # time for |z0| = 0.3 under z' = z t is sqrt(2 ln(1/0.3))
    bad = FieldSpec(lambda z, t: z * t, time_dependent=True)
    res = beta_estimate(bad, 0.0, 0.3, 1.0, validate=False)
    assert res.classification == UNDETERMINED
    assert res.horizon == pytest.approx(math.sqrt(2.0 * math.log(1 / 0.3)),
                                        abs=1e-3)
