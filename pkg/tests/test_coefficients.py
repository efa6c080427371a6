import cmath
import math

import numpy as np
import pytest

from loewner.coefficients import (a2_quadrature, a3_quadrature,
                                  bieberbach_verify, coeffs_from_jet,
                                  herglotz_coeffs)
from loewner.driving import make_constant, make_table
from loewner.errors import ArgumentError, DrivingError

KOEBE = make_constant(-1.0 + 0j, "unimodular")


def rotated_driving(c):
    return make_constant(c, "unimodular")


def random_driving(rng, T=60.0, cells=12):
    times = np.linspace(0.0, T, cells + 1)
    values = np.exp(1j * rng.uniform(0, 2 * math.pi, cells + 1))
    return make_table(times, values, "unimodular")


def test_herglotz_coeffs():
    k = cmath.exp(0.4j)
    assert herglotz_coeffs(k, 0) == 1.0
    assert herglotz_coeffs(k, 1) == pytest.approx(2 * k, abs=1e-15)
    assert herglotz_coeffs(k, 5) == pytest.approx(2 * k**5, abs=1e-14)
    with pytest.raises(ArgumentError):
        herglotz_coeffs(k, -1)


def test_koebe_coefficients():
    # k = -1 gives the Koebe chain e^s z / (1 - z)^2: a_m(s) = m e^s
    for s in (0.0, 0.4):
        assert abs(a2_quadrature(s, KOEBE) - 2 * math.exp(s)) < 1e-9
        assert abs(a3_quadrature(s, KOEBE) - 3 * math.exp(s)) < 1e-9


def test_constant_driving_rotation_covariance():
    # constant driving c: b2 = -2c, b3 = 3c^2, saturating both bounds
    rng = np.random.default_rng(31)
    for _ in range(6):
        c = cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        res = bieberbach_verify(rotated_driving(c))
        assert abs(res.b2 - (-2 * c)) < 1e-9
        assert abs(res.b3 - 3 * c * c) < 1e-9
        assert res.bounds_pass
        assert abs(abs(res.b2) - 2.0) < 1e-9
        assert abs(abs(res.b3) - 3.0) < 1e-9


def test_bounds_hold_for_random_drivings():
    rng = np.random.default_rng(77)
    for _ in range(15):
        d = random_driving(rng, cells=int(rng.integers(3, 15)))
        res = bieberbach_verify(d)
        assert res.bounds_pass
        assert abs(res.b2) <= 2.0 + 1e-8
        assert abs(res.b3) <= 3.0 + 1e-8
        assert res.error_budget < 1e-9


def test_s_shift_matches_shifted_driving():
    # a_m at time s under k equals e^{ms} times b_m of the driving shifted
    # to start at 0
    rng = np.random.default_rng(5)
    T, cells, s = 60.0, 10, 1.5
    times = np.linspace(0.0, T, cells + 1)
    values = np.exp(1j * rng.uniform(0, 2 * math.pi, cells + 1))
    d = make_table(times, values, "unimodular")
    res = bieberbach_verify(d, s=s, t_max=s + 40.0)

    keep = times >= s
    shifted_times = np.concatenate(([0.0], times[keep] - s))
    shifted_values = np.concatenate(([d.value_at(s)], values[keep]))
    d0 = make_table(shifted_times, shifted_values, "unimodular")
    res0 = bieberbach_verify(d0, s=0.0, t_max=40.0)

    assert abs(res.b2 - res0.b2) < 1e-8
    assert abs(res.b3 - res0.b3) < 1e-8
    assert abs(res.a2 - math.exp(s) * res0.a2) < 1e-7


def test_jet_cross_check():
    rng = np.random.default_rng(11)
    for _ in range(3):
        d = random_driving(rng, cells=8)
        res = bieberbach_verify(d)
        a2_jet, a3_jet = coeffs_from_jet(0.0, d)
        assert abs(res.a2 - a2_jet) < 1e-6
        assert abs(res.a3 - a3_jet) < 1e-6


def test_domain_and_codomain_validation():
    with pytest.raises(ArgumentError):
        a2_quadrature(0.0, KOEBE, t_max=10.0)   # tail not negligible
    with pytest.raises(DrivingError):
        bieberbach_verify(make_constant(0.0, "real"))
    short = make_table([0.0, 5.0], [1.0 + 0j, 1.0 + 0j], "unimodular")
    with pytest.raises(DrivingError):
        bieberbach_verify(short)                 # table ends before T_max
    with pytest.raises(ArgumentError):
        coeffs_from_jet(1.0, KOEBE, t_max=0.5)
