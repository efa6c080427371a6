import math

import numpy as np
import pytest

from loewner.driving import (BrownianPath, DrivingTerm, PIECEWISE_LINEAR,
                             brownian_driving, make_constant, make_sqrt,
                             make_table, radial_sle_driving)
from loewner.errors import DrivingError


def test_constant_and_sqrt_values():
    c = make_constant(0.5, "real")
    assert c.value_at(0.0) == 0.5
    assert c.value_at(100.0) == 0.5
    assert c.t_max == math.inf
    s = make_sqrt(2.0)
    assert s.value_at(4.0) == pytest.approx(4.0)
    np.testing.assert_allclose(s.values_at([0.0, 1.0, 9.0]), [0.0, 2.0, 6.0])


def test_unimodular_codomain_enforced():
    with pytest.raises(DrivingError):
        make_constant(0.5, "unimodular")
    k = make_constant(np.exp(0.3j), "unimodular")
    assert abs(k.value_at(1.0) - np.exp(0.3j)) < 1e-15
    with pytest.raises(DrivingError):
        make_table([0.0, 1.0], [1.0, 1.1], "unimodular")


def test_real_codomain_rejects_complex():
    with pytest.raises(DrivingError):
        make_table([0.0, 1.0], [0.0, 1j], "real")


def test_table_piecewise_constant_is_right_continuous():
    d = make_table([0.0, 1.0, 2.0], [5.0, 7.0, 9.0], "real")
    assert d.value_at(0.0) == 5.0
    assert d.value_at(0.999) == 5.0
    assert d.value_at(1.0) == 7.0      # jumps take the new value
    assert d.value_at(2.0) == 9.0
    assert d.is_piecewise_constant


def test_table_linear_interpolation():
    d = make_table([0.0, 2.0], [0.0, 4.0], "real",
                   interpolation=PIECEWISE_LINEAR)
    assert d.value_at(0.5) == pytest.approx(1.0)
    assert not d.is_piecewise_constant


def test_domain_checks():
    d = make_table([0.0, 1.0], [0.0, 1.0], "real")
    with pytest.raises(DrivingError):
        d.value_at(1.5)
    with pytest.raises(DrivingError):
        d.value_at(-0.5)


def test_breakpoints_interior_only():
    d = make_table([0.0, 0.5, 1.0, 1.5], [0.0] * 4, "real")
    np.testing.assert_allclose(d.breakpoints(0.0, 1.5), [0.5, 1.0])
    np.testing.assert_allclose(d.breakpoints(0.5, 1.0), [])
    assert make_constant(0.0, "real").breakpoints(0.0, 5.0).size == 0


def test_table_validation():
    with pytest.raises(DrivingError):
        make_table([0.0, 0.0], [1.0, 2.0], "real")     # not increasing
    with pytest.raises(DrivingError):
        make_table([0.0], [1.0], "real")               # too short
    with pytest.raises(DrivingError):
        make_table([0.0, 1.0], [1.0], "real")          # length mismatch


def test_csv_round_trip_real(tmp_path):
    d = brownian_driving(seed=3, kappa=2.0, T=1.0, n=64)
    path = tmp_path / "d.csv"
    d.to_csv(path)
    back = DrivingTerm.from_csv(path)
    assert back.codomain == "real"
    assert np.max(np.abs(back.times - d.times)) <= 1e-12
    assert np.max(np.abs(back.values - d.values)) <= 1e-12


def test_csv_round_trip_unimodular(tmp_path):
    d = radial_sle_driving(seed=4, kappa=1.5, T=1.0, n=32)
    path = tmp_path / "d.csv"
    d.to_csv(path)
    back = DrivingTerm.from_csv(path)
    assert back.codomain == "unimodular"
    assert np.max(np.abs(back.values - d.values)) <= 1e-12
    with open(path, "rb") as fh:
        raw = fh.read()
    assert raw.startswith(b"t,re,im\n")
    assert b"\r" not in raw


def test_brownian_path_reproducible():
    a = BrownianPath(seed=12, kappa=2.0, T=1.0, n=128)
    b = BrownianPath(seed=12, kappa=2.0, T=1.0, n=128)
    assert np.array_equal(a.values, b.values)
    c = BrownianPath(seed=13, kappa=2.0, T=1.0, n=128)
    assert not np.array_equal(a.values, c.values)
    assert a.values[0] == 0.0
    assert len(a.values) == 129
    with pytest.raises(ValueError):
        a.values[3] = 1.0  # frozen


def test_brownian_increments_scale():
    p = BrownianPath(seed=40, kappa=4.0, T=2.0, n=4096)
    inc = np.diff(p.values)
    var = inc.var() * p.n / p.T
    assert 0.7 * p.kappa < var < 1.3 * p.kappa


def test_brownian_driving_and_radial_projection():
    d = brownian_driving(seed=2, kappa=2.0, T=1.0, n=16)
    assert d.codomain == "real"
    assert d.is_piecewise_constant
    assert d.value_at(0.0) == 0.0
    u = radial_sle_driving(seed=2, kappa=2.0, T=1.0, n=16)
    assert u.codomain == "unimodular"
    # same path, wrapped on the circle
    np.testing.assert_allclose(u.values, np.exp(-1j * d.values), atol=1e-15)
