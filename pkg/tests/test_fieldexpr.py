import numpy as np
import pytest

from loewner.errors import ArgumentError
from loewner.fieldexpr import compile_field, parse_field


def ev(src, z, t=0.0):
    spec = compile_field(src)
    return complex(spec(z, t) if spec.time_dependent else spec(z))


def test_literals_and_names():
    assert ev("3", 0.5) == 3
    assert ev("2.5e-1", 0.5) == 0.25
    assert ev("i", 0.5) == 1j
    assert ev("z", 0.25 + 0.5j) == 0.25 + 0.5j
    assert ev("t", 0.0, t=1.5) == 1.5


def test_precedence_and_unary():
    assert ev("1 + 2 * 3", 0) == 7
    assert ev("(1 + 2) * 3", 0) == 9
    assert ev("-z^2", 0.5) == -0.25          # unary minus binds last
    assert ev("(-z)^2", 0.5) == 0.25
    assert ev("2^-1", 0) == 0.5
    assert ev("z**3", 2j) == pytest.approx(-8j)
    assert ev("+z", 0.3) == 0.3
    assert ev("1 - 2 - 3", 0) == -4          # left associative
    assert ev("8 / 2 / 2", 0) == 2


def test_radial_style_field():
    z = 0.3 + 0.2j
    got = ev("-z * (1 + z) / (1 - z)", z)
    assert got == pytest.approx(-z * (1 + z) / (1 - z), rel=1e-15)


def test_uses_t_flag():
    assert parse_field("z + 1")[1] is False
    assert parse_field("t * z")[1] is True
    spec = compile_field("-(1 + t) * z")
    assert spec.time_dependent
    assert complex(spec(0.5, 1.0)) == -1.0


def test_vectorizes_over_arrays():
    spec = compile_field("i + i * z^2")
    z = np.array([0.1, 0.2j, -0.3 + 0.1j])
    np.testing.assert_allclose(spec(z), 1j * (1 + z**2), rtol=1e-15)
    # constant expressions broadcast to the input shape
    const = compile_field("2")
    assert const(z).shape == z.shape


@pytest.mark.parametrize("src", [
    "", "   ", "z +", "q", "z^z", "z^1.5", "(z", "z)", "1 @ 2", "z z",
])
def test_rejections(src):
    with pytest.raises(ArgumentError):
        parse_field(src)


def test_errors_carry_position():
    with pytest.raises(ArgumentError, match="position 4"):
        parse_field("1 + q")
    with pytest.raises(ArgumentError, match="position 2"):
        parse_field("1 @ 2")
