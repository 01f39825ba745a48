import math
from fractions import Fraction
from typing import Any

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hypertrig.errors import MixedArithmetic
from hypertrig.scalars import (
    I,
    ONE,
    ZERO,
    ArithmeticMode,
    abs2,
    coerce,
    conjugate,
    exact_sqrt,
    gaussian,
    lift,
    mode_of,
    modulus,
    parse_complex_literal,
    parse_rational,
    principal_sqrt,
    rational,
    relative_deviation,
    scalar_from_json,
    scalar_to_json,
    sqrt,
    to_exact,
    to_float,
    within_tolerance,
)


def _rational(q: Fraction) -> Any:
    return rational(q.numerator, q.denominator)


rationals = st.fractions(max_denominator=60).filter(lambda q: abs(q) < 1000)
gaussians = st.builds(lambda a, b: gaussian(_rational(a), _rational(b)), rationals, rationals)


def test_exact_arithmetic() -> None:
    a = gaussian(1, 2)
    b = gaussian(3, -1)
    assert a * b == gaussian(5, 5)
    assert (a * b) / b == a
    assert a - a == ZERO
    assert not a - a
    assert 1 - a == gaussian(0, -2)
    assert I ** 2 == gaussian(-1)
    assert I ** -1 == -I
    assert gaussian(rational(1, 2)) * 2 == ONE
    assert conjugate(a) == gaussian(1, -2)
    assert abs2(a) == 5


def test_exact_values_stay_reduced() -> None:
    value = gaussian(rational(2, 4), rational(6, 8)) * 2
    assert value.x == 1 and value.x.denominator == 1
    assert value.y == rational(3, 2)


@pytest.mark.parametrize("other", [0.5, 1j, complex(1, 1)])
def test_floats_never_enter_exact_mode(other: complex) -> None:
    with pytest.raises(MixedArithmetic):
        to_exact(other)
    with pytest.raises(MixedArithmetic):
        lift(other, ArithmeticMode.EXACT)


def test_gaussian_rejects_float_parts() -> None:
    with pytest.raises(MixedArithmetic):
        gaussian(0.5)
    with pytest.raises(MixedArithmetic):
        rational(0.5)


def test_exact_division_by_zero() -> None:
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


@given(gaussians, gaussians, gaussians)
def test_exact_ring_laws(a: Any, b: Any, c: Any) -> None:
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    if b:
        assert (a / b) * b == a


@pytest.mark.parametrize(
    "value,expected",
    [
        (gaussian(-4), gaussian(0, 2)),
        (gaussian(3, 4), gaussian(2, 1)),
        (gaussian(0, -2), gaussian(1, -1)),
        (gaussian(rational(1, 4)), gaussian(rational(1, 2))),
        (gaussian(2), None),
    ],
)
def test_exact_sqrt(value: Any, expected: Any) -> None:
    assert exact_sqrt(value) == expected


@given(gaussians)
def test_exact_sqrt_of_square(a: Any) -> None:
    root = exact_sqrt(a * a)
    assert root is not None
    assert root in (a, -a)
    assert root.x > 0 or (root.x == 0 and root.y >= 0)


@pytest.mark.parametrize(
    "value,expected",
    [(-1 + 0j, 1j), (complex(-1, -0.0), 1j), (-4, 2j), (4, 2), (-2j, 1 - 1j)],
)
def test_principal_sqrt(value: complex, expected: complex) -> None:
    assert abs(principal_sqrt(value) - expected) < 1e-15


def test_sqrt_leaves_exact_mode_only_when_needed() -> None:
    assert sqrt(gaussian(-1)) == I
    root = sqrt(gaussian(2))
    assert isinstance(root, complex)
    assert abs(root - math.sqrt(2)) < 1e-15


def test_modulus() -> None:
    assert modulus(gaussian(3, 4)) == 5
    assert isinstance(modulus(gaussian(1, 1)), float)
    assert modulus(3 + 4j) == 5.0


@pytest.mark.parametrize(
    "text,expected",
    [
        ("2", gaussian(2)),
        ("0.5+0i", gaussian(rational(1, 2))),
        ("0+1i", I),
        ("i", I),
        ("-i", -I),
        ("2i", gaussian(0, 2)),
        ("1/2-3/4i", gaussian(rational(1, 2), rational(-3, 4))),
        ("1e-3+2i", gaussian(rational(1, 1000), 2)),
        (" -3 ", gaussian(-3)),
    ],
)
def test_parse_complex_literal(text: str, expected: Any) -> None:
    assert parse_complex_literal(text) == expected


def test_parse_complex_literal_float() -> None:
    assert parse_complex_literal("0.3+0.7i", force_float=True) == complex(0.3, 0.7)


@pytest.mark.parametrize("text", ["", "abc", "1/0", "1+2j"])
def test_parse_complex_literal_invalid(text: str) -> None:
    with pytest.raises(ValueError):
        parse_complex_literal(text)


def test_parse_rational() -> None:
    assert parse_rational("-6/4") == rational(-3, 2)
    assert parse_rational("0.25") == rational(1, 4)
    assert parse_rational(7) == 7
    with pytest.raises(ValueError):
        parse_rational(True)


def test_json_scalars() -> None:
    assert scalar_to_json(gaussian(rational(1, 2), -1)) == ["1/2", "-1/1"]
    assert scalar_to_json(0.5 - 2j) == [0.5, -2.0]
    assert scalar_from_json(["1/2", 0]) == gaussian(rational(1, 2))
    assert scalar_from_json("3") == gaussian(3)
    assert scalar_from_json([0.5, 0]) == 0.5 + 0j
    with pytest.raises(ValueError):
        scalar_from_json([1, 2, 3])
    with pytest.raises(ValueError):
        scalar_from_json({"re": 1})


def test_modes() -> None:
    assert mode_of([ONE, rational(1, 2), 3]) is ArithmeticMode.EXACT
    assert mode_of([ONE, 1.0]) is ArithmeticMode.FLOAT
    assert coerce([ONE, rational(1, 2)], ArithmeticMode.FLOAT) == [1 + 0j, 0.5 + 0j]
    assert coerce([1, rational(1, 2)], ArithmeticMode.EXACT) == [ONE, gaussian(rational(1, 2))]
    assert to_float(gaussian(rational(1, 4), -2)) == complex(0.25, -2)
    assert lift(rational(1, 2), ArithmeticMode.FLOAT) == 0.5


def test_tolerance() -> None:
    assert within_tolerance(ZERO, 10, atol=1, rtol=1)
    assert not within_tolerance(gaussian(rational(1, 10 ** 30)), 10, atol=1, rtol=1)
    assert within_tolerance(5e-4 + 0j, 1e6, atol=1e-12, rtol=1e-9)
    assert not within_tolerance(1e-2 + 0j, 1e6, atol=1e-12, rtol=1e-9)
    assert relative_deviation(100, 101) == pytest.approx(1 / 101)
    assert relative_deviation(0, 1e-3) == pytest.approx(1e-3)
