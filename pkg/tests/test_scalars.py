import cmath
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from rootseries.scalars import (
    UniPoly,
    XiElement,
    falling_factorial,
    fraction_to_str,
    parse_complex,
    parse_fraction,
    rational_arith,
    roots_of_minus_one,
    scalar_to_json,
)

rationals = st.builds(Fraction, st.integers(-99, 99), st.integers(1, 50))


def test_parse_and_print_round_trip():
    assert parse_fraction("6/4") == Fraction(3, 2)
    assert parse_fraction("-3") == Fraction(-3)
    assert fraction_to_str(Fraction(0)) == "0/1"
    assert fraction_to_str(Fraction(-3, 6)) == "-1/2"


@pytest.mark.parametrize("text", ["1.5", "a/b", "", "1/2/3"])
def test_parse_rejects_non_rationals(text):
    with pytest.raises(ValueError):
        parse_fraction(text)


def test_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        parse_fraction("1/0")
    with pytest.raises(ZeroDivisionError):
        rational_arith(1, 0, "div")


def test_rational_arith_examples():
    assert rational_arith(Fraction(1, 2), Fraction(1, 3), "add") == Fraction(5, 6)
    assert rational_arith(Fraction(2, 3), Fraction(3, 4), "div") == Fraction(8, 9)


def test_parse_complex():
    assert parse_complex("0.5,-2") == complex(0.5, -2)
    assert parse_complex("3") == 3
    with pytest.raises(ValueError):
        parse_complex("nan,0")


def test_falling_factorial_examples():
    assert falling_factorial(Fraction(5), 3) == 60
    assert falling_factorial(Fraction(1, 2), 2) == Fraction(-1, 4)
    assert falling_factorial(Fraction(7, 3), 0) == 1
    assert falling_factorial(Fraction(2), 3) == 0


@given(rationals, st.integers(0, 6))
def test_falling_factorial_recurrence(x, k):
    assert falling_factorial(x, k + 1) == falling_factorial(x, k) * (x - k)


def test_xi_power_wraps_with_sign():
    d = 3
    xi = XiElement.xi(d)
    assert xi ** 3 == XiElement.scalar(-1, d)
    assert xi ** 6 == XiElement.one(d)
    assert XiElement.xi_power(-1, d) * xi == XiElement.one(d)
    assert XiElement.xi_power(4, d) == -xi


def test_xi_degree_one_is_minus_one():
    assert XiElement.xi(1) == XiElement([-1])
    assert XiElement.xi_power(3, 1) == XiElement([-1])


@given(st.integers(1, 5), st.lists(rationals, min_size=5, max_size=5),
       st.lists(rationals, min_size=5, max_size=5), st.integers(0, 9))
def test_xi_evaluation_is_a_ring_map(d, a, b, r):
    x, y = XiElement(a[:d]), XiElement(b[:d])
    root = roots_of_minus_one(d)[r % d]
    assert abs((x * y).evaluate(root) - x.evaluate(root) * y.evaluate(root)) < 1e-6 * (1 + abs(x.evaluate(root) * y.evaluate(root)))
    assert abs((x + y).evaluate(root) - x.evaluate(root) - y.evaluate(root)) < 1e-9 * (1 + abs(x.evaluate(root)) + abs(y.evaluate(root)))


def test_roots_of_minus_one():
    for d in range(1, 6):
        for z in roots_of_minus_one(d):
            assert abs(z ** d + 1) < 1e-12
    assert abs(roots_of_minus_one(2)[0] - cmath.exp(1j * cmath.pi / 2)) < 1e-12


def test_unipoly_basics():
    X = UniPoly.variable()
    p = (X + 1) * (X - 1)
    assert p == UniPoly([-1, 0, 1])
    assert p.degree == 2
    assert UniPoly().degree == -1
    assert p(Fraction(3)) == 8
    assert p.derivative() == UniPoly([0, 2])
    assert p.shift(1) == UniPoly([0, 2, 1])


def test_scalar_json():
    assert scalar_to_json(Fraction(-1, 2)) == "-1/2"
    assert scalar_to_json(XiElement.xi(2)) == ["0/1", "1/1"]
    assert scalar_to_json(1 + 2j) == {"re": 1.0, "im": 2.0}
