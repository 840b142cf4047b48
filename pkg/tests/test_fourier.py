"""Tests for coefficient formulas and the Fourier coefficient engine."""

import random
from fractions import Fraction

import mpmath
import pytest

from closedform import expand_products
from exactnum import Angle, PiPoly
from expression import parse_expression
from fourier import (CoefficientFormula, Equality, TrigKind, TrigTerm, canonical_equal, coefficient_at,
                     full_coefficients, multiply_terms, parseval_check, sine_coefficients, spot_check)

PI = Angle.pi_multiple(1)


def _formula(text: str) -> CoefficientFormula:
    return expand_products(parse_expression(text).expression)


def test_terms_are_canonicalised():
    assert TrigTerm.make(1, TrigKind.SIN, -1, 1) == TrigTerm(PiPoly.constant(-1), TrigKind.SIN, Angle(1), 1)
    assert TrigTerm.make(1, TrigKind.SIN, Angle.pi_multiple(2), 1) is None
    assert TrigTerm.make(1, TrigKind.SIN, PI, 2) is None
    assert TrigTerm.make(1, TrigKind.COS, Angle.pi_multiple(3), 2).beta == PI
    assert TrigTerm.make(1, TrigKind.SIN, Angle(7), 1).beta == Angle(7, -2)
    assert TrigTerm.make(0, TrigKind.COS, 1, 1) is None


def test_like_terms_combine():
    a = CoefficientFormula.of(1, TrigKind.SIN, 1, 2)
    assert (a + a).terms[0].c == PiPoly.constant(2)
    assert (a - a).is_empty()


def test_product_to_sum_matches_numeric_product():
    rng = random.Random(17)
    kinds = (TrigKind.SIN, TrigKind.COS)
    for _ in range(50):
        left = TrigTerm.make(rng.randint(1, 5), rng.choice(kinds), Angle(rng.randint(1, 9), Fraction(rng.randint(-2, 2), 3)), 1)
        right = TrigTerm.make(rng.randint(1, 5), rng.choice(kinds), Angle(rng.randint(1, 9), Fraction(rng.randint(-2, 2), 4)), 1)
        if left is None or right is None:
            continue
        product = CoefficientFormula(multiply_terms(left, right))
        for n in (1, 2, 7):
            assert abs(product.evaluate_at(n) - left.value_at(n) * right.value_at(n)) < mpmath.mpf(10) ** -25


def test_sawtooth_coefficients(load):
    assert sine_coefficients(load("sawtooth")) == CoefficientFormula([TrigTerm.constant(1, 1)])


@pytest.mark.parametrize("name, expected", [
    ("g", "sin(n)/n^2"),
    ("h_third", "sin(n/3)/n^2"),
    ("gregory_variant", "sin(pi/2*n)/n^2"),
    ("sin2_n3", "sin(n)^2/n^3"),
    ("sin3_n4", "sin(n)^3/n^4"),
    ("g_even", "(1 + (-1)^n)*sin(n)/(2*n^2)"),
    ("g_odd", "(1 - (-1)^n)*sin(n)/(2*n^2)"),
])
def test_sine_coefficients_of_standard_functions(load, name, expected):
    computed = sine_coefficients(load(name))
    assert canonical_equal(computed, _formula(expected)) is Equality.EQUAL


def test_sine_coefficients_need_half_domain(load):
    with pytest.raises(ValueError):
        sine_coefficients(load("x_squared"))


def test_full_coefficients_of_x_squared(load, pi):
    a0, a, b = full_coefficients(load("x_squared"))
    assert a0 == (pi * pi).scale(Fraction(2, 3))
    assert a == CoefficientFormula.of(4, TrigKind.COS, PI, 2)
    assert b.is_empty()


@pytest.mark.parametrize("name, value", [
    ("g", "(pi-1)^2/6"),
    ("g_even", "(pi-2)^2/24"),
    ("g_odd", "pi^2/8 - pi/6"),
    ("sawtooth", "pi^2/6"),
    ("x_squared", "2/5*pi^4"),
])
def test_parseval_holds_exactly(load, pipoly, name, value):
    result = parseval_check(load(name))
    assert result.equal
    assert result.lhs == pipoly(value)


def test_parseval_detects_a_wrong_sine_side(load):
    result = parseval_check(load("g"), CoefficientFormula.of(1, TrigKind.SIN, 2, 2))
    assert not result.equal


def test_spot_check_and_coefficient_values():
    expanded = _formula("sin(n)^3/n^4")
    direct = CoefficientFormula.of(1, TrigKind.SIN, 1, 4)
    assert canonical_equal(expanded, direct) is Equality.NOT_EQUAL_FORMALLY
    value = coefficient_at(expanded, 3, 20)
    assert abs(value.value - mpmath.sin(3) ** 3 / 81) <= value.error_bound
    assert all(d < mpmath.mpf(10) ** -25 for d in spot_check(expanded, _formula("(3*sin(n) - sin(3*n))/(4*n^4)")))
    assert abs(coefficient_at(CoefficientFormula.of(1, TrigKind.SIN, 3, 2), 1, 20).value - mpmath.sin(3) / 9) < 1e-25


def test_json_round_trip():
    formula = _formula("sin(n)^2*sin(3*n)/n^3")
    assert CoefficientFormula.from_json(formula.to_json()) == formula
