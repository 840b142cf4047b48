"""Tests for product expansion and the closed-form summation engine."""

import random
from fractions import Fraction

import mpmath
import pytest

from closedform import (Factor, IndexMode, NotClosedFormError, ProductExpression, bernoulli_number,
                        bernoulli_polynomial, evaluate_sum, expand_products, index_transform, series_in_x,
                        sum_closed_form)
from exactnum import Angle, DegreeOverflowError, DomainError, PiPoly
from expression import parse_expression
from fourier import CoefficientFormula, TrigKind
from numeric import partial_sum


def _sum(text: str, x=None) -> PiPoly:
    parsed = parse_expression(text)
    expression = parsed.expression if x is None else parsed.expression.substitute(x)
    return sum_closed_form(index_transform(expand_products(expression), parsed.mode))


def test_bernoulli_numbers():
    assert [bernoulli_number(m) for m in range(7)] == [1, Fraction(-1, 2), Fraction(1, 6), 0, Fraction(-1, 30),
                                                       0, Fraction(1, 42)]
    assert bernoulli_number(12) == Fraction(-691, 2730)


def test_bernoulli_polynomials():
    assert bernoulli_polynomial(2).coefficients == (Fraction(1, 6), -1, 1)
    assert str(bernoulli_polynomial(2)) == "x^2 - x + 1/6"
    assert bernoulli_polynomial(3).evaluate(Fraction(1, 2)) == PiPoly.zero()
    with pytest.raises(DomainError):
        bernoulli_polynomial(21)


@pytest.mark.parametrize("text, value", [
    ("sin(n)/n", "(pi-1)/2"),
    ("1/n^2", "pi^2/6"),
    ("1/n^4", "pi^4/90"),
    ("cos(n)/n^2", "pi^2/6 - pi/2 + 1/4"),
    ("sin(n)/n^3", "1/12 - pi/4 + pi^2/6"),
    ("(sin(n)/n)^2", "(pi-1)/2"),
    ("sin(n)^2/n^4", "(pi-1)^2/6"),
    ("sin(n)^3/n", "pi/4"),
    ("sin(n)^6/n^2", "3/16*pi"),
    ("sin(pi/2*n)/n", "pi/4"),
    ("(-1)^(n+1)/n^2", "pi^2/12"),
])
def test_known_sums(pipoly, text, value):
    assert _sum(text) == pipoly(value)


@pytest.mark.parametrize("m, value", [
    (1, "-1/2 + pi/2"),
    (2, "-1/2 + pi/2"),
    (3, "-1/2 + 3/8*pi"),
    (4, "-1/2 + pi/3"),
    (5, "-1/2 + 115/384*pi"),
    (6, "-1/2 + 11/40*pi"),
    (7, "-1/2 + (129423*pi - 201684*pi^2 + 144060*pi^3 - 54880*pi^4 + 11760*pi^5 - 1344*pi^6 + 64*pi^7)/46080"),
])
def test_sinc_power_table(pipoly, m, value):
    assert evaluate_sum(ProductExpression.sinc() ** m) == pipoly(value)


def test_sinc_seven_coefficients():
    value = evaluate_sum(ProductExpression.sinc() ** 7)
    assert value.coefficients == [Fraction(-1, 2), Fraction(129423, 46080), Fraction(-201684, 46080),
                                  Fraction(144060, 46080), Fraction(-54880, 46080), Fraction(11760, 46080),
                                  Fraction(-1344, 46080), Fraction(64, 46080)]


def test_negative_controls(pipoly):
    quintic = _sum("(sin(n)/n)^4*sin(3*n)/n")
    assert quintic == pipoly("-3/2 + 27/4*pi - 343/48*pi^2 + 49/16*pi^3 - 7/12*pi^4 + pi^5/24")
    assert quintic != pipoly("(pi-3)/2")
    assert _sum("(sin(n)/n)^4*cos(n)") == pipoly("-1/2 + 23/96*pi")
    assert _sum("sin(n)^7/n") == pipoly("9/64*pi")
    assert _sum("sin(n)^8/n^2") == pipoly("(6+pi)*pi/64")


@pytest.mark.parametrize("mode, value", [
    (IndexMode.EVEN_PART, "(pi-2)/4"),
    (IndexMode.ODD_PART, "pi/4"),
    (IndexMode.ALTERNATE_SIGN, "1/2"),
])
def test_index_transforms(pipoly, mode, value):
    formula = expand_products(ProductExpression.sinc())
    assert sum_closed_form(index_transform(formula, mode)) == pipoly(value)
    assert sum_closed_form(index_transform(expand_products(ProductExpression.sinc() ** 2), mode)) == pipoly(value)


def test_index_transform_parts_add_up():
    formula = expand_products(ProductExpression.sinc() ** 3)
    even = index_transform(formula, IndexMode.EVEN_PART)
    odd = index_transform(formula, IndexMode.ODD_PART)
    assert sum_closed_form(even) + sum_closed_form(odd) == sum_closed_form(formula)


@pytest.mark.parametrize("text", ["cos(n)/n", "sin(n)/n^2", "cos(n)/n^3", "sin(n)*cos(n)"])
def test_outside_q_pi(text):
    with pytest.raises(NotClosedFormError) as info:
        _sum(text)
    assert info.value.term is not None


def test_trig_degree_cap():
    with pytest.raises(DegreeOverflowError):
        expand_products(ProductExpression.sinc() ** 17)


def test_symbol_must_be_substituted():
    expression = ProductExpression.factor(TrigKind.SIN, 0, 1, 1).divide_by_n()
    with pytest.raises(DomainError):
        expand_products(expression)
    assert evaluate_sum(expression.substitute(1)) == (PiPoly.pi() - 1).scale(Fraction(1, 2))


def test_substitution_merges_factors():
    expression = parse_expression("sin(n)*sin(x*n)/n^2").expression.substitute(1)
    assert expression.terms[0].factors == (Factor(TrigKind.SIN, Angle(1), 2),)


def test_sawtooth_at_sample_points(pipoly):
    for x in (Fraction(1, 2), 1, 2, 3):
        assert _sum("sin(x*n)/n", x) == (PiPoly.pi() - x).scale(Fraction(1, 2))
    assert _sum("sin(x*n)/n", Angle.pi_multiple(2)) == PiPoly.zero()


def test_series_in_x_round_trips_the_sawtooth():
    sawtooth = series_in_x(CoefficientFormula.of(1, TrigKind.COS, 0, 1))
    assert sawtooth.has_symbol()
    assert evaluate_sum(sawtooth.substitute(Fraction(1, 3))) == (PiPoly.pi() - Fraction(1, 3)).scale(Fraction(1, 2))


def _random_admissible(rng: random.Random) -> ProductExpression:
    expression = ProductExpression.constant(Fraction(rng.randint(1, 9), rng.randint(1, 5)))
    sines = 0
    for _ in range(rng.randint(1, 3)):
        kind = rng.choice((TrigKind.SIN, TrigKind.COS))
        alpha = Angle(Fraction(rng.randint(1, 6), rng.randint(1, 3)), Fraction(rng.randint(0, 2), 4))
        power = rng.randint(1, 2)
        sines += power if kind is TrigKind.SIN else 0
        expression = expression * ProductExpression.factor(kind, alpha, power)
    p = rng.choice((1, 3)) if sines % 2 else rng.choice((2, 4))
    return expression.divide_by_n(p)


def test_closed_form_brackets_partial_sums():
    rng = random.Random(42)
    for _ in range(50):
        expression = _random_admissible(rng)
        formula = expand_products(expression)
        if formula.is_empty():
            continue
        exact = sum_closed_form(formula)
        result = partial_sum(formula, 400, 20)
        assert result.brackets(exact), str(expression)


def test_expansion_matches_direct_product():
    rng = random.Random(7)
    for _ in range(50):
        expression = _random_admissible(rng)
        formula = expand_products(expression)
        with mpmath.workdps(30):
            for n in (1, 4, 9):
                direct = mpmath.mpf(0)
                for term in expression.terms:
                    value = term.c.to_mpf() / mpmath.mpf(n) ** term.p
                    for factor in term.factors:
                        value *= factor.kind.function()(factor.alpha.to_mpf() * n) ** factor.power
                    direct += value
                assert abs(formula.evaluate_at(n) - direct) < mpmath.mpf(10) ** -25
