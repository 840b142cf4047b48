"""Tests for the expression language."""

from fractions import Fraction

import pytest

from closedform import IndexMode, ProductExpression, evaluate_sum
from exactnum import Angle, PiPoly
from expression import ExpressionSyntaxError, parse_angle, parse_expression, parse_pipoly, tokenize
from fourier import TrigKind


def test_tokens_carry_positions():
    tokens = tokenize("sin(3*n) / n")
    assert [t.text for t in tokens] == ["sin", "(", "3", "*", "n", ")", "/", "n", ""]
    assert tokens[6].position == 9


def test_sum_prefix_and_modes():
    parsed = parse_expression("sum[odd] sin(n)/n")
    assert parsed.explicit_sum
    assert parsed.mode is IndexMode.ODD_PART
    assert parse_expression("sin(n)/n").mode is IndexMode.ALL
    assert parse_expression("sum[alt] sin(n)/n").mode is IndexMode.ALTERNATE_SIGN


def test_equivalent_spellings_agree():
    reference = parse_expression("(sin(n)/n)^3 * sin(3*n)/n").expression
    assert parse_expression("sin(n)^3*sin(3n)/n^4").expression == reference
    assert parse_expression("sinc(n)^3 * sin(3*n)/n").expression == reference
    assert parse_expression("sin(n)*sin(n)*sin(n)*sin(3*n)/(n*n^3)").expression == reference


def test_pi_multiples_in_arguments():
    expression = parse_expression("sin(pi/4*n)").expression
    factor = expression.terms[0].factors[0]
    assert factor.alpha == Angle.pi_multiple(Fraction(1, 4))
    assert parse_expression("cos((2*pi - 1)*n)").expression.terms[0].factors[0].alpha == Angle(-1, 2)


def test_symbol_x():
    expression = parse_expression("sin(n)*sin(x*n)/n^2").expression
    assert expression.has_symbol()
    factor = [f for f in expression.terms[0].factors if f.has_symbol()][0]
    assert factor.x_coeff == 1
    assert parse_expression("sin(2*n*x)").expression.terms[0].factors[0].x_coeff == 2


def test_sinc_of_pi_multiple():
    value = evaluate_sum(parse_expression("sinc(pi/2*n)").expression)
    assert value == PiPoly.constant(Fraction(1, 2))


def test_sign_powers():
    minus = parse_expression("(-1)^(n+1)").expression
    assert minus == ProductExpression.factor(TrigKind.COS, Angle.pi_multiple(1)).scale(-1)
    assert parse_expression("(-1)^n").expression == ProductExpression.factor(TrigKind.COS, Angle.pi_multiple(1))
    assert parse_expression("1^n").expression == ProductExpression.constant(1)


def test_constants():
    assert parse_pipoly("-1/2 + 23/96*pi") == PiPoly([Fraction(-1, 2), Fraction(23, 96)])
    assert parse_pipoly("(pi-1)^2/6") == PiPoly([Fraction(1, 6), Fraction(-1, 3), Fraction(1, 6)])
    assert parse_pipoly("3pi") == PiPoly.monomial(3, 1)
    assert parse_angle("2*pi - 3") == Angle(-3, 2)
    assert parse_angle("-pi/2") == Angle.pi_multiple(Fraction(-1, 2))


@pytest.mark.parametrize("text, position", [
    ("sin(n", 5),
    ("sin(n) $ n", 7),
    ("sin(n*n)", 4),
    ("sin(n)/sin(n)", 6),
    ("sum[weird] sin(n)", 4),
    ("tan(n)", 0),
    ("x*sin(n)", 0),
    ("sin(1)", 4),
    ("2^n", 2),
])
def test_syntax_errors_report_position(text, position):
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_expression(text)
    assert info.value.position == position


def test_missing_parenthesis_lists_expected_token():
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_expression("sin(n")
    assert "')'" in info.value.expected


def test_angles_reject_n():
    with pytest.raises(ExpressionSyntaxError):
        parse_angle("n")
    with pytest.raises(ExpressionSyntaxError):
        parse_pipoly("sin(n)")
