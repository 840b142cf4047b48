"""Tests for the exact number tower."""

import random
from fractions import Fraction

import mpmath
import pytest

from exactnum import (Angle, DegreeOverflowError, DomainError, PiPoly, Sign, angle_reduce_mod_2pi, compare,
                      exact_sign, pi_enclosure, to_decimal)


def _random_pipoly(rng: random.Random, degree: int = 3) -> PiPoly:
    return PiPoly([Fraction(rng.randint(-20, 20), rng.randint(1, 12)) for _ in range(degree + 1)])


def test_canonical_form_trims_zeros():
    assert PiPoly([0, 0, 3, 0, 0]) == PiPoly.monomial(3, 2)
    assert PiPoly([0, 0]).is_zero()
    assert PiPoly([0, 0]).valuation == 0
    assert PiPoly.monomial(3, 2).coefficients == [0, 0, 3]


def test_arithmetic_of_known_values(pi):
    a = (pi - 1).scale(Fraction(1, 2))
    assert str(a) == "-1/2 + 1/2*pi"
    assert a * a == PiPoly([Fraction(1, 4), Fraction(-1, 2), Fraction(1, 4)])
    assert (pi - 1) ** 2 / 6 == PiPoly([Fraction(1, 6), Fraction(-1, 3), Fraction(1, 6)])
    assert pi / pi == PiPoly.one()
    assert (PiPoly.one() / pi).valuation == -1


def test_ring_laws_on_random_polynomials():
    rng = random.Random(11)
    for _ in range(50):
        a, b, c = (_random_pipoly(rng) for _ in range(3))
        assert (a + b) * c == a * c + b * c
        assert a - a == PiPoly.zero()
        assert a * b == b * a


def test_division_by_non_monomial_is_rejected(pi):
    with pytest.raises(DomainError):
        PiPoly.one() / (pi - 1)
    with pytest.raises(ZeroDivisionError):
        pi / PiPoly.zero()


def test_degree_cap():
    with pytest.raises(DegreeOverflowError):
        PiPoly.monomial(1, 17)
    with pytest.raises(DegreeOverflowError):
        PiPoly.monomial(1, 9) * PiPoly.monomial(1, 9)


def test_pi_enclosure_contains_pi():
    for bits in (64, 128, 300):
        lo, hi = pi_enclosure(bits)
        with mpmath.workdps(120):
            assert mpmath.mpf(lo.numerator) / lo.denominator < mpmath.pi < mpmath.mpf(hi.numerator) / hi.denominator


def test_exact_sign_of_near_cancellations(pi):
    assert exact_sign(pi - Fraction(355, 113)) is Sign.NEGATIVE
    assert exact_sign(pi - Fraction(311, 99)) is Sign.POSITIVE
    assert exact_sign(pi * pi - Fraction(98696044, 10000000)) is Sign.POSITIVE
    assert exact_sign(PiPoly.zero()) is Sign.ZERO


def test_sign_agrees_with_mpmath_on_random_polynomials():
    rng = random.Random(5)
    for _ in range(50):
        a = _random_pipoly(rng)
        expected = mpmath.sign(a.to_mpf())
        assert exact_sign(a).value == int(expected)


def test_compare_is_three_way(pi):
    assert compare(pi, 3) == 1
    assert compare(3, pi) == -1
    assert compare(pi, pi) == 0


def test_to_decimal_rounds_to_nearest(pi):
    value = pi.scale(Fraction(3, 8)) - Fraction(1, 2)
    assert str(to_decimal(value, 16)) == "0.6780972450961725"
    assert str(to_decimal((pi - 1).scale(Fraction(1, 2)), 10)) == "1.0707963268"
    assert str(to_decimal(-pi, 5)) == "-3.14159"
    assert str(to_decimal(PiPoly.zero(), 3)) == "0.000"


def test_to_decimal_error_bound(pi):
    result = to_decimal(pi ** 3, 20)
    assert result.error_bound <= Fraction(1, 2 * 10 ** 20) + Fraction(1, 10 ** 24)


def test_angles_are_ordered_exactly():
    assert Angle(3) < Angle.pi_multiple(1)
    assert Angle.pi_multiple(1) < Angle(Fraction(22, 7))
    assert sorted([Angle(2), Angle(0, Fraction(2, 3)), Angle(1)]) == [Angle(1), Angle(2), Angle(0, Fraction(2, 3))]
    assert Angle(-1, 1) == Angle.from_pipoly(PiPoly([-1, 1]))


def test_angle_from_pipoly_rejects_higher_powers(pi):
    with pytest.raises(DomainError):
        Angle.from_pipoly(pi * pi)


@pytest.mark.parametrize("theta, reduced, k", [
    (Angle(7), Angle(7, -2), 1),
    (Angle(0, 5), Angle(0, 1), 2),
    (Angle(-1), Angle(-1, 2), -1),
    (Angle(0, 2), Angle(), 1),
])
def test_reduce_mod_two_pi(theta, reduced, k):
    result, count, boundary = angle_reduce_mod_2pi(theta)
    assert result == reduced
    assert count == k
    assert boundary == reduced.is_zero()


def test_json_round_trip_keeps_shift(pi):
    value = PiPoly.one() / pi + pi
    assert PiPoly.from_json(value.to_json()) == value
    assert Angle.from_json(Angle(Fraction(-1, 2), 3).to_json()) == Angle(Fraction(-1, 2), 3)
