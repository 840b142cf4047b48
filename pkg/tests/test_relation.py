"""Tests for LLL reduction and constant recognition."""

from fractions import Fraction

import pytest

from exactnum import PiPoly
from relation import DependentLatticeError, Lattice, lll_reduce, parse_basis, recognize_constant


def _random_lattice(rng, size: int) -> Lattice:
    while True:
        rows = [[rng.randint(-50, 50) for _ in range(size)] for _ in range(size)]
        try:
            return Lattice.of(rows)
        except DependentLatticeError:
            continue


def test_lll_on_textbook_basis():
    lattice = Lattice.of([[1, 1, 1], [-1, 0, 2], [3, 5, 6]])
    reduced = lll_reduce(lattice)
    assert reduced.is_size_reduced()
    assert reduced.satisfies_lovasz()
    assert reduced.gram_determinant() == lattice.gram_determinant()
    assert min(sum(x * x for x in row) for row in reduced.basis) <= 3


def test_lll_on_random_bases(rng):
    for _ in range(10):
        lattice = _random_lattice(rng, 4)
        reduced = lll_reduce(lattice, Fraction(99, 100))
        assert reduced.is_size_reduced()
        assert reduced.satisfies_lovasz(Fraction(99, 100))
        assert reduced.gram_determinant() == lattice.gram_determinant()


def test_lattice_validation():
    with pytest.raises(DependentLatticeError):
        Lattice.of([[1, 2], [2, 4]])
    with pytest.raises(DependentLatticeError):
        Lattice.of([[1, 0], [0, 1], [1, 1]])
    with pytest.raises(ValueError):
        Lattice.of([[1, 0], [1]])
    with pytest.raises(ValueError):
        lll_reduce(Lattice.of([[1, 0], [0, 1]]), Fraction(1, 5))


@pytest.mark.parametrize("text, digits, expected", [
    ("0.6780972450961725", 16, PiPoly([Fraction(-1, 2), Fraction(3, 8)])),
    ("1.0707963267948966192", 20, PiPoly([Fraction(-1, 2), Fraction(1, 2)])),
    ("0.39269908169872415481", 20, PiPoly([0, Fraction(1, 8)])),
    ("0.070796326794896619231", 20, PiPoly([Fraction(-3, 2), Fraction(1, 2)])),
])
def test_recognizes_rational_combinations_of_pi(text, digits, expected):
    result = recognize_constant(text, digits=digits)
    assert result is not None
    assert result.candidate == expected
    assert result.confidence_digits >= digits - 4


def test_recognizes_over_larger_basis():
    result = recognize_constant("1.6449340668482264365", parse_basis("1,pi,pi^2"), digits=19)
    assert result is not None
    assert result.candidate == PiPoly([0, 0, Fraction(1, 6)])


def test_wrong_trailing_digits_still_recognized():
    result = recognize_constant("0.67809724509617999", digits=17)
    assert result is not None
    assert result.candidate == PiPoly([Fraction(-1, 2), Fraction(3, 8)])


def test_random_decimal_has_no_relation():
    assert recognize_constant("0.1234567890123457", digits=16) is None


def test_height_cap():
    assert recognize_constant("0.6780972450961725", digits=16, height_cap=5) is None


def test_input_validation():
    with pytest.raises(ValueError, match="at least 6 digits"):
        recognize_constant("0.5", digits=5)
    with pytest.raises(ValueError):
        parse_basis(" , ")
    assert len(parse_basis("1,pi,pi^2")) == 3
