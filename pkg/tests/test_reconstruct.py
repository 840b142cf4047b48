"""Tests for breakpoint detection, constrained fitting and roundtrip verification."""

import math
from fractions import Fraction

import numpy as np
import pytest

from closedform import expand_products, series_in_x
from exactnum import Angle, DomainError, PiPoly
from expression import parse_expression
from fourier import sine_coefficients
from numeric import Grid, SampleSet, sample_function, sample_series
from piecewise import Piece, PiecewiseFunction
from reconstruct import (CandidateKind, FitConstraints, FitResult, SegmentationHypothesis,
                         UnderdeterminedSegmentError, UnrecognizedCoefficientError, Verdict, boundary_flags,
                         candidate_tiers, detect_breakpoints, fit_segments, parse_candidates, reconstruct,
                         recognize_coefficients, search_fit, snap, verify_roundtrip)


def _samples(function, count: int = 2000) -> SampleSet:
    return sample_function(function, Grid(0.0, math.pi, count, midpoints=True))


def test_candidate_tiers_and_snapping():
    tiers = candidate_tiers(None, 0.0, math.pi)
    assert tiers[0] == [Angle(1), Angle(2), Angle(3)]
    assert tiers[1] == [Angle(Fraction(1, 2)), Angle(Fraction(3, 2)), Angle(Fraction(5, 2))]
    assert snap(1.02, tiers) == Angle(1)
    assert snap(1.48, tiers) == Angle(Fraction(3, 2))
    assert snap(0.7, tiers) is None


def test_parse_candidates():
    assert parse_candidates("integers") is CandidateKind.INTEGERS
    assert parse_candidates("half") is CandidateKind.HALF_INTEGERS
    assert parse_candidates("1, pi/2") == [Angle(1), Angle.pi_multiple(Fraction(1, 2))]


def test_hypothesis_validation_and_split():
    with pytest.raises(DomainError):
        SegmentationHypothesis((Angle(2), Angle(1)))
    with pytest.raises(ValueError):
        SegmentationHypothesis((Angle(1),), (1, 2, 3))
    split = SegmentationHypothesis((Angle(2),), (1, 3)).split(Angle(1))
    assert split.breakpoints == (Angle(1), Angle(2))
    assert split.degrees == (1, 1, 3)


def test_detects_kink_of_g(load):
    hypothesis = detect_breakpoints(_samples(load("g")))
    assert hypothesis.breakpoints == (Angle(1),)


def test_detection_needs_enough_samples(load):
    with pytest.raises(ValueError):
        detect_breakpoints(_samples(load("g"), 50))


def test_boundary_flags(load):
    assert boundary_flags(_samples(load("g"))) == (True, True)
    assert boundary_flags(_samples(load("sawtooth"))) == (False, True)


def test_constrained_fit_of_g(load):
    samples = _samples(load("g"))
    hypothesis = SegmentationHypothesis((Angle(1),), (1,))
    fit = fit_segments(samples, hypothesis, FitConstraints(0, True, True))
    assert fit.residual < 1e-10
    assert fit.constraint_violation() < 1e-10
    assert np.allclose(fit.coefficients[0], [0, (math.pi - 1) / 2], atol=1e-9)
    assert np.allclose(fit.coefficients[1], [math.pi / 2, -0.5], atol=1e-9)
    assert np.allclose(fit.evaluate([0.5, 2.0]), [(math.pi - 1) / 4, (math.pi - 2) / 2])


def test_underdetermined_segment():
    samples = SampleSet(np.linspace(0, math.pi, 6), np.zeros(6))
    with pytest.raises(UnderdeterminedSegmentError):
        fit_segments(samples, SegmentationHypothesis(degrees=(4,)), FitConstraints())


def test_search_escalates_to_the_right_degree(load):
    samples = _samples(load("g"))
    fit = search_fit(samples, SegmentationHypothesis(), 1e-9)
    assert fit.residual <= 1e-9
    assert Angle(1) in fit.hypothesis.breakpoints


def test_fit_recognition_and_roundtrip(load):
    g = load("g")
    samples = _samples(g)
    fit = search_fit(samples, detect_breakpoints(samples), 1e-9)
    candidate = recognize_coefficients(fit)
    report = verify_roundtrip(candidate, sine_coefficients(g))
    assert report.verdict is Verdict.VERIFIED
    assert [piece.poly for piece in candidate.pieces] == [piece.poly for piece in g.pieces]


def test_roundtrip_refutes_wrong_candidate(load):
    report = verify_roundtrip(load("sawtooth"), sine_coefficients(load("g")))
    assert report.verdict is Verdict.REFUTED
    assert report.to_json()["verdict"] == "refuted"


def test_roundtrip_refutes_shifted_breakpoint(load):
    exact = load("sin2_n3")
    left, right = exact.pieces
    shifted = PiecewiseFunction([Piece(left.lo, Angle(Fraction(5, 2)), left.poly),
                                 Piece(Angle(Fraction(5, 2)), right.hi, right.poly)])
    target = expand_products(parse_expression("sin(n)^2/n^3").expression)
    assert verify_roundtrip(exact, target).verdict is Verdict.VERIFIED
    assert verify_roundtrip(shifted, target).verdict is Verdict.REFUTED


def test_continuity_order_is_capped_by_the_lowest_degree(load):
    samples = _samples(load("sin2_n3"))
    with pytest.raises(ValueError, match="continuity order"):
        fit_segments(samples, SegmentationHypothesis((Angle(2),), (2, 1)), FitConstraints(1, True, True))


def test_fit_of_sampled_series():
    series = series_in_x(expand_products(parse_expression("sin(n)^2/n^3").expression))
    samples = sample_series(series, Grid(0.0, math.pi, 2000, midpoints=True), 20000)
    fit = fit_segments(samples, SegmentationHypothesis((Angle(2),), (2, 1)), FitConstraints(0, True, True))
    assert np.allclose(fit.coefficients[0], [0, 1.070796, -0.392699], atol=1e-5)
    assert np.allclose(fit.coefficients[1], [1.570796, -0.5], atol=1e-5)
    assert fit.constraint_violation() < 1e-9


def test_unrecognizable_coefficient():
    fit = FitResult(SegmentationHypothesis(), FitConstraints(), (np.array([0.1234567890123457]),),
                    (np.array([1e-17]),), 0.0, (0.0,), 0.0, 10)
    with pytest.raises(UnrecognizedCoefficientError) as info:
        recognize_coefficients(fit)
    assert info.value.power == 0


_PI_HALF = PiPoly([Fraction(-1, 2), Fraction(1, 2)])


@pytest.mark.slow
@pytest.mark.parametrize("text, name, breakpoints, constants", [
    ("1/n", "sawtooth", [], {(0, 1): PiPoly([Fraction(-1, 2)])}),
    ("sin(n)/n^2", "g", [Angle(1)], {(0, 1): _PI_HALF}),
    ("sin(n)^2/n^3", "sin2_n3", [Angle(2)], {(0, 1): _PI_HALF, (0, 2): PiPoly([0, Fraction(-1, 8)])}),
    ("sin(n)^3/n^4", "sin3_n4", [Angle(1), Angle(3)], {
        (0, 1): PiPoly([Fraction(-1, 2), Fraction(3, 8)]),
        (0, 3): PiPoly([0, Fraction(-1, 24)]),
        (1, 1): PiPoly([Fraction(-1, 2), Fraction(9, 16)]),
    }),
])
def test_full_pipeline(load, text, name, breakpoints, constants):
    result = reconstruct(parse_expression(text).expression)
    assert result.report.verdict is Verdict.VERIFIED
    assert result.candidate.breakpoints == breakpoints
    assert [piece.poly for piece in result.candidate.pieces] == [piece.poly for piece in load(name).pieces]
    for (piece, power), value in constants.items():
        assert result.candidate.pieces[piece].poly.coeffs[power] == value
