"""Tests for partial sums, sampling and crossing location."""

import json
import math

import mpmath
import numpy as np
import pytest

from closedform import expand_products, sum_closed_form
from exactnum import Sign
from expression import parse_expression
from fourier import SineSeries, sine_coefficients
from numeric import (DivergentSeriesError, Grid, NoSignChangeError, SampleSet, certified_sign, find_crossing,
                     partial_sum, sample_function, sample_series, term_tail_bound)


def _linear(text: str):
    return expand_products(parse_expression(text).expression)


def _expression(text: str):
    return parse_expression(text).expression


@pytest.mark.parametrize("text, N", [
    ("sin(n)/n", 2000),
    ("(sin(n)/n)^2", 1000),
    ("sin(n)^3/n", 2000),
    ("sin(n)*sin(3*n)/n^2", 500),
])
def test_partial_sum_brackets_exact_value(text, N):
    series = _linear(text)
    result = partial_sum(series, N, 20)
    assert result.brackets(sum_closed_form(series))
    assert result.error_bound < 0.01


def test_tail_bound_shrinks_with_n():
    series = _linear("(sin(n)/n)^2")
    assert partial_sum(series, 2000, 15).tail_bound < partial_sum(series, 200, 15).tail_bound


def test_divergent_series_rejected():
    with pytest.raises(DivergentSeriesError):
        partial_sum(_linear("sin(n)^2/n"), 100, 10)
    with pytest.raises(ValueError):
        partial_sum(_linear("sin(n)/n"), 0, 10)


@pytest.mark.slow
def test_million_term_sum_of_squared_sinc():
    series = _linear("(sin(n)/n)^2")
    result = partial_sum(series, 10 ** 6, 12)
    assert result.error_bound < 2e-6
    with mpmath.workdps(20):
        assert abs(result.value - (mpmath.pi - 1) / 2) < 2e-6


def test_grid_parsing():
    grid = Grid.parse("0:pi:5")
    assert grid.hi == pytest.approx(math.pi)
    assert np.allclose(grid.points(), np.linspace(0, math.pi, 5))
    midpoints = Grid.parse("0:1:4", midpoints=True).points()
    assert np.allclose(midpoints, [0.125, 0.375, 0.625, 0.875])
    with pytest.raises(ValueError):
        Grid.parse("0:pi")
    with pytest.raises(ValueError):
        Grid(1.0, 0.0, 10)


def test_sample_set_validation_and_formats():
    samples = SampleSet([0.0, 0.5, 1.0], [1.0, 2.0, 3.0], N=10, meta="demo")
    assert samples.to_csv().splitlines()[0] == "x,y"
    assert SampleSet.from_csv(samples.to_csv()).points == samples.points
    restored = SampleSet.from_json(json.loads(json.dumps(samples.to_json())))
    assert restored.points == samples.points
    assert restored.N == 10
    with pytest.raises(ValueError):
        SampleSet([0.0, 0.0], [1.0, 2.0])
    with pytest.raises(ValueError):
        SampleSet([0.0, 1.0], [1.0])


def test_sawtooth_samples():
    samples = sample_series(_expression("sin(x*n)/n"), Grid(0.5, 2.5, 5), 20000)
    assert np.allclose(samples.ys, (math.pi - samples.xs) / 2, atol=1e-3)


def test_sine_series_matches_function(load):
    g = load("g")
    grid = Grid(0.1, 3.0, 12)
    series = sample_series(SineSeries(sine_coefficients(g)), grid, 4000)
    exact = sample_function(g, grid)
    assert np.allclose(series.ys, exact.ys, atol=2e-3)


def test_smoothing_damps_overshoot():
    grid = Grid(0.001, 0.2, 200)
    raw = sample_series(_expression("sin(x*n)/n"), grid, 500)
    smooth = sample_series(_expression("sin(x*n)/n"), grid, 500, smoothing=True)
    assert raw.ys.max() > math.pi / 2
    assert smooth.ys.max() < raw.ys.max()


def test_crossing_of_seventh_and_eighth_powers():
    result = find_crossing(_expression("sin(x*n)^7/n"), _expression("sin(x*n)^8/n^2"), (0.9, 1.04), 20000)
    assert 0.97 < result.x < 0.99
    assert abs(result.x - (9 - math.pi) / 6) < 1e-3
    assert result.certified
    assert result.enclosure_lo <= (9 - math.pi) / 6 <= result.enclosure_hi
    assert result.excludes(1.0)


def test_crossing_of_cube_and_fourth_power():
    result = find_crossing(_expression("sin(x*n)^3/n"), _expression("sin(x*n)^4/n^2"), (0.9, 1.1), 200000)
    assert abs(result.x - 1) < 1e-4
    assert result.certified
    assert not result.excludes(1.0)


@pytest.mark.slow
def test_crossing_of_cube_and_fourth_power_to_high_resolution():
    result = find_crossing(_expression("sin(x*n)^3/n"), _expression("sin(x*n)^4/n^2"), (0.9, 1.1), 4_000_000)
    assert abs(result.x - 1) < 1e-6


def test_crossing_requires_sign_change():
    with pytest.raises(NoSignChangeError):
        find_crossing(_expression("sin(x*n)^3/n"), _expression("sin(x*n)^4/n^2"), (0.5, 0.8), 2000)
    with pytest.raises(NoSignChangeError):
        find_crossing(_expression("sin(x*n)/n"), _expression("sin(x*n)/n"), (0.5, 0.8), 100)


def test_certified_sign_of_a_difference():
    difference = _expression("sin(x*n)^3/n") - _expression("sin(x*n)^4/n^2")
    assert certified_sign(difference, 0.95, 20000) is Sign.POSITIVE
    assert certified_sign(difference, 1.05, 20000) is Sign.NEGATIVE
    assert certified_sign(difference, 1.0, 20000) is Sign.ZERO


def test_uncertified_crossing_excludes_nothing():
    result = find_crossing(_expression("sin(x*n)^7/n"), _expression("sin(x*n)^8/n^2"), (0.9, 1.04), 2000,
                           certify=False)
    assert not result.certified
    assert not result.excludes(1.0)
    assert result.to_json()["certified"] is False


def test_abel_tail_bound_is_slightly_widened():
    term = _linear("sin(n)/n").terms[0]
    with mpmath.workdps(40):
        bound = term_tail_bound(term, 1000)
        assert bound > 1 / (1001 * mpmath.sin(mpmath.mpf(1) / 2))
    assert float(bound) == pytest.approx(1 / (1001 * math.sin(0.5)), rel=1e-12)
