"""
Numeric module for the pi-series toolkit.

This module evaluates series numerically. ``partial_sum`` sums a linear series
exactly in order with fixed-point big integers and attaches a rigorous bound on
the truncation error. ``sample_series`` and ``find_crossing`` evaluate product
expressions in a symbol x with vectorised float64 arithmetic, for plotting,
fitting and locating crossings.
"""

import csv
import io
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, TextIO, Tuple, Union

import mpmath
import numpy as np

from closedform import ProductExpression, expand_products, series_in_x
from constants import CROSSING_CERTIFY_TERMS, GUARD_DIGITS, RESIDUAL_FLOOR, SAMPLE_BLOCK, TAIL_BOUND_SLACK
from exactnum import Angle, PiPoly, PiSeriesError, Sign
from fourier import CoefficientFormula, SineSeries, TrigKind, TrigTerm
from piecewise import PiecewiseFunction


class DivergentSeriesError(PiSeriesError):
    """A term of the series does not converge (p <= 0, or a constant over n)."""


class NoSignChangeError(PiSeriesError):
    """The difference of two series does not change sign on the bracket."""


@dataclass(frozen=True)
class PartialSumResult:
    """Sum of the first N terms and bounds on the distance to the full series.

    ``tail_bound`` bounds the truncated terms and ``rounding_bound`` bounds the
    fixed-point arithmetic, so the series value lies within their sum of ``value``.
    """
    value: mpmath.mpf
    N: int
    tail_bound: mpmath.mpf
    rounding_bound: mpmath.mpf
    digits: int

    @property
    def error_bound(self) -> mpmath.mpf:
        return self.tail_bound + self.rounding_bound

    def brackets(self, exact: PiPoly) -> bool:
        """True when ``exact`` lies within the error bound of the partial sum."""
        with mpmath.workdps(self.digits + GUARD_DIGITS):
            return abs(self.value - exact.to_mpf()) <= self.error_bound

    def __str__(self) -> str:
        return mpmath.nstr(self.value, self.digits)


def _fixed_point_rotation(beta: Angle, bits: int) -> Tuple[int, int]:
    """cos(beta) and sin(beta) scaled by 2**bits, exact for multiples of pi."""
    one = 1 << bits
    if beta.is_zero():
        return one, 0
    if beta == Angle.pi_multiple(1):
        return -one, 0
    with mpmath.workprec(bits + 32):
        value = beta.to_mpf()
        c = int(mpmath.nint(mpmath.ldexp(mpmath.cos(value), bits)))
        s = int(mpmath.nint(mpmath.ldexp(mpmath.sin(value), bits)))
    return c, s


def _sum_frequency(terms: Sequence[TrigTerm], N: int, bits: int) -> Dict[Tuple[TrigKind, int], int]:
    """Fixed-point sums of trig(beta*n)/n**p for n = 1..N for each (kind, p) needed."""
    beta = terms[0].beta
    wanted = sorted({(t.kind, t.p) for t in terms}, key=lambda k: (k[0].name, k[1]))
    accumulators = {key: 0 for key in wanted}
    step_c, step_s = _fixed_point_rotation(beta, bits)
    c, s = step_c, step_s
    for n in range(1, N + 1):
        for kind, p in wanted:
            numerator = c if kind is TrigKind.COS else s
            accumulators[(kind, p)] += numerator // n ** p if p else numerator
        c, s = (c * step_c - s * step_s) >> bits, (s * step_c + c * step_s) >> bits
    return accumulators


def term_tail_bound(term: TrigTerm, N: int) -> mpmath.mpf:
    """Upper bound on |sum over n > N| of one term.

    p >= 2 compares with an integral, sum n**-p <= N**(1-p)/(p-1); p = 1 with a
    nonzero frequency uses Abel summation with the Dirichlet-kernel bound
    1 / ((N+1) sin(beta/2)).
    """
    c = abs(term.c.to_mpf())
    if term.p >= 2:
        return c * mpmath.mpf(N) ** (1 - term.p) / (term.p - 1)
    if term.p == 1 and not term.is_constant():
        half = term.beta.to_mpf() / 2
        return c / ((N + 1) * mpmath.sin(half)) * (1 + mpmath.mpf(TAIL_BOUND_SLACK))
    raise DivergentSeriesError(f"the series of {term} does not converge")


def partial_sum(e: CoefficientFormula, N: int, digits: int) -> PartialSumResult:
    """Sum the first N terms of a linear series with a rigorous error bound.

    Args:
        e: canonical series
        N: number of terms, at least 1
        digits: decimal digits required of the result

    Returns:
        PartialSumResult: value, tail bound and rounding bound

    Raises:
        DivergentSeriesError: if any term has p <= 0 or is a constant with p = 1
    """
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    bits = int((digits + GUARD_DIGITS + len(str(N))) * 3.33) + 16
    groups: Dict[Angle, List[TrigTerm]] = {}
    for term in e.terms:
        if term.p < 1 or (term.p == 1 and term.is_constant()):
            raise DivergentSeriesError(f"the series of {term} does not converge")
        groups.setdefault(term.beta, []).append(term)
    with mpmath.workdps(digits + GUARD_DIGITS + len(str(N))):
        total = mpmath.mpf(0)
        rounding = mpmath.mpf(0)
        scale = mpmath.ldexp(mpmath.mpf(1), -bits)
        for beta in sorted(groups, key=lambda b: (b.s, b.r)):
            terms = groups[beta]
            sums = _sum_frequency(terms, N, bits)
            for term in terms:
                c = term.c.to_mpf()
                total += c * sums[(term.kind, term.p)] * scale
                rounding += abs(c) * 4 * (N + 1) * N * scale
        tail = mpmath.fsum(term_tail_bound(term, N) for term in e.terms)
    logging.info(f"partial sum N={N}: {mpmath.nstr(total, digits)} (tail <= {mpmath.nstr(tail, 3)})")
    return PartialSumResult(total, N, tail, rounding, digits)


@dataclass(frozen=True)
class Grid:
    """``count`` points on [lo, hi]; cell midpoints when ``midpoints`` is set."""
    lo: float
    hi: float
    count: int
    midpoints: bool = False

    def __post_init__(self):
        if self.count < 2:
            raise ValueError(f"a grid needs at least 2 points, got {self.count}")
        if not self.hi > self.lo:
            raise ValueError(f"grid bounds must increase, got {self.lo}:{self.hi}")

    @classmethod
    def parse(cls, text: str, midpoints: bool = False) -> 'Grid':
        """Read ``lo:hi:count`` where lo and hi may be angles such as ``-pi``."""
        from expression import parse_angle

        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid must look like lo:hi:count, got {text!r}")
        return cls(float(parse_angle(parts[0])), float(parse_angle(parts[1])), int(parts[2]), midpoints)

    def points(self) -> np.ndarray:
        if self.midpoints:
            step = (self.hi - self.lo) / self.count
            return self.lo + step * (np.arange(self.count) + 0.5)
        return np.linspace(self.lo, self.hi, self.count)


@dataclass
class SampleSet:
    """Points (x, y) with strictly increasing x."""
    xs: np.ndarray
    ys: np.ndarray
    N: int = 0
    meta: str = ""

    def __post_init__(self):
        self.xs = np.asarray(self.xs, dtype=float)
        self.ys = np.asarray(self.ys, dtype=float)
        if self.xs.shape != self.ys.shape:
            raise ValueError("x and y must have the same length")
        if np.any(np.diff(self.xs) <= 0):
            raise ValueError("sample x values must be strictly increasing")

    def __len__(self) -> int:
        return len(self.xs)

    @property
    def points(self) -> List[Tuple[float, float]]:
        return list(zip(self.xs.tolist(), self.ys.tolist()))

    def restrict(self, mask: np.ndarray) -> 'SampleSet':
        return SampleSet(self.xs[mask], self.ys[mask], self.N, self.meta)

    def to_csv(self, stream: Optional[TextIO] = None) -> str:
        buffer = stream or io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["x", "y"])
        for x, y in self.points:
            writer.writerow([repr(x), repr(y)])
        return buffer.getvalue() if stream is None else ""

    def to_json(self) -> Dict[str, object]:
        return {"source": self.meta, "N": self.N,
                "points": [{"x": x, "y": y} for x, y in self.points]}

    @classmethod
    def from_json(cls, data: Dict[str, object]) -> 'SampleSet':
        points = data.get("points", [])
        return cls([p["x"] for p in points], [p["y"] for p in points],
                   int(data.get("N", 0)), str(data.get("source", "")))

    @classmethod
    def from_csv(cls, text: str, N: int = 0, meta: str = "") -> 'SampleSet':
        rows = list(csv.DictReader(io.StringIO(text)))
        return cls([float(r["x"]) for r in rows], [float(r["y"]) for r in rows], N, meta)


def _trig_array(kind: TrigKind, values: np.ndarray) -> np.ndarray:
    return np.sin(values) if kind is TrigKind.SIN else np.cos(values)


class SeriesEvaluator:
    """Float64 evaluator of the N-term partial sums of a product expression in x.

    Factors that do not depend on x are folded into per-term weight arrays once;
    x-dependent factors are evaluated per point. With ``smoothing`` each term n
    is weighted by the Lanczos factor sinc(n*pi/(N+1)), which averages every
    component series over a window of width 2*pi/(N+1) and damps the oscillation
    next to jumps and kinks.
    """

    def __init__(self, expression: ProductExpression, N: int, smoothing: bool = False,
                 block: int = SAMPLE_BLOCK):
        if N < 1:
            raise ValueError(f"N must be positive, got {N}")
        self.expression = expression
        self.N = N
        self.smoothing = smoothing
        self.blocks: List[Tuple[np.ndarray, List[Tuple[np.ndarray, list]]]] = []
        for start in range(1, N + 1, block):
            n = np.arange(start, min(start + block, N + 1), dtype=float)
            sigma = np.sinc(n / (N + 1)) if smoothing else np.ones_like(n)
            per_term = []
            for term in expression.terms:
                weight = float(term.c) * sigma / n ** term.p
                moving = []
                for factor in term.factors:
                    if factor.has_symbol():
                        moving.append(factor)
                    else:
                        weight = weight * _trig_array(factor.kind, float(factor.alpha) * n) ** factor.power
                per_term.append((weight, moving))
            self.blocks.append((n, per_term))

    def __call__(self, x: float) -> float:
        partials = []
        for n, per_term in self.blocks:
            for weight, moving in per_term:
                values = weight
                for factor in moving:
                    argument = (float(factor.alpha) + float(factor.x_coeff) * x) * n
                    values = values * _trig_array(factor.kind, argument) ** factor.power
                partials.append(float(np.sum(values)))
        return math.fsum(partials)

    def evaluate(self, xs: Sequence[float]) -> np.ndarray:
        return np.array([self(float(x)) for x in xs])


def as_expression(e: Union[ProductExpression, SineSeries]) -> ProductExpression:
    return series_in_x(e.coeffs) if isinstance(e, SineSeries) else e


def sample_series(e: Union[ProductExpression, SineSeries], grid: Grid, N: int,
                  smoothing: bool = False) -> SampleSet:
    """Partial sums of a series in x at every grid point.

    Args:
        e: product expression in x, or a sine series
        grid: where to sample
        N: number of terms
        smoothing: apply Lanczos sigma factors

    Returns:
        SampleSet: the samples, tagged with N and the source expression
    """
    expression = as_expression(e)
    evaluator = SeriesEvaluator(expression, N, smoothing)
    xs = grid.points()
    logging.info(f"Sampling {expression} at {len(xs)} points with N={N}")
    return SampleSet(xs, evaluator.evaluate(xs), N, str(expression))


def sample_function(f: PiecewiseFunction, grid: Grid) -> SampleSet:
    """Exact-function samples, useful as truncation-free fitting input."""
    xs = grid.points()
    return SampleSet(xs, np.array([f.evaluate_float(float(x)) for x in xs]), 0, "piecewise function")


def series_tail_estimate(e: Union[ProductExpression, SineSeries], N: int, guard: float) -> float:
    """Rough size of the truncation error of an N-term partial sum in x.

    p >= 2 uses the integral bound; p = 1 assumes the sample stays ``guard``
    away from every jump.
    """
    estimate = 0.0
    for term in as_expression(e).terms:
        c = abs(float(term.c))
        if term.p >= 2:
            estimate += c * N ** (1 - term.p) / (term.p - 1)
        else:
            estimate += c / (N * guard)
    return max(estimate, RESIDUAL_FLOOR)


@dataclass(frozen=True)
class CrossingResult:
    """A sign change of e1 - e2 located to within [lo, hi].

    ``lo`` and ``hi`` come from float64 bisection of the N-term partial sums.
    When ``certified`` is set, the full series difference has opposite exact
    signs at ``enclosure_lo`` and ``enclosure_hi``, so a crossing of the
    infinite series lies between them.
    """
    x: float
    lo: float
    hi: float
    N: int
    iterations: int
    certified: bool = False
    enclosure_lo: float = 0.0
    enclosure_hi: float = 0.0

    @property
    def resolution(self) -> float:
        return self.hi - self.lo

    def excludes(self, point: float) -> bool:
        """True when the certified enclosure provably leaves out ``point``."""
        return self.certified and not (self.enclosure_lo <= point <= self.enclosure_hi)

    def to_json(self) -> Dict[str, object]:
        return {"x": self.x, "lo": self.lo, "hi": self.hi, "N": self.N, "iterations": self.iterations,
                "certified": self.certified, "enclosure": [self.enclosure_lo, self.enclosure_hi]}


def certified_sign(difference: ProductExpression, x: float, N: int, digits: int = 10) -> Sign:
    """Sign of the infinite series ``difference`` at the exact rational value of ``x``.

    The series is summed exactly to N terms; ZERO means the enclosure of value
    and error bound contains zero, so no sign could be proved.
    """
    linear = expand_products(difference.substitute(Angle.rational(Fraction(x))))
    if not linear.terms:
        return Sign.ZERO
    try:
        result = partial_sum(linear, N, digits)
    except DivergentSeriesError as e:
        logging.warning(f"cannot enclose the difference at x = {x!r}: {e}")
        return Sign.ZERO
    if result.value > result.error_bound:
        return Sign.POSITIVE
    if result.value < -result.error_bound:
        return Sign.NEGATIVE
    return Sign.ZERO


def _certify_bracket(difference: ProductExpression, lo: float, hi: float, limits: Tuple[float, float],
                     N: int, digits: int) -> Tuple[float, float, bool]:
    """Widen [lo, hi] until the exact signs at both ends differ, staying inside ``limits``."""
    terms = min(N, CROSSING_CERTIFY_TERMS)
    margin = 1.0 / terms
    while True:
        a, b = max(lo - margin, limits[0]), min(hi + margin, limits[1])
        sign_a = certified_sign(difference, a, terms, digits)
        sign_b = certified_sign(difference, b, terms, digits) if sign_a is not Sign.ZERO else Sign.ZERO
        if sign_a is not Sign.ZERO and sign_b is not Sign.ZERO and sign_a is not sign_b:
            logging.info(f"crossing certified in [{a:.10f}, {b:.10f}] with {terms} exact terms")
            return a, b, True
        if a == limits[0] and b == limits[1]:
            logging.warning(f"could not certify a crossing in [{lo}, {hi}]; result is uncertified")
            return a, b, False
        margin *= 2


def find_crossing(e1: ProductExpression, e2: ProductExpression, bracket: Tuple[float, float],
                  N: int, digits: int = 10, smoothing: bool = False, certify: bool = True) -> CrossingResult:
    """Bisect the difference of two partial sums in x, then certify the bracket.

    Bisection runs on float64 partial sums. Certification sums the difference
    exactly at rational bracket ends with a rigorous tail bound, widening the
    bracket until the signs at both ends are proved opposite.

    Args:
        e1: first series in x
        e2: second series in x
        bracket: (lo, hi) on which the difference changes sign
        N: number of terms of each partial sum
        digits: the bracket is shrunk below 10**-digits (float64 limits apply)
        smoothing: apply Lanczos sigma factors
        certify: compute the certified enclosure

    Returns:
        CrossingResult: midpoint, final bracket and certified enclosure

    Raises:
        NoSignChangeError: if the difference has the same sign at both ends
    """
    limits = (float(bracket[0]), float(bracket[1]))
    lo, hi = limits
    difference_expression = e1 - e2
    difference = SeriesEvaluator(difference_expression, N, smoothing)
    f_lo, f_hi = difference(lo), difference(hi)
    if f_lo == 0 and f_hi == 0 or f_lo * f_hi > 0 or difference_expression.is_zero():
        raise NoSignChangeError(f"no sign change of the difference on [{lo}, {hi}]")
    tolerance = max(10.0 ** -digits, 1e-13)
    iterations = 0
    while hi - lo > tolerance and iterations < 200:
        mid = (lo + hi) / 2
        f_mid = difference(mid)
        if f_mid == 0:
            lo = hi = mid
            break
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
        iterations += 1
    logging.info(f"crossing at {(lo + hi) / 2:.12f} after {iterations} bisections")
    if not certify:
        return CrossingResult((lo + hi) / 2, lo, hi, N, iterations)
    enclosure_lo, enclosure_hi, certified = _certify_bracket(difference_expression, lo, hi, limits, N, digits)
    return CrossingResult((lo + hi) / 2, lo, hi, N, iterations, certified, enclosure_lo, enclosure_hi)
