"""
Reconstruct module for the pi-series toolkit.

This module recovers a piecewise polynomial from its Fourier sine coefficients.
The series is sampled on [0, pi], breakpoints are located from spikes in finite
differences, polynomials are fitted per segment under continuity and boundary
constraints, every fitted coefficient is recognized as an element of Q[pi], and
the candidate is accepted only when its own sine coefficients reproduce the
target.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum, auto
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import mpmath
import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from closedform import ProductExpression, expand_products, series_in_x
from constants import (BOUNDARY_ZERO_FRACTION, END_MARGIN, FIT_DIGITS_RANGE, FIT_SAMPLES, FIT_TERMS,
                       GUARD_BAND, INCONCLUSIVE_TOLERANCE, MAX_FIT_DEGREE, MAX_SPLITS, RESIDUAL_FACTOR,
                       ROUNDTRIP_INDICES, SNAP_DISTANCE, SPIKE_FACTOR, SPIKE_NOISE_FLOOR, SPIKE_WINDOW,
                       SPOT_CHECK_TOLERANCE)
from exactnum import Angle, DomainError, PiPoly, PiSeriesError
from fourier import CoefficientFormula, Equality, canonical_equal, sine_coefficients, spot_check
from numeric import Grid, SampleSet, sample_series, series_tail_estimate
from piecewise import DomainKind, Piece, PiecewiseFunction, XPolynomial
from relation import recognize_constant


class UnderdeterminedSegmentError(PiSeriesError):
    """A segment has too few samples, or the constrained system is rank deficient."""


class UnrecognizedCoefficientError(PiSeriesError):
    """A fitted coefficient could not be identified over the recognition basis."""

    def __init__(self, value: float, segment: int, power: int):
        super().__init__(f"could not recognize the x^{power} coefficient {value!r} of segment {segment}")
        self.value = value
        self.segment = segment
        self.power = power


class CandidateKind(Enum):
    """Built-in families of breakpoint candidates."""
    INTEGERS = auto()
    HALF_INTEGERS = auto()

    @classmethod
    def from_string(cls, kind_str: str) -> 'CandidateKind':
        key = kind_str.strip().upper().replace("-", "_")
        return cls.HALF_INTEGERS if key == "HALF" else cls[key]


Candidates = Union[None, CandidateKind, Sequence[Angle]]


def parse_candidates(text: str) -> Candidates:
    """Read ``integers``, ``half_integers`` or a comma-separated list of angles."""
    try:
        return CandidateKind.from_string(text)
    except KeyError:
        from expression import parse_angle

        return [parse_angle(part) for part in text.split(",") if part.strip()]


def _multiples(step: Fraction, lo: float, hi: float) -> List[Angle]:
    k = math.floor(lo / step) + 1
    points = []
    while k * step < hi:
        points.append(Angle.rational(k * step))
        k += 1
    return points


def candidate_tiers(candidates: Candidates, lo: float, hi: float) -> List[List[Angle]]:
    """Candidate breakpoints strictly inside (lo, hi), in order of preference.

    The default tries integers first and then half-integers.
    """
    if candidates is None:
        halves = [a for a in _multiples(Fraction(1, 2), lo, hi) if a.r.denominator == 2]
        return [_multiples(Fraction(1), lo, hi), halves]
    if candidates is CandidateKind.INTEGERS:
        return [_multiples(Fraction(1), lo, hi)]
    if candidates is CandidateKind.HALF_INTEGERS:
        return [_multiples(Fraction(1, 2), lo, hi)]
    return [[Angle.coerce(a) for a in candidates if lo < float(Angle.coerce(a)) < hi]]


def snap(x: float, tiers: List[List[Angle]], distance: float = SNAP_DISTANCE) -> Optional[Angle]:
    """The nearest candidate of the first tier with one within ``distance`` of x."""
    for tier in tiers:
        near = [a for a in tier if abs(float(a) - x) <= distance]
        if near:
            return min(near, key=lambda a: abs(float(a) - x))
    return None


@dataclass(frozen=True)
class SegmentationHypothesis:
    """Interior breakpoints and a degree bound for each segment between them.

    ``continuity_hint`` is the derivative order matched at the breakpoints as
    suggested by the finite differences, or None when nothing was detected.
    """
    breakpoints: Tuple[Angle, ...] = ()
    degrees: Tuple[int, ...] = (1,)
    continuity_hint: Optional[int] = None
    lo: Angle = field(default_factory=Angle)
    hi: Angle = field(default_factory=lambda: Angle.pi_multiple(1))

    def __post_init__(self):
        points = tuple(Angle.coerce(b) for b in self.breakpoints)
        degrees = tuple(int(d) for d in self.degrees)
        if len(degrees) == 1 and points:
            degrees = degrees * (len(points) + 1)
        object.__setattr__(self, "breakpoints", points)
        object.__setattr__(self, "degrees", degrees)
        bounds = [self.lo, *points, self.hi]
        if any(not left < right for left, right in zip(bounds, bounds[1:])):
            raise DomainError(f"breakpoints must increase strictly inside ({self.lo}, {self.hi})")
        if len(degrees) != len(points) + 1:
            raise ValueError(f"{len(points)} breakpoints need {len(points) + 1} degrees, got {len(degrees)}")
        if any(d < 0 for d in degrees):
            raise ValueError("segment degrees must be non-negative")

    @property
    def bounds(self) -> List[Angle]:
        return [self.lo, *self.breakpoints, self.hi]

    @property
    def segment_count(self) -> int:
        return len(self.degrees)

    def with_degree(self, degree: int) -> 'SegmentationHypothesis':
        return replace(self, degrees=(degree,) * self.segment_count)

    def split(self, point: Angle) -> 'SegmentationHypothesis':
        """Add a breakpoint; the new segment inherits the degree of the one it splits."""
        index = sum(1 for b in self.breakpoints if b < point)
        degrees = self.degrees[:index + 1] + self.degrees[index:]
        return replace(self, breakpoints=tuple(sorted(self.breakpoints + (point,))), degrees=degrees)

    def to_json(self) -> Dict[str, object]:
        return {"breakpoints": [b.to_json() for b in self.breakpoints], "degrees": list(self.degrees),
                "continuity_hint": self.continuity_hint}

    def __str__(self) -> str:
        points = ", ".join(str(b) for b in self.breakpoints) or "none"
        return f"breakpoints [{points}], degrees {list(self.degrees)}"


@dataclass(frozen=True)
class FitConstraints:
    """Derivative orders matched at breakpoints, and zero end values.

    ``continuity_order`` None leaves the segments independent; 0 matches
    values, 1 values and slopes, and so on.
    """
    continuity_order: Optional[int] = None
    zero_at_lower: bool = False
    zero_at_upper: bool = False

    def __post_init__(self):
        if self.continuity_order is not None and self.continuity_order < 0:
            raise ValueError(f"continuity order must be non-negative, got {self.continuity_order}")

    def __str__(self) -> str:
        parts = ["independent" if self.continuity_order is None else f"C{self.continuity_order}"]
        if self.zero_at_lower:
            parts.append("f(lo)=0")
        if self.zero_at_upper:
            parts.append("f(hi)=0")
        return ", ".join(parts)


@dataclass(frozen=True, eq=False)
class FitResult:
    """Decimal polynomial coefficients per segment, lowest power first."""
    hypothesis: SegmentationHypothesis
    constraints: FitConstraints
    coefficients: Tuple[np.ndarray, ...]
    stderr: Tuple[np.ndarray, ...]
    residual: float
    segment_residuals: Tuple[float, ...]
    worst_x: float
    sample_count: int

    def segment_of(self, x: float) -> int:
        bounds = [float(b) for b in self.hypothesis.breakpoints]
        return int(np.searchsorted(bounds, x, side="right"))

    def evaluate(self, xs: Sequence[float]) -> np.ndarray:
        return np.array([np.polynomial.polynomial.polyval(x, self.coefficients[self.segment_of(x)])
                         for x in np.asarray(xs, dtype=float)])

    def constraint_violation(self) -> float:
        """Largest absolute violation of the stated constraints."""
        matrix = _constraint_matrix(self.hypothesis, self.constraints)
        if matrix.shape[0] == 0:
            return 0.0
        return float(np.max(np.abs(matrix @ np.concatenate(self.coefficients))))

    def digits(self, segment: int, power: int) -> int:
        """Decimal digits of the coefficient justified by its standard error."""
        low, high = FIT_DIGITS_RANGE
        error = max(float(self.stderr[segment][power]), 10.0 ** -high)
        return int(min(max(math.floor(-math.log10(error)), low), high))

    def worst_segment(self) -> int:
        return int(np.argmax(self.segment_residuals))

    def to_json(self) -> Dict[str, object]:
        return {"hypothesis": self.hypothesis.to_json(), "constraints": str(self.constraints),
                "coefficients": [c.tolist() for c in self.coefficients],
                "stderr": [e.tolist() for e in self.stderr], "rms_residual": self.residual}


def _difference_centers(xs: np.ndarray, order: int) -> np.ndarray:
    return np.convolve(xs, np.ones(order + 1) / (order + 1), mode="valid")


def _spike_locations(xs: np.ndarray, ys: np.ndarray, order: int, lo: float, hi: float) -> List[float]:
    """Locations of isolated spikes in the finite differences of one order.

    A jump in the j-th derivative leaves a step in the differences of order j
    and a spike in those of order j+1. Each difference is compared with the mean
    of its neighbours ``order + 2`` places away, which cancels linear trends, and
    flagged when it stands far above the running median of that spread. Steps
    are flagged too, so the lowest flagged order may sit one below the spike.
    """
    d = np.diff(ys, order)
    lag = order + 2
    if len(d) <= 2 * (lag + SPIKE_WINDOW):
        return []
    centers = _difference_centers(xs, order)
    spread = np.zeros_like(d)
    spread[lag:-lag] = np.abs(d[lag:-lag] - (d[:-2 * lag] + d[2 * lag:]) / 2)
    local = np.median(sliding_window_view(np.pad(spread, SPIKE_WINDOW, mode="edge"), 2 * SPIKE_WINDOW + 1),
                      axis=1)
    floor = 2 ** order * SPIKE_NOISE_FLOOR * max(1.0, float(np.max(np.abs(ys))))
    flagged = np.flatnonzero((spread > SPIKE_FACTOR * np.maximum(local, floor))
                             & (centers > lo + END_MARGIN) & (centers < hi - END_MARGIN))
    locations = []
    group: List[int] = []
    for index in flagged:
        if group and index - group[-1] > 2 * lag:
            locations.append(float(centers[max(group, key=lambda i: spread[i])]))
            group = []
        group.append(index)
    if group:
        locations.append(float(centers[max(group, key=lambda i: spread[i])]))
    return locations


def detect_breakpoints(s: SampleSet, candidates: Candidates = None, max_order: int = 4) -> SegmentationHypothesis:
    """Hypothesize breakpoints from spikes in the finite differences of the samples.

    Args:
        s: samples on [0, pi], at least 100 of them
        candidates: breakpoint candidates, integers then half-integers by default
        max_order: highest difference order scanned

    Returns:
        SegmentationHypothesis: snapped breakpoints; empty when nothing stands out
    """
    if len(s) < 100:
        raise ValueError(f"breakpoint detection needs at least 100 samples, got {len(s)}")
    lo, hi = float(s.xs[0]), float(s.xs[-1])
    tiers = candidate_tiers(candidates, lo, hi)
    found: List[Angle] = []
    lowest_order: Optional[int] = None
    for order in range(1, max_order + 1):
        for location in _spike_locations(s.xs, s.ys, order, lo, hi):
            point = snap(location, tiers)
            if point is None:
                logging.warning(f"spike at x={location:.4f} (order {order}) matches no candidate breakpoint")
                continue
            if lowest_order is None:
                lowest_order = order
            if point not in found:
                logging.info(f"breakpoint {point} from a spike at x={location:.4f} in differences of order {order}")
                found.append(point)
    if lowest_order is None:
        logging.info("no breakpoints detected")
        return SegmentationHypothesis()
    return SegmentationHypothesis(tuple(sorted(found)), (max(1, lowest_order - 1),), lowest_order - 2)


def _derivative_row(x: float, degree: int, order: int) -> np.ndarray:
    row = np.zeros(degree + 1)
    for power in range(order, degree + 1):
        row[power] = math.perm(power, order) * x ** (power - order)
    return row


def _offsets(h: SegmentationHypothesis) -> List[int]:
    offsets = [0]
    for degree in h.degrees:
        offsets.append(offsets[-1] + degree + 1)
    return offsets


def _constraint_matrix(h: SegmentationHypothesis, c: FitConstraints) -> np.ndarray:
    offsets = _offsets(h)
    rows = []
    if c.continuity_order is not None:
        for j, point in enumerate(h.breakpoints):
            x = float(point)
            for order in range(c.continuity_order + 1):
                row = np.zeros(offsets[-1])
                row[offsets[j]:offsets[j + 1]] = _derivative_row(x, h.degrees[j], order)
                row[offsets[j + 1]:offsets[j + 2]] -= _derivative_row(x, h.degrees[j + 1], order)
                if np.any(row):
                    rows.append(row)
    if c.zero_at_lower:
        row = np.zeros(offsets[-1])
        row[:offsets[1]] = _derivative_row(float(h.lo), h.degrees[0], 0)
        rows.append(row)
    if c.zero_at_upper:
        row = np.zeros(offsets[-1])
        row[offsets[-2]:] = _derivative_row(float(h.hi), h.degrees[-1], 0)
        rows.append(row)
    return np.array(rows).reshape(len(rows), offsets[-1])


def _null_space(matrix: np.ndarray, size: int) -> np.ndarray:
    if matrix.shape[0] == 0:
        return np.eye(size)
    _, singular, vt = np.linalg.svd(matrix)
    rank = int(np.sum(singular > 1e-12 * max(singular[0], 1.0)))
    return vt[rank:].T


def fit_segments(s: SampleSet, h: SegmentationHypothesis, c: FitConstraints,
                 guard: float = GUARD_BAND) -> FitResult:
    """Equality-constrained least-squares polynomial fit per segment.

    The constraints are eliminated through an orthonormal basis of their null
    space, then the reduced problem is solved by least squares. Samples within
    ``guard`` of a breakpoint or an end of the range are left out.

    Args:
        s: samples
        h: segments and their degrees
        c: continuity and boundary constraints
        guard: half-width of the excluded band around every segment bound

    Returns:
        FitResult: coefficients, standard errors and RMS residual

    Raises:
        UnderdeterminedSegmentError: if a segment has fewer than degree+2 samples or
            the constrained system does not determine the coefficients
    """
    if c.continuity_order is not None and h.breakpoints and c.continuity_order > min(h.degrees) - 1:
        raise ValueError(f"continuity order {c.continuity_order} needs every segment degree above it, "
                         f"got {h.degrees}")
    bounds = [float(b) for b in h.bounds]
    offsets = _offsets(h)
    blocks, targets, positions, used = [], [], [], []
    for j, degree in enumerate(h.degrees):
        mask = (s.xs >= bounds[j] + guard) & (s.xs <= bounds[j + 1] - guard)
        if np.count_nonzero(mask) < degree + 2:
            raise UnderdeterminedSegmentError(
                f"segment {j} [{h.bounds[j]}, {h.bounds[j + 1]}] has {np.count_nonzero(mask)} samples "
                f"for degree {degree}")
        xs = s.xs[mask]
        block = np.zeros((len(xs), offsets[-1]))
        block[:, offsets[j]:offsets[j + 1]] = np.vander(xs, degree + 1, increasing=True)
        blocks.append(block)
        targets.append(s.ys[mask])
        positions.append(np.full(len(xs), j))
        used.append(xs)
    design = np.vstack(blocks)
    y = np.concatenate(targets)
    segment_index = np.concatenate(positions)
    basis = _null_space(_constraint_matrix(h, c), offsets[-1])
    if basis.shape[1] == 0:
        theta = np.zeros(offsets[-1])
        covariance = np.zeros((offsets[-1], offsets[-1]))
    else:
        reduced = design @ basis
        z, _, rank, _ = np.linalg.lstsq(reduced, y, rcond=None)
        if rank < reduced.shape[1]:
            raise UnderdeterminedSegmentError(f"constrained system has rank {rank} < {reduced.shape[1]}")
        theta = basis @ z
        dof = len(y) - reduced.shape[1]
        sigma2 = float(np.sum((reduced @ z - y) ** 2)) / dof if dof > 0 else 0.0
        covariance = basis @ (sigma2 * np.linalg.pinv(reduced.T @ reduced)) @ basis.T
    residuals = design @ theta - y
    rms = float(np.sqrt(np.mean(residuals ** 2))) if len(y) else 0.0
    segment_rms = tuple(float(np.sqrt(np.mean(residuals[segment_index == j] ** 2)))
                        for j in range(h.segment_count))
    worst = float(np.concatenate(used)[int(np.argmax(np.abs(residuals)))]) if len(y) else bounds[0]
    stderr = np.sqrt(np.clip(np.diag(covariance), 0.0, None))
    logging.debug(f"fit {h} with {c}: rms {rms:.3e}")
    return FitResult(h, c,
                     tuple(theta[offsets[j]:offsets[j + 1]] for j in range(h.segment_count)),
                     tuple(stderr[offsets[j]:offsets[j + 1]] for j in range(h.segment_count)),
                     rms, segment_rms, worst, len(y))


def boundary_flags(s: SampleSet, guard: float = GUARD_BAND, points: int = 9) -> Tuple[bool, bool]:
    """Whether the sampled function extrapolates to zero at each end of its range.

    A quadratic through the first (last) samples outside the guard band is
    evaluated at the end point.
    """
    scale = max(float(np.max(np.abs(s.ys))), 1e-300) if len(s) else 1.0
    flags = []
    for end, mask in ((float(s.xs[0]), s.xs >= s.xs[0] + guard), (float(s.xs[-1]), s.xs <= s.xs[-1] - guard)):
        xs, ys = s.xs[mask], s.ys[mask]
        xs, ys = (xs[:points], ys[:points]) if end == float(s.xs[0]) else (xs[-points:], ys[-points:])
        value = np.polyval(np.polyfit(xs, ys, 2), end)
        flags.append(bool(abs(value) <= BOUNDARY_ZERO_FRACTION * scale))
    return flags[0], flags[1]


def _split_point(fit: FitResult, candidates: Candidates, guard: float) -> Optional[Angle]:
    h = fit.hypothesis
    segment = fit.worst_segment()
    lo, hi = float(h.bounds[segment]), float(h.bounds[segment + 1])
    inside = [a for tier in candidate_tiers(candidates, lo + 2 * guard, hi - 2 * guard) for a in tier]
    if not inside:
        return None
    return min(inside, key=lambda a: abs(float(a) - fit.worst_x))


def search_fit(s: SampleSet, h: SegmentationHypothesis, tolerance: float, candidates: Candidates = None,
               boundary: Optional[Tuple[bool, bool]] = None, guard: float = GUARD_BAND) -> FitResult:
    """Escalate degrees, relax continuity, then split segments until the fit is good.

    For each uniform degree from the hypothesis upwards the continuity order runs
    from degree-1 down to independent segments. When the degree cap is reached
    the worst segment is split at a candidate breakpoint.

    Returns:
        FitResult: the first fit with RMS residual within ``tolerance``, or the best one seen
    """
    zero_lower, zero_upper = boundary if boundary is not None else boundary_flags(s, guard)
    best: Optional[FitResult] = None
    hypothesis = h
    for split in range(MAX_SPLITS + 1):
        local_best: Optional[FitResult] = None
        for degree in range(min(hypothesis.degrees), MAX_FIT_DEGREE + 1):
            trial = hypothesis.with_degree(degree)
            orders: List[Optional[int]] = list(range(degree - 1, -1, -1)) if trial.breakpoints else []
            for order in orders + [None]:
                try:
                    fit = fit_segments(s, trial, FitConstraints(order, zero_lower, zero_upper), guard)
                except UnderdeterminedSegmentError as e:
                    logging.debug(f"skipping {trial}: {e}")
                    continue
                if local_best is None or fit.residual < local_best.residual:
                    local_best = fit
                if fit.residual <= tolerance:
                    logging.info(f"accepted fit {trial} with {fit.constraints}: rms {fit.residual:.3e}")
                    return fit
        if local_best is None:
            break
        if best is None or local_best.residual < best.residual:
            best = local_best
        point = _split_point(local_best, candidates, guard)
        if point is None:
            break
        logging.info(f"no fit within {tolerance:.1e}; splitting segment {local_best.worst_segment()} at {point}")
        hypothesis = hypothesis.split(point)
    if best is None:
        raise UnderdeterminedSegmentError(f"no segment layout of {h} could be fitted")
    logging.warning(f"best fit rms {best.residual:.3e} exceeds tolerance {tolerance:.1e}")
    return best


def recognize_coefficients(fit: FitResult, basis: Optional[Sequence[PiPoly]] = None,
                           digits: Optional[int] = None) -> PiecewiseFunction:
    """Turn every fitted decimal into an exact element of Q[pi].

    Args:
        fit: fitted segments
        basis: recognition basis, {1, pi} by default
        digits: precision used for every coefficient; by default it follows each
            coefficient's standard error

    Returns:
        PiecewiseFunction: the exact candidate on [0, pi]

    Raises:
        UnrecognizedCoefficientError: for the first coefficient without a relation
    """
    h = fit.hypothesis
    pieces = []
    for j, coefficients in enumerate(fit.coefficients):
        exact = []
        for power, value in enumerate(coefficients):
            wanted = digits or fit.digits(j, power)
            result = recognize_constant(mpmath.mpf(float(value)), basis, wanted)
            if result is None:
                raise UnrecognizedCoefficientError(float(value), j, power)
            exact.append(result.candidate)
        pieces.append(Piece(h.bounds[j], h.bounds[j + 1], XPolynomial(exact)))
    candidate = PiecewiseFunction(pieces, DomainKind.HALF)
    logging.info(f"recognized candidate {candidate}")
    return candidate


class Verdict(Enum):
    """Outcome of a reconstruction roundtrip."""
    VERIFIED = auto()
    REFUTED = auto()
    INCONCLUSIVE = auto()


@dataclass(frozen=True)
class RoundtripReport:
    """Comparison of a candidate's sine coefficients with the target formula."""
    candidate: PiecewiseFunction
    formula_equal: Equality
    numeric_residuals: Tuple[mpmath.mpf, ...]
    verdict: Verdict

    def to_json(self) -> Dict[str, object]:
        return {"candidate": self.candidate.to_json(), "formula_equal": self.formula_equal.name.lower(),
                "numeric_residuals": [mpmath.nstr(r, 5) for r in self.numeric_residuals],
                "verdict": self.verdict.name.lower()}


def verify_roundtrip(candidate: PiecewiseFunction, target: CoefficientFormula,
                     indices: Sequence[int] = ROUNDTRIP_INDICES,
                     tolerance: float = SPOT_CHECK_TOLERANCE) -> RoundtripReport:
    """Recompute the sine coefficients of ``candidate`` and compare with ``target``.

    Canonical equality verifies outright. Otherwise the formulas are compared at
    ``indices``: all below ``tolerance`` verifies, all below a looser tolerance
    is inconclusive, anything larger refutes.
    """
    if candidate.domain_kind is not DomainKind.HALF:
        raise DomainError("roundtrip verification needs a function on [0, pi]")
    computed = sine_coefficients(candidate)
    equality = canonical_equal(computed, target)
    residuals: Tuple[mpmath.mpf, ...] = ()
    if equality is Equality.EQUAL:
        verdict = Verdict.VERIFIED
    else:
        residuals = tuple(spot_check(computed, target, indices))
        if all(r < tolerance for r in residuals):
            verdict = Verdict.VERIFIED
        elif all(r < INCONCLUSIVE_TOLERANCE for r in residuals):
            verdict = Verdict.INCONCLUSIVE
            logging.warning(f"roundtrip inconclusive: largest difference {mpmath.nstr(max(residuals), 3)}")
        else:
            verdict = Verdict.REFUTED
    logging.info(f"roundtrip {verdict.name.lower()}: {computed} vs {target}")
    return RoundtripReport(candidate, equality, residuals, verdict)


@dataclass(frozen=True)
class ReconstructionResult:
    """Everything the pipeline produced for one target."""
    target: CoefficientFormula
    hypothesis: SegmentationHypothesis
    fit: FitResult
    candidate: PiecewiseFunction
    report: RoundtripReport

    def to_json(self) -> Dict[str, object]:
        return {"target": str(self.target), "function": self.candidate.to_json(),
                "fit": self.fit.to_json(), "report": self.report.to_json()}


def as_formula(target: Union[ProductExpression, CoefficientFormula]) -> CoefficientFormula:
    if isinstance(target, ProductExpression):
        return expand_products(target)
    return target


def reconstruct(target: Union[ProductExpression, CoefficientFormula], N: int = FIT_TERMS,
                samples: int = FIT_SAMPLES, candidates: Candidates = None,
                basis: Optional[Sequence[PiPoly]] = None) -> ReconstructionResult:
    """Recover the function on [0, pi] whose sine coefficients are ``target``.

    Args:
        target: coefficient of sin(n*x), e.g. sin(n)^2/n^3
        N: terms per partial sum
        samples: midpoint-aligned sample count on [0, pi]
        candidates: breakpoint candidates
        basis: recognition basis

    Returns:
        ReconstructionResult: hypothesis, fit, exact candidate and roundtrip report
    """
    formula = as_formula(target)
    series = series_in_x(formula)
    smoothing = any(term.p == 1 for term in formula)
    grid = Grid(0.0, math.pi, samples, midpoints=True)
    data = sample_series(series, grid, N, smoothing)
    hypothesis = detect_breakpoints(data, candidates)
    tolerance = RESIDUAL_FACTOR * series_tail_estimate(series, N, GUARD_BAND)
    fit = search_fit(data, hypothesis, tolerance, candidates)
    candidate = recognize_coefficients(fit, basis)
    report = verify_roundtrip(candidate, formula)
    return ReconstructionResult(formula, fit.hypothesis, fit, candidate, report)
