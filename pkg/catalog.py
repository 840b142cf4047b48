"""
Catalog module for the pi-series toolkit.

This module holds the registry of known series identities, interval identities
and negative controls, and the drivers that verify them exactly through the
closed-form engine or numerically through bounded partial sums.
"""

import functools
import logging
import time
from dataclasses import dataclass, field
from enum import Enum, auto
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath

from closedform import NotClosedFormError, SeriesExpression, expand_products, index_transform, \
    sum_closed_form
from constants import DEFAULT_DIGITS, DEFAULT_INTERVAL_SAMPLES, DEFAULT_TERMS, GUARD_DIGITS
from exactnum import Angle, PiPoly, PiSeriesError, to_decimal
from expression import parse_angle, parse_expression, parse_pipoly
from numeric import partial_sum
from piecewise import XPolynomial


class UnknownIdentityError(PiSeriesError):
    """No catalog entry has the requested id."""

    def __init__(self, identity_id: str):
        self.identity_id = identity_id
        super().__init__(f"unknown identity {identity_id!r}; see 'catalog list'")


class Expectation(Enum):
    EQUAL = auto()
    NOT_EQUAL = auto()

    @classmethod
    def from_string(cls, expectation_str: str) -> 'Expectation':
        return cls[expectation_str.strip().upper().replace("-", "_")]


class VerificationMode(Enum):
    EXACT = auto()
    NUMERIC = auto()
    NUMERIC_ONLY = auto()

    @classmethod
    def from_string(cls, mode_str: str) -> 'VerificationMode':
        return cls[mode_str.strip().upper().replace("-", "_")]


class Status(Enum):
    PASS = auto()
    FAIL = auto()
    ERROR = auto()


@dataclass(frozen=True)
class Side:
    """One series of an identity, written in the expression language.

    ``squared_scale`` turns the side into scale * (sum)**2, which is how the
    squared-series entry compares a series with the sum of its squared terms.
    """
    text: str
    squared_scale: Optional[Fraction] = None

    @functools.cached_property
    def parsed(self):
        return parse_expression(self.text)

    @property
    def has_symbol(self) -> bool:
        return self.parsed.expression.has_symbol()

    def formula(self, x: Optional[Angle] = None) -> SeriesExpression:
        expression = self.parsed.expression
        if x is not None:
            expression = expression.substitute(x)
        return index_transform(expand_products(expression), self.parsed.mode)

    def exact_value(self, x: Optional[Angle] = None) -> PiPoly:
        value = sum_closed_form(self.formula(x))
        if self.squared_scale is not None:
            value = (value * value).scale(self.squared_scale)
        return value

    def numeric_value(self, x: Optional[Angle], N: int, digits: int) -> Tuple[mpmath.mpf, mpmath.mpf]:
        """Partial-sum value and a bound on its distance to the full series."""
        result = partial_sum(self.formula(x), N, digits)
        value, bound = result.value, result.error_bound
        if self.squared_scale is not None:
            scale = mpmath.mpf(self.squared_scale.numerator) / self.squared_scale.denominator
            bound = scale * (2 * abs(value) * bound + bound ** 2)
            value = scale * value ** 2
        return value, bound

    def __str__(self) -> str:
        if self.squared_scale is None:
            return self.text
        return f"{self.squared_scale}*({self.text})^2"


@dataclass(frozen=True)
class Validity:
    """An x-interval with Angle endpoints."""
    lo: Angle
    hi: Angle
    closed_lo: bool = True
    closed_hi: bool = True

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"validity interval needs lo < hi, got {self.lo} and {self.hi}")

    def interior_points(self, count: int) -> List[Angle]:
        width = self.hi - self.lo
        return [self.lo + width * Fraction(k, count + 1) for k in range(1, count + 1)]

    def contains(self, x: Angle) -> bool:
        above = self.lo < x or (self.closed_lo and x == self.lo)
        below = x < self.hi or (self.closed_hi and x == self.hi)
        return above and below

    def __str__(self) -> str:
        return f"{'[' if self.closed_lo else '('}{self.lo}, {self.hi}{']' if self.closed_hi else ')'}"


@dataclass(frozen=True)
class CounterPoint:
    """A point outside the validity interval where ``side`` must miss the right-hand side."""
    x: Angle
    side: int


@dataclass(frozen=True)
class Identity:
    """A catalog record.

    Without ``rhs`` the sides are compared with each other. ``values`` holds
    known exact values per side, checked whenever they are present.
    """
    id: str
    sides: Tuple[Side, ...]
    rhs: Optional[XPolynomial] = None
    validity: Optional[Validity] = None
    expectation: Expectation = Expectation.EQUAL
    mode: VerificationMode = VerificationMode.EXACT
    labels: Tuple[str, ...] = ()
    values: Tuple[Optional[PiPoly], ...] = ()
    counterpoints: Tuple[CounterPoint, ...] = ()
    description: str = ""

    def __post_init__(self):
        if not self.sides:
            raise ValueError(f"identity {self.id} has no sides")
        if self.has_symbol and self.validity is None:
            raise ValueError(f"identity {self.id} depends on x but has no validity interval")

    @property
    def has_symbol(self) -> bool:
        return any(side.has_symbol for side in self.sides) or (self.rhs is not None and self.rhs.degree > 0)

    def rhs_at(self, x: Optional[Angle]) -> Optional[PiPoly]:
        if self.rhs is None:
            return None
        return self.rhs.evaluate(x) if x is not None else self.rhs.coefficient(0)

    def to_json(self) -> Dict[str, object]:
        return {
            "id": self.id,
            "sides": [str(side) for side in self.sides],
            "rhs": None if self.rhs is None else str(self.rhs),
            "validity": None if self.validity is None else str(self.validity),
            "expectation": self.expectation.name.lower(),
            "mode": self.mode.name.lower(),
            "labels": list(self.labels),
            "description": self.description,
        }


@dataclass
class VerificationReport:
    id: str
    status: Status
    details: Dict[str, object] = field(default_factory=dict)
    runtime: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status is Status.PASS

    def to_json(self, with_runtime: bool = False) -> Dict[str, object]:
        """Deterministic record of the check; wall-clock runtime only on request."""
        data = {"id": self.id, "status": self.status.name.lower(), "details": self.details}
        if with_runtime:
            data["runtime"] = round(self.runtime, 4)
        return data

    def __str__(self) -> str:
        return f"{self.id}: {self.status.name}"


# Registry construction

def _rhs(*coeffs: str) -> XPolynomial:
    """x-polynomial from ascending coefficient strings."""
    return XPolynomial([parse_pipoly(c) for c in coeffs])


def _interval(lo: str, hi: str, closed_lo: bool = True, closed_hi: bool = True) -> Validity:
    return Validity(parse_angle(lo), parse_angle(hi), closed_lo, closed_hi)


def _counter(x: str, side: int = 0) -> CounterPoint:
    return CounterPoint(parse_angle(x), side)


def _entry(identity_id: str, sides: Sequence[str], rhs: Optional[XPolynomial] = None,
           labels: Sequence[str] = (), description: str = "", values: Sequence[Optional[str]] = (),
           validity: Optional[Validity] = None, counterpoints: Sequence[CounterPoint] = (),
           expectation: Expectation = Expectation.EQUAL) -> Identity:
    return Identity(identity_id, tuple(Side(text) for text in sides), rhs, validity, expectation,
                    VerificationMode.EXACT, tuple(labels),
                    tuple(None if v is None else parse_pipoly(v) for v in values),
                    tuple(counterpoints), description)


def _sinc_entries() -> List[Identity]:
    values = {
        1: "-1/2 + pi/2",
        2: "-1/2 + pi/2",
        3: "-1/2 + 3/8*pi",
        4: "-1/2 + pi/3",
        5: "-1/2 + 115/384*pi",
        6: "-1/2 + 11/40*pi",
        7: "-1/2 + (129423*pi - 201684*pi^2 + 144060*pi^3 - 54880*pi^4 + 11760*pi^5"
           " - 1344*pi^6 + 64*pi^7)/46080",
    }
    return [_entry(f"sinc-{m}", [f"(sin(n)/n)^{m}"], _rhs(value), ["sinc-powers"],
                   f"sum of (sin n/n)^{m}") for m, value in values.items()]


@functools.lru_cache(maxsize=None)
def _registry() -> Dict[str, Identity]:
    sawtooth_pair = ["sin(x*n)/n", "sin(n)*sin(x*n)/n^2"]
    eq11_sides = ["sin(x*n)/n", "sin(n)*sin(x*n)/n^2", "sin(n)^2*sin(x*n)/n^3", "sin(n)^3*sin(x*n)/n^4"]
    entries = [
        _entry("eq3", ["sin(n)/n", "(sin(n)/n)^2"], _rhs("(pi-1)/2"), ["(3)", "summary-1"],
               "a series and the series of its squared terms share the value (pi-1)/2"),
        _entry("eq4", ["sin(n)^2/n^4"], _rhs("(pi-1)^2/6"), ["(4)", "parseval"],
               "Parseval applied to the piecewise linear g"),
        _entry("eq5", sawtooth_pair, _rhs("pi/2", "-1/2"), ["(5)", "sawtooth-pair"],
               "the second sum equals (pi-x)/2 only on the shorter interval",
               validity=_interval("1", "2*pi-1"), counterpoints=[_counter("1/2", 1)]),
        _entry("eq6", [f"sum[even] {s}" for s in sawtooth_pair], _rhs("pi/4", "-1/2"), ["(6)", "parity-split"],
               "even-index version of the sawtooth pair",
               validity=_interval("1", "pi-1"), counterpoints=[_counter("1/2", 1)]),
        _entry("eq7", [f"sum[odd] {s}" for s in sawtooth_pair], _rhs("pi/4"), ["(7)", "summary-4", "parity-split"],
               "odd-index version of the sawtooth pair",
               validity=_interval("1", "pi-1"), counterpoints=[_counter("1/2", 1)]),
        _entry("eq8", ["sum[even] sin(n)/n", "sum[even] (sin(n)/n)^2"], _rhs("(pi-2)/4"), ["(8)", "summary-2"],
               "sum of sin(2n)/2n and of its squares"),
        _entry("eq9", ["sum[odd] sin(n)/n", "sum[odd] (sin(n)/n)^2"], _rhs("pi/4"), ["(9)", "summary-3"],
               "odd-index sums"),
        _entry("alt-eq5", [f"sum[alt] {s}" for s in sawtooth_pair], _rhs("0", "1/2"), ["alternating"],
               "alternating-sign version of the sawtooth pair",
               validity=_interval("1", "pi-1"), counterpoints=[_counter("5/2", 1)]),
        _entry("alt-eq3", ["sum[alt] sin(n)/n", "sum[alt] (sin(n)/n)^2"], _rhs("1/2"), ["alternating"],
               "alternating pair at x = 1"),
        _entry("parseval-even", ["sum[even] sin(n)^2/n^4"], _rhs("(pi-2)^2/24"), ["parseval"],
               "Parseval for the even-index function"),
        _entry("parseval-odd", ["sum[odd] sin(n)^2/n^4"], _rhs("pi^2/8 - pi/6"), ["parseval"],
               "Parseval for the odd-index function"),
        _entry("eq10", ["sin(3*n)/n", "sin(n)*sin(3*n)/n^2", "sin(n)^2*sin(3*n)/n^3", "sin(n)^3*sin(3*n)/n^4"],
               _rhs("(pi-3)/2"), ["(10)", "summary-6"], "sinc factors k = 0..3 leave the value unchanged"),
        _entry("sinc-3n", [f"(sin(n)/n)^{k}*sin(3*n)/(3*n)" for k in range(4)], _rhs("(pi-3)/6"),
               ["sinc-powers"], "the same family divided by 3"),
        _entry("thm3-eq11", eq11_sides, _rhs("pi/2", "-1/2"), ["(11)", "sinc-sawtooth"],
               "the k-th sum equals (pi-x)/2 on [k, 2pi-k]",
               validity=_interval("3", "2*pi-3"),
               counterpoints=[_counter("5/2", 3), _counter("3/2", 2), _counter("1/2", 1)]),
        _entry("thm3-third", [eq11_sides[2]], _rhs("pi/2", "-1/2"), ["sinc-sawtooth"],
               "the third sum on its own interval",
               validity=_interval("2", "2*pi-2"), counterpoints=[_counter("3/2")]),
        _entry("eq12", ["sin(n)^2*sin(x*n)/n^3"], _rhs("0", "(pi-1)/2", "-pi/8"), ["(12)"],
               "quadratic piece of the function with coefficients sin(n)^2/n^3",
               validity=_interval("0", "2"), counterpoints=[_counter("5/2")]),
        _entry("eq13", ["sin(n)^3*sin(x*n)/n^4"], _rhs("0", "3/8*pi - 1/2", "0", "-pi/24"), ["(13)"],
               "cubic first piece of the function with coefficients sin(n)^3/n^4",
               validity=_interval("0", "1"), counterpoints=[_counter("2")]),
        _entry("eq13-middle", ["sin(n)^3*sin(x*n)/n^4"],
               _rhs("-pi/16", "9/16*pi - 1/2", "-3/16*pi", "pi/48"), ["(13)"],
               "cubic middle piece of the same function",
               validity=_interval("1", "3"), counterpoints=[_counter("1/2")]),
        _entry("neg-sin4-3n", ["(sin(n)/n)^4*sin(3*n)/n"], _rhs("(pi-3)/2"), ["negative-control"],
               "a fourth sinc factor breaks the pattern of (10)",
               values=["-3/2 + 27/4*pi - 343/48*pi^2 + 49/16*pi^3 - 7/12*pi^4 + pi^5/24"],
               expectation=Expectation.NOT_EQUAL),
        _entry("eq14", ["sin(n)/n*cos(n)", "(sin(n)/n)^2*cos(n)", "(sin(n)/n)^3*cos(n)"], _rhs("(pi-2)/4"),
               ["(14)"], "sinc powers times cos(n)"),
        _entry("neg-sin4cos", ["(sin(n)/n)^4*cos(n)"], _rhs("(pi-2)/4"), ["negative-control"],
               "the fourth power misses (pi-2)/4", values=["-1/2 + 23/96*pi"],
               expectation=Expectation.NOT_EQUAL),
        _entry("teaser-cos3", [f"(sin(n)/n)^{k}*cos(n)^3" for k in (1, 2, 3)], _rhs("(3*pi-8)/16"),
               ["teaser"], "the cube of cos keeps the three sums equal"),
        _entry("teaser-cos5", [f"(sin(n)/n)^{k}*cos(n)^5" for k in (1, 2, 3)], None, ["teaser"],
               "the fifth power of cos separates the sums",
               values=["(5*pi-16)/32", "(-pi^2 + 17/2*pi - 16)/32", "(pi^3 - 8*pi^2 + 26*pi - 32)/64"],
               expectation=Expectation.NOT_EQUAL),
        _entry("thm4-15a", ["sin(x*n)^3/n"], _rhs("pi/4"), ["(15)", "(19)", "summary-7", "sawtooth-powers"],
               "cube of the sawtooth series", validity=_interval("0", "2*pi/3", False, False),
               counterpoints=[_counter("3")]),
        _entry("thm4-15a-zero", ["sin(x*n)^3/n"], _rhs("0"), ["(15)", "sawtooth-powers"],
               "the same sum vanishes beyond 2pi/3", validity=_interval("2*pi/3", "pi", False, True),
               counterpoints=[_counter("1")]),
        _entry("thm4-15b", ["sin(x*n)^4/n^2"], _rhs("0", "pi/4"), ["(15)", "sawtooth-powers"],
               "fourth power against n^2", validity=_interval("0", "pi/2"), counterpoints=[_counter("2")]),
        _entry("thm4-16a", ["sin(x*n)^5/n"], _rhs("3/16*pi"), ["(16)", "summary-9", "sawtooth-powers"],
               "fifth power of the sawtooth series", validity=_interval("0", "2*pi/5", False, False),
               counterpoints=[_counter("3/2")]),
        _entry("thm4-16b", ["sin(x*n)^6/n^2"], _rhs("0", "3/16*pi"), ["(16)", "sawtooth-powers"],
               "sixth power against n^2", validity=_interval("0", "pi/3"), counterpoints=[_counter("3/2")]),
        _entry("eq17", ["sum[alt] sin(x*n)/n"], _rhs("0", "1/2"), ["(17)"],
               "alternating sawtooth", validity=_interval("-pi", "pi", False, False),
               counterpoints=[_counter("4")]),
        _entry("eq17-shifted", ["sum[alt] sin(x*n)/n"], _rhs("pi", "1/2"), ["(17)"],
               "the alternating sawtooth one period to the left",
               validity=_interval("-3*pi", "-pi", False, False), counterpoints=[_counter("0")]),
        _entry("eq18", ["4*sin(x*n)^3/n - 3*sin(x*n)/n"], _rhs("-pi/2", "3/2"), ["(18)"],
               "triple-angle relation between the cubed and plain sawtooth",
               validity=_interval("0", "2*pi/3", False, False), counterpoints=[_counter("3")]),
        _entry("eq20", ["sum[alt] cos(x*n)/n^2"], _rhs("pi^2/12", "0", "-1/4"), ["(20)"],
               "alternating cosine series against n^2", validity=_interval("-pi", "pi"),
               counterpoints=[_counter("4")]),
        _entry("eq21", ["sin(x*n)^2/n^2"], _rhs("0", "pi/2", "-1/2"), ["(21)"],
               "squared sine against n^2", validity=_interval("0", "pi"), counterpoints=[_counter("4")]),
        _entry("eq22", ["sin(n)^3/n", "sin(n)^4/n^2"], _rhs("pi/4"), ["(22)", "summary-8"],
               "(15) at x = 1"),
        _entry("eq23", ["sin(n)^5/n", "sin(n)^6/n^2"], _rhs("3/16*pi"), ["(23)", "summary-10"],
               "(16) at x = 1"),
        _entry("eq24a-sec5", ["sum[alt] sin(x*n)^2/n^2"], _rhs("0", "0", "1/2"), ["(24)"],
               "alternating squared sine", validity=_interval("-pi/2", "pi/2"), counterpoints=[_counter("2")]),
        _entry("disc2-even", ["sum[even] sin(x*n)^2/n^2"], _rhs("0", "pi/4", "-1/2"), ["discussion"],
               "even part of (21)", validity=_interval("0", "pi/2"), counterpoints=[_counter("2")]),
        _entry("disc2-odd", ["sum[odd] sin(x*n)^2/n^2"], _rhs("0", "pi/4"), ["discussion"],
               "odd part of (21)", validity=_interval("0", "pi/2"), counterpoints=[_counter("2")]),
        _entry("neg-sin7sin8", ["sin(n)^7/n", "sin(n)^8/n^2"], None, ["negative-control"],
               "the pattern of (22) and (23) stops at the seventh power",
               values=["9/64*pi", "(6+pi)*pi/64"], expectation=Expectation.NOT_EQUAL),
        _entry("eq24b-sec6", ["sin(n)/n^3"], _rhs("1/12 - pi/4 + pi^2/6"), ["sinc-powers"],
               "sine series against n^3"),
        _entry("summary-gregory", ["sin(pi/2*n)/n", "sin(pi/2*n)*sin(n)/n^2"], _rhs("pi/4"),
               ["summary-5", "gregory"], "Gregory's series and its sinc-weighted variant"),
        Identity("sq-series-pi-over-sqrt8",
                 (Side("sum[odd] sin(pi/4*n)/n", Fraction(2)), Side("sum[odd] 2*sin(pi/4*n)^2/n^2")),
                 _rhs("pi^2/8"), None, Expectation.EQUAL, VerificationMode.NUMERIC_ONLY, ("squared-series",),
                 description="the series pi/sqrt(8) squares to the sum of its squared terms"),
    ]
    entries.extend(_sinc_entries())
    registry = {}
    for identity in entries:
        if identity.id in registry:
            raise ValueError(f"duplicate identity id {identity.id}")
        registry[identity.id] = identity
    return registry


EQUATION_LABELS = tuple(f"({k})" for k in range(3, 25))
SUMMARY_LABELS = tuple(f"summary-{k}" for k in range(1, 11))


def list_identities() -> List[Identity]:
    """Return every registered identity in registration order."""
    return list(_registry().values())


def get_identity(identity_id: str) -> Identity:
    try:
        return _registry()[identity_id]
    except KeyError:
        raise UnknownIdentityError(identity_id)


def identities_for_label(label: str) -> List[Identity]:
    return [identity for identity in list_identities() if label in identity.labels]


# Verification

def _exact_point(identity: Identity, x: Optional[Angle], digits: int) -> Tuple[bool, Dict[str, object]]:
    """Exact values of every side at x and whether they all match."""
    values = [side.exact_value(x) for side in identity.sides]
    target = identity.rhs_at(x)
    matches = all(v == target for v in values) if target is not None else all(v == values[0] for v in values)
    details = {"values": [str(v) for v in values],
               "decimals": [str(to_decimal(v, digits)) for v in values]}
    if x is not None:
        details["x"] = str(x)
    if target is not None:
        details["rhs"] = str(target)
    return matches, details


def _numeric_point(identity: Identity, x: Optional[Angle], digits: int, N: int) \
        -> Tuple[Optional[bool], Dict[str, object]]:
    """Partial sums of every side at x.

    Returns True when all sides agree within their bounds, False when some
    difference is certified by the bounds, and None when neither can be shown.
    """
    slack = mpmath.mpf(10) ** -digits
    results = [side.numeric_value(x, N, digits) for side in identity.sides]
    target = identity.rhs_at(x)
    with mpmath.workdps(digits + GUARD_DIGITS):
        if target is not None:
            reference, reference_bound = target.to_mpf(), mpmath.mpf(0)
        else:
            reference, reference_bound = results[0]
        gaps = [(abs(value - reference), bound + reference_bound + slack) for value, bound in results]
        details = {"values": [mpmath.nstr(value, digits) for value, _ in results],
                   "bounds": [mpmath.nstr(bound, 3) for _, bound in results],
                   "N": N}
    if x is not None:
        details["x"] = str(x)
    if target is not None:
        details["rhs"] = str(target)
    if all(gap <= allowed for gap, allowed in gaps):
        return True, details
    if any(gap > allowed for gap, allowed in gaps):
        return False, details
    return None, details


def _recorded_values_hold(identity: Identity, mode: VerificationMode, digits: int, N: int) -> bool:
    for side, expected in zip(identity.sides, identity.values):
        if expected is None:
            continue
        if mode is VerificationMode.EXACT:
            if side.exact_value() != expected:
                return False
        else:
            value, bound = side.numeric_value(None, N, digits)
            if abs(value - expected.to_mpf()) > bound + mpmath.mpf(10) ** -digits:
                return False
    return True


def _check_constant(identity: Identity, mode: VerificationMode, digits: int, N: int) \
        -> Tuple[bool, Dict[str, object]]:
    if mode is VerificationMode.EXACT:
        matches, details = _exact_point(identity, None, digits)
    else:
        matches, details = _numeric_point(identity, None, digits, N)
    if identity.expectation is Expectation.EQUAL:
        outcome = matches is True
    else:
        outcome = matches is False
    recorded = _recorded_values_hold(identity, mode, digits, N)
    details["recorded_values"] = recorded
    return outcome and recorded, details


def _check_points(identity: Identity, points: Sequence[Angle], mode: VerificationMode, digits: int, N: int) \
        -> Tuple[bool, Dict[str, object]]:
    inside = []
    for x in points:
        if mode is VerificationMode.EXACT:
            matches, details = _exact_point(identity, x, digits)
        else:
            matches, details = _numeric_point(identity, x, digits, N)
        details["matches"] = matches
        inside.append(details)
    outside = []
    for point in identity.counterpoints:
        side = identity.sides[point.side]
        one_side = Identity(identity.id, (side,), identity.rhs, identity.validity)
        if mode is VerificationMode.EXACT:
            matches, details = _exact_point(one_side, point.x, digits)
        else:
            matches, details = _numeric_point(one_side, point.x, digits, N)
        details.update({"side": point.side, "misses": matches is False})
        outside.append(details)
    holds = [d["matches"] is True for d in inside]
    if identity.expectation is Expectation.EQUAL:
        outcome = all(holds)
    else:
        outcome = not all(holds)
    outcome = outcome and all(d["misses"] for d in outside)
    return outcome, {"validity": str(identity.validity), "points": inside, "counterpoints": outside}


def _sample_points(validity: Validity, samples: int) -> List[Angle]:
    points = validity.interior_points(samples)
    if validity.closed_lo:
        points.insert(0, validity.lo)
    if validity.closed_hi:
        points.append(validity.hi)
    return points


def _run(identity: Identity, check) -> VerificationReport:
    start = time.perf_counter()
    try:
        outcome, details = check()
        status = Status.PASS if outcome else Status.FAIL
    except NotClosedFormError as e:
        logging.error(f"{identity.id} has no closed form: {e}")
        status, details = Status.ERROR, {"error": str(e)}
    except PiSeriesError as e:
        logging.error(f"verification of {identity.id} failed: {e}")
        status, details = Status.ERROR, {"error": str(e)}
    report = VerificationReport(identity.id, status, details, time.perf_counter() - start)
    logging.info(str(report))
    return report


def verify_identity(identity_id: str, mode: VerificationMode = VerificationMode.EXACT,
                    digits: int = DEFAULT_DIGITS, N: int = DEFAULT_TERMS) -> VerificationReport:
    """Verify one catalog entry.

    Exact mode compares closed forms with zero tolerance; numeric mode accepts
    |lhs - rhs| below the tail bound plus 10**-digits. Entries outside Q[pi]
    always run numerically. Identities in x are checked at interior points of
    their validity interval and at their counterpoints.

    Args:
        identity_id: catalog id such as ``"eq10"``
        mode: exact or numeric
        digits: decimal digits for printed values and the numeric slack
        N: number of terms for numeric mode

    Returns:
        VerificationReport: pass when the outcome matches the expectation

    Raises:
        UnknownIdentityError: if no entry has this id
    """
    identity = get_identity(identity_id)
    if identity.mode is VerificationMode.NUMERIC_ONLY or mode is VerificationMode.NUMERIC_ONLY:
        if mode is VerificationMode.EXACT:
            logging.info(f"{identity_id} leaves Q[pi], verifying numerically with N={N}")
        mode = VerificationMode.NUMERIC
    if identity.has_symbol:
        points = _sample_points(identity.validity, DEFAULT_INTERVAL_SAMPLES)
        return _run(identity, lambda: _check_points(identity, points, mode, digits, N))
    return _run(identity, lambda: _check_constant(identity, mode, digits, N))


def verify_on_interval(identity_id: str, samples: int = DEFAULT_INTERVAL_SAMPLES,
                       digits: int = DEFAULT_DIGITS) -> VerificationReport:
    """Exact check of an x-identity at ``samples`` interior points, closed endpoints and counterpoints."""
    if samples < 1:
        raise ValueError(f"samples must be positive, got {samples}")
    identity = get_identity(identity_id)
    if not identity.has_symbol:
        raise ValueError(f"{identity_id} does not depend on x")
    points = _sample_points(identity.validity, samples)
    return _run(identity, lambda: _check_points(identity, points, VerificationMode.EXACT, digits, DEFAULT_TERMS))


def verify_all(mode: VerificationMode = VerificationMode.EXACT, digits: int = DEFAULT_DIGITS,
               N: int = DEFAULT_TERMS, ids: Optional[Sequence[str]] = None) -> List[VerificationReport]:
    reports = [verify_identity(identity_id, mode, digits, N)
               for identity_id in (ids if ids is not None else [i.id for i in list_identities()])]
    failed = [r.id for r in reports if not r.passed]
    if failed:
        logging.warning(f"{len(failed)} of {len(reports)} identities did not pass: {', '.join(failed)}")
    return reports
