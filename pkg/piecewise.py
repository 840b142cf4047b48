"""
Piecewise module for the pi-series toolkit.

This module defines polynomials in x with PiPoly coefficients (XPolynomial),
the pieces built from them, and the piecewise functions on [0, pi] or
[-pi, pi] whose Fourier series the rest of the toolkit computes. Everything is
exact: breakpoints are Angles, values are PiPolys, and integrals come from
polynomial antiderivatives.
"""

import json
import logging
from dataclasses import dataclass
from enum import Enum, auto
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from constants import MAX_X_DEGREE
from exactnum import (Angle, DegreeOverflowError, DomainError, PiPoly, RationalLike,
                      Sign, exact_sign)

PolyLike = Union[PiPoly, RationalLike]


def _trim(coeffs: List[PiPoly]) -> List[PiPoly]:
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    return coeffs


def _power_table(x: PiPoly, count: int) -> List[PiPoly]:
    powers = [PiPoly.one()]
    for _ in range(1, count):
        powers.append(powers[-1] * x)
    return powers


def multiply_coefficients(a: Sequence[PiPoly], b: Sequence[PiPoly]) -> List[PiPoly]:
    """Multiply two coefficient lists without applying the x-degree cap."""
    if not a or not b:
        return []
    product = [PiPoly.zero()] * (len(a) + len(b) - 1)
    for i, left in enumerate(a):
        if left.is_zero():
            continue
        for j, right in enumerate(b):
            product[i + j] = product[i + j] + left * right
    return _trim(product)


def integrate_coefficients(coeffs: Sequence[PiPoly], lo: Angle, hi: Angle) -> PiPoly:
    """Exact definite integral from ``lo`` to ``hi`` of the polynomial with these coefficients."""
    if not coeffs:
        return PiPoly.zero()
    hi_powers = _power_table(hi.to_pipoly(), len(coeffs) + 1)
    lo_powers = _power_table(lo.to_pipoly(), len(coeffs) + 1)
    total = PiPoly.zero()
    for j, c in enumerate(coeffs):
        if c.is_zero():
            continue
        total = total + (c * (hi_powers[j + 1] - lo_powers[j + 1])).scale(Fraction(1, j + 1))
    return total


class XPolynomial:
    """A polynomial in x whose coefficients are PiPolys.

    ``coeffs[j]`` is the coefficient of x**j. Trailing zeros are trimmed and the
    degree may not exceed MAX_X_DEGREE.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable[PolyLike] = ()):
        values = _trim([PiPoly.coerce(c) for c in coeffs])
        if len(values) - 1 > MAX_X_DEGREE:
            raise DegreeOverflowError(f"x-degree {len(values) - 1} exceeds {MAX_X_DEGREE}")
        self._coeffs: Tuple[PiPoly, ...] = tuple(values)

    @classmethod
    def constant(cls, value: PolyLike) -> 'XPolynomial':
        return cls([value])

    @classmethod
    def linear(cls, intercept: PolyLike, slope: PolyLike) -> 'XPolynomial':
        return cls([intercept, slope])

    @property
    def coeffs(self) -> Tuple[PiPoly, ...]:
        return self._coeffs

    @property
    def degree(self) -> int:
        """Degree in x; the zero polynomial has degree -1."""
        return len(self._coeffs) - 1

    def is_zero(self) -> bool:
        return not self._coeffs

    def coefficient(self, j: int) -> PiPoly:
        return self._coeffs[j] if 0 <= j < len(self._coeffs) else PiPoly.zero()

    def __add__(self, other: 'XPolynomial') -> 'XPolynomial':
        size = max(len(self._coeffs), len(other._coeffs))
        return XPolynomial([self.coefficient(j) + other.coefficient(j) for j in range(size)])

    def __sub__(self, other: 'XPolynomial') -> 'XPolynomial':
        return self + (-other)

    def __neg__(self) -> 'XPolynomial':
        return XPolynomial([-c for c in self._coeffs])

    def __mul__(self, other: Union['XPolynomial', PolyLike]) -> 'XPolynomial':
        if isinstance(other, XPolynomial):
            return XPolynomial(multiply_coefficients(self._coeffs, other._coeffs))
        factor = PiPoly.coerce(other)
        return XPolynomial([c * factor for c in self._coeffs])

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, XPolynomial):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def reflect(self) -> 'XPolynomial':
        """Return p(-x)."""
        return XPolynomial([c if j % 2 == 0 else -c for j, c in enumerate(self._coeffs)])

    def evaluate(self, x: Union[Angle, PiPoly, RationalLike]) -> PiPoly:
        point = PiPoly.coerce(x)
        total = PiPoly.zero()
        for c in reversed(self._coeffs):
            total = total * point + c
        return total

    def evaluate_float(self, x: float) -> float:
        total = 0.0
        for c in reversed(self._coeffs):
            total = total * x + float(c)
        return total

    def integral(self, lo: Angle, hi: Angle) -> PiPoly:
        return integrate_coefficients(self._coeffs, lo, hi)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for j, c in enumerate(self._coeffs):
            if c.is_zero():
                continue
            power = "" if j == 0 else ("x" if j == 1 else f"x^{j}")
            if not power:
                parts.append(f"({c})")
            else:
                parts.append(power if c == PiPoly.one() else f"({c})*{power}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"XPolynomial({str(self)!r})"

    def to_json(self) -> List[Union[List[str], Dict[str, object]]]:
        return [[str(q) for q in c.coefficients] if c.valuation >= 0 else c.to_json()
                for c in self._coeffs]

    @classmethod
    def from_json(cls, data: Sequence[Union[Sequence[RationalLike], Dict[str, object]]]) -> 'XPolynomial':
        return cls([PiPoly.from_json(c) for c in data])


def derivative(p: XPolynomial) -> XPolynomial:
    """Formal derivative of ``p``."""
    return XPolynomial([c.scale(j) for j, c in enumerate(p.coeffs)][1:])


@dataclass(frozen=True)
class Piece:
    """A polynomial on the interval [lo, hi] with lo < hi."""
    lo: Angle
    hi: Angle
    poly: XPolynomial

    def __post_init__(self):
        if exact_sign((self.hi - self.lo).to_pipoly()) != Sign.POSITIVE:
            raise DomainError(f"piece interval [{self.lo}, {self.hi}] is empty or reversed")

    def contains(self, x: Angle) -> bool:
        return self.lo <= x <= self.hi

    def to_json(self) -> Dict[str, object]:
        return {"lo": self.lo.to_json(), "hi": self.hi.to_json(), "coeffs": self.poly.to_json()}

    @classmethod
    def from_json(cls, data: Dict[str, object]) -> 'Piece':
        return cls(Angle.from_json(data["lo"]), Angle.from_json(data["hi"]),
                   XPolynomial.from_json(data.get("coeffs", [])))


class DomainKind(Enum):
    """Fundamental interval of a piecewise function."""
    HALF = auto()
    FULL = auto()

    @classmethod
    def from_string(cls, kind_str: str) -> 'DomainKind':
        return cls[kind_str.strip().upper()]

    @property
    def lower(self) -> Angle:
        return Angle() if self is DomainKind.HALF else Angle.pi_multiple(-1)

    @property
    def upper(self) -> Angle:
        return Angle.pi_multiple(1)


class Parity(Enum):
    """Declared symmetry of a full-domain function."""
    ODD = auto()
    EVEN = auto()
    NONE = auto()

    @classmethod
    def from_string(cls, parity_str: str) -> 'Parity':
        return cls[parity_str.strip().upper()]


def merge_adjacent(pieces: Sequence[Piece]) -> List[Piece]:
    """Join neighbouring pieces that carry the same polynomial."""
    merged: List[Piece] = []
    for piece in pieces:
        if merged and merged[-1].poly == piece.poly and merged[-1].hi == piece.lo:
            merged[-1] = Piece(merged[-1].lo, piece.hi, piece.poly)
        else:
            merged.append(piece)
    return merged


class PiecewiseFunction:
    """Ordered, contiguous polynomial pieces covering [0, pi] or [-pi, pi].

    Construction validates coverage and contiguity exactly, and checks a
    declared odd or even parity symbolically on full-domain functions.
    """

    def __init__(self, pieces: Sequence[Piece], domain_kind: DomainKind = DomainKind.HALF,
                 parity: Parity = Parity.NONE):
        if not pieces:
            raise DomainError("a piecewise function needs at least one piece")
        self.pieces: Tuple[Piece, ...] = tuple(pieces)
        self.domain_kind = domain_kind
        self.parity = parity
        self._validate()

    def _validate(self):
        if self.pieces[0].lo != self.domain_kind.lower or self.pieces[-1].hi != self.domain_kind.upper:
            raise DomainError(
                f"pieces cover [{self.pieces[0].lo}, {self.pieces[-1].hi}], "
                f"expected [{self.domain_kind.lower}, {self.domain_kind.upper}]")
        for left, right in zip(self.pieces, self.pieces[1:]):
            if left.hi != right.lo:
                raise DomainError(f"pieces are not contiguous at {left.hi} / {right.lo}")
        if self.domain_kind is DomainKind.FULL and self.parity is not Parity.NONE:
            mirrored = self.reflected()
            if self.parity is Parity.ODD:
                mirrored = mirrored.negated()
            if not self.same_function(mirrored):
                raise DomainError(f"function is not {self.parity.name.lower()} as declared")

    @classmethod
    def half(cls, pieces: Sequence[Tuple[PolyLike, PolyLike, Sequence[PolyLike]]]) -> 'PiecewiseFunction':
        """Build a half-domain function from (lo, hi, coeffs) triples."""
        built = []
        for lo, hi, coeffs in pieces:
            built.append(Piece(Angle.from_pipoly(PiPoly.coerce(lo)),
                               Angle.from_pipoly(PiPoly.coerce(hi)),
                               XPolynomial(coeffs)))
        return cls(built, DomainKind.HALF)

    @classmethod
    def zero(cls, domain_kind: DomainKind = DomainKind.HALF) -> 'PiecewiseFunction':
        parity = Parity.NONE if domain_kind is DomainKind.HALF else Parity.ODD
        return cls([Piece(domain_kind.lower, domain_kind.upper, XPolynomial())], domain_kind, parity)

    @property
    def breakpoints(self) -> List[Angle]:
        """Interior breakpoints, in increasing order."""
        return [piece.hi for piece in self.pieces[:-1]]

    def is_zero(self) -> bool:
        return all(piece.poly.is_zero() for piece in self.pieces)

    def _locate(self, x: Angle) -> Tuple[Optional[Piece], Optional[Piece]]:
        lower, upper = self.domain_kind.lower, self.domain_kind.upper
        if x < lower or x > upper:
            raise DomainError(f"{x} lies outside [{lower}, {upper}]")
        for index, piece in enumerate(self.pieces):
            if x == piece.hi and index + 1 < len(self.pieces):
                return piece, self.pieces[index + 1]
            if x == piece.lo and index == 0:
                return piece, None
            if piece.lo < x <= piece.hi:
                return piece, None
        return self.pieces[-1], None

    def evaluate(self, x: Union[Angle, RationalLike]) -> PiPoly:
        """Value at ``x``; at an interior breakpoint the average of both one-sided values."""
        x = Angle.coerce(x)
        piece, neighbour = self._locate(x)
        value = piece.poly.evaluate(x)
        if neighbour is not None:
            value = (value + neighbour.poly.evaluate(x)).scale(Fraction(1, 2))
        return value

    def evaluate_float(self, x: float) -> float:
        """Float value at ``x`` for plotting and quadrature checks."""
        for piece in self.pieces:
            if x <= float(piece.hi):
                return piece.poly.evaluate_float(x)
        return self.pieces[-1].poly.evaluate_float(x)

    def reflected(self) -> 'PiecewiseFunction':
        """Return x -> f(-x) on the mirrored domain (full domain only)."""
        if self.domain_kind is not DomainKind.FULL:
            raise DomainError("only full-domain functions can be reflected")
        pieces = [Piece(-piece.hi, -piece.lo, piece.poly.reflect()) for piece in reversed(self.pieces)]
        return PiecewiseFunction(pieces, DomainKind.FULL)

    def negated(self) -> 'PiecewiseFunction':
        pieces = [Piece(piece.lo, piece.hi, -piece.poly) for piece in self.pieces]
        return PiecewiseFunction(pieces, self.domain_kind, self.parity)

    def refine(self, points: Iterable[Angle]) -> 'PiecewiseFunction':
        """Split pieces at the given interior points without changing the function."""
        cuts = sorted({p for p in points if self.domain_kind.lower < p < self.domain_kind.upper})
        pieces: List[Piece] = []
        for piece in self.pieces:
            start = piece.lo
            for cut in cuts:
                if piece.lo < cut < piece.hi:
                    pieces.append(Piece(start, cut, piece.poly))
                    start = cut
            pieces.append(Piece(start, piece.hi, piece.poly))
        return PiecewiseFunction(pieces, self.domain_kind, self.parity)

    def _common_refinement(self, other: 'PiecewiseFunction') -> Tuple['PiecewiseFunction', 'PiecewiseFunction']:
        if self.domain_kind is not other.domain_kind:
            raise DomainError("functions live on different domains")
        points = self.breakpoints + other.breakpoints
        return self.refine(points), other.refine(points)

    def same_function(self, other: 'PiecewiseFunction') -> bool:
        """Exact equality as functions, ignoring how the pieces are split."""
        left, right = self._common_refinement(other)
        return all(a.poly == b.poly for a, b in zip(left.pieces, right.pieces))

    def __add__(self, other: 'PiecewiseFunction') -> 'PiecewiseFunction':
        left, right = self._common_refinement(other)
        pieces = [Piece(a.lo, a.hi, a.poly + b.poly) for a, b in zip(left.pieces, right.pieces)]
        parity = self.parity if self.parity is other.parity else Parity.NONE
        return PiecewiseFunction(merge_adjacent(pieces), self.domain_kind, parity)

    def scaled(self, factor: PolyLike) -> 'PiecewiseFunction':
        pieces = [Piece(piece.lo, piece.hi, piece.poly * factor) for piece in self.pieces]
        return PiecewiseFunction(pieces, self.domain_kind, self.parity)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PiecewiseFunction):
            return NotImplemented
        return (self.domain_kind is other.domain_kind and self.parity is other.parity
                and self.pieces == other.pieces)

    def __hash__(self) -> int:
        return hash((self.domain_kind, self.parity, self.pieces))

    def __str__(self) -> str:
        lines = [f"{piece.poly}  for {piece.lo} <= x <= {piece.hi}" for piece in self.pieces]
        return "\n".join(lines)

    def to_json(self) -> Dict[str, object]:
        return {
            "domain": self.domain_kind.name.lower(),
            "parity": self.parity.name.lower(),
            "pieces": [piece.to_json() for piece in self.pieces],
        }

    @classmethod
    def from_json(cls, data: Dict[str, object]) -> 'PiecewiseFunction':
        return cls([Piece.from_json(p) for p in data["pieces"]],
                   DomainKind.from_string(str(data.get("domain", "half"))),
                   Parity.from_string(str(data.get("parity", "none"))))


def odd_extension(f: PiecewiseFunction) -> PiecewiseFunction:
    """Extend a [0, pi] function to [-pi, pi] by f(-x) = -f(x).

    Args:
        f: half-domain function

    Returns:
        PiecewiseFunction: full-domain odd function; mirrored pieces that continue
        their neighbour across 0 are merged
    """
    if f.domain_kind is not DomainKind.HALF:
        raise DomainError("odd extension needs a function on [0, pi]")
    mirrored = [Piece(-piece.hi, -piece.lo, -piece.poly.reflect()) for piece in reversed(f.pieces)]
    pieces = merge_adjacent(mirrored + list(f.pieces))
    logging.debug(f"odd extension has {len(pieces)} pieces")
    return PiecewiseFunction(pieces, DomainKind.FULL, Parity.ODD)


def square_integral(f: PiecewiseFunction) -> PiPoly:
    """Exact (1/pi) * integral over [-pi, pi] of f(x)**2.

    Half-domain input is treated as its odd extension, which doubles the
    integral over [0, pi].

    Args:
        f: the function

    Returns:
        PiPoly: the left side of Parseval's equation
    """
    total = PiPoly.zero()
    for piece in f.pieces:
        square = multiply_coefficients(piece.poly.coeffs, piece.poly.coeffs)
        total = total + integrate_coefficients(square, piece.lo, piece.hi)
    factor = 2 if f.domain_kind is DomainKind.HALF else 1
    return total.scale(factor) / PiPoly.pi()


def tent_function(b: Union[Angle, RationalLike]) -> PiecewiseFunction:
    """The tent-shaped function whose sine series is sum sin(b*n)/n**2 sin(n*x).

    It is x(pi - b)/2 on [0, b] and b(pi - x)/2 on [b, pi]; b = 1 gives g.
    """
    b = Angle.coerce(b)
    if not (Angle() < b < Angle.pi_multiple(1)):
        raise DomainError(f"breakpoint {b} must lie strictly inside (0, pi)")
    pi = PiPoly.pi()
    bp = b.to_pipoly()
    rising = XPolynomial([0, (pi - bp).scale(Fraction(1, 2))])
    falling = XPolynomial([(bp * pi).scale(Fraction(1, 2)), bp.scale(Fraction(-1, 2))])
    return PiecewiseFunction([Piece(Angle(), b, rising), Piece(b, Angle.pi_multiple(1), falling)])


def load_function(path: Union[str, Path]) -> PiecewiseFunction:
    """Read a piecewise function from its JSON file."""
    with open(path, 'r', encoding='utf-8') as f:
        data = json.load(f)
    function = PiecewiseFunction.from_json(data)
    logging.info(f"Loaded {len(function.pieces)}-piece function from {path}")
    return function


def save_function(function: PiecewiseFunction, path: Union[str, Path]):
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(function.to_json(), f, indent=2)
