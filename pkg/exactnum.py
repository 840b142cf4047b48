"""
Exactnum module for the pi-series toolkit.

This module defines the exact number tower every other module builds on:
rationals (``fractions.Fraction``), polynomials in pi with rational
coefficients (PiPoly), and angles of the form r + s*pi (Angle). It also decides
the sign of a PiPoly exactly and reduces angles modulo 2*pi.

Since pi is transcendental, a nonzero PiPoly never vanishes at pi, so every
sign question is decidable by evaluating with a rigorous enclosure of pi and
refining until the enclosure excludes zero.
"""

import functools
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import mpmath

from constants import INITIAL_SIGN_BITS, MAX_PI_DEGREE

Rational = Fraction
RationalLike = Union[int, Fraction, str]


class PiSeriesError(ValueError):
    """Base class of every error raised by the toolkit."""


class DegreeOverflowError(PiSeriesError):
    """A polynomial degree exceeded its configured cap."""


class DomainError(PiSeriesError):
    """A value lies outside the domain an operation accepts."""


def as_rational(value: RationalLike) -> Fraction:
    """Coerce an int, Fraction or rational string such as ``"-23/96"`` to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


class Sign(Enum):
    """Exact sign of a real number."""
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1


@functools.lru_cache(maxsize=None)
def pi_enclosure(bits: int) -> Tuple[Fraction, Fraction]:
    """Return rationals lo < pi < hi with hi - lo = 3 / 2**bits.

    Args:
        bits: binary precision of the enclosure

    Returns:
        tuple: (lo, hi), both dyadic rationals
    """
    with mpmath.workprec(bits + 16):
        scaled = int(mpmath.floor(mpmath.ldexp(mpmath.pi, bits)))
    return Fraction(scaled - 1, 1 << bits), Fraction(scaled + 2, 1 << bits)


class PiPoly:
    """An exact element of Q[pi, 1/pi].

    Coefficients are stored from the lowest exponent upward: ``coeffs[i]`` is the
    coefficient of ``pi**(valuation + i)``. The canonical form has no zero at
    either end, and the zero polynomial is ``coeffs=()`` with ``valuation=0``.
    Negative exponents appear only transiently (the 1/pi of a Fourier integral);
    every closed-form sum is an ordinary polynomial.

    Instances are immutable and hashable.
    """

    __slots__ = ("_coeffs", "_valuation")

    def __init__(self, coeffs: Iterable[RationalLike] = (), valuation: int = 0):
        values = [as_rational(c) for c in coeffs]
        while values and values[-1] == 0:
            values.pop()
        lead = 0
        while lead < len(values) and values[lead] == 0:
            lead += 1
        values = values[lead:]
        valuation = valuation + lead if values else 0
        if values:
            top = valuation + len(values) - 1
            if top > MAX_PI_DEGREE or valuation < -MAX_PI_DEGREE:
                raise DegreeOverflowError(
                    f"pi exponent range [{valuation}, {top}] exceeds +/-{MAX_PI_DEGREE}")
        self._coeffs: Tuple[Fraction, ...] = tuple(values)
        self._valuation: int = valuation

    # Construction helpers

    @classmethod
    def zero(cls) -> 'PiPoly':
        return cls()

    @classmethod
    def one(cls) -> 'PiPoly':
        return cls([1])

    @classmethod
    def pi(cls) -> 'PiPoly':
        return cls([0, 1])

    @classmethod
    def constant(cls, value: RationalLike) -> 'PiPoly':
        return cls([value])

    @classmethod
    def monomial(cls, coeff: RationalLike, exponent: int) -> 'PiPoly':
        return cls([coeff], valuation=exponent)

    @classmethod
    def coerce(cls, value: Union['PiPoly', 'Angle', RationalLike]) -> 'PiPoly':
        if isinstance(value, PiPoly):
            return value
        if isinstance(value, Angle):
            return value.to_pipoly()
        return cls.constant(value)

    # Structure

    @property
    def valuation(self) -> int:
        return self._valuation

    @property
    def degree(self) -> Optional[int]:
        """Highest pi exponent, or None for the zero polynomial."""
        if not self._coeffs:
            return None
        return self._valuation + len(self._coeffs) - 1

    @property
    def coefficients(self) -> List[Fraction]:
        """Coefficients of pi**0, pi**1, ... up to the degree.

        Raises:
            DomainError: if the polynomial has negative pi exponents
        """
        if self._valuation < 0:
            raise DomainError(f"{self} has negative powers of pi")
        if not self._coeffs:
            return []
        return [Fraction(0)] * self._valuation + list(self._coeffs)

    def coefficient(self, exponent: int) -> Fraction:
        index = exponent - self._valuation
        if 0 <= index < len(self._coeffs):
            return self._coeffs[index]
        return Fraction(0)

    def terms(self) -> List[Tuple[int, Fraction]]:
        """Nonzero (exponent, coefficient) pairs, lowest exponent first."""
        return [(self._valuation + i, c) for i, c in enumerate(self._coeffs) if c != 0]

    def is_zero(self) -> bool:
        return not self._coeffs

    def is_rational(self) -> bool:
        return not self._coeffs or (self._valuation == 0 and len(self._coeffs) == 1)

    def is_monomial(self) -> bool:
        return len(self.terms()) == 1

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise DomainError(f"{self} is not rational")
        return self.coefficient(0)

    # Ring operations

    def _combine(self, other: 'PiPoly', sign: int) -> 'PiPoly':
        if self.is_zero():
            return other if sign > 0 else -other
        if other.is_zero():
            return self
        low = min(self._valuation, other._valuation)
        high = max(self.degree, other.degree)
        return PiPoly(
            [self.coefficient(k) + sign * other.coefficient(k) for k in range(low, high + 1)],
            valuation=low)

    def __add__(self, other) -> 'PiPoly':
        try:
            return self._combine(PiPoly.coerce(other), 1)
        except TypeError:
            return NotImplemented

    __radd__ = __add__

    def __sub__(self, other) -> 'PiPoly':
        try:
            return self._combine(PiPoly.coerce(other), -1)
        except TypeError:
            return NotImplemented

    def __rsub__(self, other) -> 'PiPoly':
        return PiPoly.coerce(other) - self

    def __neg__(self) -> 'PiPoly':
        return PiPoly([-c for c in self._coeffs], self._valuation)

    def __pos__(self) -> 'PiPoly':
        return self

    def __mul__(self, other) -> 'PiPoly':
        try:
            other = PiPoly.coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return PiPoly()
        product = [Fraction(0)] * (len(self._coeffs) + len(other._coeffs) - 1)
        for i, a in enumerate(self._coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other._coeffs):
                product[i + j] += a * b
        return PiPoly(product, self._valuation + other._valuation)

    __rmul__ = __mul__

    def __truediv__(self, other) -> 'PiPoly':
        """Divide by a rational or by a single-term PiPoly such as ``3*pi**2``."""
        try:
            other = PiPoly.coerce(other)
        except TypeError:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division of a PiPoly by zero")
        if not other.is_monomial():
            raise DomainError(f"cannot divide by the non-monomial {other}")
        (exponent, coeff), = other.terms()
        return PiPoly([c / coeff for c in self._coeffs], self._valuation - exponent)

    def __pow__(self, exponent: int) -> 'PiPoly':
        if not isinstance(exponent, int) or exponent < 0:
            if isinstance(exponent, int) and self.is_monomial():
                return PiPoly.one() / (self ** -exponent)
            raise DomainError(f"unsupported PiPoly exponent {exponent!r}")
        result = PiPoly.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def scale(self, factor: RationalLike) -> 'PiPoly':
        factor = as_rational(factor)
        return PiPoly([c * factor for c in self._coeffs], self._valuation)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = PiPoly.constant(other)
        if not isinstance(other, PiPoly):
            return NotImplemented
        return self._valuation == other._valuation and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash((self._valuation, self._coeffs))

    # Evaluation

    def enclosure(self, bits: int) -> Tuple[Fraction, Fraction]:
        """Rigorous rational interval containing the value at pi."""
        pi_lo, pi_hi = pi_enclosure(bits)
        lo = hi = Fraction(0)
        for exponent, coeff in self.terms():
            if exponent >= 0:
                term_lo, term_hi = pi_lo ** exponent, pi_hi ** exponent
            else:
                term_lo, term_hi = pi_hi ** exponent, pi_lo ** exponent
            if coeff > 0:
                lo += coeff * term_lo
                hi += coeff * term_hi
            else:
                lo += coeff * term_hi
                hi += coeff * term_lo
        return lo, hi

    def sign(self) -> Sign:
        return exact_sign(self)

    def to_mpf(self) -> mpmath.mpf:
        """Value at pi in the current mpmath working precision."""
        total = mpmath.mpf(0)
        for exponent, coeff in self.terms():
            total += mpmath.mpf(coeff.numerator) / coeff.denominator * mpmath.pi ** exponent
        return total

    def __float__(self) -> float:
        with mpmath.workdps(30):
            return float(self.to_mpf())

    # Text and JSON

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for exponent, coeff in self.terms():
            magnitude = abs(coeff)
            if exponent == 0:
                body = str(magnitude)
            else:
                power = "pi" if exponent == 1 else f"pi^{exponent}"
                body = power if magnitude == 1 else f"{magnitude}*{power}"
            if not parts:
                parts.append(("-" if coeff < 0 else "") + body)
            else:
                parts.append(("- " if coeff < 0 else "+ ") + body)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"PiPoly({str(self)!r})"

    def to_json(self) -> Dict[str, object]:
        data: Dict[str, object] = {"pi_coeffs": [str(c) for c in self._coeffs]}
        if self._valuation:
            data["pi_shift"] = self._valuation
        return data

    @classmethod
    def from_json(cls, data: Union[Dict[str, object], Sequence[RationalLike]]) -> 'PiPoly':
        """Read ``{"pi_coeffs": [...], "pi_shift": k}`` or a bare coefficient list."""
        if isinstance(data, dict):
            return cls(data.get("pi_coeffs", []), int(data.get("pi_shift", 0)))
        return cls(data)


def exact_sign(a: PiPoly) -> Sign:
    """Return the exact sign of ``a`` evaluated at pi.

    The enclosure of pi starts at INITIAL_SIGN_BITS bits and doubles until the
    interval value of ``a`` excludes zero. This terminates for every nonzero
    PiPoly because pi is not algebraic.

    Args:
        a: the polynomial to test

    Returns:
        Sign: NEGATIVE, ZERO or POSITIVE
    """
    if a.is_zero():
        return Sign.ZERO
    if a.is_rational():
        return Sign.POSITIVE if a.rational_value() > 0 else Sign.NEGATIVE
    bits = INITIAL_SIGN_BITS
    while True:
        lo, hi = a.enclosure(bits)
        if lo > 0:
            return Sign.POSITIVE
        if hi < 0:
            return Sign.NEGATIVE
        bits *= 2


def compare(a: Union[PiPoly, 'Angle', RationalLike], b: Union[PiPoly, 'Angle', RationalLike]) -> int:
    """Three-way exact comparison returning -1, 0 or 1."""
    return exact_sign(PiPoly.coerce(a) - PiPoly.coerce(b)).value


@dataclass(frozen=True)
class DecimalApproximation:
    """Decimal text of a PiPoly value with a rigorous absolute error bound."""
    text: str
    error_bound: Fraction
    digits: int

    def __str__(self) -> str:
        return self.text


def format_scaled(scaled: int, digits: int) -> str:
    """Render ``scaled / 10**digits`` with exactly ``digits`` fractional digits."""
    sign = "-" if scaled < 0 else ""
    magnitude = str(abs(scaled)).rjust(digits + 1, "0")
    if digits == 0:
        return sign + magnitude
    return f"{sign}{magnitude[:-digits]}.{magnitude[-digits:]}"


def to_decimal(a: PiPoly, digits: int) -> DecimalApproximation:
    """Round ``a`` to ``digits`` fractional decimal digits.

    The returned bound covers both the rounding step and the width of the pi
    enclosure, and is below half a unit in the last place plus 10**-(digits+4).

    Args:
        a: the value to print
        digits: number of digits after the decimal point, at least 1

    Returns:
        DecimalApproximation: text and error bound
    """
    if digits < 1:
        raise DomainError(f"digits must be positive, got {digits}")
    if a.is_zero():
        return DecimalApproximation(format_scaled(0, digits), Fraction(0), digits)
    tolerance = Fraction(1, 10 ** (digits + 4))
    bits = max(INITIAL_SIGN_BITS, int(digits * 3.33) + 32)
    while True:
        lo, hi = a.enclosure(bits)
        if hi - lo < tolerance:
            break
        bits *= 2
    middle = (lo + hi) / 2
    scaled = round(middle * 10 ** digits)
    error = abs(Fraction(scaled, 10 ** digits) - middle) + (hi - lo) / 2
    return DecimalApproximation(format_scaled(scaled, digits), error, digits)


@functools.total_ordering
@dataclass(frozen=True)
class Angle:
    """A real number r + s*pi with rational r and s.

    Angles hold breakpoints, trigonometric frequencies and evaluation points.
    Ordering is exact.
    """
    r: Fraction = Fraction(0)
    s: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "r", as_rational(self.r))
        object.__setattr__(self, "s", as_rational(self.s))

    @classmethod
    def rational(cls, value: RationalLike) -> 'Angle':
        return cls(as_rational(value), Fraction(0))

    @classmethod
    def pi_multiple(cls, value: RationalLike) -> 'Angle':
        return cls(Fraction(0), as_rational(value))

    @classmethod
    def coerce(cls, value: Union['Angle', RationalLike]) -> 'Angle':
        if isinstance(value, Angle):
            return value
        return cls.rational(value)

    @classmethod
    def from_pipoly(cls, value: PiPoly) -> 'Angle':
        if value.is_zero():
            return cls()
        if value.valuation < 0 or value.degree > 1:
            raise DomainError(f"{value} is not of the form r + s*pi")
        return cls(value.coefficient(0), value.coefficient(1))

    def to_pipoly(self) -> PiPoly:
        return PiPoly([self.r, self.s])

    def is_zero(self) -> bool:
        return self.r == 0 and self.s == 0

    def is_rational(self) -> bool:
        return self.s == 0

    def __add__(self, other) -> 'Angle':
        other = Angle.coerce(other)
        return Angle(self.r + other.r, self.s + other.s)

    __radd__ = __add__

    def __sub__(self, other) -> 'Angle':
        other = Angle.coerce(other)
        return Angle(self.r - other.r, self.s - other.s)

    def __rsub__(self, other) -> 'Angle':
        return Angle.coerce(other) - self

    def __neg__(self) -> 'Angle':
        return Angle(-self.r, -self.s)

    def __mul__(self, factor: RationalLike) -> 'Angle':
        factor = as_rational(factor)
        return Angle(self.r * factor, self.s * factor)

    __rmul__ = __mul__

    def __truediv__(self, divisor: RationalLike) -> 'Angle':
        divisor = as_rational(divisor)
        return Angle(self.r / divisor, self.s / divisor)

    def __lt__(self, other) -> bool:
        return compare(self, Angle.coerce(other)) < 0

    def sign(self) -> Sign:
        return exact_sign(self.to_pipoly())

    def to_mpf(self) -> mpmath.mpf:
        return self.to_pipoly().to_mpf()

    def __float__(self) -> float:
        return float(self.to_pipoly())

    def __str__(self) -> str:
        return str(self.to_pipoly())

    def to_json(self) -> Dict[str, str]:
        return {"r": str(self.r), "s": str(self.s)}

    @classmethod
    def from_json(cls, data: Dict[str, RationalLike]) -> 'Angle':
        return cls(as_rational(data.get("r", 0)), as_rational(data.get("s", 0)))


TWO_PI = Angle.pi_multiple(2)


def angle_reduce_mod_2pi(theta: Angle) -> Tuple[Angle, int, bool]:
    """Reduce ``theta`` into [0, 2*pi).

    Args:
        theta: the angle to reduce

    Returns:
        tuple: (reduced, k, boundary) with ``theta == reduced + 2*pi*k`` and
        ``boundary`` true exactly when ``reduced`` is 0
    """
    if theta.r == 0:
        k = math.floor(theta.s / 2)
    else:
        with mpmath.workdps(30):
            k = int(mpmath.floor(theta.to_mpf() / (2 * mpmath.pi)))
        while (theta - TWO_PI * k).sign() == Sign.NEGATIVE:
            k -= 1
        while (theta - TWO_PI * (k + 1)).sign() != Sign.NEGATIVE:
            k += 1
    reduced = theta - TWO_PI * k
    return reduced, k, reduced.is_zero()
