"""
Fourier module for the pi-series toolkit.

This module defines the linear term language of coefficient formulas,
c * sin(beta*n) / n**p and c * cos(beta*n) / n**p, and computes the exact
Fourier coefficients of piecewise polynomials in that language. It also checks
Parseval's equation symbolically.

Formulas are kept in a canonical form so that equality of formulas is a
syntactic check: every frequency is reduced into [0, pi] with the integer-n
reflections sin((2*pi - b)n) = -sin(bn) and cos((2*pi - b)n) = cos(bn), the
sign (-1)**n is always cos(pi*n), and constants are cos(0*n).
"""

import logging
from dataclasses import dataclass
from enum import Enum, auto
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import mpmath

from constants import GUARD_DIGITS, SPOT_CHECK_INDICES
from exactnum import Angle, PiPoly, RationalLike, Sign, angle_reduce_mod_2pi, exact_sign
from piecewise import DomainKind, PiecewiseFunction, XPolynomial, derivative, square_integral

PI = Angle.pi_multiple(1)
TWO_PI = Angle.pi_multiple(2)


class TrigKind(Enum):
    SIN = auto()
    COS = auto()

    @classmethod
    def from_string(cls, kind_str: str) -> 'TrigKind':
        return cls[kind_str.strip().upper()]

    def function(self):
        return mpmath.sin if self is TrigKind.SIN else mpmath.cos


class Equality(Enum):
    """Outcome of a formal comparison of coefficient formulas."""
    EQUAL = auto()
    NOT_EQUAL_FORMALLY = auto()


def format_argument(beta: Angle, variable: str = "n") -> str:
    """Render beta*n the way the expression language reads it back."""
    if beta == Angle.rational(1):
        return variable
    if beta.is_rational():
        return f"{beta.r}*{variable}"
    if beta.r == 0:
        return f"pi*{variable}" if beta.s == 1 else f"{beta.s}*pi*{variable}"
    return f"({beta})*{variable}"


def format_coefficient(c: PiPoly, body: str) -> str:
    if c == PiPoly.one():
        return body
    if c == -PiPoly.one():
        return f"-{body}"
    return f"({c})*{body}"


@dataclass(frozen=True)
class TrigTerm:
    """One term c * trig(beta*n) / n**p of a coefficient formula.

    Build instances with ``TrigTerm.make`` to obtain the canonical frequency
    window; the raw constructor trusts its arguments.
    """
    c: PiPoly
    kind: TrigKind
    beta: Angle
    p: int

    @classmethod
    def make(cls, c: Union[PiPoly, RationalLike], kind: TrigKind, beta: Union[Angle, RationalLike],
             p: int) -> Optional['TrigTerm']:
        """Canonicalise a term; return None when it vanishes for every integer n."""
        c = PiPoly.coerce(c)
        reduced, _, _ = angle_reduce_mod_2pi(Angle.coerce(beta))
        if exact_sign((reduced - PI).to_pipoly()) == Sign.POSITIVE:
            reduced = TWO_PI - reduced
            if kind is TrigKind.SIN:
                c = -c
        if kind is TrigKind.SIN and (reduced.is_zero() or reduced == PI):
            return None
        if c.is_zero():
            return None
        return cls(c, kind, reduced, p)

    @classmethod
    def constant(cls, c: Union[PiPoly, RationalLike], p: int = 0) -> Optional['TrigTerm']:
        return cls.make(c, TrigKind.COS, Angle(), p)

    @property
    def key(self) -> Tuple[int, str, Fraction, Fraction]:
        return self.p, self.kind.name, self.beta.s, self.beta.r

    def is_constant(self) -> bool:
        return self.kind is TrigKind.COS and self.beta.is_zero()

    def with_coefficient(self, c: PiPoly) -> 'TrigTerm':
        return TrigTerm(c, self.kind, self.beta, self.p)

    def value_at(self, n: int) -> mpmath.mpf:
        """Value at index n in the current mpmath precision."""
        return self.c.to_mpf() * self.kind.function()(self.beta.to_mpf() * n) / mpmath.mpf(n) ** self.p

    def __str__(self) -> str:
        if self.is_constant():
            body = "1"
        else:
            body = f"{self.kind.name.lower()}({format_argument(self.beta)})"
        if self.p:
            body += "/n" if self.p == 1 else f"/n^{self.p}"
        return format_coefficient(self.c, body)

    def to_json(self) -> Dict[str, object]:
        return {"c": self.c.to_json(), "kind": self.kind.name.lower(),
                "beta": self.beta.to_json(), "p": self.p}

    @classmethod
    def from_json(cls, data: Dict[str, object]) -> Optional['TrigTerm']:
        return cls.make(PiPoly.from_json(data["c"]), TrigKind.from_string(str(data["kind"])),
                        Angle.from_json(data["beta"]), int(data["p"]))


def multiply_terms(left: TrigTerm, right: TrigTerm) -> List[TrigTerm]:
    """Linearise the product of two terms by the product-to-sum identities."""
    c = (left.c * right.c).scale(Fraction(1, 2))
    p = left.p + right.p
    total = left.beta + right.beta
    difference = left.beta - right.beta
    if left.kind is TrigKind.SIN and right.kind is TrigKind.SIN:
        raw = [(c, TrigKind.COS, difference), (-c, TrigKind.COS, total)]
    elif left.kind is TrigKind.COS and right.kind is TrigKind.COS:
        raw = [(c, TrigKind.COS, difference), (c, TrigKind.COS, total)]
    elif left.kind is TrigKind.SIN:
        raw = [(c, TrigKind.SIN, total), (c, TrigKind.SIN, difference)]
    else:
        raw = [(c, TrigKind.SIN, total), (-c, TrigKind.SIN, difference)]
    terms = [TrigTerm.make(coeff, kind, beta, p) for coeff, kind, beta in raw]
    return [t for t in terms if t is not None]


@dataclass(frozen=True)
class CoefficientValue:
    """Numeric value of a formula at one index, with an absolute error bound."""
    value: mpmath.mpf
    error_bound: mpmath.mpf
    digits: int

    def __str__(self) -> str:
        return mpmath.nstr(self.value, self.digits)


class CoefficientFormula:
    """A finite sum of TrigTerms, combined over (kind, beta, p) and sorted.

    The formula denotes a function of the integer n >= 1.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[Optional[TrigTerm]] = ()):
        combined: Dict[Tuple[int, str, Fraction, Fraction], TrigTerm] = {}
        for term in terms:
            if term is None:
                continue
            previous = combined.get(term.key)
            if previous is not None:
                term = previous.with_coefficient(previous.c + term.c)
            combined[term.key] = term
        self.terms: Tuple[TrigTerm, ...] = tuple(
            combined[key] for key in sorted(combined) if not combined[key].c.is_zero())

    @classmethod
    def of(cls, c: Union[PiPoly, RationalLike], kind: TrigKind, beta: Union[Angle, RationalLike],
           p: int) -> 'CoefficientFormula':
        return cls([TrigTerm.make(c, kind, beta, p)])

    def is_empty(self) -> bool:
        return not self.terms

    def __iter__(self):
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __add__(self, other: 'CoefficientFormula') -> 'CoefficientFormula':
        return type(self)(self.terms + other.terms)

    def __sub__(self, other: 'CoefficientFormula') -> 'CoefficientFormula':
        return self + (-other)

    def __neg__(self) -> 'CoefficientFormula':
        return type(self)(t.with_coefficient(-t.c) for t in self.terms)

    def scale(self, factor: Union[PiPoly, RationalLike]) -> 'CoefficientFormula':
        factor = PiPoly.coerce(factor)
        return type(self)(t.with_coefficient(t.c * factor) for t in self.terms)

    def __mul__(self, other: 'CoefficientFormula') -> 'CoefficientFormula':
        products: List[TrigTerm] = []
        for left in self.terms:
            for right in other.terms:
                products.extend(multiply_terms(left, right))
        return type(self)(products)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoefficientFormula):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def evaluate_at(self, n: int) -> mpmath.mpf:
        """Value at index n in the current mpmath precision."""
        return mpmath.fsum(term.value_at(n) for term in self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        text = str(self.terms[0])
        for term in self.terms[1:]:
            rendered = str(term)
            text += f" - {rendered[1:]}" if rendered.startswith("-") else f" + {rendered}"
        return text

    def __repr__(self) -> str:
        return f"{type(self).__name__}({str(self)!r})"

    def to_json(self) -> List[Dict[str, object]]:
        return [term.to_json() for term in self.terms]

    @classmethod
    def from_json(cls, data: Sequence[Dict[str, object]]) -> 'CoefficientFormula':
        return cls(TrigTerm.from_json(item) for item in data)


@dataclass(frozen=True)
class SineSeries:
    """The function sum over n of coeffs(n) * sin(n*x)."""
    coeffs: CoefficientFormula

    def __str__(self) -> str:
        return f"sum ({self.coeffs}) * sin(n*x)"


def coefficient_at(cf: CoefficientFormula, n: int, digits: int) -> CoefficientValue:
    """Numeric value of ``cf`` at index ``n``.

    Args:
        cf: the formula
        n: index, at least 1
        digits: significant digits requested

    Returns:
        CoefficientValue: value carried with GUARD_DIGITS extra digits and its bound
    """
    if n < 1:
        raise ValueError(f"coefficient index must be positive, got {n}")
    with mpmath.workdps(digits + GUARD_DIGITS):
        value = cf.evaluate_at(n)
        magnitude = mpmath.fsum(abs(term.c.to_mpf()) for term in cf.terms) + 1
        bound = magnitude * (len(cf.terms) + 1) * mpmath.mpf(10) ** (-(digits + GUARD_DIGITS - 2))
    return CoefficientValue(value, bound, digits)


def canonical_equal(x: CoefficientFormula, y: CoefficientFormula) -> Equality:
    """Compare canonical forms; EQUAL implies equality for every integer n >= 1."""
    return Equality.EQUAL if x.terms == y.terms else Equality.NOT_EQUAL_FORMALLY


def spot_check(x: CoefficientFormula, y: CoefficientFormula,
               indices: Sequence[int] = SPOT_CHECK_INDICES, digits: int = 30) -> List[mpmath.mpf]:
    """Absolute differences of two formulas at the given indices."""
    with mpmath.workdps(digits + GUARD_DIGITS):
        return [abs(x.evaluate_at(n) - y.evaluate_at(n)) for n in indices]


def _antiderivative_terms(poly: XPolynomial, endpoint: Angle, kind: TrigKind) -> List[TrigTerm]:
    """Tabular antiderivative of poly(x)*trig(n*x) evaluated at ``endpoint``.

    For sine the result is
    -sum (-1)^m p^(2m) cos(nx)/n^(2m+1) + sum (-1)^m p^(2m+1) sin(nx)/n^(2m+2),
    and for cosine
    sum (-1)^m p^(2m) sin(nx)/n^(2m+1) + sum (-1)^m p^(2m+1) cos(nx)/n^(2m+2).
    """
    terms: List[TrigTerm] = []
    current = poly
    order = 0
    while not current.is_zero():
        value = current.evaluate(endpoint)
        m, odd = divmod(order, 2)
        sign = -1 if m % 2 else 1
        if kind is TrigKind.SIN:
            if odd:
                term = TrigTerm.make(value.scale(sign), TrigKind.SIN, endpoint, order + 1)
            else:
                term = TrigTerm.make(value.scale(-sign), TrigKind.COS, endpoint, order + 1)
        else:
            if odd:
                term = TrigTerm.make(value.scale(sign), TrigKind.COS, endpoint, order + 1)
            else:
                term = TrigTerm.make(value.scale(sign), TrigKind.SIN, endpoint, order + 1)
        if term is not None:
            terms.append(term)
        current = derivative(current)
        order += 1
    return terms


def _trig_integral(f: PiecewiseFunction, kind: TrigKind) -> CoefficientFormula:
    total: List[TrigTerm] = []
    for piece in f.pieces:
        upper = _antiderivative_terms(piece.poly, piece.hi, kind)
        lower = _antiderivative_terms(piece.poly, piece.lo, kind)
        total.extend(upper)
        total.extend(t.with_coefficient(-t.c) for t in lower)
    return CoefficientFormula(total)


def sine_coefficients(f: PiecewiseFunction) -> CoefficientFormula:
    """Exact b_n = (2/pi) * integral over [0, pi] of f(x) sin(nx).

    Args:
        f: half-domain piecewise polynomial

    Returns:
        CoefficientFormula: the coefficient of sin(nx)
    """
    if f.domain_kind is not DomainKind.HALF:
        raise ValueError("sine coefficients need a function on [0, pi]")
    formula = _trig_integral(f, TrigKind.SIN).scale(PiPoly.monomial(2, -1))
    logging.debug(f"sine coefficients: {formula}")
    return formula


def full_coefficients(f: PiecewiseFunction) -> Tuple[PiPoly, CoefficientFormula, CoefficientFormula]:
    """Exact a_0, a_n and b_n over [-pi, pi].

    Args:
        f: full-domain piecewise polynomial

    Returns:
        tuple: (a0, a, b) where a and b are the formulas of the cos(nx) and sin(nx)
        coefficients
    """
    if f.domain_kind is not DomainKind.FULL:
        raise ValueError("full coefficients need a function on [-pi, pi]")
    inverse_pi = PiPoly.monomial(1, -1)
    a0 = PiPoly.zero()
    for piece in f.pieces:
        a0 = a0 + piece.poly.integral(piece.lo, piece.hi)
    a = _trig_integral(f, TrigKind.COS).scale(inverse_pi)
    b = _trig_integral(f, TrigKind.SIN).scale(inverse_pi)
    return a0 * inverse_pi, a, b


@dataclass(frozen=True)
class ParsevalResult:
    lhs: PiPoly
    rhs: PiPoly
    equal: bool


def parseval_check(f: PiecewiseFunction, b: Optional[CoefficientFormula] = None) -> ParsevalResult:
    """Check (1/pi) * integral of f**2 against a_0**2/2 + sum (a_n**2 + b_n**2).

    Args:
        f: a half-domain function (its odd extension is used) or a full-domain one
        b: optional replacement for the computed sine side

    Returns:
        ParsevalResult: both sides and whether they agree exactly

    Raises:
        NotClosedFormError: if the squared coefficients cannot be summed in Q[pi]
    """
    from closedform import SeriesExpression, sum_closed_form

    if f.domain_kind is DomainKind.HALF:
        a0, a, computed_b = PiPoly.zero(), CoefficientFormula(), sine_coefficients(f)
    else:
        a0, a, computed_b = full_coefficients(f)
    b = computed_b if b is None else b
    squares = SeriesExpression((a * a + b * b).terms)
    lhs = square_integral(f)
    rhs = (a0 * a0).scale(Fraction(1, 2)) + sum_closed_form(squares)
    logging.info(f"Parseval: lhs = {lhs}, rhs = {rhs}")
    return ParsevalResult(lhs, rhs, lhs == rhs)
