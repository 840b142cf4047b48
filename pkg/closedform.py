"""
Closedform module for the pi-series toolkit.

This module is the summation engine. It linearises products and powers of
sin(alpha*n) and cos(alpha*n) into coefficient formulas, then sums each term
over n >= 1 exactly in Q[pi] with the sawtooth series and the Bernoulli
polynomial formulas

    sum sin(n*b)/n**(2k+1) = (-1)**(k+1) (2 pi)**(2k+1) B_(2k+1)(b / 2 pi) / (2 (2k+1)!)
    sum cos(n*b)/n**(2k)   = (-1)**(k+1) (2 pi)**(2k)   B_(2k)(b / 2 pi)   / (2 (2k)!)

valid for b in [0, 2 pi] (open at both ends for the first formula with k = 0).
Terms outside this fragment raise NotClosedFormError.
"""

import functools
import logging
from dataclasses import dataclass, field
from enum import Enum, auto
from fractions import Fraction
from math import comb, factorial
from typing import Dict, Iterable, List, Tuple, Union

from constants import MAX_BERNOULLI_INDEX, MAX_TRIG_DEGREE
from exactnum import (Angle, DegreeOverflowError, DomainError, PiPoly, PiSeriesError,
                      RationalLike, as_rational)
from fourier import (CoefficientFormula, TrigKind, TrigTerm, format_argument,
                     format_coefficient)

PI = Angle.pi_multiple(1)


class NotClosedFormError(PiSeriesError):
    """A series term has no value in Q[pi] under the parity rules."""

    def __init__(self, term: TrigTerm, reason: str):
        super().__init__(f"no closed form in Q[pi] for {term}: {reason}")
        self.term = term
        self.reason = reason


class SeriesExpression(CoefficientFormula):
    """A coefficient formula read as the series sum over n >= 1 of its terms."""

    __slots__ = ()

    def __str__(self) -> str:
        return f"sum {super().__str__()}"


@functools.total_ordering
@dataclass(frozen=True)
class Factor:
    """A trigonometric factor trig(n*(alpha + x_coeff*x))**power."""
    kind: TrigKind
    alpha: Angle
    power: int = 1
    x_coeff: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "x_coeff", as_rational(self.x_coeff))
        if self.power < 1:
            raise DomainError(f"factor power must be positive, got {self.power}")

    @property
    def base(self) -> Tuple[str, Fraction, Fraction, Fraction]:
        return self.kind.name, self.alpha.s, self.alpha.r, self.x_coeff

    def __lt__(self, other: 'Factor') -> bool:
        return (self.base, self.power) < (other.base, other.power)

    def has_symbol(self) -> bool:
        return self.x_coeff != 0

    def substitute(self, x: Angle) -> 'Factor':
        return Factor(self.kind, self.alpha + x * self.x_coeff, self.power)

    def argument_text(self) -> str:
        if self.x_coeff == 0:
            return format_argument(self.alpha)
        symbol = "x" if self.x_coeff == 1 else f"{self.x_coeff}*x"
        if self.alpha.is_zero():
            return f"n*{symbol}"
        return f"({self.alpha} + {symbol})*n"

    def __str__(self) -> str:
        text = f"{self.kind.name.lower()}({self.argument_text()})"
        return text if self.power == 1 else f"{text}^{self.power}"


@dataclass(frozen=True)
class ProductTerm:
    """c * (product of factors) / n**p."""
    c: PiPoly
    factors: Tuple[Factor, ...] = ()
    p: int = 0

    @property
    def key(self) -> Tuple[Tuple[Factor, ...], int]:
        return self.factors, self.p

    @property
    def trig_degree(self) -> int:
        return sum(f.power for f in self.factors)

    def __mul__(self, other: 'ProductTerm') -> 'ProductTerm':
        powers: Dict[Tuple[str, Fraction, Fraction, Fraction], Factor] = {}
        for factor in self.factors + other.factors:
            previous = powers.get(factor.base)
            if previous is not None:
                factor = Factor(factor.kind, factor.alpha, previous.power + factor.power, factor.x_coeff)
            powers[factor.base] = factor
        return ProductTerm(self.c * other.c, tuple(sorted(powers.values())), self.p + other.p)

    def __str__(self) -> str:
        body = "*".join(str(f) for f in self.factors) or "1"
        if self.p > 0:
            body += "/n" if self.p == 1 else f"/n^{self.p}"
        elif self.p < 0:
            body += "*n" if self.p == -1 else f"*n^{-self.p}"
        return format_coefficient(self.c, body)


class ProductExpression:
    """A finite sum of ProductTerms, read as a series over n >= 1.

    Factors may depend on a symbol x; such expressions must be given a value
    for x with ``substitute`` before they can be summed exactly.
    """

    def __init__(self, terms: Iterable[ProductTerm] = ()):
        combined: Dict[Tuple[Tuple[Factor, ...], int], ProductTerm] = {}
        order: List[Tuple[Tuple[Factor, ...], int]] = []
        for term in terms:
            previous = combined.get(term.key)
            if previous is None:
                order.append(term.key)
            else:
                term = ProductTerm(previous.c + term.c, term.factors, term.p)
            combined[term.key] = term
        self.terms: Tuple[ProductTerm, ...] = tuple(
            combined[key] for key in order if not combined[key].c.is_zero())

    @classmethod
    def constant(cls, c: Union[PiPoly, RationalLike], p: int = 0) -> 'ProductExpression':
        return cls([ProductTerm(PiPoly.coerce(c), (), p)])

    @classmethod
    def factor(cls, kind: TrigKind, alpha: Union[Angle, RationalLike], power: int = 1,
               x_coeff: RationalLike = 0) -> 'ProductExpression':
        return cls([ProductTerm(PiPoly.one(), (Factor(kind, Angle.coerce(alpha), power, x_coeff),), 0)])

    @classmethod
    def sinc(cls, alpha: Union[Angle, RationalLike] = 1) -> 'ProductExpression':
        """sin(alpha*n)/n."""
        return cls([ProductTerm(PiPoly.one(), (Factor(TrigKind.SIN, Angle.coerce(alpha)),), 1)])

    def is_zero(self) -> bool:
        return not self.terms

    def has_symbol(self) -> bool:
        return any(f.has_symbol() for t in self.terms for f in t.factors)

    @property
    def trig_degree(self) -> int:
        return max((t.trig_degree for t in self.terms), default=0)

    def __add__(self, other: 'ProductExpression') -> 'ProductExpression':
        return ProductExpression(self.terms + other.terms)

    def __sub__(self, other: 'ProductExpression') -> 'ProductExpression':
        return self + (-other)

    def __neg__(self) -> 'ProductExpression':
        return self.scale(-1)

    def scale(self, factor: Union[PiPoly, RationalLike]) -> 'ProductExpression':
        factor = PiPoly.coerce(factor)
        return ProductExpression(ProductTerm(t.c * factor, t.factors, t.p) for t in self.terms)

    def divide_by_n(self, power: int = 1) -> 'ProductExpression':
        return ProductExpression(ProductTerm(t.c, t.factors, t.p + power) for t in self.terms)

    def __mul__(self, other: 'ProductExpression') -> 'ProductExpression':
        return ProductExpression(a * b for a in self.terms for b in other.terms)

    def __pow__(self, exponent: int) -> 'ProductExpression':
        if exponent < 0:
            raise DomainError("negative powers of a product expression are not supported")
        result = ProductExpression.constant(1)
        for _ in range(exponent):
            result = result * self
        return result

    def substitute(self, x: Union[Angle, RationalLike]) -> 'ProductExpression':
        """Replace the symbol x by an exact value."""
        x = Angle.coerce(x)
        unit = ProductTerm(PiPoly.one())
        # multiplying by one merges factors that coincide once x is fixed
        return ProductExpression(
            unit * ProductTerm(t.c, tuple(f.substitute(x) if f.has_symbol() else f for f in t.factors), t.p)
            for t in self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProductExpression):
            return NotImplemented
        return sorted(map(str, self.terms)) == sorted(map(str, other.terms))

    def __hash__(self) -> int:
        return hash(tuple(sorted(map(str, self.terms))))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        text = str(self.terms[0])
        for term in self.terms[1:]:
            rendered = str(term)
            text += f" - {rendered[1:]}" if rendered.startswith("-") else f" + {rendered}"
        return text

    def __repr__(self) -> str:
        return f"ProductExpression({str(self)!r})"


def series_in_x(coeffs: CoefficientFormula, kind: TrigKind = TrigKind.SIN) -> ProductExpression:
    """The series sum coeffs(n) * trig(n*x) as a product expression in x."""
    carrier = Factor(kind, Angle(), 1, 1)
    terms = []
    for term in coeffs:
        factors = (carrier,) if term.is_constant() else tuple(
            sorted((Factor(term.kind, term.beta), carrier)))
        terms.append(ProductTerm(term.c, factors, term.p))
    return ProductExpression(terms)


def expand_products(e: ProductExpression) -> SeriesExpression:
    """Linearise every product of trigonometric factors.

    Args:
        e: a product expression without the symbol x

    Returns:
        SeriesExpression: canonical sum of TrigTerms

    Raises:
        DegreeOverflowError: if a term has total trigonometric degree above the cap
    """
    if e.has_symbol():
        raise DomainError("substitute a value for x before expanding")
    expanded: List[TrigTerm] = []
    for term in e.terms:
        if term.trig_degree > MAX_TRIG_DEGREE:
            raise DegreeOverflowError(
                f"trigonometric degree {term.trig_degree} exceeds {MAX_TRIG_DEGREE}")
        formula = CoefficientFormula([TrigTerm.constant(term.c, term.p)])
        for factor in term.factors:
            single = CoefficientFormula([TrigTerm.make(1, factor.kind, factor.alpha, 0)])
            for _ in range(factor.power):
                formula = formula * single
        expanded.extend(formula.terms)
    return SeriesExpression(expanded)


@dataclass(frozen=True)
class BernoulliPoly:
    """B_k(x); ``coefficients[j]`` is the coefficient of x**j."""
    k: int
    coefficients: Tuple[Fraction, ...] = field(default=())

    def evaluate(self, x: Union[PiPoly, RationalLike]) -> PiPoly:
        point = PiPoly.coerce(x)
        total = PiPoly.zero()
        for c in reversed(self.coefficients):
            total = total * point + c
        return total

    def __str__(self) -> str:
        parts = []
        for j in range(len(self.coefficients) - 1, -1, -1):
            c = self.coefficients[j]
            if c == 0:
                continue
            power = "" if j == 0 else ("x" if j == 1 else f"x^{j}")
            magnitude = abs(c)
            body = str(magnitude) if not power else (power if magnitude == 1 else f"{magnitude}*{power}")
            if not parts:
                parts.append(f"-{body}" if c < 0 else body)
            else:
                parts.append(f"{'-' if c < 0 else '+'} {body}")
        return " ".join(parts) or "0"


@functools.lru_cache(maxsize=None)
def bernoulli_number(m: int) -> Fraction:
    """B_m with the convention B_1 = -1/2, from sum_{j<=m} C(m+1, j) B_j = 0."""
    if m == 0:
        return Fraction(1)
    return -sum((comb(m + 1, j) * bernoulli_number(j) for j in range(m)), Fraction(0)) / (m + 1)


def bernoulli_polynomial(k: int) -> BernoulliPoly:
    """Exact B_k(x) = sum_j C(k, j) B_j x**(k-j) for 0 <= k <= 20."""
    if not 0 <= k <= MAX_BERNOULLI_INDEX:
        raise DomainError(f"Bernoulli index must lie in [0, {MAX_BERNOULLI_INDEX}], got {k}")
    coefficients = [Fraction(0)] * (k + 1)
    for j in range(k + 1):
        coefficients[k - j] = comb(k, j) * bernoulli_number(j)
    return BernoulliPoly(k, tuple(coefficients))


def scaled_bernoulli(p: int, beta: Angle) -> PiPoly:
    """(2 pi)**p * B_p(beta / 2 pi), expanded without negative powers of pi."""
    two_pi = PiPoly.monomial(2, 1)
    beta_poly = beta.to_pipoly()
    total = PiPoly.zero()
    for j in range(p + 1):
        b = bernoulli_number(j)
        if b == 0:
            continue
        total = total + ((two_pi ** j) * (beta_poly ** (p - j))).scale(comb(p, j) * b)
    return total


def term_closed_form(term: TrigTerm) -> PiPoly:
    """Exact value of the series sum over n >= 1 of one canonical term."""
    p = term.p
    if p < 1:
        raise NotClosedFormError(term, "the series diverges")
    if term.kind is TrigKind.SIN and p % 2 == 1:
        k = (p - 1) // 2
    elif term.kind is TrigKind.COS and p % 2 == 0:
        k = p // 2
    else:
        raise NotClosedFormError(term, f"{term.kind.name.lower()} needs "
                                       f"{'odd' if term.kind is TrigKind.SIN else 'even'} p")
    if p > MAX_BERNOULLI_INDEX:
        raise NotClosedFormError(term, f"power {p} exceeds the Bernoulli table")
    sign = 1 if (k + 1) % 2 == 0 else -1
    value = scaled_bernoulli(p, term.beta).scale(Fraction(sign, 2 * factorial(p)))
    logging.debug(f"sum {term} uses B_{p}: {value}")
    return value * term.c


def sum_closed_form(e: CoefficientFormula) -> PiPoly:
    """Exact value of the series over n >= 1 of every term of ``e``.

    Args:
        e: canonical series

    Returns:
        PiPoly: the value

    Raises:
        NotClosedFormError: if any term violates the parity rules
    """
    total = PiPoly.zero()
    for term in e.terms:
        total = total + term_closed_form(term)
    return total


def evaluate_sum(e: ProductExpression) -> PiPoly:
    """Expand and sum a product expression."""
    return sum_closed_form(expand_products(e))


class IndexMode(Enum):
    """Restriction or reweighting of the summation index."""
    ALL = auto()
    EVEN_PART = auto()
    ODD_PART = auto()
    ALTERNATE_SIGN = auto()

    @classmethod
    def from_string(cls, mode_str: str) -> 'IndexMode':
        aliases = {"all": cls.ALL, "even": cls.EVEN_PART, "odd": cls.ODD_PART,
                   "alt": cls.ALTERNATE_SIGN, "alternate": cls.ALTERNATE_SIGN}
        key = mode_str.strip().lower()
        if key in aliases:
            return aliases[key]
        return cls[key.upper()]


def index_transform(e: CoefficientFormula, mode: IndexMode) -> SeriesExpression:
    """Restrict a series to even or odd n, or give it alternating signs.

    The even part reindexes n = 2m, mapping c*T(b*n)/n**p to c*T(2b*m)/(2**p m**p);
    the odd part is the remainder; the alternating version multiplies by
    -cos(pi*n), so its n-th term carries (-1)**(n+1).
    """
    series = SeriesExpression(e.terms)
    if mode is IndexMode.ALL:
        return series
    if mode is IndexMode.EVEN_PART:
        return SeriesExpression(
            TrigTerm.make(t.c.scale(Fraction(1, 2) ** t.p), t.kind, t.beta * 2, t.p) for t in e.terms)
    if mode is IndexMode.ODD_PART:
        return series - index_transform(e, IndexMode.EVEN_PART)
    return series * SeriesExpression([TrigTerm.make(-1, TrigKind.COS, PI, 0)])
