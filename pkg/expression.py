"""
Expression module for the pi-series toolkit.

This module parses the small text language used on the command line, e.g.
``sum (sin(n)/n)^3 * sin(3*n)/n`` or ``sum[odd] sin(n)*sin(x*n)/n^2``, into a
ProductExpression together with the requested index mode. The grammar is
documented in docs/EXPRESSIONS.md.

Syntax errors carry the character position and the tokens that would have been
accepted there.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from closedform import Factor, IndexMode, ProductExpression, ProductTerm
from exactnum import Angle, DomainError, PiPoly, PiSeriesError
from fourier import TrigKind

TOKEN_PATTERN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]+)|(.))")

FUNCTIONS = {"sin": TrigKind.SIN, "cos": TrigKind.COS}
INDEX_MODES = {"even", "odd", "alt"}
KEYWORDS = {"sum", "pi", "n", "x", "sinc"} | set(FUNCTIONS) | INDEX_MODES


class ExpressionSyntaxError(PiSeriesError):
    """The input text is not a valid expression."""

    def __init__(self, message: str, position: int, expected: Sequence[str] = ()):
        detail = f" (expected {', '.join(expected)})" if expected else ""
        super().__init__(f"{message} at position {position}{detail}")
        self.position = position
        self.expected = list(expected)


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "ident", "op" or "end"
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    position = 0
    while position < len(text):
        match = TOKEN_PATTERN.match(text, position)
        if match is None or match.end() == position:
            break
        number, ident, op = match.groups()
        start = match.start(match.lastindex)
        if number is not None:
            tokens.append(Token("int", number, start))
        elif ident is not None:
            if ident not in KEYWORDS:
                raise ExpressionSyntaxError(f"unknown name {ident!r}", start, sorted(KEYWORDS))
            tokens.append(Token("ident", ident, start))
        elif op is not None and not op.isspace():
            if op not in "+-*/^()[]":
                raise ExpressionSyntaxError(f"unexpected character {op!r}", start)
            tokens.append(Token("op", op, start))
        position = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


# Linear forms inside trig arguments: monomials keyed by (power of n, power of pi, power of x)
Monomial = Tuple[int, int, int]
LinearForm = Dict[Monomial, Fraction]


def _form_add(a: LinearForm, b: LinearForm, sign: int = 1) -> LinearForm:
    result = dict(a)
    for key, value in b.items():
        result[key] = result.get(key, Fraction(0)) + sign * value
    return {k: v for k, v in result.items() if v != 0}


def _form_mul(a: LinearForm, b: LinearForm) -> LinearForm:
    result: LinearForm = {}
    for (n1, p1, x1), v1 in a.items():
        for (n2, p2, x2), v2 in b.items():
            key = (n1 + n2, p1 + p2, x1 + x2)
            result[key] = result.get(key, Fraction(0)) + v1 * v2
    return {k: v for k, v in result.items() if v != 0}


@dataclass(frozen=True)
class ParsedExpression:
    """A parsed series: the summand and how the index runs."""
    expression: ProductExpression
    mode: IndexMode = IndexMode.ALL
    explicit_sum: bool = False


class Parser:
    """Recursive-descent parser over the token list."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def _accept(self, text: str) -> bool:
        if self.current.text == text and self.current.kind != "end":
            self.index += 1
            return True
        return False

    def _expect(self, text: str) -> Token:
        if self.current.text != text or self.current.kind == "end":
            raise ExpressionSyntaxError(f"found {self.current.text or 'end of input'!r}",
                                        self.current.position, [repr(text)])
        return self._advance()

    def _starts_atom(self) -> bool:
        token = self.current
        return token.kind in ("int", "ident") or token.text == "("

    # Top level

    def parse(self) -> ParsedExpression:
        explicit = False
        mode = IndexMode.ALL
        if self._accept("sum"):
            explicit = True
            if self._accept("["):
                mode = self._index_mode(self._advance())
                self._expect("]")
        expression = self._expression()
        if self.current.kind != "end":
            raise ExpressionSyntaxError(f"unexpected {self.current.text!r}", self.current.position,
                                        ["'+'", "'-'", "'*'", "'/'", "end of input"])
        return ParsedExpression(expression, mode, explicit)

    def _index_mode(self, token: Token) -> IndexMode:
        try:
            return IndexMode.from_string(token.text)
        except KeyError:
            raise ExpressionSyntaxError(f"unknown index mode {token.text!r}", token.position,
                                        ["even", "odd", "alt"])

    def _expression(self) -> ProductExpression:
        result = self._term()
        while self.current.text in ("+", "-") and self.current.kind == "op":
            op = self._advance().text
            right = self._term()
            result = result + right if op == "+" else result - right
        return result

    def _term(self) -> ProductExpression:
        result = self._unary()
        while True:
            if self._accept("*"):
                result = result * self._unary()
            elif self.current.text == "/" and self.current.kind == "op":
                token = self._advance()
                result = self._divide(result, self._unary(), token.position)
            else:
                return result

    def _divide(self, numerator: ProductExpression, denominator: ProductExpression,
                position: int) -> ProductExpression:
        if len(denominator.terms) != 1 or denominator.terms[0].factors:
            raise ExpressionSyntaxError("can only divide by a constant times a power of n", position)
        term = denominator.terms[0]
        try:
            inverse = PiPoly.one() / term.c
        except (DomainError, ZeroDivisionError) as e:
            raise ExpressionSyntaxError(f"invalid divisor {term.c}: {e}", position)
        return numerator.scale(inverse).divide_by_n(-term.p)

    def _unary(self) -> ProductExpression:
        if self._accept("-"):
            return -self._unary()
        if self._accept("+"):
            return self._unary()
        return self._power()

    def _power(self) -> ProductExpression:
        base = self._implicit_product()
        if not self._accept("^"):
            return base
        if self.current.kind == "int":
            return base ** int(self._advance().text)
        return self._sign_power(base)

    def _implicit_product(self) -> ProductExpression:
        atom = self._atom()
        previous = self.tokens[self.index - 1]
        # "3pi", "2n", "2(…)": a literal immediately followed by another atom
        if previous.kind == "int" and self._starts_atom() and self.current.kind != "int":
            return atom * self._power()
        return atom

    def _sign_power(self, base: ProductExpression) -> ProductExpression:
        """(-1)^n, (-1)^(n+k): encoded as cos(pi*n) up to a sign."""
        position = self.current.position
        if len(base.terms) != 1 or base.terms[0].factors or base.terms[0].p != 0 \
                or base.terms[0].c not in (PiPoly.one(), -PiPoly.one()):
            raise ExpressionSyntaxError("only +1 or -1 may be raised to a power of n", position)
        shift = 0
        if self._accept("("):
            self._expect("n")
            if self.current.text in ("+", "-"):
                sign = 1 if self._advance().text == "+" else -1
                if self.current.kind != "int":
                    raise ExpressionSyntaxError("expected an integer shift", self.current.position,
                                                ["integer"])
                shift = sign * int(self._advance().text)
            self._expect(")")
        else:
            self._expect("n")
        if base.terms[0].c == PiPoly.one():
            return ProductExpression.constant(1)
        return ProductExpression.factor(TrigKind.COS, Angle.pi_multiple(1)).scale((-1) ** (shift % 2))

    def _atom(self) -> ProductExpression:
        token = self.current
        if token.kind == "int":
            self._advance()
            return ProductExpression.constant(int(token.text))
        if token.kind == "ident":
            self._advance()
            if token.text == "pi":
                return ProductExpression.constant(PiPoly.pi())
            if token.text == "n":
                return ProductExpression.constant(1, p=-1)
            if token.text in FUNCTIONS:
                return self._trig(FUNCTIONS[token.text], token)
            if token.text == "sinc":
                self._expect("(")
                alpha, x_coeff = self._argument()
                self._expect(")")
                if x_coeff:
                    raise ExpressionSyntaxError("sinc does not accept x", token.position)
                return ProductExpression.sinc(alpha).scale(PiPoly.one() / _alpha_scale(alpha, token))
            raise ExpressionSyntaxError(f"{token.text!r} cannot appear here", token.position,
                                        ["number", "pi", "n", "sin", "cos", "'('"])
        if self._accept("("):
            inner = self._expression()
            self._expect(")")
            return inner
        raise ExpressionSyntaxError(f"found {token.text or 'end of input'!r}", token.position,
                                    ["number", "pi", "n", "sin", "cos", "'('"])

    def _trig(self, kind: TrigKind, token: Token) -> ProductExpression:
        self._expect("(")
        alpha, x_coeff = self._argument()
        self._expect(")")
        return ProductExpression([ProductTerm(PiPoly.one(), (Factor(kind, alpha, 1, x_coeff),), 0)])

    # Trig arguments

    def _argument(self) -> Tuple[Angle, Fraction]:
        start = self.current.position
        form = self._linear_sum()
        allowed = {(1, 0, 0), (1, 1, 0), (1, 0, 1)}
        if not form or any(key not in allowed for key in form):
            raise ExpressionSyntaxError(
                "a trig argument must be n times (rational + rational*pi + rational*x)", start)
        alpha = Angle(form.get((1, 0, 0), Fraction(0)), form.get((1, 1, 0), Fraction(0)))
        return alpha, form.get((1, 0, 1), Fraction(0))

    def _linear_sum(self) -> LinearForm:
        result = self._linear_product()
        while self.current.text in ("+", "-") and self.current.kind == "op":
            sign = 1 if self._advance().text == "+" else -1
            result = _form_add(result, self._linear_product(), sign)
        return result

    def _linear_product(self) -> LinearForm:
        result = self._linear_unary()
        while True:
            if self._accept("*"):
                result = _form_mul(result, self._linear_unary())
            elif self.current.text == "/" and self.current.kind == "op":
                token = self._advance()
                divisor = self._linear_unary()
                if set(divisor) != {(0, 0, 0)}:
                    raise ExpressionSyntaxError("trig arguments may only be divided by numbers",
                                                token.position)
                result = {k: v / divisor[(0, 0, 0)] for k, v in result.items()}
            elif self._starts_atom() and self.tokens[self.index - 1].kind == "int":
                result = _form_mul(result, self._linear_unary())
            else:
                return result

    def _linear_unary(self) -> LinearForm:
        if self._accept("-"):
            return {k: -v for k, v in self._linear_unary().items()}
        if self._accept("+"):
            return self._linear_unary()
        token = self.current
        if token.kind == "int":
            self._advance()
            value = Fraction(int(token.text))
            return {(0, 0, 0): value} if value else {}
        if token.kind == "ident" and token.text in ("n", "pi", "x"):
            self._advance()
            return {{"n": (1, 0, 0), "pi": (0, 1, 0), "x": (0, 0, 1)}[token.text]: Fraction(1)}
        if self._accept("("):
            inner = self._linear_sum()
            self._expect(")")
            return inner
        raise ExpressionSyntaxError(f"found {token.text or 'end of input'!r} in a trig argument",
                                    token.position, ["number", "n", "pi", "x", "'('"])


def _alpha_scale(alpha: Angle, token: Token) -> PiPoly:
    value = alpha.to_pipoly()
    if not value.is_monomial():
        raise ExpressionSyntaxError("sinc needs an argument c*n or c*pi*n", token.position)
    return value


def parse_expression(text: str) -> ParsedExpression:
    """Parse a series in the command-line language.

    Args:
        text: e.g. ``"sum (sin(n)/n)^7"``

    Returns:
        ParsedExpression: summand and index mode

    Raises:
        ExpressionSyntaxError: with the failing position and the expected tokens
    """
    return Parser(text).parse()


def parse_angle(text: str) -> Angle:
    """Parse a constant r + s*pi, e.g. ``"pi/2"``, ``"7"`` or ``"2*pi - 3"``."""
    parser = Parser(text)
    form = parser._linear_sum()
    if parser.current.kind != "end":
        raise ExpressionSyntaxError(f"unexpected {parser.current.text!r}", parser.current.position)
    if any(key not in {(0, 0, 0), (0, 1, 0)} for key in form):
        raise ExpressionSyntaxError("an angle must be rational + rational*pi", 0)
    return Angle(form.get((0, 0, 0), Fraction(0)), form.get((0, 1, 0), Fraction(0)))


def parse_pipoly(text: str) -> PiPoly:
    """Parse a constant polynomial in pi, e.g. ``"-1/2 + 23/96*pi"``."""
    parsed = parse_expression(text)
    terms = parsed.expression.terms
    if parsed.explicit_sum or any(t.factors or t.p for t in terms):
        raise ExpressionSyntaxError("expected a constant polynomial in pi", 0)
    return sum((t.c for t in terms), PiPoly.zero())
