"""
Relation module for the pi-series toolkit.

This module finds small integer relations among real numbers with LLL lattice
reduction, and uses them to recognize a decimal as an element of Q[pi]. All
lattice arithmetic is exact: vectors hold Python integers and the Gram-Schmidt
data is kept in Fractions.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import mpmath

from constants import (DEFAULT_HEIGHT_CAP, DEFAULT_LLL_DELTA, GUARD_DIGITS, MIN_RECOGNITION_DIGITS,
                       RECOGNITION_MARGIN_DIGITS, RELATION_GUARD_DIGITS)
from exactnum import PiPoly, PiSeriesError

Vector = List[int]
DecimalLike = Union[str, float, Fraction, mpmath.mpf]


class DependentLatticeError(PiSeriesError):
    """The lattice basis vectors are linearly dependent."""


def _dot(v1: Sequence, v2: Sequence):
    return sum(x1 * x2 for x1, x2 in zip(v1, v2))


def gram_schmidt(basis: Sequence[Sequence[int]]) -> Tuple[List[List[Fraction]], List[List[Fraction]]]:
    """Orthogonalize a basis without normalizing.

    Returns:
        Tuple: orthogonal vectors b*_i and the coefficients mu[i][j] = <b_i, b*_j> / <b*_j, b*_j>
    """
    ortho: List[List[Fraction]] = []
    mu = [[Fraction(0)] * len(basis) for _ in basis]
    for i, vector in enumerate(basis):
        current = [Fraction(x) for x in vector]
        for j in range(i):
            mu[i][j] = Fraction(_dot(vector, ortho[j])) / _dot(ortho[j], ortho[j])
            current = [a - mu[i][j] * b for a, b in zip(current, ortho[j])]
        if not any(current):
            raise DependentLatticeError(f"basis vector {i} depends on the previous ones")
        ortho.append(current)
        mu[i][i] = Fraction(1)
    return ortho, mu


@dataclass(frozen=True)
class Lattice:
    """An integer lattice given by a row-major basis of independent vectors."""
    basis: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.basis)
        if not rows:
            raise ValueError("a lattice needs at least one basis vector")
        if len({len(row) for row in rows}) != 1:
            raise ValueError("lattice basis vectors must have equal dimension")
        if len(rows) > len(rows[0]):
            raise DependentLatticeError(f"{len(rows)} vectors in dimension {len(rows[0])} are dependent")
        object.__setattr__(self, "basis", rows)
        gram_schmidt(rows)

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]]) -> 'Lattice':
        return cls(tuple(tuple(row) for row in rows))

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def dimension(self) -> int:
        return len(self.basis[0])

    def gram_determinant(self) -> Fraction:
        """Determinant of the Gram matrix, the squared covolume of the lattice."""
        ortho, _ = gram_schmidt(self.basis)
        return math.prod((_dot(v, v) for v in ortho), start=Fraction(1))

    def is_size_reduced(self) -> bool:
        _, mu = gram_schmidt(self.basis)
        return all(abs(mu[i][j]) <= Fraction(1, 2) for i in range(self.rank) for j in range(i))

    def satisfies_lovasz(self, delta: Fraction = DEFAULT_LLL_DELTA) -> bool:
        """Check delta*|b*_{k-1}|^2 <= |b*_k|^2 + mu[k][k-1]^2 |b*_{k-1}|^2 for every k."""
        ortho, mu = gram_schmidt(self.basis)
        for k in range(1, self.rank):
            previous = _dot(ortho[k - 1], ortho[k - 1])
            if _dot(ortho[k], ortho[k]) < (delta - mu[k][k - 1] ** 2) * previous:
                return False
        return True

    def __str__(self) -> str:
        return "\n".join(" ".join(str(x) for x in row) for row in self.basis)


def lll_reduce(lattice: Lattice, delta: Fraction = DEFAULT_LLL_DELTA) -> Lattice:
    """Reduce a lattice basis with the Lenstra-Lenstra-Lovasz algorithm.

    Args:
        lattice: basis to reduce
        delta: Lovasz parameter in (1/4, 1]

    Returns:
        Lattice: a size-reduced basis of the same lattice satisfying the Lovasz condition

    Raises:
        DependentLatticeError: if the input vectors are dependent
    """
    delta = Fraction(delta)
    if not Fraction(1, 4) < delta <= 1:
        raise ValueError(f"delta must lie in (1/4, 1], got {delta}")
    basis = [list(row) for row in lattice.basis]
    ortho, mu = gram_schmidt(basis)
    swaps = 0
    k = 1
    while k < len(basis):
        for j in reversed(range(k)):
            if abs(mu[k][j]) > Fraction(1, 2):
                q = round(mu[k][j])
                basis[k] = [a - q * b for a, b in zip(basis[k], basis[j])]
                for i in range(j + 1):
                    mu[k][i] -= q * mu[j][i]
        norm_k = _dot(ortho[k], ortho[k])
        norm_previous = _dot(ortho[k - 1], ortho[k - 1])
        if norm_k >= (delta - mu[k][k - 1] ** 2) * norm_previous:
            k += 1
        else:
            basis[k], basis[k - 1] = basis[k - 1], basis[k]
            ortho, mu = gram_schmidt(basis)
            swaps += 1
            k = max(k - 1, 1)
    logging.debug(f"LLL reduced a rank-{len(basis)} lattice with {swaps} swaps")
    return Lattice.of(basis)


@dataclass(frozen=True)
class RecognitionResult:
    """An exact candidate for a decimal, with the relation that produced it.

    ``relation`` is (m0, m1, ..., md) with m0*v + m1*c1 + ... + md*cd close to zero.
    """
    candidate: PiPoly
    relation: Tuple[int, ...]
    residual: mpmath.mpf
    confidence_digits: int

    @property
    def height(self) -> int:
        return max(abs(m) for m in self.relation)

    def to_json(self) -> Dict[str, object]:
        return {"candidate": str(self.candidate), "pi_coeffs": self.candidate.to_json(),
                "relation": list(self.relation), "residual": mpmath.nstr(self.residual, 5),
                "confidence_digits": self.confidence_digits}

    def __str__(self) -> str:
        return f"{self.candidate} (residual {mpmath.nstr(self.residual, 3)}, {self.confidence_digits} digits)"


def parse_basis(text: str) -> List[PiPoly]:
    """Read a comma-separated basis such as ``1,pi,pi^2``."""
    from expression import parse_pipoly

    basis = [parse_pipoly(part) for part in text.split(",") if part.strip()]
    if not basis:
        raise ValueError(f"empty recognition basis {text!r}")
    return basis


def _as_mpf(v: DecimalLike) -> mpmath.mpf:
    if isinstance(v, Fraction):
        return mpmath.mpf(v.numerator) / v.denominator
    return mpmath.mpf(v)


def _confidence(residual: mpmath.mpf, digits: int) -> int:
    if residual == 0:
        return digits
    return int(mpmath.floor(-mpmath.log10(residual)))


def _try_precision(value: mpmath.mpf, basis_values: List[mpmath.mpf], basis: List[PiPoly],
                   digits: int, height_cap: int) -> Optional[RecognitionResult]:
    scale = mpmath.mpf(10) ** digits
    entries = [value] + basis_values
    size = len(entries)
    rows = [[1 if i == j else 0 for j in range(size)] + [int(mpmath.nint(x * scale))]
            for i, x in enumerate(entries)]
    try:
        reduced = lll_reduce(Lattice.of(rows))
    except DependentLatticeError:
        return None
    for row in sorted(reduced.basis, key=lambda r: _dot(r, r)):
        relation = list(row[:size])
        if relation[0] == 0 or max(abs(m) for m in relation) > height_cap:
            continue
        if relation[0] < 0:
            relation = [-m for m in relation]
        candidate = sum((b.scale(Fraction(-m, relation[0])) for m, b in zip(relation[1:], basis)),
                        PiPoly.zero())
        residual = abs(candidate.to_mpf() - value)
        if residual > mpmath.mpf(10) ** -(digits - RELATION_GUARD_DIGITS):
            continue
        height = max(abs(m) for m in relation)
        explained = size * math.log10(height) if height > 1 else 0.0
        if residual and -mpmath.log10(residual) - explained < RECOGNITION_MARGIN_DIGITS:
            continue
        return RecognitionResult(candidate, tuple(relation), residual, _confidence(residual, digits))
    return None


def recognize_constant(v: DecimalLike, basis: Optional[Sequence[PiPoly]] = None, digits: int = 15,
                       height_cap: int = DEFAULT_HEIGHT_CAP) -> Optional[RecognitionResult]:
    """Identify a decimal as a rational combination of basis constants.

    The integer-relation lattice rows are e_i followed by round(10**d * x_i) for
    x = (v, c1, ..., cd). A reduced row with m0 != 0 gives the candidate
    -(m1*c1 + ... + md*cd)/m0. It is accepted when its residual stays below
    10**-(d-4), its height below ``height_cap``, and the residual beats the
    digits the relation could explain by chance. When no row qualifies, d is
    lowered one digit at a time down to the recognition floor, since inputs
    with wrong trailing digits only show their relation at lower precision.

    Args:
        v: the decimal, preferably as a string to keep every printed digit
        basis: constants to combine, default {1, pi}
        digits: precision of the input in decimal digits, at least MIN_RECOGNITION_DIGITS (6)
        height_cap: largest integer allowed in the relation

    Returns:
        RecognitionResult or None: the candidate, or None when nothing qualifies
    """
    if digits < MIN_RECOGNITION_DIGITS:
        raise ValueError(f"recognition needs at least {MIN_RECOGNITION_DIGITS} digits, got {digits}")
    basis = list(basis) if basis else [PiPoly.one(), PiPoly.pi()]
    with mpmath.workdps(digits + GUARD_DIGITS + 10):
        value = _as_mpf(v)
        basis_values = [b.to_mpf() for b in basis]
        for d in range(digits, MIN_RECOGNITION_DIGITS - 1, -1):
            result = _try_precision(value, basis_values, basis, d, height_cap)
            if result is not None:
                if d < digits:
                    logging.warning(f"recognized {mpmath.nstr(value, digits)} only at {d} digits")
                logging.info(f"recognized {mpmath.nstr(value, digits)} as {result}")
                return result
    logging.info(f"no relation found for {mpmath.nstr(value, digits)} over {[str(b) for b in basis]}")
    return None
