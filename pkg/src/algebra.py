"""Exact arithmetic substrate: integer square roots, square classes,
dense univariate polynomials over Q, cubic discriminants, rational roots,
cubic factorisation and resultants.

Rationals are ``fractions.Fraction`` throughout; sympy supplies the number
theory (``integer_nthroot``, ``factorint``, ``divisors``) and the resultant.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import List, Optional, Sequence, Tuple, Union

import sympy as sp
from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix

from .exceptions import ValidationError

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]

_X = sp.Symbol('x')


def to_fraction(value) -> Fraction:
    """Convert ints, Fractions and sympy rationals to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, sp.Basic):
        rational = sp.Rational(value)
        return Fraction(int(rational.p), int(rational.q))
    raise ValidationError(f"Cannot use {value!r} as an exact rational")


def to_sympy(value: Scalar) -> sp.Rational:
    value = to_fraction(value)
    return sp.Rational(value.numerator, value.denominator)


def integer_sqrt(z: int) -> Tuple[int, bool]:
    """Return (floor(sqrt(z)), exact)."""
    if z < 0:
        raise ValidationError(f"integer_sqrt needs a nonnegative input, got {z}")
    root, exact = sp.integer_nthroot(z, 2)
    return int(root), bool(exact)


def integer_cbrt(z: int) -> int:
    """Floor of the real cube root of a nonnegative integer."""
    if z < 0:
        raise ValidationError(f"integer_cbrt needs a nonnegative input, got {z}")
    root, _ = sp.integer_nthroot(z, 3)
    return int(root)


def is_square(q: Scalar) -> bool:
    """True iff q is the square of a rational (zero counts as a square)."""
    q = to_fraction(q)
    if q < 0:
        return False
    return integer_sqrt(q.numerator)[1] and integer_sqrt(q.denominator)[1]


@dataclass(frozen=True)
class SquareClass:
    """Element of Q*/Q*^2 as a signed squarefree integer; 0 is the zero class."""
    value: int

    def __post_init__(self):
        if self.value != 0:
            for exponent in sp.factorint(abs(self.value)).values():
                if exponent > 1:
                    raise ValidationError(
                        f"{self.value} is not squarefree")

    @classmethod
    def zero(cls) -> 'SquareClass':
        return cls(0)

    @property
    def is_zero(self) -> bool:
        return self.value == 0

    @property
    def is_trivial(self) -> bool:
        return self.value == 1

    def __mul__(self, other: 'SquareClass') -> 'SquareClass':
        if self.is_zero or other.is_zero:
            return SquareClass.zero()
        return square_class(self.value * other.value)

    def __int__(self) -> int:
        return self.value

    def __str__(self) -> str:
        return str(self.value)


def square_class(q: Scalar) -> SquareClass:
    """Squarefree integer s with q/s a rational square."""
    q = to_fraction(q)
    if q == 0:
        raise ValidationError(
            "square_class is undefined at 0; use SquareClass.zero()")
    # q and num*den differ by the square den^2
    product = q.numerator * q.denominator
    sign = -1 if product < 0 else 1
    core = 1
    for prime, exponent in sp.factorint(abs(product)).items():
        if exponent % 2:
            core *= prime
    return SquareClass(sign * core)


@dataclass(frozen=True)
class Poly:
    """Dense univariate polynomial over Q, coefficients low to high degree.

    The zero polynomial has no coefficients; otherwise the last coefficient
    is nonzero.
    """
    coeffs: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        coeffs = [to_fraction(c) for c in self.coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, 'coeffs', tuple(coeffs))

    @classmethod
    def of(cls, *coeffs: Scalar) -> 'Poly':
        """Build from coefficients given low to high degree."""
        return cls(tuple(coeffs))

    @classmethod
    def from_high(cls, *coeffs: Scalar) -> 'Poly':
        """Build from coefficients given high to low degree."""
        return cls(tuple(reversed(coeffs)))

    @classmethod
    def x(cls) -> 'Poly':
        return cls.of(0, 1)

    @classmethod
    def constant(cls, c: Scalar) -> 'Poly':
        return cls.of(c)

    @classmethod
    def from_expr(cls, expr, symbol) -> 'Poly':
        coeffs = sp.Poly(sp.expand(expr), symbol).all_coeffs()
        return cls.from_high(*[to_fraction(c) for c in coeffs])

    def as_expr(self, symbol):
        return sum((to_sympy(c) * symbol ** i
                    for i, c in enumerate(self.coeffs)), sp.Integer(0))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        if self.is_zero:
            raise ValidationError("The zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def is_monic(self) -> bool:
        return not self.is_zero and self.lead == 1

    def monic(self) -> 'Poly':
        return self * (1 / self.lead)

    def _coerce(self, other) -> 'Poly':
        if isinstance(other, Poly):
            return other
        return Poly.constant(to_fraction(other))

    def __add__(self, other) -> 'Poly':
        other = self._coerce(other)
        size = max(len(self.coeffs), len(other.coeffs))
        return Poly(tuple(self.coeff(i) + other.coeff(i) for i in range(size)))

    __radd__ = __add__

    def __neg__(self) -> 'Poly':
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other) -> 'Poly':
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> 'Poly':
        return self._coerce(other) - self

    def __mul__(self, other) -> 'Poly':
        other = self._coerce(other)
        if self.is_zero or other.is_zero:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> 'Poly':
        result = Poly.constant(1)
        for _ in range(exponent):
            result = result * self
        return result

    def to_sympy_poly(self) -> sp.Poly:
        return sp.Poly([to_sympy(c) for c in reversed(self.coeffs)] or [0], _X, domain=sp.QQ)

    @classmethod
    def from_sympy_poly(cls, poly: sp.Poly) -> 'Poly':
        return cls.from_high(*[to_fraction(c) for c in poly.all_coeffs()])

    def __divmod__(self, other) -> Tuple['Poly', 'Poly']:
        other = self._coerce(other)
        if other.is_zero:
            raise ValidationError("Polynomial division by zero")
        quotient, remainder = self.to_sympy_poly().div(other.to_sympy_poly())
        return Poly.from_sympy_poly(quotient), Poly.from_sympy_poly(remainder)

    def __floordiv__(self, other) -> 'Poly':
        return divmod(self, other)[0]

    def __mod__(self, other) -> 'Poly':
        return divmod(self, other)[1]

    def __call__(self, value):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def compose(self, inner: 'Poly') -> 'Poly':
        acc = Poly()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def derivative(self) -> 'Poly':
        return Poly(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def gcd(self, other: 'Poly') -> 'Poly':
        """Monic gcd (zero if both are zero)."""
        g = Poly.from_sympy_poly(self.to_sympy_poly().gcd(other.to_sympy_poly()))
        return g if g.is_zero else g.monic()

    def is_squarefree(self) -> bool:
        return self.degree <= 0 or self.to_sympy_poly().is_sqf

    def integer_coeffs(self) -> List[int]:
        """Coefficients (low to high) scaled by the lcm of the denominators."""
        scale = lcm(*(c.denominator for c in self.coeffs)) if self.coeffs else 1
        return [int(c * scale) for c in self.coeffs]

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                terms.append(f"{c}")
            else:
                mono = "x" if i == 1 else f"x^{i}"
                if c == 1:
                    terms.append(mono)
                elif c == -1:
                    terms.append(f"-{mono}")
                else:
                    terms.append(f"{c}*{mono}")
        return " + ".join(terms).replace("+ -", "- ")


def cubic_discriminant(f: Poly) -> Fraction:
    """disc(x^3+px^2+qx+r) = 18pqr - 4p^3r + p^2q^2 - 4q^3 - 27r^2."""
    if f.degree != 3 or not f.is_monic():
        raise ValidationError(f"cubic_discriminant needs a monic cubic, got {f}")
    r, q, p = f.coeff(0), f.coeff(1), f.coeff(2)
    return (18 * p * q * r - 4 * p ** 3 * r + p ** 2 * q ** 2
            - 4 * q ** 3 - 27 * r ** 2)


def rational_roots(f: Poly) -> List[Fraction]:
    """Distinct rational roots of a nonzero polynomial, sorted ascending.

    For monic integer input these are integers dividing the constant term.
    """
    if f.is_zero:
        raise ValidationError("rational_roots of the zero polynomial")
    coeffs = f.integer_coeffs()
    roots = set()
    while coeffs and coeffs[0] == 0:
        roots.add(Fraction(0))
        coeffs = coeffs[1:]
    if len(coeffs) <= 1:
        return sorted(roots)
    constant, leading = abs(coeffs[0]), abs(coeffs[-1])
    reduced = Poly(tuple(coeffs))
    for num in sp.divisors(constant):
        for den in sp.divisors(leading):
            for candidate in (Fraction(num, den), Fraction(-num, den)):
                if candidate not in roots and reduced(candidate) == 0:
                    roots.add(candidate)
    return sorted(roots)


@dataclass(frozen=True)
class CubicFactorization:
    """f = unit * prod(x - root) * irreducible (irreducible may be absent)."""
    unit: Fraction
    linear_roots: Tuple[Fraction, ...]
    irreducible: Optional[Poly]

    def expand(self) -> Poly:
        product = Poly.constant(self.unit)
        for root in self.linear_roots:
            product = product * Poly.of(-root, 1)
        if self.irreducible is not None:
            product = product * self.irreducible
        return product

    @property
    def is_irreducible(self) -> bool:
        return not self.linear_roots


def factor_cubic(f: Poly) -> CubicFactorization:
    """Split a cubic over Q into linear factors and at most one monic
    irreducible factor of degree 2 or 3."""
    if f.degree != 3:
        raise ValidationError(f"factor_cubic needs a cubic, got {f}")
    unit = f.lead
    rest = f.monic()
    linear: List[Fraction] = []
    for root in rational_roots(rest):
        while rest.degree > 0 and rest(root) == 0:
            rest = rest // Poly.of(-root, 1)
            linear.append(root)
    irreducible = rest if rest.degree >= 2 else None
    if irreducible is not None and irreducible.degree == 2:
        disc = irreducible.coeff(1) ** 2 - 4 * irreducible.coeff(0)
        if is_square(disc):
            raise ValidationError(f"Quadratic factor {irreducible} should split")
    factorization = CubicFactorization(unit, tuple(linear), irreducible)
    if factorization.expand() != f:
        raise ValidationError(f"Factorisation of {f} does not multiply back")
    logger.debug("factor_cubic(%s): roots=%s irreducible=%s",
                 f, [str(r) for r in linear], irreducible)
    return factorization


def resultant(f: Poly, g: Poly) -> Fraction:
    """Res(f, g); zero iff f and g share a factor."""
    if f.is_zero or g.is_zero:
        raise ValidationError("resultant of the zero polynomial")
    if f.degree == 0:
        return f.lead ** g.degree
    if g.degree == 0:
        return g.lead ** f.degree
    x = sp.Symbol('x')
    return to_fraction(sp.resultant(f.as_expr(x), g.as_expr(x), x))


def gf2_kernel(rows: Sequence[Sequence[int]], width: int) -> List[List[int]]:
    """Kernel basis of the GF(2) matrix whose columns are indexed 0..width-1.

    ``rows`` are equations; returns vectors v with rows . v = 0 mod 2, one per
    free column of the reduced row echelon form.
    """
    if width == 0:
        return []
    if not rows:
        return [[int(i == j) for j in range(width)] for i in range(width)]
    field = GF(2)
    matrix = DomainMatrix([[field(entry % 2) for entry in row] for row in rows],
                          (len(rows), width), field)
    return [[int(entry) % 2 for entry in vector]
            for vector in matrix.nullspace().to_Matrix().tolist()]
