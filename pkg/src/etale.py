"""Etale algebras Q[x]/(m(x)) of degree at most 3."""
import logging
from dataclasses import dataclass
from fractions import Fraction

import sympy as sp

from .algebra import Poly, Scalar, resultant, to_fraction
from .exceptions import NotInvertibleError, ValidationError

logger = logging.getLogger(__name__)

MAX_ETALE_DEGREE = 3


@dataclass(frozen=True)
class EtaleElement:
    """value(theta) in Q[x]/(modulus), stored reduced mod modulus."""
    modulus: Poly
    value: Poly

    def __post_init__(self):
        if not self.modulus.is_monic():
            raise ValidationError(f"Etale modulus must be monic, got {self.modulus}")
        if not 1 <= self.modulus.degree <= MAX_ETALE_DEGREE:
            raise ValidationError(
                f"Etale modulus degree must be 1..{MAX_ETALE_DEGREE}, "
                f"got {self.modulus.degree}")
        if not self.modulus.is_squarefree():
            raise ValidationError(f"Etale modulus {self.modulus} is not squarefree")
        object.__setattr__(self, 'value', self.value % self.modulus)

    @classmethod
    def scalar(cls, modulus: Poly, c: Scalar) -> 'EtaleElement':
        return cls(modulus, Poly.constant(c))

    @classmethod
    def generator(cls, modulus: Poly) -> 'EtaleElement':
        return cls(modulus, Poly.x())

    @property
    def degree(self) -> int:
        return self.modulus.degree

    @property
    def is_zero(self) -> bool:
        return self.value.is_zero

    def as_rational(self) -> Fraction:
        """The element as a rational; only valid for constants."""
        if self.value.degree > 0:
            raise ValidationError(f"{self} is not a rational constant")
        return self.value.coeff(0)

    def _lift(self, other) -> Poly:
        if isinstance(other, EtaleElement):
            if other.modulus != self.modulus:
                raise ValidationError("Etale elements live in different algebras")
            return other.value
        return Poly.constant(to_fraction(other))

    def __add__(self, other) -> 'EtaleElement':
        return EtaleElement(self.modulus, self.value + self._lift(other))

    __radd__ = __add__

    def __neg__(self) -> 'EtaleElement':
        return EtaleElement(self.modulus, -self.value)

    def __sub__(self, other) -> 'EtaleElement':
        return EtaleElement(self.modulus, self.value - self._lift(other))

    def __rsub__(self, other) -> 'EtaleElement':
        return EtaleElement(self.modulus, self._lift(other) - self.value)

    def __mul__(self, other) -> 'EtaleElement':
        return EtaleElement(self.modulus, self.value * self._lift(other))

    __rmul__ = __mul__

    def __truediv__(self, other) -> 'EtaleElement':
        if isinstance(other, EtaleElement):
            return self * etale_inverse(other)
        return self * (1 / to_fraction(other))

    def __pow__(self, exponent: int) -> 'EtaleElement':
        result = EtaleElement.scalar(self.modulus, 1)
        for _ in range(exponent):
            result = result * self
        return result

    def inverse(self) -> 'EtaleElement':
        return etale_inverse(self)

    def norm(self) -> Fraction:
        return etale_norm(self)

    def __str__(self) -> str:
        return f"({self.value}) mod ({self.modulus})"


def etale_inverse(e: EtaleElement) -> EtaleElement:
    """Inverse via the extended gcd of value and modulus."""
    if e.is_zero:
        raise NotInvertibleError(f"{e} is zero")
    x = sp.Symbol('x')
    s, _, g = sp.gcdex(e.value.as_expr(x), e.modulus.as_expr(x), x)
    gcd = Poly.from_expr(g, x)
    if gcd.degree > 0:
        raise NotInvertibleError(
            f"{e} is a zero divisor (gcd {gcd} with the modulus)")
    inverse = EtaleElement(e.modulus, Poly.from_expr(s, x) * (1 / gcd.lead))
    if (inverse * e).value != Poly.constant(1):
        raise NotInvertibleError(f"Extended gcd failed to invert {e}")
    return inverse


def etale_norm(e: EtaleElement) -> Fraction:
    """N(h(theta)) = Res(modulus, h) for monic modulus."""
    if e.is_zero:
        return Fraction(0)
    return resultant(e.modulus, e.value)
