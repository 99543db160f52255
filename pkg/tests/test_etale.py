import pytest
import random
from fractions import Fraction

from src.algebra import Poly
from src.etale import EtaleElement, etale_inverse, etale_norm
from src.exceptions import NotInvertibleError, ValidationError


@pytest.fixture
def gaussian():
    """Fixture providing Q[x]/(x^2 + 1)."""
    return Poly.of(1, 0, 1)


class TestEtaleElement:
    """Tests for arithmetic in Q[x]/(m)."""

    def test_reduction(self, gaussian):
        """✓ Should reduce the value modulo the modulus."""
        theta = EtaleElement.generator(gaussian)
        assert theta * theta == EtaleElement.scalar(gaussian, -1)

    def test_inverse(self, gaussian):
        """✓ Should invert a unit."""
        theta = EtaleElement.generator(gaussian)
        assert theta.inverse() == -theta
        element = theta + 1
        assert element * etale_inverse(element) == EtaleElement.scalar(gaussian, 1)

    def test_division_by_scalar(self, gaussian):
        """✓ Should divide by a rational."""
        theta = EtaleElement.generator(gaussian)
        assert (theta / 2).value == Poly.of(0, Fraction(1, 2))

    def test_norm(self, gaussian):
        """✓ Should compute the norm as a resultant."""
        theta = EtaleElement.generator(gaussian)
        assert etale_norm(theta) == 1
        assert (theta + 1).norm() == 2
        assert etale_norm(EtaleElement.scalar(gaussian, 3)) == 9

    def test_norm_of_zero(self, gaussian):
        """✓ Should give norm zero for the zero element."""
        assert etale_norm(EtaleElement.scalar(gaussian, 0)) == 0

    def test_degree_one_algebra(self):
        """✓ Should read Q[x]/(x - 2) as Q."""
        element = EtaleElement.generator(Poly.of(-2, 1))
        assert element.as_rational() == 2
        assert element.degree == 1

    def test_as_rational_needs_constant(self, gaussian):
        """✗ Should refuse to read theta as a rational."""
        with pytest.raises(ValidationError):
            EtaleElement.generator(gaussian).as_rational()

    def test_zero_divisor(self):
        """✗ Should raise NotInvertibleError for a zero divisor of a split algebra."""
        split = Poly.of(0, -1, 1)
        with pytest.raises(NotInvertibleError):
            EtaleElement.generator(split).inverse()

    def test_zero_is_not_invertible(self, gaussian):
        """✗ Should raise NotInvertibleError for zero."""
        with pytest.raises(NotInvertibleError):
            EtaleElement.scalar(gaussian, 0).inverse()

    def test_non_monic_modulus(self):
        """✗ Should reject a non-monic modulus."""
        with pytest.raises(ValidationError, match="monic"):
            EtaleElement.scalar(Poly.of(1, 0, 2), 1)

    def test_repeated_root_modulus(self):
        """✗ Should reject a modulus with a repeated root."""
        with pytest.raises(ValidationError, match="squarefree"):
            EtaleElement.scalar(Poly.of(1, -2, 1), 1)

    def test_mixed_algebras(self, gaussian):
        """✗ Should refuse to combine elements of different algebras."""
        with pytest.raises(ValidationError):
            EtaleElement.generator(gaussian) + EtaleElement.generator(Poly.of(-2, 0, 1))


def random_algebra(rng, degree):
    while True:
        modulus = Poly.of(*(rng.randint(-20, 20) for _ in range(degree)), 1)
        if modulus.is_squarefree():
            return modulus


def random_element(rng, modulus):
    coeffs = (Fraction(rng.randint(-30, 30), rng.randint(1, 12))
              for _ in range(modulus.degree))
    return EtaleElement(modulus, Poly.of(*coeffs))


class TestRandomNorms:
    """Seeded checks of the norm in random quadratic and cubic algebras."""

    @pytest.mark.parametrize("degree,seed", [(2, 41), (3, 43)])
    def test_norm_is_multiplicative(self, degree, seed):
        """✓ Should satisfy N(xy) = N(x) N(y)."""
        rng = random.Random(seed)
        for _ in range(200):
            modulus = random_algebra(rng, degree)
            first, second = random_element(rng, modulus), random_element(rng, modulus)
            assert etale_norm(first * second) == etale_norm(first) * etale_norm(second)

    @pytest.mark.parametrize("degree,seed", [(2, 47), (3, 53)])
    def test_inverse_norm(self, degree, seed):
        """✓ Should invert units and give N(1/x) = 1/N(x)."""
        rng = random.Random(seed)
        for _ in range(100):
            modulus = random_algebra(rng, degree)
            element = random_element(rng, modulus)
            if etale_norm(element) == 0:
                continue
            inverse = etale_inverse(element)
            assert (element * inverse).value == Poly.constant(1)
            assert etale_norm(inverse) == 1 / etale_norm(element)
