import pytest
import itertools
import random
from fractions import Fraction

import sympy as sp

from src.exceptions import NotSmoothError, ValidationError
from src.local_analysis import (AdelicVerdict, CertificateStatus, LocalCertificate,
                                Place, QuaternionSymbol, bad_primes, certify_adeles,
                                certify_Zp, check_liftable, find_liftable_point,
                                fp_count_affine, fp_count_boundary, fp_count_projective,
                                good_reduction, has_solution_mod, hilbert, legendre,
                                product_formula_support, validate_certificate,
                                valuation, weil_certificate, weil_window)
from src.surface import CubicInput, DepressedSurface, is_smooth, normalize

HALF = Fraction(1, 2)


def tetrahedral(n):
    return CubicInput(3, 2, 0, 6 * n)


def places_for(*values):
    primes = set()
    for value in values:
        value = Fraction(value)
        primes.update(sp.primefactors(abs(value.numerator * value.denominator)))
    return [Place.real()] + [Place.finite(int(p)) for p in sorted(primes | {2})]


class TestSymbols:
    """Tests for Legendre and Hilbert symbols."""

    def test_place(self):
        """✓ Should order the real place first."""
        places = sorted([Place.finite(5), Place.real(), Place.finite(2)],
                        key=Place.sort_key)
        assert [str(p) for p in places] == ["inf", "2", "5"]

    def test_place_needs_prime(self):
        """✗ Should raise ValidationError for a composite place."""
        with pytest.raises(ValidationError):
            Place.finite(4)

    def test_legendre(self):
        """✓ Should match the squares mod 7."""
        assert [legendre(a, 7) for a in range(7)] == [0, 1, 1, -1, 1, -1, -1]

    def test_legendre_needs_odd_prime(self):
        """✗ Should raise ValidationError at p = 2."""
        with pytest.raises(ValidationError):
            legendre(1, 2)

    def test_valuation(self):
        """✓ Should count prime factors."""
        assert valuation(48, 2) == 4
        assert valuation(-54, 3) == 3
        assert valuation(7, 5) == 0

    @pytest.mark.parametrize("a,b,place,expected", [
        (-1, -1, None, HALF), (-1, -1, 2, HALF), (-1, -1, 3, 0),
        (2, 3, 3, HALF), (5, 7, 2, 0), (3, 3, 3, HALF), (-6, -1, None, HALF),
    ])
    def test_known_values(self, a, b, place, expected):
        """✓ Should reproduce standard Hilbert symbol values."""
        assert hilbert(a, b, Place(place)) == expected

    def test_zero_slot(self):
        """✗ Should raise ValidationError for a zero slot."""
        with pytest.raises(ValidationError):
            hilbert(0, 3, Place.real())
        with pytest.raises(ValidationError):
            QuaternionSymbol(1, 0)

    def test_properties(self):
        """✓ Should be symmetric, bimultiplicative and blind to square factors."""
        rng = random.Random(2024)
        for _ in range(1000):
            a, b, c = (rng.choice([-1, 1]) * rng.randint(1, 10 ** 6) for _ in range(3))
            for place in places_for(a, b, c):
                assert hilbert(a, b, place) == hilbert(b, a, place)
                assert (hilbert(a, b * c, place)
                        == (hilbert(a, b, place) + hilbert(a, c, place)) % 1)
                assert hilbert(a, b * c * c, place) == hilbert(a, b, place)
                assert hilbert(a, -a, place) == 0

    def test_product_formula(self):
        """✓ Should sum to zero over all places."""
        rng = random.Random(99)
        for _ in range(1000):
            a = rng.choice([-1, 1]) * rng.randint(1, 10 ** 6)
            b = rng.choice([-1, 1]) * rng.randint(1, 10 ** 6)
            total = sum(hilbert(a, b, place) for place in product_formula_support(a, b))
            assert total % 1 == 0

    def test_quaternion_symbol(self):
        """✓ Should expose invariants per place."""
        assert QuaternionSymbol(-1, -1).invariant(Place.real()) == HALF


class TestCounting:
    """Tests for point counts over F_p."""

    def test_brute_force(self):
        """✓ Should equal a brute-force count."""
        cubic = tetrahedral(1)
        for p in (2, 3, 5, 7):
            brute = sum(1 for u in itertools.product(range(p), repeat=3)
                        if cubic.value(u) % p == 0)
            assert fp_count_affine(cubic, p) == brute

    def test_cube_count_mod_two(self):
        """✓ Should count four solutions of u1^3 + u2^3 + u3^3 = 0 mod 2."""
        assert fp_count_affine(CubicInput(0, 0, 0, 0), 2) == 4

    def test_count_cap(self):
        """✗ Should refuse exhaustive counting above the cap."""
        with pytest.raises(ValidationError, match="cap"):
            fp_count_affine(tetrahedral(1), 101, cap=100)

    def test_boundary_curve(self):
        """✓ Should count p + 1 points when p = 2 mod 3."""
        assert fp_count_boundary(5) == 6
        assert fp_count_boundary(11) == 12

    def test_weil_window(self):
        """✓ Should bracket projective counts at good primes."""
        assert weil_window(11) == (45, 199)
        cubic = tetrahedral(1)
        surface = normalize(cubic)
        for p in (17, 19, 23, 29):
            assert good_reduction(surface, p)
            low, high = weil_window(p)
            assert low <= fp_count_projective(cubic, p) <= high

    @pytest.mark.slow
    def test_weil_window_random_surfaces(self):
        """✓ Should bracket counts of random smooth surfaces at three good primes each."""
        rng = random.Random(11)
        primes = list(sp.primerange(11, 200))
        checked = 0
        while checked < 200:
            cubic = CubicInput(*(rng.randint(-50, 50) for _ in range(3)),
                               rng.randint(-1000, 1000))
            surface = normalize(cubic)
            if not is_smooth(surface):
                continue
            good = [p for p in primes if good_reduction(surface, p)]
            for p in rng.sample(good, 3):
                low, high = weil_window(p)
                assert low <= fp_count_projective(cubic, p) <= high, (cubic, p)
            checked += 1

    def test_bad_primes(self):
        """✓ Should factor the cleared Delta2."""
        assert bad_primes(normalize(tetrahedral(1))) == [2, 3, 11, 13]
        assert not good_reduction(normalize(tetrahedral(1)), 11)

    def test_bad_primes_singular(self):
        """✗ Should raise NotSmoothError when Delta2 vanishes."""
        with pytest.raises(NotSmoothError):
            bad_primes(DepressedSurface.from_ad(-3, 2))


class TestLiftablePoints:
    """Tests for the Newton criterion and point search."""

    def test_residue_class_points(self):
        """✓ Should confirm the smooth points for n = 2 mod 5 and n = 3 mod 7."""
        for n in (2, 7, 12, -3):
            assert check_liftable(tetrahedral(n), (1, 1, 0), 5).liftable
        for n in (3, 10, -4):
            assert check_liftable(tetrahedral(n), (3, 0, 0), 7).liftable

    def test_exact_solution(self):
        """✓ Should accept an exact solution with a unit partial."""
        check = check_liftable(tetrahedral(1), (1, 0, 0), 5)
        assert check.value_valuation is None
        assert check.min_partial_valuation == 0
        assert check.liftable

    def test_exact_solution_with_vanishing_partials(self):
        """✓ Should accept an exact integer solution even where every partial vanishes."""
        check = check_liftable(CubicInput(0, 0, 0, 0), (0, 0, 0), 3)
        assert check.exact
        assert check.min_partial_valuation is None
        assert check.liftable
        assert check_liftable(CubicInput(1, 0, 0, 0), (0, 0, 0), 5).liftable

    def test_inexact_point_with_vanishing_partials(self):
        """✓ Should reject a non-solution whose partials all vanish."""
        check = check_liftable(CubicInput(0, 0, 0, 3), (0, 0, 0), 3)
        assert not check.exact
        assert not check.liftable

    def test_not_liftable(self):
        """✓ Should reject a point whose partials are too divisible."""
        check = check_liftable(CubicInput(0, 0, 0, 4), (1, 1, 2), 3)
        assert check.value_valuation == 1
        assert check.min_partial_valuation == 1
        assert not check.liftable

    def test_lexicographic_first(self):
        """✓ Should find (0, 1, 1) first for the tetrahedral n = 2 at p = 5."""
        check, modulus = find_liftable_point(tetrahedral(2), 5)
        assert check.point == (0, 1, 1)
        assert modulus == 5

    def test_depth_validation(self):
        """✗ Should raise ValidationError for depth 0."""
        with pytest.raises(ValidationError):
            find_liftable_point(tetrahedral(1), 5, depth=0)

    def test_has_solution_mod(self):
        """✓ Should see the mod-9 obstruction for sums of cubes."""
        assert has_solution_mod(CubicInput(0, 0, 0, 4), 3)
        assert not has_solution_mod(CubicInput(0, 0, 0, 4), 9)
        assert not has_solution_mod(CubicInput(0, 0, 0, 5), 9)


class TestCertificates:
    """Tests for local and adelic certificates."""

    def test_weil_certificate(self):
        """✓ Should give the lower bound p^2 - 8p - 2sqrt(p) at good p."""
        surface = normalize(tetrahedral(1))
        assert weil_certificate(surface, 97).weil_lower_bound == 8613
        assert weil_certificate(surface, 17).status is CertificateStatus.WEIL_BOUND

    @pytest.mark.parametrize("p", [7, 11])
    def test_weil_certificate_refused(self, p):
        """✗ Should refuse small or bad primes."""
        with pytest.raises(ValidationError):
            weil_certificate(normalize(tetrahedral(1)), p)

    def test_sum_of_cubes_insoluble(self):
        """✓ Should certify n = 4 and 5 mod 9 insoluble at 3 with witness 9."""
        for n in (4, 5, 13, -4):
            cubic = CubicInput(0, 0, 0, n)
            certificate = certify_Zp(cubic, 3)
            assert certificate.status is CertificateStatus.INSOLUBLE
            assert certificate.witness_modulus == 9
            assert validate_certificate(cubic, certificate)

    def test_explicit_point(self):
        """✓ Should return a validated explicit point at p = 7."""
        cubic = tetrahedral(2)
        certificate = certify_Zp(cubic, 7)
        assert certificate.status is CertificateStatus.EXPLICIT_POINT
        assert validate_certificate(cubic, certificate)

    def test_slice_search_for_large_bad_prime(self):
        """✓ Should certify a bad prime above the layered cap by slices."""
        cubic = tetrahedral(2)
        certificate = certify_Zp(cubic, 107)
        assert certificate.status is CertificateStatus.EXPLICIT_POINT
        assert validate_certificate(cubic, certificate)

    def test_tampered_certificate(self):
        """✓ Should reject a certificate whose point is not a solution."""
        cubic = tetrahedral(2)
        certificate = LocalCertificate(place=Place.finite(5),
                                       status=CertificateStatus.EXPLICIT_POINT,
                                       point=(0, 0, 1), modulus=5,
                                       value_valuation=None, min_partial_valuation=0)
        assert not validate_certificate(cubic, certificate)

    def test_adelic_soluble(self):
        """✓ Should certify the tetrahedral n = 2 at every place."""
        cubic = tetrahedral(2)
        adelic = certify_adeles(cubic)
        assert adelic.verdict is AdelicVerdict.SOLUBLE
        assert adelic.covered_places()[0].is_real
        assert {2, 3, 5, 7, 107, 971} <= {p.prime for p in adelic.covered_places()}
        assert all(validate_certificate(cubic, c) for c in adelic.certificates)

    def test_adelic_insoluble(self):
        """✓ Should report a sum of cubes with n = 4 mod 9 insoluble."""
        adelic = certify_adeles(CubicInput(0, 0, 0, 4))
        assert adelic.verdict is AdelicVerdict.INSOLUBLE
        assert adelic.for_prime(3).witness_modulus == 9

    def test_adelic_singular(self):
        """✗ Should raise NotSmoothError for a singular surface."""
        with pytest.raises(NotSmoothError):
            certify_adeles(CubicInput(0, 0, 0, 0))
