"""Local analysis at every place: Legendre and Hilbert symbols, point counts
over F_p, Hensel-liftable point search, Weil-bound certificates and the
assembled adelic certificate for the input model."""
import itertools
import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Tuple

import sympy as sp

from .algebra import Scalar, integer_sqrt, to_fraction
from .exceptions import NotSmoothError, ValidationError
from .surface import CubicInput, DepressedSurface, discriminant_triple, is_smooth, normalize

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)
SMALL_PRIMES = (2, 3, 5, 7)
WEIL_THRESHOLD = 11


@dataclass(frozen=True)
class Place:
    """The real place (prime is None) or the p-adic place."""
    prime: Optional[int] = None

    def __post_init__(self):
        if self.prime is not None and not sp.isprime(self.prime):
            raise ValidationError(f"{self.prime} is not a prime")

    @classmethod
    def real(cls) -> 'Place':
        return cls(None)

    @classmethod
    def finite(cls, p: int) -> 'Place':
        return cls(p)

    @property
    def is_real(self) -> bool:
        return self.prime is None

    def sort_key(self) -> Tuple[int, int]:
        return (0, 0) if self.is_real else (1, self.prime)

    def __str__(self) -> str:
        return "inf" if self.is_real else str(self.prime)


@dataclass(frozen=True)
class QuaternionSymbol:
    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, 'a', to_fraction(self.a))
        object.__setattr__(self, 'b', to_fraction(self.b))
        if self.a == 0 or self.b == 0:
            raise ValidationError("Quaternion symbol slots must be nonzero")

    def invariant(self, place: Place) -> Fraction:
        return hilbert(self.a, self.b, place)


def _require_prime(p: int) -> None:
    if isinstance(p, bool) or not isinstance(p, int) or not sp.isprime(p):
        raise ValidationError(f"{p} is not a prime")


def legendre(a: int, p: int) -> int:
    if p == 2 or not sp.isprime(p):
        raise ValidationError(f"legendre needs an odd prime, got {p}")
    if a % p == 0:
        return 0
    return int(sp.legendre_symbol(a % p, p))


def valuation(z: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    return int(sp.multiplicity(p, abs(z)))


def _split(z: int, p: int) -> Tuple[int, int]:
    exponent = valuation(z, p)
    return exponent, z // p ** exponent


def hilbert(a: Scalar, b: Scalar, place: Place) -> Fraction:
    """Local invariant of the quaternion algebra (a, b) at a place, in {0, 1/2}."""
    a, b = to_fraction(a), to_fraction(b)
    if a == 0 or b == 0:
        raise ValidationError("hilbert symbol slots must be nonzero")
    if place.is_real:
        return HALF if a < 0 and b < 0 else Fraction(0)

    # num*den lies in the same square class as num/den
    p = place.prime
    alpha, u = _split(a.numerator * a.denominator, p)
    beta, v = _split(b.numerator * b.denominator, p)
    if p == 2:
        def eps(z):
            return ((z - 1) // 2) % 2

        def omega(z):
            return ((z * z - 1) // 8) % 2

        exponent = (eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)) % 2
        return HALF if exponent else Fraction(0)

    sign = (-1) ** ((alpha * beta * (p - 1) // 2) % 2)
    symbol = sign * legendre(u, p) ** beta * legendre(v, p) ** alpha
    return HALF if symbol == -1 else Fraction(0)


def _value_histogram(cubic: CubicInput, p: int) -> Counter:
    return Counter(cubic.f(u) % p for u in range(p))


def fp_count_affine(cubic: CubicInput, p: int, cap: int = 1000) -> int:
    """#{u in F_p^3 : f(u1) + f(u2) + f(u3) = n}."""
    _require_prime(p)
    if p > cap:
        raise ValidationError(
            f"p = {p} is above the exhaustive count cap {cap}; use weil_certificate")
    histogram = _value_histogram(cubic, p)
    target = cubic.n % p
    return sum(c1 * c2 * histogram[(target - v1 - v2) % p]
               for v1, c1 in histogram.items()
               for v2, c2 in histogram.items())


def fp_count_boundary(p: int) -> int:
    """Projective points of x1^3 + x2^3 + x3^3 = 0 over F_p."""
    _require_prime(p)
    cubes = Counter(pow(x, 3, p) for x in range(p))
    affine = sum(c1 * c2 * cubes[(-v1 - v2) % p]
                 for v1, c1 in cubes.items() for v2, c2 in cubes.items())
    return (affine - 1) // (p - 1)


def fp_count_projective(cubic: CubicInput, p: int, cap: int = 1000) -> int:
    return fp_count_affine(cubic, p, cap) + fp_count_boundary(p)


def weil_window(p: int) -> Tuple[int, int]:
    return p * p + 1 - 7 * p, p * p + 1 + 7 * p


def _cleared_delta2(surface: DepressedSurface) -> int:
    delta2 = discriminant_triple(surface).delta2
    denominators = (surface.a.denominator * surface.b.denominator
                    * surface.n.denominator)
    return delta2.numerator * denominators


def good_reduction(surface: DepressedSurface, p: int) -> bool:
    """p > 3 and p divides neither Delta2 nor a denominator of the model."""
    if p <= 3:
        return False
    return _cleared_delta2(surface) % p != 0


def bad_primes(surface: DepressedSurface) -> List[int]:
    cleared = _cleared_delta2(surface)
    if cleared == 0:
        raise NotSmoothError(f"{surface} is singular: Delta2 = 0")
    return sorted(int(q) for q in sp.primefactors(abs(cleared)))


class CertificateStatus(str, Enum):
    EXPLICIT_POINT = "ExplicitPoint"
    WEIL_BOUND = "WeilBound"
    REAL_TRIVIAL = "RealTrivial"
    INSOLUBLE = "Insoluble"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class LiftCheck:
    """Newton data for an integer point: v(G) and min_i v(dG/du_i)."""
    point: Tuple[int, ...]
    value_valuation: Optional[int]
    min_partial_valuation: Optional[int]

    @property
    def exact(self) -> bool:
        """G vanishes at the integer point itself."""
        return self.value_valuation is None

    @property
    def liftable(self) -> bool:
        if self.exact:
            return True
        if self.min_partial_valuation is None:
            return False
        return self.value_valuation > 2 * self.min_partial_valuation


@dataclass(frozen=True)
class LocalCertificate:
    place: Place
    status: CertificateStatus
    point: Optional[Tuple[int, ...]] = None
    modulus: Optional[int] = None
    value_valuation: Optional[int] = None
    min_partial_valuation: Optional[int] = None
    weil_lower_bound: Optional[int] = None
    witness_modulus: Optional[int] = None
    depth: Optional[int] = None
    note: Optional[str] = None


def has_solution_mod(cubic: CubicInput, modulus: int) -> bool:
    """Whether f(u1) + f(u2) + f(u3) = n has a solution mod m."""
    values = {cubic.f(u) % modulus for u in range(modulus)}
    target = cubic.n % modulus
    return any((target - v1 - v2) % modulus in values
               for v1 in values for v2 in values)


def check_liftable(cubic: CubicInput, point, p: int) -> LiftCheck:
    """v(G(x)) > 2 min_i v(dG/du_i(x)) gives a Z_p point by Newton iteration."""
    _require_prime(p)
    point = tuple(int(u) for u in point)
    value = cubic.value(point)
    partials = [g for g in cubic.gradient(point) if g != 0]
    return LiftCheck(
        point=point,
        value_valuation=None if value == 0 else valuation(value, p),
        min_partial_valuation=min((valuation(g, p) for g in partials), default=None))


@dataclass
class _LayerSearch:
    point: Optional[LiftCheck] = None
    modulus: Optional[int] = None
    insoluble_at: Optional[int] = None
    exhausted: bool = False


def _layered_search(cubic: CubicInput, p: int, depth: int,
                    max_candidates: int) -> _LayerSearch:
    """Solutions mod p, p^2, ... in lexicographic order; every layer is the
    complete solution set at that level."""
    layer: List[Tuple[int, ...]] = []
    for point in itertools.product(range(p), repeat=3):
        if cubic.value(point) % p:
            continue
        check = check_liftable(cubic, point, p)
        if check.liftable:
            return _LayerSearch(point=check, modulus=p)
        layer.append(point)
    if not layer:
        return _LayerSearch(insoluble_at=p)

    modulus = p
    for _ in range(1, depth):
        if len(layer) * p ** 3 > max_candidates:
            logger.warning("layer at modulus %s too large (%s points), stopping",
                           modulus, len(layer))
            return _LayerSearch(exhausted=True)
        next_modulus = modulus * p
        lifted = []
        for base in layer:
            for steps in itertools.product(range(p), repeat=3):
                point = tuple(u + modulus * t for u, t in zip(base, steps))
                if cubic.value(point) % next_modulus:
                    continue
                check = check_liftable(cubic, point, p)
                if check.liftable:
                    return _LayerSearch(point=check, modulus=next_modulus)
                lifted.append(point)
        if not lifted:
            return _LayerSearch(insoluble_at=next_modulus)
        layer = sorted(lifted)
        modulus = next_modulus
    return _LayerSearch()


def _slice_search(cubic: CubicInput, p: int, attempts: int = 200) -> Optional[LiftCheck]:
    """Smooth F_p point along v2 + v3 = c of the depressed model (p > 3).

    With v2 = t, v3 = c - t the equation becomes
    3c t^2 - 3c^2 t + (v1^3 + a v1 + c^3 + a c - n') = 0.
    """
    surface = normalize(cubic)
    a = int(surface.a) % p
    target = int(surface.n) % p
    inv3 = pow(3, -1, p)
    shift = cubic.a2
    for v1 in range(min(p, attempts)):
        for c in range(1, min(p, attempts)):
            k = (v1 ** 3 + a * v1 + c ** 3 + a * c - target) % p
            disc = (9 * c ** 4 - 12 * c * k) % p
            roots = sp.sqrt_mod(disc, p, all_roots=True) if disc else [0]
            for s in sorted(roots or []):
                t = (3 * c * c + s) * pow(6 * c, -1, p) % p
                depressed = (v1, t, (c - t) % p)
                point = tuple((v - shift) * inv3 % p for v in depressed)
                if cubic.value(point) % p:
                    continue
                check = check_liftable(cubic, point, p)
                if check.liftable:
                    return check
    return None


def find_liftable_point(cubic: CubicInput, p: int, depth: int = 4,
                        max_candidates: int = 200000) -> Optional[Tuple[LiftCheck, int]]:
    """First point (lexicographic, layer by layer) meeting the Newton criterion,
    with the modulus p^k it was found at."""
    _require_prime(p)
    if depth < 1:
        raise ValidationError("depth must be at least 1")
    search = _layered_search(cubic, p, depth, max_candidates)
    if search.point is None:
        return None
    return search.point, search.modulus


def weil_certificate(surface: DepressedSurface, p: int) -> LocalCertificate:
    """Good p >= 11: at least p^2 - 8p - 2 sqrt(p) smooth points off x0 = 0."""
    _require_prime(p)
    if p < WEIL_THRESHOLD:
        raise ValidationError(f"Weil certificate needs p >= {WEIL_THRESHOLD}, got {p}")
    if not good_reduction(surface, p):
        raise ValidationError(f"p = {p} is a prime of bad reduction")
    root, _ = integer_sqrt(4 * p)
    lower = p * p - 8 * p - (root + 1)
    return LocalCertificate(place=Place.finite(p), status=CertificateStatus.WEIL_BOUND,
                            weil_lower_bound=lower)


def certify_Zp(cubic: CubicInput, p: int, depth: int = 4,
               layered_cap: int = 50, max_candidates: int = 200000) -> LocalCertificate:
    _require_prime(p)
    place = Place.finite(p)
    surface = normalize(cubic)
    if p >= WEIL_THRESHOLD and is_smooth(surface) and good_reduction(surface, p):
        return weil_certificate(surface, p)

    if p <= layered_cap:
        search = _layered_search(cubic, p, depth, max_candidates)
        if search.point is not None:
            check = search.point
            return LocalCertificate(
                place=place, status=CertificateStatus.EXPLICIT_POINT,
                point=check.point, modulus=search.modulus,
                value_valuation=check.value_valuation,
                min_partial_valuation=check.min_partial_valuation)
        if search.insoluble_at is not None:
            return LocalCertificate(place=place, status=CertificateStatus.INSOLUBLE,
                                    witness_modulus=search.insoluble_at)
        note = "layer size cap reached" if search.exhausted else None
        return LocalCertificate(place=place, status=CertificateStatus.UNKNOWN,
                                depth=depth, note=note)

    check = _slice_search(cubic, p) if p > 3 else None
    if check is not None:
        return LocalCertificate(
            place=place, status=CertificateStatus.EXPLICIT_POINT,
            point=check.point, modulus=p,
            value_valuation=check.value_valuation,
            min_partial_valuation=check.min_partial_valuation)
    return LocalCertificate(place=place, status=CertificateStatus.UNKNOWN, depth=1,
                            note="no smooth point found on the searched slices")


def validate_certificate(cubic: CubicInput, certificate: LocalCertificate) -> bool:
    """Re-check a certificate against the input model."""
    status = certificate.status
    if status is CertificateStatus.EXPLICIT_POINT:
        p = certificate.place.prime
        if cubic.value(certificate.point) % certificate.modulus:
            return False
        check = check_liftable(cubic, certificate.point, p)
        return (check.liftable
                and check.value_valuation == certificate.value_valuation
                and check.min_partial_valuation == certificate.min_partial_valuation)
    if status is CertificateStatus.WEIL_BOUND:
        p = certificate.place.prime
        surface = normalize(cubic)
        return (p >= WEIL_THRESHOLD and good_reduction(surface, p)
                and certificate.weil_lower_bound > 0)
    if status is CertificateStatus.INSOLUBLE:
        witness = certificate.witness_modulus
        return not has_solution_mod(cubic, witness)
    return True


class AdelicVerdict(str, Enum):
    SOLUBLE = "soluble"
    INSOLUBLE = "insoluble"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class AdelicCertificate:
    certificates: Tuple[LocalCertificate, ...]
    verdict: AdelicVerdict
    bad_primes: Tuple[int, ...]
    remainder_statement: str = ("every other prime p >= 11 has good reduction "
                                "and is covered by the Weil bound")

    def covered_places(self) -> List[Place]:
        return [c.place for c in self.certificates]

    def for_prime(self, p: int) -> Optional[LocalCertificate]:
        return next((c for c in self.certificates if c.place.prime == p), None)


def certify_adeles(cubic: CubicInput, depth: int = 4, layered_cap: int = 50,
                   max_candidates: int = 200000) -> AdelicCertificate:
    surface = normalize(cubic)
    if not is_smooth(surface):
        raise NotSmoothError(f"The surface for {cubic} is singular")
    bad = bad_primes(surface)
    primes = sorted(set(SMALL_PRIMES).union(bad))
    certificates = [LocalCertificate(
        place=Place.real(), status=CertificateStatus.REAL_TRIVIAL,
        note="a monic cubic is surjective on R")]
    for p in primes:
        certificate = certify_Zp(cubic, p, depth, layered_cap, max_candidates)
        logger.debug("certify_Zp(%s, p=%s) -> %s", cubic, p, certificate.status.value)
        certificates.append(certificate)

    statuses = {c.status for c in certificates}
    if CertificateStatus.INSOLUBLE in statuses:
        verdict = AdelicVerdict.INSOLUBLE
    elif CertificateStatus.UNKNOWN in statuses:
        verdict = AdelicVerdict.UNKNOWN
    else:
        verdict = AdelicVerdict.SOLUBLE
    certificates.sort(key=lambda c: c.place.sort_key())
    return AdelicCertificate(certificates=tuple(certificates), verdict=verdict,
                             bad_primes=tuple(bad))


def product_formula_support(a: Scalar, b: Scalar) -> List[Place]:
    """The real place and the primes dividing 2ab (numerators and denominators)."""
    a, b = to_fraction(a), to_fraction(b)
    product = 2 * a.numerator * a.denominator * b.numerator * b.denominator
    return [Place.real()] + [Place.finite(int(q)) for q in sp.primefactors(abs(product))]

