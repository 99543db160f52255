"""Conic bundles on surfaces with a rational line, and their Brauer classes.

For a rational root r of f1 and an axis i with {i, j, k} = {1, 2, 3}, the line
L = {x_i = r x0, x_j + x_k = 0} lies on X and

    G = l1 * C1 + l2 * C2,   l1 = x_j + x_k,   l2 = x_i - r x0,
    C1 = x_j^2 - x_j x_k + x_k^2 + a x0^2,
    C2 = x_i^2 + r x0 x_i + (r^2 + a) x0^2.

The plane l1 = mu * l2 meets X in L and the conic mu * C1 + C2 = 0; in plane
coordinates (x0, w = x_i - r x0, x_j) its Gram matrix is T(mu) below and
det T(mu) = (3 mu / 4)(mu + 1) g1(mu).  The plane l2 = 0 is the fibre at
infinity, with conic C1 = 0.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import sympy as sp

from .algebra import (Poly, Scalar, SquareClass, gf2_kernel, rational_roots,
                      square_class, to_fraction, to_sympy)
from .etale import EtaleElement, etale_norm
from .exceptions import (InconsistencyError, NotSmoothError, UnsupportedError,
                         ValidationError)
from .local_analysis import Place, hilbert
from .surface import DepressedSurface, build_resolvents, is_smooth

logger = logging.getLogger(__name__)

Matrix = Tuple[Tuple[Poly, ...], ...]


def _others(axis: int) -> Tuple[int, int]:
    j, k = (i for i in (1, 2, 3) if i != axis)
    return j, k


def _det3(m) -> Poly:
    mu = sp.Symbol('mu')
    det = sp.Matrix([[entry.as_expr(mu) for entry in row] for row in m]).det()
    return Poly.from_expr(det, mu)


@dataclass(frozen=True)
class BundleData:
    surface: DepressedSurface
    r: Fraction
    axis: int
    gram: Matrix
    infinity_gram: Tuple[Tuple[Fraction, ...], ...]
    discriminant: Poly
    g1: Poly

    def forms(self, point) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
        """(l1, l2, C1, C2) at a point (x0, x1, x2, x3)."""
        x = [to_fraction(c) for c in point]
        j, k = _others(self.axis)
        a, r = self.surface.a, self.r
        x0, xi, xj, xk = x[0], x[self.axis], x[j], x[k]
        return (xj + xk, xi - r * x0,
                xj ** 2 - xj * xk + xk ** 2 + a * x0 ** 2,
                xi ** 2 + r * x0 * xi + (r ** 2 + a) * x0 ** 2)


def _verify_bundle(bundle: BundleData) -> None:
    x0, x1, x2, x3, mu, w, v = sp.symbols('x0 x1 x2 x3 mu w v')
    xs = [x0, x1, x2, x3]
    a, r, d = (to_sympy(bundle.surface.a), to_sympy(bundle.r),
               to_sympy(bundle.surface.d))
    j, k = _others(bundle.axis)
    xi, xj, xk = xs[bundle.axis], xs[j], xs[k]
    form = x1 ** 3 + x2 ** 3 + x3 ** 3 + a * x0 ** 2 * (x1 + x2 + x3) + d * x0 ** 3
    l1, l2 = xj + xk, xi - r * x0
    c1 = xj ** 2 - xj * xk + xk ** 2 + a * x0 ** 2
    c2 = xi ** 2 + r * x0 * xi + (r ** 2 + a) * x0 ** 2
    if sp.expand(form - (l1 * c1 + l2 * c2)) != 0:
        raise InconsistencyError("Cubic form is not l1*C1 + l2*C2")

    # restrict mu*C1 + C2 to the plane l1 = mu*l2 in coordinates (x0, w, v = x_j)
    conic = sp.expand((mu * c1 + c2).subs({xi: w + r * x0, xk: mu * w - xj},
                                          simultaneous=True).subs(xj, v))
    basis = [x0, w, v]
    gram_form = sum(bundle.gram[s][t].as_expr(mu) * basis[s] * basis[t]
                    for s in range(3) for t in range(3))
    if sp.expand(conic - gram_form) != 0:
        raise InconsistencyError("Generic fibre does not match its Gram matrix")


def build_bundle(surface: DepressedSurface, r: Scalar, axis: int = 1) -> BundleData:
    r = to_fraction(r)
    if axis not in (1, 2, 3):
        raise ValidationError(f"axis must be 1, 2 or 3, got {axis}")
    if surface.f1(r) != 0:
        raise ValidationError(f"{r} is not a root of f1 = {surface.f1}")
    if not is_smooth(surface):
        raise NotSmoothError(f"Cannot build a conic bundle on a singular surface: {surface}")

    a = surface.a
    zero = Poly()
    entry_a = Poly.of(a + 3 * r ** 2, a)
    entry_d = Poly.constant(Fraction(3, 2) * r)
    entry_b = Poly.of(1, 0, 0, 1)
    entry_e = Poly.of(0, 0, Fraction(-3, 2))
    entry_c = Poly.of(0, 3)
    gram = ((entry_a, entry_d, zero),
            (entry_d, entry_b, entry_e),
            (zero, entry_e, entry_c))
    infinity_gram = ((a, Fraction(0), Fraction(0)),
                     (Fraction(0), Fraction(1), Fraction(-1, 2)),
                     (Fraction(0), Fraction(-1, 2), Fraction(1)))

    g1 = build_resolvents(surface).g1(r)
    discriminant = _det3(gram)
    expected = Poly.of(0, Fraction(3, 4)) * Poly.of(1, 1) * g1
    if discriminant != expected:
        raise InconsistencyError(f"det T = {discriminant}, expected {expected}")

    bundle = BundleData(surface=surface, r=r, axis=axis, gram=gram,
                        infinity_gram=infinity_gram, discriminant=discriminant, g1=g1)
    _verify_bundle(bundle)
    logger.debug("conic bundle: r=%s axis=%s det=%s", r, axis, discriminant)
    return bundle


@dataclass(frozen=True)
class ClosedPoint:
    """A closed point of P^1: a monic irreducible poly in mu, or infinity."""
    poly: Optional[Poly] = None

    @classmethod
    def infinity(cls) -> 'ClosedPoint':
        return cls(None)

    @property
    def at_infinity(self) -> bool:
        return self.poly is None

    @property
    def degree(self) -> int:
        return 1 if self.poly is None else self.poly.degree

    @property
    def residue_modulus(self) -> Poly:
        return Poly.x() if self.poly is None else self.poly

    @property
    def root(self) -> Optional[Fraction]:
        if self.poly is None or self.poly.degree != 1:
            return None
        return -self.poly.coeff(0)

    def sort_key(self):
        if self.poly is None:
            return (0,)
        return (1, self.degree, tuple(reversed(self.poly.coeffs)))

    def __str__(self) -> str:
        return "inf" if self.poly is None else f"({self.poly})"


def singular_locus(bundle: BundleData) -> List[ClosedPoint]:
    """Closed points with singular fibres, infinity first then by (degree, coefficients)."""
    discriminant = bundle.discriminant
    if not discriminant.is_squarefree():
        raise InconsistencyError(f"det T = {discriminant} has a repeated factor")
    points = [ClosedPoint.infinity()] if bundle.surface.a == 0 else []
    rest = discriminant.monic()
    for root in rational_roots(rest):
        linear = Poly.of(-root, 1)
        points.append(ClosedPoint(linear))
        rest = rest // linear
    if rest.degree > 0:
        points.append(ClosedPoint(rest))
    if sum(point.degree for point in points) != 5:
        raise InconsistencyError(
            f"Singular fibre degrees {[p.degree for p in points]} do not sum to 5")
    return sorted(points, key=ClosedPoint.sort_key)


@dataclass(frozen=True)
class FibreData:
    point: ClosedPoint
    a_p: EtaleElement
    norm_class: SquareClass
    pivot_order: Tuple[int, int, int] = (0, 1, 2)


def _diagonal_pivot(m, indices):
    return next((i for i in indices if not m[i][i].is_zero), None)


def _rank_two_discriminant(matrix, pivot_order: Sequence[int]) -> EtaleElement:
    """-alpha*beta for a diagonalisation <alpha, beta, 0> of a rank-2 form."""
    m = [list(row) for row in matrix]
    order = list(pivot_order)
    i = _diagonal_pivot(m, order)
    if i is None:
        pair = next(((s, t) for s in order for t in order
                     if s != t and not m[s][t].is_zero), None)
        if pair is None:
            raise InconsistencyError("Singular fibre has rank 0")
        s, t = pair
        # e_s -> e_s + e_t
        m[s] = [m[s][c] + m[t][c] for c in range(3)]
        for row in m:
            row[s] = row[s] + row[t]
        i = s
    alpha = m[i][i]
    inverse = alpha.inverse()
    j, k = (c for c in order if c != i)
    schur = [[m[p][q] - m[p][i] * m[i][q] * inverse for q in (j, k)] for p in (j, k)]
    det = schur[0][0] * schur[1][1] - schur[0][1] * schur[1][0]
    if not det.is_zero:
        raise InconsistencyError("Fibre conic is smooth (rank 3), not singular")
    beta = schur[0][0] if not schur[0][0].is_zero else schur[1][1]
    if beta.is_zero:
        raise InconsistencyError("Singular fibre has rank 1")
    return -(alpha * beta)


def splitting_class(bundle: BundleData, point: ClosedPoint,
                    pivot_order: Tuple[int, int, int] = (0, 1, 2)) -> FibreData:
    if sorted(pivot_order) != [0, 1, 2]:
        raise ValidationError(f"pivot_order must permute (0, 1, 2), got {pivot_order}")
    modulus = point.residue_modulus
    if point.at_infinity:
        if bundle.surface.a != 0:
            raise ValidationError("The fibre at infinity is smooth when a != 0")
        matrix = [[EtaleElement.scalar(modulus, e) for e in row]
                  for row in bundle.infinity_gram]
    else:
        if not (bundle.discriminant % modulus).is_zero:
            raise ValidationError(f"{point} is not in the singular locus")
        matrix = [[EtaleElement(modulus, e) for e in row] for row in bundle.gram]
    a_p = _rank_two_discriminant(matrix, pivot_order)
    norm_class = square_class(etale_norm(a_p))
    logger.debug("fibre %s: a_p = %s, norm class %s", point, a_p, norm_class)
    return FibreData(point=point, a_p=a_p, norm_class=norm_class,
                     pivot_order=tuple(pivot_order))


@dataclass(frozen=True)
class EpsilonGroup:
    """Kernel of eps -> prod N(a_p)^eps_p in Q*/Q*^2, indexed like the fibres.

    Unit vectors at split fibres (norm class 1) are listed apart as trivial
    directions; generators are supported on the remaining fibres.
    """
    points: Tuple[ClosedPoint, ...]
    norm_classes: Tuple[SquareClass, ...]
    generators: Tuple[Tuple[int, ...], ...]
    trivial_directions: Tuple[Tuple[int, ...], ...]


def epsilon_group(fibres: Sequence[FibreData]) -> EpsilonGroup:
    classes = [f.norm_class for f in fibres]
    width = len(classes)
    support = [i for i, c in enumerate(classes) if not c.is_trivial]
    primes = sorted({q for i in support for q in sp.primefactors(abs(classes[i].value))})
    rows = [[1 if classes[i].value < 0 else 0 for i in support]]
    rows += [[1 if classes[i].value % q == 0 else 0 for i in support] for q in primes]
    generators = []
    for vector in gf2_kernel(rows, len(support)):
        full = [0] * width
        for position, i in enumerate(support):
            full[i] = vector[position]
        generators.append(tuple(full))
    trivial = [tuple(1 if c == i else 0 for c in range(width))
               for i in range(width) if classes[i].is_trivial]
    return EpsilonGroup(points=tuple(f.point for f in fibres),
                        norm_classes=tuple(classes),
                        generators=tuple(generators),
                        trivial_directions=tuple(trivial))


@dataclass(frozen=True)
class CBSymbol:
    """(mu - tau, a_p), or (1/mu, a_p) at the chart at infinity (tau None)."""
    tau: Optional[Fraction]
    a_p: int

    def slot(self, mu: Optional[Fraction]) -> Fraction:
        if self.tau is None:
            if mu is None or mu == 0:
                raise UnsupportedError(
                    f"Slot 1/mu of the symbol at infinity is undefined at mu = {mu}")
            return 1 / mu
        if mu is None:
            raise UnsupportedError(
                f"Slot mu - {self.tau} is undefined on the fibre at infinity")
        value = mu - self.tau
        if value == 0:
            raise UnsupportedError(f"Slot mu - {self.tau} vanishes at this point")
        return value


@dataclass(frozen=True)
class ParameterConvention:
    axis: int
    r: Fraction
    parameter: str = "mu = l1/l2 (the plane l1 = mu*l2)"
    fallback: str = "mu = -C2/C1 on the line (tangent plane)"


@dataclass(frozen=True)
class BrauerClassCB:
    epsilon: Tuple[int, ...]
    symbols: Tuple[CBSymbol, ...]
    convention: ParameterConvention
    bundle: BundleData = field(repr=False, compare=False, metadata={'skip': True})


def brauer_class(bundle: BundleData, fibres: Sequence[FibreData],
                 epsilon: Sequence[int]) -> BrauerClassCB:
    epsilon = tuple(int(e) % 2 for e in epsilon)
    if len(epsilon) != len(fibres):
        raise ValidationError("epsilon must have one entry per singular fibre")
    product = SquareClass(1)
    for e, fibre in zip(epsilon, fibres):
        if e:
            product = product * fibre.norm_class
    if not product.is_trivial:
        raise ValidationError(
            f"epsilon {epsilon} is not in the kernel (norm product {product})")

    symbols = []
    for e, fibre in zip(epsilon, fibres):
        if not e:
            continue
        if fibre.point.degree >= 2:
            raise UnsupportedError(
                f"Corestriction from the degree-{fibre.point.degree} point "
                f"{fibre.point} is not evaluated")
        a_p = square_class(fibre.a_p.as_rational())
        if a_p.is_trivial:
            continue
        symbols.append(CBSymbol(tau=fibre.point.root, a_p=a_p.value))
    convention = ParameterConvention(axis=bundle.axis, r=bundle.r)
    return BrauerClassCB(epsilon=epsilon, symbols=tuple(symbols),
                         convention=convention, bundle=bundle)


def point_parameter(bundle: BundleData, point) -> Optional[Fraction]:
    """The fibre through a rational point; None is the fibre at infinity."""
    if not bundle.surface.contains(point):
        raise ValidationError(f"{tuple(str(c) for c in point)} is not on the surface")
    l1, l2, c1, c2 = bundle.forms(point)
    if l2 != 0:
        return l1 / l2
    if l1 != 0:
        return None
    if c1 != 0:
        return -c2 / c1
    if c2 != 0:
        return None
    raise UnsupportedError("Fibre parameter is undefined at this point")


def evaluate_class(brauer: BrauerClassCB, point, place: Place) -> Fraction:
    """Sum of local invariants of the symbols at a rational point."""
    if not brauer.symbols:
        if not brauer.bundle.surface.contains(point):
            raise ValidationError("Point is not on the surface")
        return Fraction(0)
    mu = point_parameter(brauer.bundle, point)
    total = sum((hilbert(symbol.slot(mu), symbol.a_p, place) for symbol in brauer.symbols),
                Fraction(0))
    return total % 1


@dataclass(frozen=True)
class ApproximationScan:
    place: Place
    invariants: Tuple[Fraction, ...]
    verdict: str


def weak_approx_scan(brauer: BrauerClassCB, place: Place, samples) -> ApproximationScan:
    samples = list(samples)
    for sample in samples:
        if not brauer.bundle.surface.contains(sample):
            raise ValidationError(f"Sample {tuple(str(c) for c in sample)} is off the surface")
    attained = tuple(sorted({evaluate_class(brauer, s, place) for s in samples}))
    if len(attained) >= 2:
        verdict = "FailsWeakApproximation"
    elif len(samples) < 2:
        verdict = "Inconclusive"
    else:
        verdict = "NoFailureDetected"
    return ApproximationScan(place=place, invariants=attained, verdict=verdict)
