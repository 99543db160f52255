"""Surfaces f(u1)+f(u2)+f(u3) = n: input model, depressed model, resolvent
cubics, the discriminant triple and smoothness."""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

import sympy as sp

from .algebra import Poly, Scalar, integer_sqrt, is_square, rational_roots, to_fraction, to_sympy
from .exceptions import InconsistencyError, ValidationError

logger = logging.getLogger(__name__)

ProjectivePoint = Tuple[Fraction, Fraction, Fraction, Fraction]

BOUNDARY_POINT: ProjectivePoint = (Fraction(0), Fraction(1), Fraction(-1), Fraction(0))


def _require_int(name: str, value) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"{name} must be an integer, got {value!r}")
    return value


@dataclass(frozen=True)
class CubicInput:
    """f(u) = u^3 + a2 u^2 + a1 u + a0 and the target n."""
    a2: int
    a1: int
    a0: int
    n: int

    def __post_init__(self):
        for name in ('a2', 'a1', 'a0', 'n'):
            _require_int(name, getattr(self, name))

    @property
    def poly(self) -> Poly:
        return Poly.of(self.a0, self.a1, self.a2, 1)

    def f(self, u: int) -> int:
        return ((u + self.a2) * u + self.a1) * u + self.a0

    def df(self, u: int) -> int:
        return (3 * u + 2 * self.a2) * u + self.a1

    def value(self, point) -> int:
        """G(u) = f(u1) + f(u2) + f(u3) - n."""
        return sum(self.f(u) for u in point) - self.n

    def gradient(self, point) -> Tuple[int, ...]:
        return tuple(self.df(u) for u in point)


@dataclass(frozen=True)
class Provenance:
    """Record of u -> (v - a2)/3 with 27 f((v - a2)/3) = v^3 + a v + c."""
    source: CubicInput
    shift: int
    constant: int


@dataclass(frozen=True)
class DepressedSurface:
    """sum(u_i^3 + a u_i + b) = n, with d = 3b - n."""
    a: Fraction
    b: Fraction
    n: Fraction
    provenance: Optional[Provenance] = None

    def __post_init__(self):
        for name in ('a', 'b', 'n'):
            object.__setattr__(self, name, to_fraction(getattr(self, name)))

    @classmethod
    def from_ad(cls, a: Scalar, d: Scalar) -> 'DepressedSurface':
        return cls(a=a, b=0, n=-to_fraction(d))

    @property
    def d(self) -> Fraction:
        return 3 * self.b - self.n

    @property
    def f1(self) -> Poly:
        return Poly.of(self.d, self.a, 0, 1)

    def form(self, point) -> Fraction:
        """Projective cubic G(x0, x1, x2, x3)."""
        x0, *xs = (to_fraction(c) for c in point)
        return (sum(x ** 3 + self.a * x * x0 ** 2 for x in xs)
                + self.d * x0 ** 3)

    def form_gradient(self, point) -> Tuple[Fraction, ...]:
        x0, *xs = (to_fraction(c) for c in point)
        d0 = 2 * self.a * x0 * sum(xs) + 3 * self.d * x0 ** 2
        return (d0,) + tuple(3 * x ** 2 + self.a * x0 ** 2 for x in xs)

    def contains(self, point) -> bool:
        return self.form(point) == 0


def normalize(cubic: CubicInput) -> DepressedSurface:
    """Shift-and-scale u -> (v - a2)/3; the new target is 27n - 3c."""
    a2, a1, a0 = cubic.a2, cubic.a1, cubic.a0
    a = 9 * a1 - 3 * a2 ** 2
    constant = 2 * a2 ** 3 - 9 * a1 * a2 + 27 * a0

    u = sp.Symbol('u')
    substituted = 27 * cubic.poly.as_expr(u).subs(u, (u - a2) / sp.Integer(3))
    if sp.expand(substituted - (u ** 3 + a * u + constant)) != 0:
        raise InconsistencyError(
            f"Normalisation identity fails for f = {cubic.poly}")

    surface = DepressedSurface(
        a=a, b=0, n=27 * cubic.n - 3 * constant,
        provenance=Provenance(source=cubic, shift=a2, constant=constant))
    logger.debug("normalize(%s) -> a=%s n'=%s", cubic, surface.a, surface.n)
    return surface


def reduces_to_cubes(cubic: CubicInput) -> bool:
    return 3 * cubic.a1 - cubic.a2 ** 2 == 0


def sum_of_cubes_target(cubic: CubicInput) -> int:
    """N with the surface integrally isomorphic to v1^3 + v2^3 + v3^3 = N."""
    if not reduces_to_cubes(cubic):
        raise ValidationError("3*a1 - a2^2 must vanish for a sum of cubes")
    c = cubic.a2 // 3
    # f(u) = (u + c)^3 + a0 - c^3
    return cubic.n - 3 * (cubic.a0 - c ** 3)


def to_original(surface: DepressedSurface,
                point: Tuple[Fraction, ...]) -> Tuple[Tuple[Fraction, ...], bool]:
    """Pull a depressed affine point back to the input model.

    Returns the coordinates and whether they are all integers.
    """
    if surface.provenance is None:
        coords = tuple(to_fraction(v) for v in point)
    else:
        shift = surface.provenance.shift
        coords = tuple((to_fraction(v) - shift) / 3 for v in point)
    return coords, all(c.denominator == 1 for c in coords)


@dataclass(frozen=True)
class ResolventPair:
    f1: Poly
    f2: Poly

    def g1(self, r: Scalar) -> Poly:
        """a y^3 + 3r^2 y^2 - 3r^2 y + (4a + 3r^2), with a read off f1."""
        a = self.f1.coeff(1)
        r = to_fraction(r)
        return Poly.from_high(a, 3 * r ** 2, -3 * r ** 2, 4 * a + 3 * r ** 2)


def build_resolvents(surface: DepressedSurface) -> ResolventPair:
    a, d = surface.a, surface.d
    f2 = Poly.from_high(1, -12 * a, 36 * a ** 2, 27 * d ** 2 + 4 * a ** 3)
    return ResolventPair(f1=surface.f1, f2=f2)


@dataclass(frozen=True)
class DiscriminantTriple:
    delta1: Fraction
    delta2: Fraction
    delta3: Fraction
    delta1_square: bool
    delta2_square: bool
    delta3_square: bool

    def non_square(self) -> bool:
        return not (self.delta1_square or self.delta2_square
                    or self.delta3_square)


def _pq(surface: DepressedSurface) -> Tuple[Fraction, Fraction]:
    a, d = surface.a, surface.d
    return 4 * a ** 3 + 27 * d ** 2, 4 * a ** 3 + 3 * d ** 2


def discriminant_triple(surface: DepressedSurface) -> DiscriminantTriple:
    p_factor, q_factor = _pq(surface)
    delta1 = -p_factor
    delta2 = -243 * p_factor * q_factor
    delta3 = delta2 / delta1 if delta1 != 0 else Fraction(0)
    return DiscriminantTriple(
        delta1=delta1, delta2=delta2, delta3=delta3,
        delta1_square=is_square(delta1),
        delta2_square=is_square(delta2),
        delta3_square=is_square(delta3))


def is_smooth(surface: DepressedSurface) -> bool:
    """Smooth iff Delta2 != 0.

    A singular point has x0 = 1 and x_i = eps_i * s with s^2 = -a/3, which
    forces 27 d^2 = -4 a^3 m^2 for m = sum(eps_i) in {+-1, +-3}.
    """
    p_factor, q_factor = _pq(surface)
    return p_factor * q_factor != 0


_SIGNS_BY_SUM = {3: (1, 1, 1), 1: (1, 1, -1), -1: (1, -1, -1), -3: (-1, -1, -1)}


def find_singular_point(surface: DepressedSurface) -> Optional[ProjectivePoint]:
    """A rational singular point (x0, x1, x2, x3) when one exists."""
    if is_smooth(surface):
        return None
    a, d = surface.a, surface.d
    if a == 0:
        point = (Fraction(1), Fraction(0), Fraction(0), Fraction(0))
    else:
        square = -a / 3
        if not is_square(square):
            return None
        sigma = Fraction(integer_sqrt(square.numerator)[0],
                         integer_sqrt(square.denominator)[0])
        m = -3 * d / (2 * a * sigma)
        if m not in _SIGNS_BY_SUM:
            return None
        point = (Fraction(1),) + tuple(sigma * e for e in _SIGNS_BY_SUM[m])
    if surface.form(point) != 0 or any(surface.form_gradient(point)):
        raise InconsistencyError(f"{point} is not a singular point of {surface}")
    return point


def nonsmooth_n_values(a: Scalar, b: Scalar) -> List[Fraction]:
    """Rational n with Delta2(n) = 0 (d^2 = -4a^3/27 or -4a^3/3)."""
    a, b = to_fraction(a), to_fraction(b)
    values = set()
    for d_squared in (-4 * a ** 3 / 27, -4 * a ** 3 / 3):
        if d_squared < 0 or not is_square(d_squared):
            continue
        d = Fraction(integer_sqrt(d_squared.numerator)[0],
                     integer_sqrt(d_squared.denominator)[0])
        values.update({3 * b - d, 3 * b + d})
    return sorted(values)


@dataclass(frozen=True)
class Line:
    """{x_axis = r x0, x_j + x_k = 0} for {axis, j, k} = {1, 2, 3}."""
    axis: int
    r: Fraction

    def point(self, x0: Scalar, t: Scalar) -> ProjectivePoint:
        coords = [Fraction(0)] * 4
        coords[0] = to_fraction(x0)
        others = [i for i in (1, 2, 3) if i != self.axis]
        coords[self.axis] = self.r * coords[0]
        coords[others[0]] = to_fraction(t)
        coords[others[1]] = -to_fraction(t)
        return tuple(coords)


def rational_lines(surface: DepressedSurface) -> List[Line]:
    """Lines of the surface coming from rational roots of f1."""
    x0, t = sp.symbols('x0 t')
    lines = []
    for r in rational_roots(surface.f1):
        for axis in (1, 2, 3):
            line = Line(axis=axis, r=r)
            generic = [x0, 0, 0, 0]
            generic[axis] = to_sympy(r) * x0
            others = [i for i in (1, 2, 3) if i != axis]
            generic[others[0]], generic[others[1]] = t, -t
            form = (sum(c ** 3 + to_sympy(surface.a) * c * x0 ** 2
                        for c in generic[1:])
                    + to_sympy(surface.d) * x0 ** 3)
            if sp.expand(form) != 0:
                raise InconsistencyError(f"{line} does not lie on the surface")
            lines.append(line)
    return lines


def search_box(cubic: CubicInput, box: int) -> List[Tuple[int, int, int]]:
    """Integer solutions with |u_i| <= box, in lexicographic order."""
    if box < 0:
        raise ValidationError("box must be nonnegative")
    span = range(-box, box + 1)
    by_value = {}
    for u in span:
        by_value.setdefault(cubic.f(u), []).append(u)
    points = []
    for u1 in span:
        for u2 in span:
            rest = cubic.n - cubic.f(u1) - cubic.f(u2)
            points.extend((u1, u2, u3) for u3 in by_value.get(rest, []))
    return points


def boundary_rational_point(surface: DepressedSurface) -> ProjectivePoint:
    """(0 : 1 : -1 : 0), on every member of the family."""
    if not surface.contains(BOUNDARY_POINT):
        raise InconsistencyError(f"{BOUNDARY_POINT} is not on {surface}")
    return BOUNDARY_POINT
