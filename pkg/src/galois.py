"""Galois classification of the line configuration and Brauer group verdicts."""
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Tuple

import sympy as sp

from .algebra import Scalar, rational_roots, to_fraction, to_sympy
from .exceptions import NotSmoothError, TableLookupError, ValidationError
from .surface import (DepressedSurface, build_resolvents, discriminant_triple,
                      is_smooth, to_original)

logger = logging.getLogger(__name__)


class GaloisLabel(str, Enum):
    S3_X_S3 = "S3xS3"
    C2_X_S3_F1_REDUCIBLE = "C2xS3_f1_reducible"
    SUM_OF_CUBES = "SumOfCubes"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class AbelianGroup:
    """Finite abelian group by invariant factors; () is the trivial group."""
    invariants: Tuple[int, ...] = ()

    def __str__(self) -> str:
        if not self.invariants:
            return "0"
        parts = {}
        for k in self.invariants:
            parts[k] = parts.get(k, 0) + 1
        return " x ".join(f"(Z/{k})^{e}" if e > 1 else f"Z/{k}"
                          for k, e in sorted(parts.items()))

    @property
    def is_trivial(self) -> bool:
        return not self.invariants


def _orbit(*blocks: Tuple[int, int]) -> Tuple[int, ...]:
    """Expand (size, multiplicity) blocks into a sorted orbit multiset."""
    return tuple(sorted(size for size, count in blocks for _ in range(count)))


TRIVIAL = AbelianGroup()

# (group, orbit type, H^1(Q, Pic)) rows of the table of possible Galois types
GALOIS_TYPES: Tuple[Tuple[str, Tuple[int, ...], AbelianGroup], ...] = (
    ("C1", _orbit((1, 27)), TRIVIAL),
    ("C2", _orbit((1, 15), (2, 6)), TRIVIAL),
    ("C2", _orbit((1, 3), (2, 12)), AbelianGroup((2, 2))),
    ("C2", _orbit((1, 3), (2, 12)), TRIVIAL),
    ("C3", _orbit((1, 9), (3, 6)), TRIVIAL),
    ("C3", _orbit((3, 9)), TRIVIAL),
    ("C3", _orbit((3, 9)), AbelianGroup((3, 3))),
    ("C2^2", _orbit((1, 3), (2, 6), (4, 3)), AbelianGroup((2,))),
    ("S3", _orbit((3, 3), (6, 3)), AbelianGroup((2, 2))),
    ("S3", _orbit((1, 9), (3, 6)), TRIVIAL),
    ("C6", _orbit((1, 3), (2, 3), (6, 3)), TRIVIAL),
    ("C6", _orbit((3, 5), (6, 2)), TRIVIAL),
    ("S3", _orbit((1, 3), (2, 3), (6, 3)), TRIVIAL),
    ("S3", _orbit((3, 3), (6, 3)), TRIVIAL),
    ("S3", _orbit((3, 3), (6, 3)), AbelianGroup((3,))),
    ("C3^2", _orbit((3, 3), (9, 2)), AbelianGroup((3,))),
    ("C2xS3", _orbit((3, 3), (6, 1), (12, 1)), AbelianGroup((2,))),
    ("C2xS3", _orbit((1, 3), (2, 3), (6, 3)), TRIVIAL),
    ("C3:S3", _orbit((3, 3), (18, 1)), TRIVIAL),
    ("C3xS3", _orbit((3, 3), (9, 2)), AbelianGroup((3,))),
    ("C3xS3", _orbit((3, 3), (18, 1)), TRIVIAL),
    ("S3xS3", _orbit((3, 3), (18, 1)), TRIVIAL),
)

S3XS3_ORBIT = _orbit((3, 3), (18, 1))
C2XS3_ORBIT = _orbit((1, 3), (2, 3), (6, 3))


def table1_lookup(group_label: str, orbit_type) -> AbelianGroup:
    """H^1(Q, Pic) for a (group, orbit type) pair of the Galois type table."""
    key = (group_label, tuple(sorted(orbit_type)))
    candidates = sorted({str(h1) for group, orbit, h1 in GALOIS_TYPES
                         if (group, orbit) == key})
    if not candidates:
        raise TableLookupError(f"No Galois type {group_label} {list(key[1])}")
    if len(candidates) > 1:
        raise TableLookupError(
            f"Galois type {group_label} {list(key[1])} is ambiguous: "
            f"{', '.join(candidates)}", candidates)
    return next(h1 for group, orbit, h1 in GALOIS_TYPES if (group, orbit) == key)


@dataclass(frozen=True)
class GaloisClassification:
    f1_irreducible: bool
    f2_irreducible: bool
    delta1_square: bool
    delta2_square: bool
    delta3_square: bool
    label: GaloisLabel
    orbit_type: Optional[Tuple[int, ...]] = None
    h1: Optional[AbelianGroup] = None
    reasons: Tuple[str, ...] = ()


def classify_galois(surface: DepressedSurface) -> GaloisClassification:
    if not is_smooth(surface):
        raise NotSmoothError(f"Cannot classify a singular surface: {surface}")
    resolvents = build_resolvents(surface)
    triple = discriminant_triple(surface)
    f1_irreducible = not rational_roots(resolvents.f1)
    f2_irreducible = not rational_roots(resolvents.f2)
    flags = dict(f1_irreducible=f1_irreducible, f2_irreducible=f2_irreducible,
                 delta1_square=triple.delta1_square,
                 delta2_square=triple.delta2_square,
                 delta3_square=triple.delta3_square)

    if surface.a == 0:
        return GaloisClassification(**flags, label=GaloisLabel.SUM_OF_CUBES)

    reasons = []
    if not f2_irreducible:
        reasons.append("f2 is reducible")
    for name in ('delta1', 'delta2', 'delta3'):
        if flags[f"{name}_square"]:
            reasons.append(f"{name} is a square")
    if reasons:
        if not f1_irreducible:
            reasons.insert(0, "f1 is reducible")
        logger.info("classification inconclusive: %s", "; ".join(reasons))
        return GaloisClassification(**flags, label=GaloisLabel.INCONCLUSIVE,
                                    reasons=tuple(reasons))

    if f1_irreducible:
        label, group, orbit = GaloisLabel.S3_X_S3, "S3xS3", S3XS3_ORBIT
    else:
        label, group, orbit = GaloisLabel.C2_X_S3_F1_REDUCIBLE, "C2xS3", C2XS3_ORBIT
    return GaloisClassification(**flags, label=label, orbit_type=orbit,
                                h1=table1_lookup(group, orbit))


class BrauerValue(str, Enum):
    TRIVIAL_BR_Q = "TrivialBrQ"
    Z_MOD_THREE_ALGEBRAIC = "ZmodThree_algebraic"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class BrauerVerdict:
    target: str
    value: BrauerValue
    reason: Optional[str] = None
    justification: Tuple[str, ...] = ()


def brauer_X(surface: DepressedSurface) -> BrauerVerdict:
    classification = classify_galois(surface)
    if classification.label in (GaloisLabel.S3_X_S3,
                                GaloisLabel.C2_X_S3_F1_REDUCIBLE):
        return BrauerVerdict(
            target="X", value=BrauerValue.TRIVIAL_BR_Q,
            justification=(
                "X has the rational point [0:1:-1:0], so Br X/Br Q = H^1(Q, Pic)",
                f"Galois type {classification.label.value} "
                f"{list(classification.orbit_type)} has H^1 = {classification.h1}",
            ))
    if classification.label is GaloisLabel.SUM_OF_CUBES:
        if classification.f1_irreducible:
            return BrauerVerdict(
                target="X", value=BrauerValue.Z_MOD_THREE_ALGEBRAIC,
                justification=("a = 0 and f1 irreducible: Br X/Br Q = Z/3 "
                               "(known result for sums of three cubes)",))
        return BrauerVerdict(target="X", value=BrauerValue.UNKNOWN,
                             reason="a = 0 with f1 reducible")
    return BrauerVerdict(
        target="X", value=BrauerValue.UNKNOWN,
        reason="n in the exceptional set: " + "; ".join(classification.reasons))


def brauer_U(surface: DepressedSurface) -> BrauerVerdict:
    if not is_smooth(surface):
        raise NotSmoothError(f"Cannot decide Br U on a singular surface: {surface}")
    if discriminant_triple(surface).delta1_square:
        return BrauerVerdict(
            target="U", value=BrauerValue.UNKNOWN,
            reason="delta1 is a square, so Br X -> Br U need not be an isomorphism")
    verdict = brauer_X(surface)
    return BrauerVerdict(
        target="U", value=verdict.value, reason=verdict.reason,
        justification=verdict.justification + (
            "delta1 non-square: Br X -> Br U is an isomorphism",))


@dataclass(frozen=True)
class RationalPoint:
    root: Fraction
    depressed_point: Tuple[Fraction, Fraction, Fraction]
    original_point: Tuple[Fraction, Fraction, Fraction]
    integral: bool


def rational_point_from_f1_root(surface: DepressedSurface) -> Optional[RationalPoint]:
    """(r, 0, 0) for a rational root r of f1, pulled back to the input model.

    (r, t, -t) lies on the depressed surface for every t. It pulls back to an
    integral point only if (r, 0, 0) does, so t = 0 is the only candidate.
    """
    roots = rational_roots(surface.f1)
    if not roots:
        return None
    candidates = []
    for r in roots:
        point = (r, Fraction(0), Fraction(0))
        if sum(v ** 3 + surface.a * v + surface.b for v in point) != surface.n:
            raise ValidationError(f"{point} is not on {surface}")
        original, integral = to_original(surface, point)
        candidates.append(RationalPoint(r, point, original, integral))
    return next((c for c in candidates if c.integral), candidates[0])


def verify_resolvent_identity(surface: DepressedSurface,
                              root: Optional[Scalar] = None) -> bool:
    """f2(xi(y)) = 0 mod g1(y) over l = Q[r]/(f1), where
    xi = -(a y^2 + (3r^2 - a) y - (4a + 3r^2))."""
    f1 = surface.f1
    if not f1.is_squarefree():
        raise ValidationError(f"f1 = {f1} is not separable")
    r, y = sp.symbols('r y')
    a = to_sympy(surface.a)
    f2 = build_resolvents(surface).f2
    xi = -(a * y ** 2 + (3 * r ** 2 - a) * y - (4 * a + 3 * r ** 2))
    g1 = a * y ** 3 + 3 * r ** 2 * y ** 2 - 3 * r ** 2 * y + (4 * a + 3 * r ** 2)
    composed = sp.expand(f2.as_expr(sp.Symbol('x')).subs(sp.Symbol('x'), xi))

    if root is not None:
        root = to_fraction(root)
        if f1(root) != 0:
            raise ValidationError(f"{root} is not a root of f1 = {f1}")
        remainder = sp.rem(composed.subs(r, to_sympy(root)),
                           g1.subs(r, to_sympy(root)), y)
        return sp.expand(remainder) == 0

    modulus = f1.as_expr(r)
    leading = sp.Poly(g1, y).LC()
    invertible = (leading != 0 if leading.is_number
                  else sp.resultant(leading, modulus, r) != 0)
    if not invertible:
        raise ValidationError("g1 has a zero-divisor leading coefficient in l")
    remainder = sp.prem(composed, g1, y)
    coefficients = sp.Poly(remainder, y).all_coeffs() if remainder != 0 else []
    holds = all(sp.rem(sp.expand(c), modulus, r) == 0 for c in coefficients)
    logger.debug("resolvent identity over Q[r]/(%s): %s", f1, holds)
    return holds

