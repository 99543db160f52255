"""Effective enumeration of the integers n where the classification is silent."""
import logging
from dataclasses import dataclass
from typing import Iterable, List, Set, Tuple

import sympy as sp

from .algebra import integer_cbrt, integer_sqrt
from .exceptions import ValidationError
from .surface import DepressedSurface, discriminant_triple

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExceptionalSet:
    """Exceptional n for sum(u^3 + a u + b) = n.

    The singular and square lists are complete over all integers n.  The f2
    list is exact for |n| <= search_bound; f2_complete records that the x-side
    window covered every such n.
    """
    a: int
    b: int
    singular_n: Tuple[int, ...]
    delta1_square_n: Tuple[int, ...]
    delta2_square_n: Tuple[int, ...]
    delta3_square_n: Tuple[int, ...]
    f2_reducible_n: Tuple[int, ...]
    f2_complete: bool
    search_bound: int
    x_window: int

    def contains(self, n: int) -> bool:
        return n in set(self.singular_n).union(
            self.delta1_square_n, self.delta2_square_n,
            self.delta3_square_n, self.f2_reducible_n)


def _exact_sqrt(value: int):
    if value < 0:
        return None
    root, exact = integer_sqrt(value)
    return root if exact else None


def _square_d(a: int, d_values: Iterable[int], which: str) -> List[int]:
    hits = []
    for d in d_values:
        triple = discriminant_triple(DepressedSurface.from_ad(a, d))
        if getattr(triple, f"{which}_square"):
            hits.append(d)
    return hits


def _singular_d(a: int) -> Set[int]:
    values = set()
    for numerator, denominator in ((-4 * a ** 3, 27), (-4 * a ** 3, 3)):
        if numerator % denominator:
            continue
        root = _exact_sqrt(numerator // denominator)
        if root is not None:
            values.update({root, -root})
    return values


def _delta1_square_d(a: int) -> List[int]:
    """Delta1 = -(4a^3 + 27d^2) >= 0 needs 27 d^2 <= -4a^3."""
    if a > 0:
        return []
    limit = integer_sqrt(-4 * a ** 3 // 27)[0]
    return _square_d(a, range(-limit, limit + 1), 'delta1')


def _delta2_square_d(a: int) -> List[int]:
    """Delta2 >= 0 needs -4a^3/27 <= d^2 <= -4a^3/3 (a < 0)."""
    if a > 0:
        return []
    upper = integer_sqrt(-4 * a ** 3 // 3)[0]
    window = [d for d in range(-upper, upper + 1)
              if 27 * d ** 2 >= -4 * a ** 3 and 3 * d ** 2 <= -4 * a ** 3]
    return _square_d(a, window, 'delta2')


def _delta3_square_d(a: int) -> List[int]:
    """Delta3 = 243(4a^3 + 3d^2) is a square iff t^2 - d^2 = 36 (a/3)^3.

    Delta3 is zero (a square) where Delta1 vanishes.
    """
    if a % 3:
        return []
    target = 36 * (a // 3) ** 3
    candidates = set(_singular_d(a))
    for e in sp.divisors(abs(target)):
        for low in (e, -e):
            high = target // low
            if (low + high) % 2 == 0:
                d = (high - low) // 2
                candidates.update({d, -d})
    return _square_d(a, sorted(candidates), 'delta3')


def _f2_reducible_n(a: int, b: int, bound: int, window_scale: int) -> Tuple[List[int], int]:
    """Integer roots x of f2 = x (x - 6a)^2 + 27 d^2 + 4a^3 with |n| <= bound.

    For |x| >= 12|a|, |x (x - 6a)^2| >= |x|^3 / 4, which bounds the scan.
    """
    d_max = abs(3 * b) + bound
    reach = integer_cbrt(4 * (27 * d_max ** 2 + 4 * abs(a) ** 3)) + 1
    window = max(12 * abs(a), reach) * window_scale
    found = set()
    for x in range(-window, window + 1):
        rest = -4 * a ** 3 - x * (x - 6 * a) ** 2
        if rest < 0 or rest % 27:
            continue
        root = _exact_sqrt(rest // 27)
        if root is None:
            continue
        for d in (root, -root):
            n = 3 * b - d
            if abs(n) <= bound:
                found.add(n)
    return sorted(found), window


def exceptional_set(a: int, b: int, bound: int,
                    window_scale: int = 1) -> ExceptionalSet:
    if a == 0:
        raise ValidationError("exceptional_set needs a != 0; a = 0 is the sum-of-cubes case")
    if bound < 0:
        raise ValidationError("bound must be nonnegative")
    if window_scale < 1:
        raise ValidationError("window_scale must be at least 1")

    def to_n(d_values: Iterable[int]) -> Tuple[int, ...]:
        return tuple(sorted({3 * b - d for d in d_values}))

    f2_n, window = _f2_reducible_n(a, b, bound, window_scale)
    result = ExceptionalSet(
        a=a, b=b,
        singular_n=to_n(_singular_d(a)),
        delta1_square_n=to_n(_delta1_square_d(a)),
        delta2_square_n=to_n(_delta2_square_d(a)),
        delta3_square_n=to_n(_delta3_square_d(a)),
        f2_reducible_n=tuple(f2_n),
        f2_complete=True,
        search_bound=bound,
        x_window=window,
    )
    logger.info("exceptional_set(a=%s, b=%s, bound=%s): %s f2-reducible n, x-window %s",
                a, b, bound, len(f2_n), window)
    return result

