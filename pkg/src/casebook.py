"""Worked results run end to end: the tetrahedral-number equation
u(u+1)(u+2) summed over three variables equal to 6n, the weak-approximation
failure on x1^3 + x2^3 + x3^3 + 21(x1 + x2 + x3) = 50, and non-rationality."""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache, partial
from typing import Dict, Iterator, List, Optional, Tuple

import sympy as sp

from .algebra import Poly, cubic_discriminant, rational_roots, square_class
from .conic_bundle import (build_bundle, brauer_class, epsilon_group,
                           singular_locus, splitting_class, weak_approx_scan)
from .exceptions import CubicSurfaceError, ValidationError
from .galois import BrauerValue, GaloisLabel, brauer_U, brauer_X, classify_galois
from .local_analysis import (AdelicVerdict, Place, certify_adeles, check_liftable,
                             hilbert, validate_certificate)
from .surface import (CubicInput, DepressedSurface, build_resolvents,
                      discriminant_triple, nonsmooth_n_values, normalize)

logger = logging.getLogger(__name__)

TETRAHEDRAL_A2, TETRAHEDRAL_A1, TETRAHEDRAL_A0 = 3, 2, 0

# (p, n mod p) -> point of the input model that is smooth mod p
TETRAHEDRAL_SMOOTH_POINTS = {
    (5, 2): (1, 1, 0),
    (7, 3): (3, 0, 0),
}

U50_A, U50_N, U50_ROOT, U50_AXIS = 21, 50, 2, 3
U50_LOCUS = (Poly.of(0, 1), Poly.of(1, 1), Poly.of(2, 1),
             Poly.of(Fraction(16, 7), Fraction(-10, 7), 1))
U50_NORM_CLASSES = (-6, 1, -6, 1)
U50_QUADRATIC_FIELD = -87
U50_GENERATOR = (1, 0, 1, 0)
U50_SYMBOLS = {Fraction(0): -6, Fraction(-2): -6}


class ReportVerdict(str, Enum):
    REPRODUCED = "Reproduced"
    FAILED = "Failed"
    INAPPLICABLE = "Inapplicable"


@dataclass
class TheoremReport:
    """Outcome of one worked result; reason names the failing step."""
    claim: str
    inputs: Dict[str, object]
    verdict: ReportVerdict = ReportVerdict.REPRODUCED
    reason: Optional[str] = None
    branch: Optional[str] = None
    certificates: Dict[str, object] = field(default_factory=dict)

    def fail(self, step: str) -> 'TheoremReport':
        self.verdict, self.reason = ReportVerdict.FAILED, step
        logger.warning("%s %s failed at %s", self.claim, self.inputs, step)
        return self

    def inapplicable(self, reason: str) -> 'TheoremReport':
        self.verdict, self.reason = ReportVerdict.INAPPLICABLE, reason
        return self

    @property
    def reproduced(self) -> bool:
        return self.verdict is ReportVerdict.REPRODUCED


def tetrahedral_cubic(n: int) -> CubicInput:
    return CubicInput(TETRAHEDRAL_A2, TETRAHEDRAL_A1, TETRAHEDRAL_A0, 6 * n)


def tetrahedral_surface(n: int) -> DepressedSurface:
    """The frame u -> u - 1: sum(v^3 - v) = 6n, so f1 = x^3 - x - 6n."""
    return DepressedSurface(a=-1, b=0, n=6 * n)


def tetrahedral_nonsmooth_values() -> List[Fraction]:
    """Rational n' = 6n with a singular fibre in the shifted frame (none)."""
    return nonsmooth_n_values(-1, 0)


@lru_cache(maxsize=None)
def f2_roots_mod_27() -> Tuple[int, ...]:
    """Roots of x^3 + 12x^2 + 36x + 972n^2 - 4 mod 27, independent of n."""
    return tuple(x for x in range(27) if (x ** 3 + 12 * x ** 2 + 36 * x - 4) % 27 == 0)


def smooth_point_fixtures(n: int) -> List[Tuple[int, Tuple[int, ...], bool]]:
    """(p, point, liftable) for the residue-class points that apply to n,
    and (-1, 0, 0) for every prime dividing 6n."""
    cubic = tetrahedral_cubic(n)
    fixtures = [(p, point) for (p, residue), point in TETRAHEDRAL_SMOOTH_POINTS.items()
                if n % p == residue]
    if n:
        fixtures += [(int(p), (-1, 0, 0)) for p in sp.primefactors(abs(6 * n))]
    return [(p, point, check_liftable(cubic, point, p).liftable) for p, point in fixtures]


def verify_tetrahedral(n: int, depth: int = 4, layered_cap: int = 50,
                       max_candidates: int = 200000) -> TheoremReport:
    report = TheoremReport(claim="tetrahedral", inputs={'n': n})
    cubic = tetrahedral_cubic(n)
    frame = tetrahedral_surface(n)
    try:
        frame_label = classify_galois(frame).label
        if classify_galois(normalize(cubic)).label is not frame_label:
            return report.fail("frame cross-check")
        report.certificates['classification'] = frame_label

        resolvents = build_resolvents(frame)
        if cubic_discriminant(resolvents.f1) != 4 * (1 - 243 * n ** 2):
            return report.fail("discriminant of f1")
        if cubic_discriminant(resolvents.f2) != -3888 * (243 * n ** 2 - 1) * (27 * n ** 2 - 1):
            return report.fail("discriminant of f2")

        roots = [r for r in rational_roots(resolvents.f1) if r.denominator == 1]
        if roots:
            r = int(roots[0])
            point = (r - 1, 0, 0)
            if cubic.value(point) != 0:
                return report.fail("integral point")
            report.branch = "integral_point"
            report.certificates['integral_point'] = point
            return report

        report.branch = "brauer_and_local"
        if f2_roots_mod_27():
            return report.fail("f2 has a root mod 27")
        if not discriminant_triple(frame).non_square():
            return report.fail("discriminants")
        fixtures = smooth_point_fixtures(n)
        report.certificates['smooth_points'] = fixtures
        if not all(liftable for _, _, liftable in fixtures):
            return report.fail("smooth point fixtures")
        verdict_x, verdict_u = brauer_X(frame), brauer_U(frame)
        report.certificates['brauer_X'] = verdict_x
        report.certificates['brauer_U'] = verdict_u
        if verdict_u.value is not BrauerValue.TRIVIAL_BR_Q:
            return report.fail("Brauer group")

        adelic = certify_adeles(cubic, depth, layered_cap, max_candidates)
        report.certificates['adelic'] = adelic
        if adelic.verdict is not AdelicVerdict.SOLUBLE:
            return report.fail("adelic certificate")
        if not all(validate_certificate(cubic, c) for c in adelic.certificates):
            return report.fail("certificate validation")
    except CubicSurfaceError as e:
        return report.fail(f"{type(e).__name__}: {e}")
    return report


RANGE_BATCH_PER_WORKER = 32


@dataclass
class RangeSummary:
    """Running tally over a tetrahedral range; reports are kept on request."""
    lo: int
    hi: int
    keep_reports: bool = True
    count: int = 0
    branch_counts: Dict[str, int] = field(default_factory=dict)
    failures: List[TheoremReport] = field(default_factory=list)
    reports: List[TheoremReport] = field(default_factory=list)

    def add(self, report: TheoremReport) -> TheoremReport:
        self.count += 1
        self.branch_counts[report.branch] = self.branch_counts.get(report.branch, 0) + 1
        if not report.reproduced:
            self.failures.append(report)
        if self.keep_reports:
            self.reports.append(report)
        return report

    @property
    def all_reproduced(self) -> bool:
        return not self.failures


def iter_tetrahedral(lo: int, hi: int, workers: int = 1, depth: int = 4,
                     layered_cap: int = 50,
                     max_candidates: int = 200000) -> Iterator[TheoremReport]:
    """verify_tetrahedral for lo <= n <= hi, yielded in input order.

    Pool work is submitted in batches of RANGE_BATCH_PER_WORKER per worker,
    so at most one batch of reports is held at a time.
    """
    if lo > hi:
        raise ValidationError(f"Empty range: lo = {lo} > hi = {hi}")
    if workers < 1:
        raise ValidationError("workers must be at least 1")
    verify = partial(verify_tetrahedral, depth=depth, layered_cap=layered_cap,
                     max_candidates=max_candidates)
    return _iter_reports(range(lo, hi + 1), workers, verify)


def _iter_reports(values: range, workers: int, verify) -> Iterator[TheoremReport]:
    if workers == 1:
        for n in values:
            yield verify(n)
        return
    batch = workers * RANGE_BATCH_PER_WORKER
    with ProcessPoolExecutor(max_workers=workers) as executor:
        for start in range(0, len(values), batch):
            yield from executor.map(verify, values[start:start + batch], chunksize=8)


def tetrahedral_range(lo: int, hi: int, workers: int = 1, depth: int = 4,
                      layered_cap: int = 50, max_candidates: int = 200000,
                      keep_reports: bool = True) -> RangeSummary:
    summary = RangeSummary(lo=lo, hi=hi, keep_reports=keep_reports)
    for report in iter_tetrahedral(lo, hi, workers, depth, layered_cap, max_candidates):
        summary.add(report)
    logger.info("tetrahedral [%s, %s]: %s, %s failures",
                lo, hi, summary.branch_counts, len(summary.failures))
    return summary


def _u50_sample_points(line_root: int):
    """Two points on the line {x3 = r x0, x1 + x2 = 0} and its tangent plane,
    as (x0, x1, x2, x3)."""
    return ((1, -2, 2, line_root), (1, 1, -1, line_root))


def _published_real_invariant(point) -> Fraction:
    """inv at R of ((2 + x3/x1)(x3/x1), -6)."""
    _, x1, _, x3 = point
    ratio = Fraction(x3, x1)
    return hilbert((2 + ratio) * ratio, -6, Place.real())


def reproduce_u50(n: int = U50_N, line_root: int = U50_ROOT) -> TheoremReport:
    report = TheoremReport(claim="u50", inputs={'a': U50_A, 'b': 0, 'n': n,
                                                'line_root': line_root})
    surface = DepressedSurface(a=U50_A, b=0, n=n)
    if not rational_roots(surface.f1):
        return report.inapplicable(f"f1 = {surface.f1} has no rational root")

    samples = _u50_sample_points(line_root)
    if not all(surface.contains(point) for point in samples):
        return report.fail("on-surface check")

    try:
        bundle = build_bundle(surface, line_root, axis=U50_AXIS)
        locus = singular_locus(bundle)
        report.certificates['singular_locus'] = [str(point) for point in locus]
        if tuple(point.poly for point in locus) != U50_LOCUS:
            return report.fail("singular locus")

        fibres = [splitting_class(bundle, point) for point in locus]
        report.certificates['norm_classes'] = [f.norm_class for f in fibres]
        if tuple(f.norm_class.value for f in fibres) != U50_NORM_CLASSES:
            return report.fail("splitting classes")
        quadratic = locus[-1].poly
        field_class = square_class(quadratic.coeff(1) ** 2 - 4 * quadratic.coeff(0))
        if field_class.value != U50_QUADRATIC_FIELD:
            return report.fail("quadratic residue field")

        group = epsilon_group(fibres)
        report.certificates['epsilon_generators'] = group.generators
        if group.generators != (U50_GENERATOR,):
            return report.fail("epsilon group")

        brauer = brauer_class(bundle, fibres, U50_GENERATOR)
        report.certificates['brauer_class'] = brauer
        if {s.tau: s.a_p for s in brauer.symbols} != U50_SYMBOLS:
            return report.fail("class symbols")

        scan = weak_approx_scan(brauer, Place.real(), samples)
        published = tuple(sorted({_published_real_invariant(p) for p in samples}))
        report.certificates['real_scan'] = scan
        report.certificates['published_invariants'] = published
    except CubicSurfaceError as e:
        return report.fail(f"{type(e).__name__}: {e}")

    if scan.invariants != published:
        return report.fail("real-invariant cross-check")
    return report


def rationality_report(surface: DepressedSurface) -> TheoremReport:
    report = TheoremReport(claim="non_rational",
                           inputs={'a': surface.a, 'b': surface.b, 'n': surface.n})
    try:
        classification = classify_galois(surface)
    except CubicSurfaceError as e:
        return report.inapplicable(str(e))
    if classification.label is not GaloisLabel.S3_X_S3:
        return report.inapplicable(f"Galois label is {classification.label.value}")
    report.certificates.update(
        orbit_type=classification.orbit_type, minimal=True, non_rational=True,
        justification=(
            "each orbit of size 3 is a coplanar triangle of lines, so no orbit "
            "of pairwise skew lines of size 3 exists",
            "the orbit of size 18 is larger than 6, so it cannot consist of "
            "pairwise skew lines",
            "a minimal cubic surface over Q is not rational",
        ))
    return report
