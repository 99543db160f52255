import logging
from enum import Enum
from typing import Iterator, Optional, Tuple

from .algebra import rational_roots
from .casebook import RangeSummary, iter_tetrahedral, reproduce_u50, verify_tetrahedral
from .config import Settings
from .conic_bundle import (brauer_class, build_bundle, epsilon_group, singular_locus,
                           splitting_class)
from .exceptional import exceptional_set
from .exceptions import UnsupportedError, ValidationError
from .galois import (BrauerValue, brauer_U, brauer_X, classify_galois,
                     rational_point_from_f1_root)
from .local_analysis import (WEIL_THRESHOLD, AdelicVerdict, CertificateStatus,
                             certify_adeles, certify_Zp, fp_count_projective,
                             validate_certificate, weil_window)
from .report_handler import ReportEnvelope
from .surface import (CubicInput, DepressedSurface, find_singular_point, is_smooth,
                      normalize, reduces_to_cubes, search_box, sum_of_cubes_target)

logger = logging.getLogger(__name__)


class Verdict(str, Enum):
    NO_OBSTRUCTION = "NoObstruction"
    INTEGRAL_POINT_KNOWN = "IntegralPointKnown"
    LOCALLY_INSOLUBLE = "LocallyInsoluble"
    INCONCLUSIVE = "Inconclusive"


class AnalysisManager:
    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or Settings()

    def _adelic(self, cubic: CubicInput):
        s = self.settings
        return certify_adeles(cubic, s.depth, s.layered_search_cap, s.max_layer_candidates)

    def analyze(self, a2: int, a1: int, a0: int, n: int) -> ReportEnvelope:
        cubic = CubicInput(a2, a1, a0, n)
        inputs = {'a2': a2, 'a1': a1, 'a0': a0, 'n': n}
        if reduces_to_cubes(cubic):
            return self._analyze_sum_of_cubes(cubic, inputs)

        surface = normalize(cubic)
        result = {'normalized': {'a': surface.a, 'b': surface.b, 'n': surface.n},
                  'smooth': is_smooth(surface)}
        if not result['smooth']:
            result['singular_point'] = find_singular_point(surface)
            return ReportEnvelope(command='analyze', inputs=inputs, result=result,
                                  verdict=Verdict.INCONCLUSIVE,
                                  notes=["the projective closure is singular"])

        notes = []
        result['classification'] = classify_galois(surface)
        verdict_x, verdict_u = brauer_X(surface), brauer_U(surface)
        result['brauer_X'], result['brauer_U'] = verdict_x, verdict_u
        adelic = self._adelic(cubic)
        result['adelic'] = adelic
        point = rational_point_from_f1_root(surface)
        result['rational_point'] = point

        if adelic.verdict is AdelicVerdict.INSOLUBLE:
            verdict = Verdict.LOCALLY_INSOLUBLE
        elif point is not None and point.integral:
            verdict = Verdict.INTEGRAL_POINT_KNOWN
        elif (verdict_u.value is BrauerValue.TRIVIAL_BR_Q
              and adelic.verdict is AdelicVerdict.SOLUBLE):
            verdict = Verdict.NO_OBSTRUCTION
            notes.append("Br U = Br Q and U has integral points everywhere locally, "
                         "so there is no integral Brauer-Manin obstruction")
        else:
            verdict = Verdict.INCONCLUSIVE
        if point is not None and not point.integral:
            notes.append("a rational point is known but it is not integral")
        notes.append(adelic.remainder_statement)
        logger.info("analyze %s -> %s", inputs, verdict.value)
        return ReportEnvelope(command='analyze', inputs=inputs, result=result,
                              verdict=verdict, notes=notes)

    def _analyze_sum_of_cubes(self, cubic: CubicInput, inputs) -> ReportEnvelope:
        target = sum_of_cubes_target(cubic)
        certificate = certify_Zp(cubic, 3, max(self.settings.depth, 2),
                                 self.settings.layered_search_cap,
                                 self.settings.max_layer_candidates)
        result = {'sum_of_cubes_target': target, 'certificate_at_3': certificate}
        if certificate.status is CertificateStatus.INSOLUBLE:
            verdict = Verdict.LOCALLY_INSOLUBLE
            notes = [f"no solution modulo {certificate.witness_modulus}"]
        else:
            verdict = Verdict.NO_OBSTRUCTION
            notes = ["sum of three cubes: no obstruction by the known result "
                     "for v1^3 + v2^3 + v3^3 = N"]
        return ReportEnvelope(command='analyze', inputs=inputs, result=result,
                              verdict=verdict, notes=notes)

    def exceptional(self, a: int, b: int) -> ReportEnvelope:
        result = exceptional_set(a, b, self.settings.bound)
        return ReportEnvelope(command='exceptional',
                              inputs={'a': a, 'b': b, 'bound': self.settings.bound},
                              result=result, verdict="Computed")

    def local(self, a2: int, a1: int, a0: int, n: int,
              prime: Optional[int] = None) -> ReportEnvelope:
        cubic = CubicInput(a2, a1, a0, n)
        inputs = {'a2': a2, 'a1': a1, 'a0': a0, 'n': n, 'prime': prime}
        if prime is None:
            adelic = self._adelic(cubic)
            valid = all(validate_certificate(cubic, c) for c in adelic.certificates)
            return ReportEnvelope(command='local', inputs=inputs,
                                  result={'adelic': adelic, 'validated': valid},
                                  verdict=adelic.verdict)
        s = self.settings
        certificate = certify_Zp(cubic, prime, s.depth, s.layered_search_cap,
                                 s.max_layer_candidates)
        result = {'certificate': certificate,
                  'validated': validate_certificate(cubic, certificate)}
        if prime <= s.exhaustive_cap:
            result['fp_points'] = fp_count_projective(cubic, prime, s.exhaustive_cap)
            if prime >= WEIL_THRESHOLD:
                result['weil_window'] = weil_window(prime)
        return ReportEnvelope(
            command='local', inputs=inputs, result=result,
            verdict=certificate.status)

    def bundle(self, a: int, b: int, n: int, axis: int = 1) -> ReportEnvelope:
        surface = DepressedSurface(a=a, b=b, n=n)
        roots = rational_roots(surface.f1)
        if not roots:
            raise ValidationError(f"f1 = {surface.f1} has no rational root, so there "
                                  "is no rational line to fibre over")
        bundle = build_bundle(surface, roots[0], axis)
        fibres = [splitting_class(bundle, point) for point in singular_locus(bundle)]
        group = epsilon_group(fibres)
        classes, notes = [], []
        for generator in group.generators:
            try:
                classes.append(brauer_class(bundle, fibres, generator))
            except UnsupportedError as e:
                notes.append(str(e))
        result = {'r': bundle.r, 'axis': axis, 'discriminant': bundle.discriminant,
                  'fibres': fibres, 'epsilon_group': group, 'classes': classes}
        return ReportEnvelope(command='bundle', inputs={'a': a, 'b': b, 'n': n},
                              result=result, verdict="Computed", notes=notes)

    def tetra(self, n: Optional[int] = None,
              n_range: Optional[Tuple[int, int]] = None) -> Iterator[ReportEnvelope]:
        """One envelope per n; a range is streamed in input order."""
        s = self.settings
        if n_range is not None:
            lo, hi = n_range
            reports = iter_tetrahedral(lo, hi, s.workers, s.depth, s.layered_search_cap,
                                       s.max_layer_candidates)
            return self._stream_range(RangeSummary(lo=lo, hi=hi, keep_reports=False),
                                      reports)
        if n is None:
            raise ValidationError("Give n or --n-range LO HI")
        report = verify_tetrahedral(n, s.depth, s.layered_search_cap,
                                    s.max_layer_candidates)
        return iter([self._theorem_envelope('tetra', report)])

    def _stream_range(self, summary: RangeSummary,
                      reports: Iterator) -> Iterator[ReportEnvelope]:
        for report in reports:
            yield self._theorem_envelope('tetra', summary.add(report))
        logger.info("tetrahedral [%s, %s]: %s reports, branches %s, %s failures",
                    summary.lo, summary.hi, summary.count, summary.branch_counts,
                    len(summary.failures))

    def u50(self) -> ReportEnvelope:
        return self._theorem_envelope('u50', reproduce_u50())

    def search(self, a2: int, a1: int, a0: int, n: int, box: int) -> ReportEnvelope:
        cubic = CubicInput(a2, a1, a0, n)
        points = search_box(cubic, box)
        return ReportEnvelope(
            command='search',
            inputs={'a2': a2, 'a1': a1, 'a0': a0, 'n': n, 'box': box},
            result={'points': points, 'count': len(points)},
            verdict="Found" if points else "NoneFound")

    @staticmethod
    def _theorem_envelope(command: str, report) -> ReportEnvelope:
        notes = [report.reason] if report.reason else []
        return ReportEnvelope(command=command, inputs=report.inputs,
                              result={'claim': report.claim, 'branch': report.branch,
                                      'certificates': report.certificates},
                              verdict=report.verdict, notes=notes)
