"""Text and JSON rendering of command results.

Each reporter renders a result of a given kind through its
``_report_<kind>`` method.  JSON output goes through
:func:`kernid.utils.serialize_to_json`, so every float re-parses to the
double that was computed.

"""
import attr
from attr import attrs, attrib
from typing import Any, Dict, List, Optional, Sequence  # noqa

from kernid.design import (
    CheckReport, Condition, DistanceSet, QuadrupleWitness,
)
from kernid.documents import dump_dataset, dump_spec, format_matrix_csv
from kernid.gpfit import Dataset, FitResult
from kernid.kernels import GramMatrix, MixedKernelSpec
from kernid.lemmas import LemmaCheckResult
from kernid.utils import UI, serialize_to_json
from kernid.witness import (
    ReproductionResult, WitnessFound, WitnessReport,
)


CONDITION_HOLDS_TEXT = ('sufficient condition met; the model is '
                        'identifiable on this design')
CONDITION_FAILS_TEXT = ('sufficient condition not met; identifiability '
                        'undetermined; run `kernid witness` to search for '
                        'a counterexample')
NO_WITNESS_TEXT = ('no witness found under config (not a proof of '
                   'identifiability)')
# Violations listed per check in text output.
MAX_LISTED_VIOLATIONS = 5

CONDITION_TITLES = {
    Condition.TWO_RBF: 'RBF + RBF',
    Condition.RBF_PERIODIC: 'RBF + periodic',
}


@attrs(frozen=True)
class CheckSummary(object):
    distances = attrib()   # type: DistanceSet
    reports = attrib()     # type: Sequence[CheckReport]
    deciding = attrib()    # type: CheckReport
    quadruple = attrib(default=None)  # type: Optional[QuadrupleWitness]


@attrs(frozen=True)
class GramSummary(object):
    gram = attrib()               # type: GramMatrix
    path = attrib(default=None)   # type: Optional[str]


@attrs(frozen=True)
class SampleSummary(object):
    dataset = attrib()            # type: Dataset
    path = attrib(default=None)   # type: Optional[str]


def _fmt(value):
    # type: (float) -> str
    return '%.12g' % value


def _fmt_set(values):
    # type: (Sequence[float]) -> str
    return '{%s}' % ', '.join(_fmt(v) for v in values)


class Reporter(object):
    def __init__(self, ui):
        # type: (UI) -> None
        self._ui = ui

    def generate_report(self, kind, result):
        # type: (str, Any) -> str
        return getattr(self, '_report_%s' % kind)(result)

    def display_report(self, kind, result):
        # type: (str, Any) -> None
        self._ui.write(self.generate_report(kind, result))


class TextReporter(Reporter):
    def generate_report(self, kind, result):
        # type: (str, Any) -> str
        lines = []  # type: List[str]
        getattr(self, '_report_%s' % kind)(result, lines)
        lines.append('')
        return '\n'.join(lines)

    def _spec_lines(self, spec, lines, indent='  '):
        # type: (MixedKernelSpec, List[str], str) -> None
        for name, value in dump_spec(spec).items():
            if isinstance(value, float):
                value = _fmt(value)
            lines.append('%s%s: %s' % (indent, name, value))

    def _report_check(self, summary, lines):
        # type: (CheckSummary, List[str]) -> None
        lines.append('Distance set: |X| = %s' % len(summary.distances))
        lines.append('  X = %s' % _fmt_set(summary.distances.values))
        for report in summary.reports:
            title = CONDITION_TITLES[report.condition]
            if report.period is not None:
                title += ' (p = %s)' % _fmt(report.period)
            if report.holds:
                lines.append('%s: %s' % (title, CONDITION_HOLDS_TEXT))
            else:
                lines.append('%s: %s' % (title, CONDITION_FAILS_TEXT))
                for clause in report.failed_clauses:
                    lines.append('  failed: %s' % clause)
            if report.holds and report.alpha is not None:
                lines.append('  multiple of the period: %s, '
                             'non-multiple: %s'
                             % (_fmt(report.alpha), _fmt(report.beta)))
        quadruple = summary.quadruple
        if quadruple is not None:
            lines.append('  witness quadruple %s: m = %s, q = %s'
                         % (_fmt_set(quadruple.members), quadruple.m,
                            _fmt(quadruple.q)))

    def _report_gram(self, summary, lines):
        # type: (GramSummary, List[str]) -> None
        if summary.path is None:
            lines.append(format_matrix_csv(summary.gram.entries).rstrip())
        else:
            lines.append('Wrote %sx%s Gram matrix to %s'
                         % (summary.gram.n, summary.gram.n, summary.path))

    def _report_witness(self, report, lines):
        # type: (WitnessReport, List[str]) -> None
        lines.append('Target parameters:')
        self._spec_lines(report.target_params, lines)
        outcome = report.outcome
        if isinstance(outcome, WitnessFound):
            lines.append('Witness found (start %s):' % outcome.start_index)
            self._spec_lines(outcome.params, lines)
            lines.append('  residual: %.6e' % outcome.residual)
            lines.append('  relative distance: %.6g' % outcome.distance)
        else:
            lines.append('Result: %s' % NO_WITNESS_TEXT)
            if outcome.best_residual is not None:
                lines.append('  closest distinct candidate residual: %.6e'
                             % outcome.best_residual)
        lines.append('Starts converged: %s of %s (seed %s)'
                     % (report.starts_converged, report.config.starts,
                        report.config.rng_seed))

    def _report_reproduce(self, results, lines):
        # type: (Sequence[ReproductionResult], List[str]) -> None
        lines.append('%-24s %-11s %-11s %-9s %s'
                     % ('example', 'deviation', 'cross', 'tolerance',
                        'result'))
        for result in results:
            lines.append('%-24s %-11s %-11s %-9s %s' % (
                result.example_id, '%.3e' % result.max_abs_deviation,
                '%.3e' % result.cross_deviation,
                '%.0e' % result.tolerance,
                'PASS' if result.passed else 'FAIL'))

    def _report_lemmas(self, results, lines):
        # type: (Sequence[LemmaCheckResult], List[str]) -> None
        for result in results:
            lines.append('%-22s %8s cases %6s violations  %s' % (
                result.lemma_id.value, result.cases_run,
                len(result.violations),
                'PASS' if result.passed else 'FAIL'))
            for violation in result.violations[:MAX_LISTED_VIOLATIONS]:
                inputs = ', '.join('%s=%s' % (k, _fmt(v)) for k, v in
                                   sorted(violation.inputs.items()))
                lines.append('  sample %s: %s' % (violation.sample_index,
                                                  inputs))

    def _report_fit(self, fits, lines):
        # type: (Sequence[FitResult], List[str]) -> None
        for rank, fit in enumerate(fits, 1):
            status = 'converged' if fit.converged else 'not converged'
            lines.append('Optimum %s (start %s, %s):'
                         % (rank, fit.start_index, status))
            lines.append('  neg_log_marginal: %.10g' % fit.neg_log_marginal)
            self._spec_lines(fit.params, lines)
            if fit.jitter:
                lines.append('  jitter: %.3e' % fit.jitter)

    def _report_sample(self, summary, lines):
        # type: (SampleSummary, List[str]) -> None
        block = summary.dataset.replicates
        if summary.path is not None:
            lines.append('Wrote %s replicate(s) on %s points to %s'
                         % (block.shape[0], block.shape[1], summary.path))
            return
        for row in block:
            lines.append(' '.join(repr(float(v)) for v in row))


class JsonReporter(Reporter):
    def generate_report(self, kind, result):
        # type: (str, Any) -> str
        return serialize_to_json(
            getattr(self, '_report_%s' % kind)(result))

    def _condition_document(self, report):
        # type: (CheckReport) -> Dict[str, Any]
        return {
            'condition': report.condition.value,
            'verdict': report.verdict.value,
            'holds': report.holds,
            'failed_clauses': list(report.failed_clauses),
            'alpha': report.alpha,
            'beta': report.beta,
            'period': report.period,
        }

    def _report_check(self, summary):
        # type: (CheckSummary) -> Dict[str, Any]
        quadruple = None  # type: Optional[Dict[str, Any]]
        if summary.quadruple is not None:
            quadruple = attr.asdict(summary.quadruple)
            quadruple['shape'] = summary.quadruple.shape.value
            quadruple['members'] = list(summary.quadruple.members)
        return {
            'distances': list(summary.distances.values),
            'cardinality': len(summary.distances),
            'conditions': [self._condition_document(r)
                           for r in summary.reports],
            'verdict': summary.deciding.verdict.value,
            'quadruple': quadruple,
        }

    def _report_gram(self, summary):
        # type: (GramSummary) -> Dict[str, Any]
        return {
            'n': summary.gram.n,
            'entries': summary.gram.to_list(),
            'min_eigenvalue': summary.gram.min_eigenvalue,
            'path': summary.path,
        }

    def _report_witness(self, report):
        # type: (WitnessReport) -> Dict[str, Any]
        outcome = report.outcome
        doc = {
            'found': report.found,
            'target': dump_spec(report.target_params),
            'config': attr.asdict(report.config),
            'starts_converged': report.starts_converged,
        }  # type: Dict[str, Any]
        if isinstance(outcome, WitnessFound):
            doc['witness'] = {
                'params': dump_spec(outcome.params),
                'residual': outcome.residual,
                'distance': outcome.distance,
                'start_index': outcome.start_index,
            }
        else:
            doc['witness'] = None
            doc['message'] = NO_WITNESS_TEXT
            doc['best_residual'] = outcome.best_residual
            doc['best_params'] = (None if outcome.best_params is None
                                  else dump_spec(outcome.best_params))
        return doc

    def _report_reproduce(self, results):
        # type: (Sequence[ReproductionResult]) -> Dict[str, Any]
        return {
            'passed': all(r.passed for r in results),
            'examples': [dict(attr.asdict(r), passed=r.passed)
                         for r in results],
        }

    def _report_lemmas(self, results):
        # type: (Sequence[LemmaCheckResult]) -> Dict[str, Any]
        checks = []
        for result in results:
            checks.append({
                'lemma_id': result.lemma_id.value,
                'cases_run': result.cases_run,
                'tolerance': result.tolerance,
                'passed': result.passed,
                'violations': [attr.asdict(v) for v in result.violations],
            })
        return {'passed': all(r.passed for r in results), 'checks': checks}

    def _report_fit(self, fits):
        # type: (Sequence[FitResult]) -> Dict[str, Any]
        return {'optima': [{
            'params': dump_spec(fit.params),
            'neg_log_marginal': fit.neg_log_marginal,
            'converged': fit.converged,
            'iterations': fit.iterations,
            'start_index': fit.start_index,
            'jitter': fit.jitter,
        } for fit in fits]}

    def _report_sample(self, summary):
        # type: (SampleSummary) -> Dict[str, Any]
        doc = dump_dataset(summary.dataset)
        doc['path'] = summary.path
        return doc


REPORTERS = {
    'text': TextReporter,
    'json': JsonReporter,
}


def create_reporter(output_format, ui):
    # type: (str, UI) -> Reporter
    return REPORTERS[output_format](ui)
