"""Scalar functions behind the identifiability arguments, and numeric checks.

Each ``check_*`` function samples its inputs according to a
:class:`GridSpec`, drops samples that sit too close to a degenerate
boundary (equal length-scales, coincident points, ...), and evaluates the
claimed property on every remaining sample.  The result lists every
sample where the property failed.

Determinants are compared against the permanent of the entrywise
absolute matrix, which is the natural floating point error scale of the
determinant and is unchanged by row or column scaling in the same way.

"""
import enum
import itertools
import logging

import numpy as np
from attr import attrs, attrib, Factory
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple  # noqa

from kernid.constants import (
    DEFAULT_LEMMA_SAMPLES, DEFAULT_SAMPLES_PER_AXIS, DEFAULT_MIN_GAP,
    DEFAULT_SEED, DETERMINANT_TOL, RANK_TOL, IDENTITY_TOL,
)
from kernid.design import (
    Design, distance_set, check_rbf_periodic_condition,
    check_two_rbf_condition, find_quadruple_witness,
)
from kernid.search import InvalidBoundsError


LOGGER = logging.getLogger(__name__)

Columns = Dict[str, np.ndarray]


class ConditionNotMetError(Exception):
    def __init__(self, design_index, reason):
        # type: (int, str) -> None
        self.design_index = design_index
        self.reason = reason
        super(ConditionNotMetError, self).__init__(
            "Design %s does not satisfy the identifiability condition: %s"
            % (design_index, reason))


class LemmaId(enum.Enum):
    EXP_PAIR = 'exp_pair'
    DECAY_MONOTONE = 'decay_monotone'
    GAP_RATIO_MONOTONE = 'gap_ratio_monotone'
    PERIODIC_RANK = 'periodic_rank'
    POWER_DETERMINANT = 'power_determinant'
    TWO_RBF_RANK = 'two_rbf_rank'
    GAUSSIAN_DETERMINANT = 'gaussian_determinant'


class SamplingMode(enum.Enum):
    GRID = 'grid'
    RANDOM = 'random'


@attrs(frozen=True)
class GridSpec(object):
    samples_per_axis = attrib(default=DEFAULT_SAMPLES_PER_AXIS)  # type: int
    ranges = attrib(default=Factory(dict))  # type: Dict[str, Tuple[float, float]]
    rng_seed = attrib(default=DEFAULT_SEED)        # type: int
    mode = attrib(default=SamplingMode.RANDOM)     # type: SamplingMode
    samples = attrib(default=DEFAULT_LEMMA_SAMPLES)  # type: int
    min_gap = attrib(default=DEFAULT_MIN_GAP)      # type: float

    def __attrs_post_init__(self):
        # type: () -> None
        if self.samples < 1:
            raise ValueError("samples must be a positive integer: %r"
                             % self.samples)
        if self.samples_per_axis < 2:
            raise ValueError("samples_per_axis must be at least 2: %r"
                             % self.samples_per_axis)
        if self.min_gap < 0:
            raise ValueError("min_gap must be nonnegative: %r"
                             % self.min_gap)
        for name, (low, high) in self.ranges.items():
            if not low < high:
                raise InvalidBoundsError(name, low, high)

    def range_for(self, name, default):
        # type: (str, Tuple[float, float]) -> Tuple[float, float]
        return self.ranges.get(name, default)


@attrs(frozen=True)
class Violation(object):
    sample_index = attrib()  # type: int
    inputs = attrib()        # type: Dict[str, float]
    observed = attrib()      # type: Dict[str, float]


@attrs(frozen=True)
class LemmaCheckResult(object):
    lemma_id = attrib()    # type: LemmaId
    cases_run = attrib()   # type: int
    violations = attrib()  # type: Tuple[Violation, ...]
    tolerance = attrib()   # type: float

    @property
    def passed(self):
        # type: () -> bool
        return not self.violations


def decay_ratio(t, s):
    # type: (Any, Any) -> Any
    """t * exp(-t*s) / (1 - exp(-t*s)), written as t / expm1(t*s)."""
    return t / np.expm1(t * s)


def gaussian_gap_ratio(x, y, p):
    # type: (Any, Any, Any) -> Any
    """(exp(-(x+p)**2 y**2) - 1) / (exp(-p**2 y**2) - 1)."""
    y_sq = np.square(y)
    return np.expm1(-np.square(x + p) * y_sq) / np.expm1(-np.square(p) * y_sq)


def shifted_gap_ratio(x, p, ell):
    # type: (Any, Any, Any) -> Any
    """(exp(-(x+p)**2/l**2) - exp(-x**2/l**2)) / (exp(-p**2/l**2) - 1).

    Equals 1 at x = 0 and increases strictly with ``ell`` for x > 0.
    """
    w = 1.0 / np.square(ell)
    return (np.exp(-np.square(x) * w) *
            np.expm1(-(2.0 * x * p + np.square(p)) * w) /
            np.expm1(-np.square(p) * w))


def anchored_gap_ratio(x, p, ell):
    # type: (Any, Any, Any) -> Any
    """(exp(-(x+p)**2/l**2) - 1) / (exp(-p**2/l**2) - 1).

    Satisfies ``1 / anchored_gap_ratio(-x, p, l) ==
    anchored_gap_ratio(x, p - x, l)`` for 0 < x < p.
    """
    return gaussian_gap_ratio(x, 1.0 / np.asarray(ell, dtype=float), p)


def power_gap_ratio(x, a, b):
    # type: (Any, Any, Any) -> Any
    """(x**B - x**A) / (x**A - 1), strictly increasing on 0 < x < 1."""
    return (np.power(x, b) - np.power(x, a)) / (np.power(x, a) - 1.0)


def exp_pair_matrix(k, l, a, b):
    # type: (Any, Any, Any, Any) -> np.ndarray
    return _stack_matrix([[np.exp(k * a), np.exp(l * a)],
                          [np.exp(k * b), np.exp(l * b)]])


def power_matrix(zetas, a, b):
    # type: (Sequence[Any], Any, Any) -> np.ndarray
    rows = [[np.power(z, e) - 1.0 for z in zetas] for e in (1.0, a, b)]
    return _stack_matrix(rows)


def gaussian_feature_matrix(xs, scales):
    # type: (Sequence[Any], Sequence[Any]) -> np.ndarray
    """Columns are (exp(-x**2/a**2), exp(-x**2/b**2), exp(-x**2/c**2))."""
    rows = [[np.exp(-np.square(x) / np.square(scale)) for x in xs]
            for scale in scales]
    return _stack_matrix(rows)


def power_gap_matrix(x1, x2, a, b):
    # type: (Any, Any, Any, Any) -> np.ndarray
    return _stack_matrix(
        [[np.power(x1, a - 1.0) - 1.0, np.power(x1, b - 1.0) - 1.0],
         [np.power(x2, a - 1.0) - 1.0, np.power(x2, b - 1.0) - 1.0]])


def _stack_matrix(rows):
    # type: (List[List[Any]]) -> np.ndarray
    """Build an (..., m, n) array from nested lists of equal-shape arrays."""
    return np.stack([np.stack(np.broadcast_arrays(*row), axis=-1)
                     for row in rows], axis=-2)


def absolute_permanent(matrices):
    # type: (np.ndarray) -> np.ndarray
    magnitudes = np.abs(matrices)
    size = magnitudes.shape[-1]
    total = np.zeros(magnitudes.shape[:-2])
    for perm in itertools.permutations(range(size)):
        term = np.ones(magnitudes.shape[:-2])
        for row, col in enumerate(perm):
            term = term * magnitudes[..., row, col]
        total = total + term
    return total


def relative_rank_margin(matrices):
    # type: (np.ndarray) -> np.ndarray
    """Smallest over largest singular value after row normalization."""
    norms = np.linalg.norm(matrices, axis=-1, keepdims=True)
    singular = np.linalg.svd(matrices / norms, compute_uv=False)
    return singular[..., -1] / singular[..., 0]


def _draw(grid, rng, variables):
    # type: (GridSpec, np.random.Generator, Sequence[Tuple[str, str, Tuple[float, float]]]) -> Columns
    """Draw raw samples.

    ``variables`` lists (column, range key, default range).  Several
    columns can share one range key, ``ell1`` and ``ell2`` share ``ell``
    for instance.

    """
    ranges = [grid.range_for(key, default) for _, key, default in variables]
    for (column, key, _), (low, high) in zip(variables, ranges):
        if not low < high:
            raise InvalidBoundsError(key, low, high)
    if grid.mode is SamplingMode.GRID:
        axes = [np.linspace(low, high, grid.samples_per_axis)
                for low, high in ranges]
        mesh = np.meshgrid(*axes, indexing='ij')
        points = np.stack([m.ravel() for m in mesh], axis=1)
    else:
        lows = np.array([r[0] for r in ranges])
        highs = np.array([r[1] for r in ranges])
        points = rng.uniform(lows, highs, size=(grid.samples, len(ranges)))
    return dict((column, points[:, i])
                for i, (column, _, _) in enumerate(variables))


def _sort_columns(columns, names, descending=False):
    # type: (Columns, Sequence[str], bool) -> None
    ordered = np.sort(np.stack([columns[n] for n in names]), axis=0)
    if descending:
        ordered = ordered[::-1]
    for name, values in zip(names, ordered):
        columns[name] = values


def _separated(columns, names, gap, relative=False):
    # type: (Columns, Sequence[str], float, bool) -> np.ndarray
    """Mask of samples whose listed values are pairwise at least ``gap``
    apart (``gap`` times the larger value when ``relative``)."""
    mask = np.ones(len(columns[names[0]]), dtype=bool)
    for first, second in itertools.combinations(names, 2):
        a, b = columns[first], columns[second]
        needed = gap * np.maximum(np.abs(a), np.abs(b)) if relative else gap
        mask &= np.abs(a - b) >= needed
    return mask


def _select(columns, mask):
    # type: (Columns, np.ndarray) -> Columns
    return dict((name, values[mask]) for name, values in columns.items())


def _violations(columns, failed, observed, offset=0):
    # type: (Columns, np.ndarray, Dict[str, np.ndarray], int) -> List[Violation]
    found = []
    for index in np.flatnonzero(failed):
        found.append(Violation(
            sample_index=int(index) + offset,
            inputs=dict((k, float(v[index])) for k, v in columns.items()),
            observed=dict((k, float(v[index]))
                          for k, v in observed.items())))
    return found


def _log_rejections(lemma_id, drawn, kept):
    # type: (LemmaId, int, int) -> None
    LOGGER.debug("%s: kept %s of %s samples (%s rejected near a "
                 "degenerate boundary)", lemma_id.value, kept, drawn,
                 drawn - kept)


def _determinant_failures(matrices, tol):
    # type: (np.ndarray, float) -> Tuple[np.ndarray, Dict[str, np.ndarray]]
    det = np.linalg.det(matrices)
    scale = absolute_permanent(matrices)
    return np.abs(det) <= tol * scale, {'det': det, 'scale': scale}


def check_exponential_pair_independence(grid):
    # type: (GridSpec) -> LemmaCheckResult
    """(e^{ka}, e^{kb}) and (e^{la}, e^{lb}) are independent for k != l,
    a != b."""
    rng = np.random.default_rng(grid.rng_seed)
    span = (-3.0, 3.0)
    columns = _draw(grid, rng, [('k', 'k', span), ('l', 'l', span),
                                ('a', 'a', span), ('b', 'b', span)])
    drawn = len(columns['k'])
    mask = (_separated(columns, ('k', 'l'), grid.min_gap) &
            _separated(columns, ('a', 'b'), grid.min_gap))
    columns = _select(columns, mask)
    _log_rejections(LemmaId.EXP_PAIR, drawn, int(mask.sum()))
    failed, observed = _determinant_failures(
        exp_pair_matrix(columns['k'], columns['l'],
                        columns['a'], columns['b']), DETERMINANT_TOL)
    return LemmaCheckResult(
        lemma_id=LemmaId.EXP_PAIR, cases_run=int(mask.sum()),
        violations=tuple(_violations(columns, failed, observed)),
        tolerance=DETERMINANT_TOL)


def check_decay_monotonicity(grid):
    # type: (GridSpec) -> LemmaCheckResult
    rng = np.random.default_rng(grid.rng_seed)
    columns = _draw(grid, rng, [('t1', 't', (0.01, 10.0)),
                                ('t2', 't', (0.01, 10.0)),
                                ('s', 's', (0.01, 5.0))])
    drawn = len(columns['s'])
    _sort_columns(columns, ('t1', 't2'))
    mask = _separated(columns, ('t1', 't2'), grid.min_gap)
    columns = _select(columns, mask)
    _log_rejections(LemmaId.DECAY_MONOTONE, drawn, int(mask.sum()))
    lower = decay_ratio(columns['t1'], columns['s'])
    upper = decay_ratio(columns['t2'], columns['s'])
    failed = ~(upper < lower)
    return LemmaCheckResult(
        lemma_id=LemmaId.DECAY_MONOTONE, cases_run=int(mask.sum()),
        violations=tuple(_violations(
            columns, failed, {'ratio_t1': lower, 'ratio_t2': upper})),
        tolerance=0.0)


def _gaussian_gap_cases(grid, rng):
    # type: (GridSpec, np.random.Generator) -> Tuple[Columns, np.ndarray, Dict[str, np.ndarray]]
    columns = _draw(grid, rng, [('x', 'x', (0.1, 2.0)),
                                ('p', 'p', (0.1, 2.0)),
                                ('y1', 'y', (0.1, 2.0)),
                                ('y2', 'y', (0.1, 2.0))])
    _sort_columns(columns, ('y1', 'y2'))
    columns = _select(columns, _separated(columns, ('y1', 'y2'),
                                          grid.min_gap))
    first = gaussian_gap_ratio(columns['x'], columns['y1'], columns['p'])
    second = gaussian_gap_ratio(columns['x'], columns['y2'], columns['p'])
    failed = ~((second < first) & (second > 1.0))
    return columns, failed, {'ratio_y1': first, 'ratio_y2': second}


def _shifted_gap_cases(grid, rng):
    # type: (GridSpec, np.random.Generator) -> Tuple[Columns, np.ndarray, Dict[str, np.ndarray]]
    columns = _draw(grid, rng, [('x', 'x', (0.1, 3.0)),
                                ('p', 'p', (0.1, 3.0)),
                                ('ell1', 'ell', (0.5, 5.0)),
                                ('ell2', 'ell', (0.5, 5.0))])
    _sort_columns(columns, ('ell1', 'ell2'))
    columns = _select(columns, _separated(columns, ('ell1', 'ell2'),
                                          grid.min_gap, relative=True))
    first = shifted_gap_ratio(columns['x'], columns['p'], columns['ell1'])
    second = shifted_gap_ratio(columns['x'], columns['p'], columns['ell2'])
    failed = ~(first < second)
    return columns, failed, {'ratio_ell1': first, 'ratio_ell2': second}


def _reciprocal_cases(grid, rng):
    # type: (GridSpec, np.random.Generator) -> Tuple[Columns, np.ndarray, Dict[str, np.ndarray]]
    columns = _draw(grid, rng, [('x', 'x', (0.1, 3.0)),
                                ('p', 'p', (0.1, 3.0)),
                                ('ell', 'ell', (0.5, 5.0))])
    columns = _select(columns,
                      columns['p'] - columns['x'] >= grid.min_gap)
    x, p, ell = columns['x'], columns['p'], columns['ell']
    product = (anchored_gap_ratio(-x, p, ell) *
               anchored_gap_ratio(x, p - x, ell))
    failed = ~(np.abs(product - 1.0) <= IDENTITY_TOL)
    return columns, failed, {'product': product}


def check_gap_ratio_monotonicity(grid):
    # type: (GridSpec) -> LemmaCheckResult
    """Monotonicity of the Gaussian gap ratios.

    Covers three families: the y-decrease of ``gaussian_gap_ratio`` (and
    that it exceeds 1), the ell-increase of ``shifted_gap_ratio``, and
    the reciprocal identity of ``anchored_gap_ratio``.
    """
    rng = np.random.default_rng(grid.rng_seed)
    violations = []  # type: List[Violation]
    cases = 0
    for family in (_gaussian_gap_cases, _shifted_gap_cases,
                   _reciprocal_cases):
        columns, failed, observed = family(grid, rng)
        violations.extend(_violations(columns, failed, observed, cases))
        cases += len(failed)
    LOGGER.debug("%s: %s cases", LemmaId.GAP_RATIO_MONOTONE.value, cases)
    return LemmaCheckResult(
        lemma_id=LemmaId.GAP_RATIO_MONOTONE, cases_run=cases,
        violations=tuple(violations), tolerance=IDENTITY_TOL)


def check_power_determinant(grid):
    # type: (GridSpec) -> LemmaCheckResult
    rng = np.random.default_rng(grid.rng_seed)
    columns = _draw(grid, rng, [('zeta1', 'zeta', (1.05, 4.0)),
                                ('zeta2', 'zeta', (1.05, 4.0)),
                                ('zeta3', 'zeta', (1.05, 4.0)),
                                ('a', 'a', (1.05, 3.0)),
                                ('b', 'b', (1.05, 5.0))])
    drawn = len(columns['a'])
    names = ('zeta1', 'zeta2', 'zeta3')
    _sort_columns(columns, names)
    mask = (_separated(columns, names, grid.min_gap) &
            (columns['b'] >= columns['a'] + grid.min_gap))
    columns = _select(columns, mask)
    _log_rejections(LemmaId.POWER_DETERMINANT, drawn, int(mask.sum()))
    matrices = power_matrix([columns[n] for n in names],
                            columns['a'], columns['b'])
    failed, observed = _determinant_failures(matrices, DETERMINANT_TOL)
    return LemmaCheckResult(
        lemma_id=LemmaId.POWER_DETERMINANT, cases_run=int(mask.sum()),
        violations=tuple(_violations(columns, failed, observed)),
        tolerance=DETERMINANT_TOL)


def check_gaussian_determinant(grid):
    # type: (GridSpec) -> LemmaCheckResult
    """Independence of Gaussian feature columns and the power-gap forms.

    Three properties: the 3x3 matrix of Gaussian features at distinct
    points and distinct scales is nonsingular; ``power_gap_ratio`` is
    strictly increasing on (0, 1); the 2x2 power-gap determinant does not
    vanish for distinct points.
    """
    rng = np.random.default_rng(grid.rng_seed)
    columns = _draw(grid, rng, [('a', 'scale', (0.5, 2.0)),
                                ('b', 'scale', (0.5, 2.0)),
                                ('c', 'scale', (0.5, 2.0)),
                                ('x1', 'x', (0.5, 3.0)),
                                ('x2', 'x', (0.5, 3.0)),
                                ('x3', 'x', (0.5, 3.0))])
    scales, points = ('a', 'b', 'c'), ('x1', 'x2', 'x3')
    _sort_columns(columns, scales, descending=True)
    _sort_columns(columns, points)
    columns = _select(columns,
                      _separated(columns, scales, grid.min_gap,
                                 relative=True) &
                      _separated(columns, points, grid.min_gap))
    matrices = gaussian_feature_matrix([columns[n] for n in points],
                                       [columns[n] for n in scales])
    failed, observed = _determinant_failures(matrices, DETERMINANT_TOL)
    violations = _violations(columns, failed, observed)
    cases = len(failed)

    powers = _draw(grid, rng, [('x1', 'u', (0.01, 0.99)),
                               ('x2', 'u', (0.01, 0.99)),
                               ('A', 'A', (1.05, 3.0)),
                               ('B', 'B', (1.05, 5.0))])
    _sort_columns(powers, ('x1', 'x2'))
    powers = _select(powers,
                     _separated(powers, ('x1', 'x2'), grid.min_gap) &
                     (powers['B'] >= powers['A'] + grid.min_gap))
    lower = power_gap_ratio(powers['x1'], powers['A'], powers['B'])
    upper = power_gap_ratio(powers['x2'], powers['A'], powers['B'])
    not_increasing = ~(lower < upper)
    violations.extend(_violations(powers, not_increasing,
                                  {'f_x1': lower, 'f_x2': upper}, cases))
    cases += len(not_increasing)

    singular, observed = _determinant_failures(
        power_gap_matrix(powers['x1'], powers['x2'],
                         powers['A'], powers['B']), DETERMINANT_TOL)
    violations.extend(_violations(powers, singular, observed, cases))
    cases += len(singular)
    LOGGER.debug("%s: %s cases", LemmaId.GAUSSIAN_DETERMINANT.value, cases)
    return LemmaCheckResult(
        lemma_id=LemmaId.GAUSSIAN_DETERMINANT, cases_run=cases,
        violations=tuple(violations), tolerance=DETERMINANT_TOL)


def _rbf_rows(members, ells):
    # type: (np.ndarray, Sequence[np.ndarray]) -> List[np.ndarray]
    squares = np.square(members)
    return [np.exp(-np.outer(1.0 / np.square(ell), squares)) for ell in ells]


def _periodic_rows(members, p, smooths):
    # type: (np.ndarray, float, Sequence[np.ndarray]) -> List[np.ndarray]
    cosines = np.cos(2.0 * np.pi * members / p)
    return [np.exp(np.outer(1.0 / np.square(s), cosines)) for s in smooths]


def _rank_failures(rows, tol):
    # type: (List[np.ndarray], float) -> Tuple[np.ndarray, np.ndarray]
    matrices = np.stack(rows, axis=-2)
    margin = relative_rank_margin(matrices)
    return ~(margin > tol), margin


def _periodic_rank_cases(grid, rng, members, p):
    # type: (GridSpec, np.random.Generator, np.ndarray, float) -> Tuple[Columns, np.ndarray, Dict[str, np.ndarray]]
    top = float(np.max(members))
    ell_range = (0.25 * top, 2.0 * top)
    columns = _draw(grid, rng, [('ell1', 'ell', ell_range),
                                ('ell2', 'ell', ell_range),
                                ('s1', 's', (0.5, 2.0)),
                                ('s2', 's', (0.5, 2.0))])
    _sort_columns(columns, ('ell1', 'ell2'))
    _sort_columns(columns, ('s1', 's2'))
    columns = _select(columns,
                      _separated(columns, ('ell1', 'ell2'), grid.min_gap,
                                 relative=True) &
                      _separated(columns, ('s1', 's2'), grid.min_gap,
                                 relative=True))
    ell1, ell2 = _rbf_rows(members, (columns['ell1'], columns['ell2']))
    s1, s2 = _periodic_rows(members, p, (columns['s1'], columns['s2']))
    full, full_margin = _rank_failures([ell1, ell2, s1, s2], RANK_TOL)
    # Equal length-scales, distinct smoothness: three independent rows.
    shared_ell, u_margin = _rank_failures([ell1, s1, s2], RANK_TOL)
    # Distinct length-scales, equal smoothness.
    shared_s, w_margin = _rank_failures([ell1, ell2, s1], RANK_TOL)
    failed = full | shared_ell | shared_s
    return columns, failed, {'margin': full_margin, 'margin_u': u_margin,
                             'margin_w': w_margin}


def _two_rbf_rank_cases(grid, rng, members):
    # type: (GridSpec, np.random.Generator, np.ndarray) -> Tuple[Columns, np.ndarray, Dict[str, np.ndarray]]
    top = float(np.max(members))
    ell_range = (0.25 * top, 2.0 * top)
    names = ('ell1', 'ell2', 'ell3', 'ell4')
    columns = _draw(grid, rng, [(n, 'ell', ell_range) for n in names])
    _sort_columns(columns, names)
    columns = _select(columns, _separated(columns, names, grid.min_gap,
                                          relative=True))
    rows = _rbf_rows(members, [columns[n] for n in names])
    failed, margin = _rank_failures(rows, RANK_TOL)
    return columns, failed, {'margin': margin}


def check_feature_rank(designs, p, grid):
    # type: (Sequence[Design], Optional[float], GridSpec) -> LemmaCheckResult
    """Rank of the kernel feature vectors over a certifying distance set.

    With a period, each design must satisfy the RBF-periodic condition and
    the features (two RBF rows, two periodic rows) are evaluated on its
    witness quadruple.  Without one, each design must have four distinct
    distances and four RBF rows are evaluated on the first four of them.
    """
    rng = np.random.default_rng(grid.rng_seed)
    lemma_id = (LemmaId.PERIODIC_RANK if p is not None
                else LemmaId.TWO_RBF_RANK)
    violations = []  # type: List[Violation]
    cases = 0
    for index, design in enumerate(designs):
        distances = distance_set(design)
        if p is not None:
            report = check_rbf_periodic_condition(distances, p)
            if not report.holds:
                raise ConditionNotMetError(
                    index, ', '.join(report.failed_clauses))
            members = np.array(find_quadruple_witness(distances, p).members)
            columns, failed, observed = _periodic_rank_cases(
                grid, rng, members, p)
        else:
            report = check_two_rbf_condition(distances)
            if not report.holds:
                raise ConditionNotMetError(
                    index, ', '.join(report.failed_clauses))
            members = np.array(distances.values[:4])
            columns, failed, observed = _two_rbf_rank_cases(
                grid, rng, members)
        violations.extend(_violations(columns, failed, observed, cases))
        cases += len(failed)
    return LemmaCheckResult(lemma_id=lemma_id, cases_run=cases,
                            violations=tuple(violations), tolerance=RANK_TOL)


PERIODIC_SUITE_DESIGN = (0.0, 3.0, 7.0, 10.0)
PERIODIC_SUITE_PERIOD = 7.0
TWO_RBF_SUITE_DESIGN = (0.0, 1.0, 2.0, 3.0)


def run_checks(grid):
    # type: (GridSpec) -> List[LemmaCheckResult]
    """Run every check on ``grid`` with the default suite designs."""
    periodic_design = Design.from_points(PERIODIC_SUITE_DESIGN)
    two_rbf_design = Design.from_points(TWO_RBF_SUITE_DESIGN)
    results = [
        check_exponential_pair_independence(grid),
        check_decay_monotonicity(grid),
        check_gap_ratio_monotonicity(grid),
        check_feature_rank([periodic_design], PERIODIC_SUITE_PERIOD, grid),
        check_power_determinant(grid),
        check_feature_rank([two_rbf_design], None, grid),
        check_gaussian_determinant(grid),
    ]
    for result in results:
        LOGGER.debug("%s: %s cases, %s violations", result.lemma_id.value,
                     result.cases_run, len(result.violations))
    return results
