"""Observation designs and the distance-set conditions.

A design is an ordered list of points.  Everything the identifiability
conditions need from it is the set of pairwise distances, ``X``, which
always contains 0 (a point's distance to itself).

Two sufficient conditions are checked here:

* RBF + periodic: ``X`` holds a positive multiple of the period and a
  positive distance that is not a multiple of it.
* RBF + RBF: ``X`` has at least four distinct values.

Neither failing condition proves anything; a counterexample has to come
from :mod:`kernid.witness`.

"""
import bisect
import enum
import logging
import math

import numpy as np
from attr import attrs, attrib, Factory
from scipy.spatial.distance import pdist
from typing import List, Optional, Sequence, Tuple, Any, Iterator  # noqa

from kernid.constants import DEFAULT_DEDUP_TOL, DEFAULT_DIV_TOL


LOGGER = logging.getLogger(__name__)

Point = Tuple[float, ...]

NO_POSITIVE_MULTIPLE = 'no positive multiple of the period'
NO_NON_MULTIPLE = 'no non-multiple distance'
TOO_FEW_DISTANCES = 'fewer than four distinct distances'


class InvalidDesignError(ValueError):
    def __init__(self, reason):
        # type: (str) -> None
        self.reason = reason
        super(InvalidDesignError, self).__init__(
            "Invalid design: %s" % reason)


class QuadrupleNotFoundError(Exception):
    """No distance quadruple certifies the RBF-periodic condition."""
    def __init__(self, period, reason):
        # type: (float, str) -> None
        self.period = period
        self.reason = reason
        super(QuadrupleNotFoundError, self).__init__(
            "No witness quadruple for period %r: %s" % (period, reason))


class Condition(enum.Enum):
    RBF_PERIODIC = 'rbf_periodic'
    TWO_RBF = 'two_rbf'


class Verdict(enum.Enum):
    CONDITION_HOLDS = 'condition_holds'
    CONDITION_FAILS = 'condition_fails'


class QuadrupleShape(enum.Enum):
    # {0, mp, q, mp + q}
    ZERO_MP_Q_MPQ = 'zero_mp_q_mp+q'
    # {0, q, mp - q, mp}
    ZERO_Q_MPQ_MP = 'zero_q_mp-q_mp'


def _to_points(points):
    # type: (Sequence[Any]) -> Tuple[Point, ...]
    converted = []
    for point in points:
        if isinstance(point, (list, tuple, np.ndarray)):
            converted.append(tuple(float(c) for c in point))
        else:
            converted.append((float(point),))
    return tuple(converted)


@attrs(frozen=True)
class Design(object):
    dim = attrib()                     # type: int
    points = attrib(converter=_to_points)  # type: Tuple[Point, ...]
    labels = attrib(default=None)      # type: Optional[Tuple[str, ...]]

    def __attrs_post_init__(self):
        # type: () -> None
        if not isinstance(self.dim, int) or self.dim < 1:
            raise InvalidDesignError("dim must be a positive integer, "
                                     "got %r" % (self.dim,))
        if not self.points:
            raise InvalidDesignError("a design needs at least one point")
        for i, point in enumerate(self.points):
            if len(point) != self.dim:
                raise InvalidDesignError(
                    "point %s has %s coordinates, expected %s"
                    % (i, len(point), self.dim))
            if not all(math.isfinite(c) for c in point):
                raise InvalidDesignError(
                    "point %s has a non-finite coordinate" % i)
        if self.labels is not None and len(self.labels) != len(self.points):
            raise InvalidDesignError(
                "%s labels given for %s points"
                % (len(self.labels), len(self.points)))

    @classmethod
    def from_points(cls, points, labels=None):
        # type: (Sequence[Any], Optional[Sequence[str]]) -> Design
        converted = _to_points(points)
        if not converted:
            raise InvalidDesignError("a design needs at least one point")
        if labels is not None:
            labels = tuple(labels)
        return cls(dim=len(converted[0]), points=converted, labels=labels)

    @property
    def n(self):
        # type: () -> int
        return len(self.points)

    @property
    def array(self):
        # type: () -> np.ndarray
        return np.array(self.points, dtype=float).reshape(self.n, self.dim)

    def permuted(self, order):
        # type: (Sequence[int]) -> Design
        labels = None
        if self.labels is not None:
            labels = tuple(self.labels[i] for i in order)
        return Design(dim=self.dim,
                      points=[self.points[i] for i in order],
                      labels=labels)


@attrs(frozen=True)
class DistanceSet(object):
    values = attrib()                        # type: Tuple[float, ...]
    dedup_tol = attrib(default=DEFAULT_DEDUP_TOL)  # type: float

    def __len__(self):
        # type: () -> int
        return len(self.values)

    def __iter__(self):
        # type: () -> Iterator[float]
        return iter(self.values)

    @property
    def positive(self):
        # type: () -> Tuple[float, ...]
        return tuple(v for v in self.values if v > 0)

    def find(self, value):
        # type: (float) -> Optional[float]
        """Return the member within ``dedup_tol`` of ``value``, if any."""
        i = bisect.bisect_left(self.values, value - self.dedup_tol)
        while i < len(self.values) and \
                self.values[i] <= value + self.dedup_tol:
            if abs(self.values[i] - value) <= self.dedup_tol:
                return self.values[i]
            i += 1
        return None

    def contains(self, value):
        # type: (float) -> bool
        return self.find(value) is not None


@attrs(frozen=True)
class CheckReport(object):
    condition = attrib()   # type: Condition
    verdict = attrib()     # type: Verdict
    distances = attrib()   # type: Tuple[float, ...]
    alpha = attrib(default=None)   # type: Optional[float]
    beta = attrib(default=None)    # type: Optional[float]
    period = attrib(default=None)  # type: Optional[float]
    failed_clauses = attrib(default=Factory(tuple))  # type: Tuple[str, ...]

    @property
    def holds(self):
        # type: () -> bool
        return self.verdict is Verdict.CONDITION_HOLDS

    @property
    def cardinality(self):
        # type: () -> int
        return len(self.distances)


@attrs(frozen=True)
class QuadrupleWitness(object):
    shape = attrib()    # type: QuadrupleShape
    m = attrib()        # type: int
    q = attrib()        # type: float
    mp = attrib()       # type: float
    period = attrib()   # type: float
    members = attrib()  # type: Tuple[float, float, float, float]


def distance_set(design, dedup_tol=DEFAULT_DEDUP_TOL):
    # type: (Design, float) -> DistanceSet
    """Compute the sorted, deduplicated set of pairwise distances.

    All n**2 pairs are covered: the i == j pairs contribute 0 and the
    symmetric pairs contribute the same value twice, so the condensed
    distance vector plus 0 is enough.  Values within ``dedup_tol`` of the
    last kept value are merged into it.

    """
    if dedup_tol < 0:
        raise ValueError("dedup_tol must be nonnegative: %r" % dedup_tol)
    points = design.array
    if design.dim == 1:
        column = points[:, 0]
        rows, cols = np.triu_indices(design.n, k=1)
        raw = np.abs(column[rows] - column[cols])
    else:
        raw = pdist(points)
    merged = [0.0]
    for value in np.sort(raw):
        value = float(value)
        if value - merged[-1] > dedup_tol:
            merged.append(value)
    LOGGER.debug("Distance set for %s points: %s distinct values",
                 design.n, len(merged))
    return DistanceSet(values=tuple(merged), dedup_tol=dedup_tol)


def _period_multiple(value, period, div_tol):
    # type: (float, float, float) -> Optional[int]
    if value <= 0:
        return None
    ratio = value / period
    nearest = int(round(ratio))
    if nearest >= 1 and abs(ratio - nearest) <= div_tol:
        return nearest
    return None


def _check_period(period):
    # type: (float) -> None
    if not period > 0:
        raise ValueError("The period must be positive: %r" % period)


def check_rbf_periodic_condition(distances, period,
                                 div_tol=DEFAULT_DIV_TOL):
    # type: (DistanceSet, float, float) -> CheckReport
    _check_period(period)
    alpha = None  # type: Optional[float]
    beta = None   # type: Optional[float]
    for value in distances.positive:
        if _period_multiple(value, period, div_tol) is not None:
            if alpha is None:
                alpha = value
        elif beta is None:
            beta = value
    failed = []
    if alpha is None:
        failed.append(NO_POSITIVE_MULTIPLE)
    if beta is None:
        failed.append(NO_NON_MULTIPLE)
    verdict = Verdict.CONDITION_FAILS if failed else Verdict.CONDITION_HOLDS
    return CheckReport(
        condition=Condition.RBF_PERIODIC, verdict=verdict,
        distances=distances.values, alpha=alpha, beta=beta, period=period,
        failed_clauses=tuple(failed))


def check_two_rbf_condition(distances):
    # type: (DistanceSet) -> CheckReport
    if len(distances) >= 4:
        return CheckReport(condition=Condition.TWO_RBF,
                           verdict=Verdict.CONDITION_HOLDS,
                           distances=distances.values)
    return CheckReport(condition=Condition.TWO_RBF,
                       verdict=Verdict.CONDITION_FAILS,
                       distances=distances.values,
                       failed_clauses=(TOO_FEW_DISTANCES,))


def find_quadruple_witness(distances, period, div_tol=DEFAULT_DIV_TOL):
    # type: (DistanceSet, float, float) -> QuadrupleWitness
    """Find {0, mp, q, mp+q} or {0, q, mp-q, mp} inside the distance set.

    Multiples are tried smallest first, then non-multiples smallest first,
    and for each pair the ``mp + q`` shape before the ``mp - q`` one.

    """
    report = check_rbf_periodic_condition(distances, period, div_tol)
    if not report.holds:
        raise QuadrupleNotFoundError(
            period, ', '.join(report.failed_clauses))
    multiples = []  # type: List[Tuple[int, float]]
    others = []  # type: List[float]
    for value in distances.positive:
        m = _period_multiple(value, period, div_tol)
        if m is None:
            others.append(value)
        else:
            multiples.append((m, value))
    for m, mp in multiples:
        for q in others:
            total = distances.find(mp + q)
            if total is not None:
                return QuadrupleWitness(
                    shape=QuadrupleShape.ZERO_MP_Q_MPQ, m=m, q=q, mp=mp,
                    period=period, members=(0.0, mp, q, total))
            if q < mp:
                gap = distances.find(mp - q)
                if gap is not None:
                    return QuadrupleWitness(
                        shape=QuadrupleShape.ZERO_Q_MPQ_MP, m=m, q=q, mp=mp,
                        period=period, members=(0.0, q, gap, mp))
    raise QuadrupleNotFoundError(
        period, 'condition holds but no quadruple is present')
