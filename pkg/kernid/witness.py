"""Search for, and construct, non-identifiability witnesses.

A witness is a second parameter set, clearly different from a target,
whose mixed Gram matrix on the same design equals the target's.  Three
entry points live here:

* :func:`find_witness` searches numerically from many random starts.
* :func:`solve_periodic_counterexample` constructs RBF + periodic pairs
  by solving the linear relation between the kernel feature vectors.
* :func:`reproduce_reference_examples` rebuilds the published
  counterexamples and compares them with their printed matrices.

A search that finds nothing is not a proof of identifiability.

"""
import logging
import math

import numpy as np
from attr import attrs, attrib
from scipy import optimize
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union  # noqa

from kernid import constants
from kernid import search
from kernid.design import Design
from kernid.kernels import (
    MixedKernelSpec, GramMatrix, KernelFamily, RbfParams, PeriodicParams,
    RbfPeriodic, TwoRbf, InvalidParameterError, DimensionMismatch,
    build_gram, design_lags, gram_from_vector, unit_component_grams,
)


LOGGER = logging.getLogger(__name__)

DEFAULT_SECOND_TAU_SQ = 3.0
COUNTEREXAMPLE_STARTS = 32
# Grid of 1/l**2 and 1/s**2 values scanned for sign changes before
# bracketing a root.
RATE_SCAN_L = np.geomspace(1e-4, 1e3, 4000)
RATE_SCAN_S = np.geomspace(1e-4, 1e2, 4000)
NULL_VECTOR_TOL = 1e-9


class InfeasibleError(Exception):
    def __init__(self, reason):
        # type: (str) -> None
        self.reason = reason
        super(InfeasibleError, self).__init__(
            "No positive-variance counterexample: %s" % reason)


@attrs(frozen=True)
class WitnessSearchConfig(object):
    starts = attrib(default=constants.DEFAULT_STARTS)              # type: int
    max_iters = attrib(default=constants.DEFAULT_MAX_ITERS)        # type: int
    residual_tol = attrib(default=constants.DEFAULT_RESIDUAL_TOL)  # type: float
    distinct_tol = attrib(default=constants.DEFAULT_DISTINCT_TOL)  # type: float
    param_bounds = attrib(default=(constants.DEFAULT_LOG_BOUND_LOW,
                                   constants.DEFAULT_LOG_BOUND_HIGH))  # type: Any
    rng_seed = attrib(default=constants.DEFAULT_SEED)              # type: int
    max_workers = attrib(default=constants.DEFAULT_THREADS)        # type: int

    def __attrs_post_init__(self):
        # type: () -> None
        for name in ('starts', 'max_iters'):
            if getattr(self, name) < 1:
                raise ValueError("%s must be a positive integer: %r"
                                 % (name, getattr(self, name)))
        for name in ('residual_tol', 'distinct_tol'):
            if not getattr(self, name) > 0:
                raise ValueError("%s must be positive: %r"
                                 % (name, getattr(self, name)))


@attrs(frozen=True)
class WitnessFound(object):
    params = attrib()       # type: MixedKernelSpec
    residual = attrib()     # type: float
    distance = attrib()     # type: float
    start_index = attrib()  # type: int


@attrs(frozen=True)
class NoWitness(object):
    best_residual = attrib(default=None)  # type: Optional[float]
    best_params = attrib(default=None)    # type: Optional[MixedKernelSpec]


@attrs(frozen=True)
class WitnessReport(object):
    outcome = attrib()           # type: Union[WitnessFound, NoWitness]
    target_params = attrib()     # type: MixedKernelSpec
    design = attrib()            # type: Design
    config = attrib()            # type: WitnessSearchConfig
    starts_converged = attrib()  # type: int

    @property
    def found(self):
        # type: () -> bool
        return isinstance(self.outcome, WitnessFound)


@attrs(frozen=True)
class CounterexamplePair(object):
    first = attrib()         # type: MixedKernelSpec
    second = attrib()        # type: MixedKernelSpec
    coefficients = attrib()  # type: Tuple[float, ...]


@attrs(frozen=True)
class ReferenceExample(object):
    example_id = attrib()  # type: str
    design = attrib()      # type: Design
    first = attrib()       # type: MixedKernelSpec
    second = attrib()      # type: MixedKernelSpec
    golden = attrib()      # type: Tuple[Tuple[float, ...], ...]
    tolerance = attrib()   # type: float
    cross_tolerance = attrib()  # type: float


@attrs(frozen=True)
class ReproductionResult(object):
    example_id = attrib()         # type: str
    max_abs_deviation = attrib()  # type: float
    cross_deviation = attrib()    # type: float
    tolerance = attrib()          # type: float
    cross_tolerance = attrib()    # type: float

    @property
    def passed(self):
        # type: () -> bool
        return (self.max_abs_deviation <= self.tolerance and
                self.cross_deviation <= self.cross_tolerance)


def _target_entries(target):
    # type: (Union[GramMatrix, np.ndarray]) -> np.ndarray
    if isinstance(target, GramMatrix):
        return target.entries
    return np.asarray(target, dtype=float)


def _normalized(diff, target_norm):
    # type: (np.ndarray, float) -> float
    residual = float(np.linalg.norm(diff))
    if target_norm > 0:
        residual /= target_norm
    return residual


def gram_residual(candidate, target, design):
    # type: (MixedKernelSpec, Union[GramMatrix, np.ndarray], Design) -> float
    """Normalized Frobenius distance between two Gram matrices."""
    expected = _target_entries(target)
    if expected.shape != (design.n, design.n):
        raise DimensionMismatch(
            "Target Gram is %s but the design has %s points"
            % ('x'.join(str(d) for d in expected.shape), design.n))
    actual = build_gram(candidate, design).entries
    return _normalized(actual - expected, float(np.linalg.norm(expected)))


def _candidate_spec(family, log_params, p):
    # type: (KernelFamily, Sequence[float], Optional[float]) -> Optional[MixedKernelSpec]
    try:
        return MixedKernelSpec.from_vector(family, np.exp(log_params), p)
    except InvalidParameterError:
        # Equal length-scales have no canonical two-RBF form.
        return None


class _WitnessObjective(object):
    """Residual functions for one (target, design) pair.

    ``profiled`` takes the two log length/smoothness scales and fits the
    squared amplitudes by non-negative least squares; ``full`` takes all
    four log-parameters.

    """
    def __init__(self, target_spec, design):
        # type: (MixedKernelSpec, Design) -> None
        self.family = target_spec.family
        self.p = target_spec.period
        self.lags = design_lags(design, self.family)
        self.target = build_gram(target_spec, design).entries
        self.target_norm = float(np.linalg.norm(self.target))
        self._flat_target = self.target.ravel()

    def full(self, log_params):
        # type: (np.ndarray) -> float
        entries = gram_from_vector(self.family, np.exp(log_params),
                                   self.lags, self.p)
        return _normalized(entries - self.target, self.target_norm)

    def _amplitudes(self, log_scales):
        # type: (np.ndarray) -> Tuple[np.ndarray, float]
        bases = unit_component_grams(self.family, np.exp(log_scales),
                                     self.lags, self.p)
        design_matrix = np.column_stack([b.ravel() for b in bases])
        return optimize.nnls(design_matrix, self._flat_target)

    def profiled(self, log_scales):
        # type: (np.ndarray) -> float
        _, residual_norm = self._amplitudes(log_scales)
        if self.target_norm > 0:
            return float(residual_norm) / self.target_norm
        return float(residual_norm)

    def expand(self, log_scales, bounds):
        # type: (np.ndarray, search.Bounds) -> np.ndarray
        squared, _ = self._amplitudes(log_scales)
        low_sq = np.exp(2.0 * np.array([bounds[0][0], bounds[2][0]]))
        log_amps = 0.5 * np.log(np.maximum(squared, low_sq))
        full = np.array([log_amps[0], log_scales[0],
                         log_amps[1], log_scales[1]])
        return np.clip(full, [b[0] for b in bounds], [b[1] for b in bounds])


def _two_stage_search(objective, bounds, max_iters):
    # type: (_WitnessObjective, search.Bounds, int) -> Any
    scale_bounds = [bounds[1], bounds[3]]

    def local_search(index, x0):
        # type: (int, np.ndarray) -> search.StartResult
        profiled = search.nelder_mead(objective.profiled, x0[[1, 3]],
                                      scale_bounds, max_iters)
        start = objective.expand(profiled.x, bounds)
        result = search.polish(objective.full, start, bounds, max_iters,
                               index)
        LOGGER.debug("Start %s: profiled residual %.3e, polished %.3e",
                     index, profiled.fun, result.fun)
        return result
    return local_search


def find_witness(target_spec, design, config=None):
    # type: (MixedKernelSpec, Design, Optional[WitnessSearchConfig]) -> WitnessReport
    if config is None:
        config = WitnessSearchConfig()
    bounds = search.resolve_bounds(config.param_bounds, 4)
    objective = _WitnessObjective(target_spec, design)
    target_vector = target_spec.to_vector()
    results = search.run_multistart(
        objective.full, bounds, config.starts, config.max_iters,
        config.rng_seed, config.max_workers,
        local_search=_two_stage_search(objective, bounds, config.max_iters))
    matches = []  # type: List[Tuple[float, int, MixedKernelSpec, float]]
    distinct = []  # type: List[Tuple[float, int, MixedKernelSpec]]
    for result in results:
        candidate = _candidate_spec(objective.family, result.x, objective.p)
        if candidate is None:
            continue
        distance = search.relative_distance(candidate.to_vector(),
                                            target_vector)
        if distance < config.distinct_tol:
            continue
        residual = gram_residual(candidate, objective.target, design)
        distinct.append((residual, result.start_index, candidate))
        if residual <= config.residual_tol:
            matches.append((residual, result.start_index, candidate,
                            distance))
    converged = sum(1 for r in results if r.converged)
    outcome = None  # type: Any
    if matches:
        residual, index, candidate, distance = min(
            matches, key=lambda m: (m[0], m[1]))
        outcome = WitnessFound(params=candidate, residual=residual,
                               distance=distance, start_index=index)
        LOGGER.debug("Witness found at start %s, residual %.3e",
                     index, residual)
    elif distinct:
        residual, index, candidate = min(distinct,
                                         key=lambda m: (m[0], m[1]))
        outcome = NoWitness(best_residual=residual, best_params=candidate)
    else:
        outcome = NoWitness()
    return WitnessReport(outcome=outcome, target_params=target_spec,
                         design=design, config=config,
                         starts_converged=converged)


def _periodic_features(x4, p):
    # type: (np.ndarray, float) -> np.ndarray
    return np.cos(2.0 * np.pi * x4 / p)


def _scan_roots(func, grid):
    # type: (Any, np.ndarray) -> List[float]
    values = np.array([func(t) for t in grid])
    roots = []
    for i in range(len(grid) - 1):
        a, b = values[i], values[i + 1]
        if a == 0.0:
            roots.append(float(grid[i]))
        elif a * b < 0:
            roots.append(float(optimize.brentq(
                func, grid[i], grid[i + 1], xtol=1e-15,
                rtol=4 * np.finfo(float).eps)))
    return roots


def _feature_matrix(x4, cosines, rate_l, rate_s):
    # type: (np.ndarray, np.ndarray, Sequence[float], Sequence[float]) -> np.ndarray
    rows = [np.exp(-np.square(x4) * t) for t in rate_l]
    rows.extend(np.exp(cosines * w) for w in rate_s)
    return np.array(rows)


def _pair_from_rates(x4, cosines, p, rate_l, rate_s, tau_sq):
    # type: (np.ndarray, np.ndarray, float, Sequence[float], Sequence[float], float) -> Optional[Tuple[MixedKernelSpec, MixedKernelSpec]]
    features = _feature_matrix(x4, cosines, rate_l, rate_s)
    left, singular, _ = np.linalg.svd(features)
    if singular[-1] > NULL_VECTOR_TOL * singular[0]:
        return None
    a = left[:, -1]
    if a[0] < 0:
        a = -a
    if not (a[0] > 0 and a[1] < 0 and a[2] > 0 and a[3] < 0):
        return None
    u = np.exp(np.asarray(rate_s))
    scale = tau_sq / (-a[3] * u[1])
    sigma1_sq, sigma2_sq = a[0] * scale, -a[1] * scale
    tau1_sq, tau2_sq = a[2] * u[0] * scale, -a[3] * u[1] * scale
    ell = [1.0 / math.sqrt(t) for t in rate_l]
    s = [1.0 / math.sqrt(w) for w in rate_s]
    first = RbfPeriodic(
        rbf=RbfParams(sigma=math.sqrt(sigma1_sq), ell=ell[0]),
        periodic=PeriodicParams(tau=math.sqrt(tau1_sq), s=s[0], p=p))
    second = RbfPeriodic(
        rbf=RbfParams(sigma=math.sqrt(sigma2_sq), ell=ell[1]),
        periodic=PeriodicParams(tau=math.sqrt(tau2_sq), s=s[1], p=p))
    return MixedKernelSpec(variant=first), MixedKernelSpec(variant=second)


def _solve_with_coefficients(x4, p, coefficients, tau_sq):
    # type: (np.ndarray, float, np.ndarray, float) -> CounterexamplePair
    cosines = _periodic_features(x4, p)
    squares = np.square(x4)

    def rbf_row(t):
        # type: (float) -> float
        return float(np.dot(coefficients, np.exp(-squares * t)))

    def periodic_row(w):
        # type: (float) -> float
        return float(np.dot(coefficients, np.exp(cosines * w)))

    rates_l = _scan_roots(rbf_row, RATE_SCAN_L)
    rates_s = _scan_roots(periodic_row, RATE_SCAN_S)
    LOGGER.debug("Coefficients %s: %s RBF roots, %s periodic roots",
                 coefficients.tolist(), len(rates_l), len(rates_s))
    if len(rates_l) < 2 or len(rates_s) < 2:
        raise InfeasibleError(
            "coefficients %s give %s length-scale and %s smoothness "
            "solutions, two of each are needed"
            % (coefficients.tolist(), len(rates_l), len(rates_s)))
    # Larger 1/l**2 means the smaller length-scale, which goes first.
    rates_l = sorted(rates_l, reverse=True)
    rates_s = sorted(rates_s)
    for i in range(len(rates_l)):
        for j in range(i + 1, len(rates_l)):
            for k in range(len(rates_s)):
                for m in range(len(rates_s)):
                    if k == m:
                        continue
                    pair = _pair_from_rates(
                        x4, cosines, p, (rates_l[i], rates_l[j]),
                        (rates_s[k], rates_s[m]), tau_sq)
                    if pair is not None:
                        return CounterexamplePair(
                            first=pair[0], second=pair[1],
                            coefficients=tuple(coefficients.tolist()))
    raise InfeasibleError(
        "coefficients %s admit no positive variances"
        % coefficients.tolist())


def _free_coefficient_candidates(x4, p, starts, rng_seed):
    # type: (np.ndarray, float, int, int) -> List[np.ndarray]
    cosines = _periodic_features(x4, p)
    squares = np.square(x4)

    def residuals(z):
        # type: (np.ndarray) -> np.ndarray
        rate_l = np.exp(-2.0 * z[:2])
        rate_s = np.exp(-2.0 * z[2:4])
        c = np.concatenate([[1.0], z[4:]])
        rows = [np.exp(-squares * t) for t in rate_l]
        rows.extend(np.exp(cosines * w) for w in rate_s)
        return np.array(rows).dot(c)

    rng = np.random.default_rng(rng_seed)
    log_scales = rng.uniform(-1.0, 1.0, size=(starts, 4))
    coefficients = rng.uniform(-6.0, 6.0, size=(starts, 3))
    candidates = []
    for z0 in np.hstack([log_scales, coefficients]):
        result = optimize.least_squares(residuals, z0, xtol=1e-12,
                                        ftol=1e-12, gtol=1e-12)
        if result.cost < 1e-16:
            candidates.append(np.concatenate([[1.0], result.x[4:]]))
    return candidates


def solve_periodic_counterexample(x4, p, coefficients=None,
                                  tau_sq=DEFAULT_SECOND_TAU_SQ,
                                  starts=COUNTEREXAMPLE_STARTS, rng_seed=0):
    # type: (Sequence[float], float, Optional[Sequence[float]], float, int, int) -> CounterexamplePair
    """Construct two RBF + periodic specs agreeing at four lags.

    For fixed coefficients ``c`` the relation ``sum_i c_i v(x_i) = 0``
    splits into one scalar equation per feature row, so each length-scale
    and smoothness is a root of a one-variable function.  The squared
    amplitudes are then the left null vector of the 4x4 feature matrix,
    scaled so the second parameter set has ``tau**2 == tau_sq``.

    Without ``coefficients``, candidate coefficient vectors are found by
    nonlinear least squares from ``starts`` seeded starting points.

    """
    x4 = np.asarray(x4, dtype=float)
    if x4.shape != (4,) or len(set(x4.tolist())) != 4:
        raise ValueError("Four distinct distances are required, got %s"
                         % x4.tolist())
    if not p > 0:
        raise ValueError("The period must be positive: %r" % p)
    if len(set(np.round(_periodic_features(x4, p), 12).tolist())) < 2:
        raise InfeasibleError(
            "every distance is a multiple of the period, the periodic "
            "features are collinear")
    if coefficients is not None:
        c = np.asarray(coefficients, dtype=float)
        if c.shape != (4,) or not np.any(c):
            raise ValueError("Four coefficients, not all zero, are "
                             "required: %s" % c.tolist())
        return _solve_with_coefficients(x4, p, c, tau_sq)
    for c in _free_coefficient_candidates(x4, p, starts, rng_seed):
        try:
            return _solve_with_coefficients(x4, p, c, tau_sq)
        except InfeasibleError:
            continue
    raise InfeasibleError("no coefficient pattern found in %s starts"
                          % starts)


def _spec_from_mapping(values, p):
    # type: (Dict[str, float], float) -> MixedKernelSpec
    return MixedKernelSpec(variant=RbfPeriodic(
        rbf=RbfParams(sigma=values['sigma'], ell=values['ell']),
        periodic=PeriodicParams(tau=values['tau'], s=values['s'], p=p)))


def _two_rbf_from_mappings(components):
    # type: (Sequence[Dict[str, float]]) -> MixedKernelSpec
    a, b = [RbfParams(sigma=c['sigma'], ell=c['ell']) for c in components]
    return MixedKernelSpec(variant=TwoRbf.canonical(a, b))


def reference_examples():
    # type: () -> List[ReferenceExample]
    return [
        ReferenceExample(
            example_id='rbf-periodic-aligned',
            design=Design.from_points(constants.ALIGNED_DESIGN),
            first=_spec_from_mapping(constants.ALIGNED_FIRST,
                                     constants.ALIGNED_PERIOD),
            second=_spec_from_mapping(constants.ALIGNED_SECOND,
                                      constants.ALIGNED_PERIOD),
            golden=constants.ALIGNED_GRAM,
            tolerance=constants.ALIGNED_TOL,
            cross_tolerance=constants.ALIGNED_TOL),
        ReferenceExample(
            example_id='rbf-periodic-offgrid',
            design=Design.from_points(constants.OFFGRID_DESIGN),
            first=_spec_from_mapping(constants.OFFGRID_FIRST,
                                     constants.OFFGRID_PERIOD),
            second=_spec_from_mapping(constants.OFFGRID_SECOND,
                                      constants.OFFGRID_PERIOD),
            golden=constants.OFFGRID_GRAM,
            tolerance=constants.OFFGRID_TOL,
            cross_tolerance=constants.OFFGRID_CROSS_TOL),
        ReferenceExample(
            example_id='two-rbf-octahedron',
            design=Design.from_points(constants.OCTAHEDRON_DESIGN),
            first=_two_rbf_from_mappings(constants.OCTAHEDRON_FIRST),
            second=_two_rbf_from_mappings(constants.OCTAHEDRON_SECOND),
            golden=constants.OCTAHEDRON_GRAM,
            tolerance=constants.OCTAHEDRON_TOL,
            cross_tolerance=constants.OCTAHEDRON_TOL),
    ]


def reproduce_reference_examples():
    # type: () -> List[ReproductionResult]
    results = []
    for example in reference_examples():
        golden = np.array(example.golden)
        first = build_gram(example.first, example.design).entries
        second = build_gram(example.second, example.design).entries
        deviation = max(float(np.max(np.abs(first - golden))),
                        float(np.max(np.abs(second - golden))))
        cross = float(np.max(np.abs(first - second)))
        LOGGER.debug("%s: deviation %.3e, cross deviation %.3e",
                     example.example_id, deviation, cross)
        results.append(ReproductionResult(
            example_id=example.example_id, max_abs_deviation=deviation,
            cross_deviation=cross, tolerance=example.tolerance,
            cross_tolerance=example.cross_tolerance))
    return results
