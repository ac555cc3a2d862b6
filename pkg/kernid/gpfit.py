"""Sampling, likelihood and maximum-likelihood fits for mixed-kernel GPs.

The model is ``y = f1(x) + f2(x) + eps`` with a zero mean, where the
``f`` terms follow the two kernels of a :class:`MixedKernelSpec` and
``eps`` is white noise of variance ``noise_var``.  Datasets may hold
several independent replicate draws on the same design; their
log-likelihoods add.

"""
import logging
import math

import numpy as np
from attr import attrs, attrib
from scipy import linalg
from typing import Any, List, Optional, Tuple  # noqa

from kernid import constants
from kernid import search
from kernid.design import Design
from kernid.kernels import (
    MixedKernelSpec, KernelFamily, InvalidParameterError, build_gram,
    design_lags, gram_from_vector,
)
from kernid.witness import WitnessSearchConfig


LOGGER = logging.getLogger(__name__)

# Objective value used where the covariance cannot be factorized.
NOT_PSD_PENALTY = 1e25


class NotPsdError(Exception):
    def __init__(self, largest_jitter):
        # type: (float) -> None
        self.largest_jitter = largest_jitter
        super(NotPsdError, self).__init__(
            "Covariance matrix is not positive definite even with a "
            "diagonal jitter of %r" % largest_jitter)


def _as_responses(responses):
    # type: (Any) -> np.ndarray
    array = np.array(responses, dtype=float)
    array.setflags(write=False)
    return array


@attrs(frozen=True)
class Dataset(object):
    design = attrib()                                   # type: Design
    responses = attrib(converter=_as_responses, eq=False)  # type: np.ndarray

    def __attrs_post_init__(self):
        # type: () -> None
        if self.responses.ndim not in (1, 2) or \
                self.responses.shape[-1] != self.design.n:
            raise ValueError(
                "Responses of shape %s do not match a design of %s points"
                % (self.responses.shape, self.design.n))
        if not np.all(np.isfinite(self.responses)):
            raise ValueError("Responses must all be finite")

    @property
    def replicates(self):
        # type: () -> np.ndarray
        """Responses as an (r, n) block."""
        return np.atleast_2d(self.responses)


@attrs(frozen=True)
class FitResult(object):
    params = attrib()            # type: MixedKernelSpec
    neg_log_marginal = attrib()  # type: float
    converged = attrib()         # type: bool
    iterations = attrib()        # type: int
    start_index = attrib()       # type: int
    jitter = attrib(default=0.0)  # type: float


def cholesky_with_jitter(matrix):
    # type: (np.ndarray) -> Tuple[np.ndarray, float]
    """Lower Cholesky factor, adding diagonal jitter if needed.

    Jitter escalates through ``JITTER_SCALES`` times the mean diagonal.
    Returns the factor and the jitter that was added.
    """
    try:
        return linalg.cholesky(matrix, lower=True), 0.0
    except linalg.LinAlgError:
        pass
    mean_diag = float(np.mean(np.diag(matrix)))
    jitter = 0.0
    for scale in constants.JITTER_SCALES:
        jitter = scale * mean_diag
        LOGGER.debug("Cholesky failed, retrying with jitter %.3e", jitter)
        try:
            return linalg.cholesky(
                matrix + jitter * np.eye(matrix.shape[0]), lower=True), jitter
        except linalg.LinAlgError:
            continue
    raise NotPsdError(jitter)


def _scatter(replicates):
    # type: (np.ndarray) -> Tuple[np.ndarray, int]
    """Summed outer products of the replicate rows, and their count."""
    return replicates.T.dot(replicates), replicates.shape[0]


def _log_marginal(covariance, scatter, count):
    # type: (np.ndarray, np.ndarray, int) -> Tuple[float, float]
    # Independent replicates only enter through their scatter matrix:
    # sum_i y_i' K^-1 y_i == trace(K^-1 S).
    lower, jitter = cholesky_with_jitter(covariance)
    n = covariance.shape[0]
    quadratic = float(np.trace(linalg.cho_solve((lower, True), scatter)))
    log_det = 2.0 * float(np.sum(np.log(np.diag(lower))))
    value = (-0.5 * quadratic - 0.5 * count * log_det -
             0.5 * count * n * math.log(2.0 * math.pi))
    return value, jitter


def log_marginal(spec, data):
    # type: (MixedKernelSpec, Dataset) -> float
    covariance = build_gram(spec, data.design, include_noise=True).entries
    scatter, count = _scatter(data.replicates)
    return _log_marginal(covariance, scatter, count)[0]


def sample_prior(spec, design, rng_seed, replicates=1):
    # type: (MixedKernelSpec, Design, int, int) -> Dataset
    """Draw responses from the prior of ``spec`` on ``design``.

    With ``replicates > 1`` the dataset holds an (r, n) block of
    independent draws.
    """
    if replicates < 1:
        raise ValueError("replicates must be a positive integer: %r"
                         % replicates)
    covariance = build_gram(spec, design, include_noise=True).entries
    lower, jitter = cholesky_with_jitter(covariance)
    if jitter:
        LOGGER.debug("Sampling with jitter %.3e", jitter)
    rng = np.random.default_rng(rng_seed)
    draws = rng.standard_normal((replicates, design.n)).dot(lower.T)
    if replicates == 1:
        draws = draws[0]
    return Dataset(design=design, responses=draws)


class _NegLogMarginal(object):
    def __init__(self, data, family, p, noise_var, fit_noise):
        # type: (Dataset, KernelFamily, Optional[float], float, bool) -> None
        self.family = family
        self.p = p
        self.noise_var = noise_var
        self.fit_noise = fit_noise
        self.lags = design_lags(data.design, family)
        self.scatter, self.count = _scatter(data.replicates)
        self._diagonal = np.diag_indices(data.design.n)

    def noise(self, log_params):
        # type: (np.ndarray) -> float
        if self.fit_noise:
            return float(np.exp(log_params[4]))
        return self.noise_var

    def covariance(self, log_params):
        # type: (np.ndarray) -> np.ndarray
        entries = gram_from_vector(self.family, np.exp(log_params[:4]),
                                   self.lags, self.p)
        entries[self._diagonal] += self.noise(log_params)
        return entries

    def __call__(self, log_params):
        # type: (np.ndarray) -> float
        try:
            value, _ = _log_marginal(self.covariance(log_params),
                                     self.scatter, self.count)
        except NotPsdError:
            return NOT_PSD_PENALTY
        return -value


def _fit_vector(result):
    # type: (FitResult) -> np.ndarray
    return np.append(result.params.to_vector(), result.params.noise_var)


def _deduplicate(results, distinct_tol):
    # type: (List[FitResult], float) -> List[FitResult]
    kept = []  # type: List[FitResult]
    for result in results:
        vector = _fit_vector(result)
        if all(search.relative_distance(vector, _fit_vector(other)) >=
               distinct_tol for other in kept):
            kept.append(result)
    return kept


def fit_mle(data, family, p=None, config=None, noise_var=0.0,
            fit_noise=False):
    # type: (Dataset, KernelFamily, Optional[float], Optional[WitnessSearchConfig], float, bool) -> List[FitResult]
    """Multi-start maximum likelihood over log-parameters.

    Returns the converged optima sorted by negative log marginal
    likelihood (ties by start index) and deduplicated at
    ``config.distinct_tol``.  When no start converges the single best
    start is returned with ``converged=False``.
    """
    if family is KernelFamily.RBF_PERIODIC and p is None:
        raise InvalidParameterError('p', p)
    if config is None:
        config = WitnessSearchConfig()
    n_params = 5 if fit_noise else 4
    bounds = search.resolve_bounds(config.param_bounds, n_params)
    objective = _NegLogMarginal(data, family, p, noise_var, fit_noise)
    starts = search.run_multistart(objective, bounds, config.starts,
                                   config.max_iters, config.rng_seed,
                                   config.max_workers)
    fits = []  # type: List[FitResult]
    for start in starts:
        x = np.array(start.x)
        try:
            spec = MixedKernelSpec.from_vector(
                family, np.exp(x[:4]), p, objective.noise(x))
        except InvalidParameterError:
            LOGGER.debug("Start %s ended on equal length-scales, skipped",
                         start.start_index)
            continue
        if start.fun >= NOT_PSD_PENALTY:
            jitter = 0.0
        else:
            jitter = cholesky_with_jitter(objective.covariance(x))[1]
        fits.append(FitResult(
            params=spec, neg_log_marginal=start.fun,
            converged=start.converged and start.fun < NOT_PSD_PENALTY,
            iterations=start.iterations, start_index=start.start_index,
            jitter=jitter))
    fits.sort(key=lambda f: (f.neg_log_marginal, f.start_index))
    converged = [f for f in fits if f.converged]
    LOGGER.debug("%s of %s fits converged", len(converged), len(fits))
    if not converged:
        return fits[:1]
    return _deduplicate(converged, config.distinct_tol)
