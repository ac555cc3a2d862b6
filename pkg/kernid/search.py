"""Multi-start local search in a log-space box.

Every start point is drawn before any optimization runs, and results are
returned in start order, so a parallel run gives exactly the same answer
as a serial one.

"""
import logging
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from attr import attrs, attrib
from scipy import optimize
from typing import Any, Callable, List, Optional, Sequence, Tuple  # noqa


LOGGER = logging.getLogger(__name__)

Bounds = List[Tuple[float, float]]
Objective = Callable[[np.ndarray], float]

NM_XATOL = 1e-10
NM_FATOL = 1e-14
# A final simplex whose values agree this closely (relative) counts as
# converged even when its extent has not shrunk below NM_XATOL, which is
# what happens along exactly flat directions.
FLAT_SIMPLEX_RTOL = 1e-12


class InvalidBoundsError(ValueError):
    def __init__(self, index, low, high):
        # type: (int, float, float) -> None
        self.index = index
        self.low = low
        self.high = high
        super(InvalidBoundsError, self).__init__(
            "Invalid bounds for parameter %s: low (%r) must be smaller "
            "than high (%r)" % (index, low, high))


@attrs(frozen=True)
class StartResult(object):
    start_index = attrib()  # type: int
    x = attrib()            # type: Tuple[float, ...]
    fun = attrib()          # type: float
    converged = attrib()    # type: bool
    iterations = attrib()   # type: int


def resolve_bounds(param_bounds, n_params):
    # type: (Any, int) -> Bounds
    """Return one (low, high) pair per parameter.

    A single pair is broadcast to every parameter.

    """
    pairs = list(param_bounds)
    if len(pairs) == 2 and not isinstance(pairs[0], (list, tuple)):
        pairs = [tuple(pairs)] * n_params
    if len(pairs) != n_params:
        raise ValueError("Expected %s bound pairs, got %s"
                         % (n_params, len(pairs)))
    resolved = []
    for i, (low, high) in enumerate(pairs):
        low, high = float(low), float(high)
        if not low < high:
            raise InvalidBoundsError(i, low, high)
        resolved.append((low, high))
    return resolved


def resolve_threads(max_workers):
    # type: (int) -> int
    if max_workers < 0:
        raise ValueError("Thread count must be nonnegative: %r"
                         % max_workers)
    if max_workers == 0:
        return os.cpu_count() or 1
    return max_workers


def relative_distance(a, b):
    # type: (Sequence[float], Sequence[float]) -> float
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = np.maximum(np.abs(a), np.abs(b))
    diff = np.abs(a - b)
    ratios = np.divide(diff, scale, out=np.zeros_like(diff),
                       where=scale > 0)
    return float(np.max(ratios))


def draw_starts(bounds, starts, rng_seed):
    # type: (Bounds, int, int) -> np.ndarray
    if starts < 1:
        raise ValueError("At least one start is required, got %r" % starts)
    rng = np.random.default_rng(rng_seed)
    low = np.array([b[0] for b in bounds])
    high = np.array([b[1] for b in bounds])
    return rng.uniform(low, high, size=(starts, len(bounds)))


def nelder_mead(objective, x0, bounds, max_iters):
    # type: (Objective, np.ndarray, Optional[Bounds], int) -> Any
    return optimize.minimize(
        objective, x0, method='Nelder-Mead', bounds=bounds,
        options=dict(maxiter=max_iters, xatol=NM_XATOL, fatol=NM_FATOL,
                     adaptive=True))


def _settled(result):
    # type: (Any) -> bool
    if result.success:
        return True
    values = result.final_simplex[1]
    spread = float(np.max(values) - np.min(values))
    return spread <= FLAT_SIMPLEX_RTOL * max(1.0, abs(float(result.fun)))


def polish(objective, x0, bounds, max_iters, start_index):
    # type: (Objective, np.ndarray, Optional[Bounds], int, int) -> StartResult
    """Nelder-Mead from ``x0``, restarted once with a fresh simplex."""
    first = nelder_mead(objective, x0, bounds, max_iters)
    second = nelder_mead(objective, first.x, bounds, max_iters)
    best = second if second.fun <= first.fun else first
    return StartResult(start_index=start_index,
                       x=tuple(float(v) for v in best.x),
                       fun=float(best.fun),
                       converged=_settled(second),
                       iterations=int(first.nit + second.nit))


def run_multistart(objective, bounds, starts, max_iters, rng_seed,
                   max_workers=0, local_search=None):
    # type: (Objective, Bounds, int, int, int, int, Optional[Callable[[int, np.ndarray], StartResult]]) -> List[StartResult]
    if local_search is None:
        def local_search(index, x0):
            # type: (int, np.ndarray) -> StartResult
            return polish(objective, x0, bounds, max_iters, index)
    points = draw_starts(bounds, starts, rng_seed)
    workers = min(resolve_threads(max_workers), starts)
    LOGGER.debug("Running %s starts on %s threads (seed=%s)",
                 starts, workers, rng_seed)
    if workers == 1:
        results = [local_search(i, x0) for i, x0 in enumerate(points)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(local_search, range(starts),
                                        list(points)))
    converged = sum(1 for r in results if r.converged)
    LOGGER.debug("%s of %s starts converged", converged, starts)
    return results
