"""Kernel hyperparameters, pointwise evaluation and Gram matrices.

Two stationary kernels are supported::

    rbf(r)          = sigma**2 * exp(-r**2 / ell**2)
    periodic(delta) = tau**2 * exp(-2 * sin(pi * delta / p)**2 / s**2)

and two mixtures of them, RBF + periodic (one-dimensional inputs only)
and RBF + RBF.  A Gram matrix is always assembled from the upper
triangle of lags and mirrored, so it is symmetric bit for bit.

"""
import enum
import logging
import math

import numpy as np
from attr import attrs, attrib
from typing import Any, List, Optional, Sequence, Tuple, Union  # noqa

from kernid.constants import PSD_TOL
from kernid.design import Design  # noqa


LOGGER = logging.getLogger(__name__)

Variant = Union['RbfPeriodic', 'TwoRbf']


class InvalidParameterError(ValueError):
    def __init__(self, name, value, reason='must be a positive real'):
        # type: (str, Any, str) -> None
        self.name = name
        self.value = value
        self.reason = reason
        super(InvalidParameterError, self).__init__(
            "Invalid kernel parameter %s=%r: %s" % (name, value, reason))


class DimensionMismatch(ValueError):
    pass


class KernelFamily(enum.Enum):
    RBF_PERIODIC = 'rbf_periodic'
    TWO_RBF = 'two_rbf'


def _positive(name, value):
    # type: (str, Any) -> None
    try:
        ok = math.isfinite(value) and value > 0
    except TypeError:
        ok = False
    if not ok:
        raise InvalidParameterError(name, value)


@attrs(frozen=True)
class RbfParams(object):
    sigma = attrib()  # type: float
    ell = attrib()    # type: float

    def __attrs_post_init__(self):
        # type: () -> None
        _positive('sigma', self.sigma)
        _positive('ell', self.ell)


@attrs(frozen=True)
class PeriodicParams(object):
    tau = attrib()  # type: float
    s = attrib()    # type: float
    p = attrib()    # type: float

    def __attrs_post_init__(self):
        # type: () -> None
        _positive('tau', self.tau)
        _positive('s', self.s)
        _positive('p', self.p)


@attrs(frozen=True)
class RbfPeriodic(object):
    rbf = attrib()       # type: RbfParams
    periodic = attrib()  # type: PeriodicParams

    family = KernelFamily.RBF_PERIODIC
    param_names = ('sigma', 'ell', 'tau', 's')

    @property
    def period(self):
        # type: () -> float
        return self.periodic.p

    def to_vector(self):
        # type: () -> np.ndarray
        return np.array([self.rbf.sigma, self.rbf.ell,
                         self.periodic.tau, self.periodic.s])

    @classmethod
    def from_vector(cls, values, p):
        # type: (Sequence[float], float) -> RbfPeriodic
        sigma, ell, tau, s = [float(v) for v in values]
        return cls(rbf=RbfParams(sigma=sigma, ell=ell),
                   periodic=PeriodicParams(tau=tau, s=s, p=p))


@attrs(frozen=True)
class TwoRbf(object):
    first = attrib()   # type: RbfParams
    second = attrib()  # type: RbfParams

    family = KernelFamily.TWO_RBF
    param_names = ('sigma1', 'ell1', 'sigma2', 'ell2')

    def __attrs_post_init__(self):
        # type: () -> None
        if not self.first.ell < self.second.ell:
            raise InvalidParameterError(
                'ell1', self.first.ell,
                'must be strictly smaller than ell2=%r' % self.second.ell)

    @property
    def period(self):
        # type: () -> Optional[float]
        return None

    @classmethod
    def canonical(cls, a, b):
        # type: (RbfParams, RbfParams) -> TwoRbf
        if b.ell < a.ell:
            a, b = b, a
        return cls(first=a, second=b)

    def to_vector(self):
        # type: () -> np.ndarray
        return np.array([self.first.sigma, self.first.ell,
                         self.second.sigma, self.second.ell])

    @classmethod
    def from_vector(cls, values, p=None):
        # type: (Sequence[float], Optional[float]) -> TwoRbf
        sigma1, ell1, sigma2, ell2 = [float(v) for v in values]
        return cls.canonical(RbfParams(sigma=sigma1, ell=ell1),
                             RbfParams(sigma=sigma2, ell=ell2))


@attrs(frozen=True)
class MixedKernelSpec(object):
    variant = attrib()                # type: Variant
    noise_var = attrib(default=0.0)   # type: float

    def __attrs_post_init__(self):
        # type: () -> None
        if not (math.isfinite(self.noise_var) and self.noise_var >= 0):
            raise InvalidParameterError('noise_var', self.noise_var,
                                        'must be a nonnegative real')

    @property
    def family(self):
        # type: () -> KernelFamily
        return self.variant.family

    @property
    def period(self):
        # type: () -> Optional[float]
        return self.variant.period

    def to_vector(self):
        # type: () -> np.ndarray
        return self.variant.to_vector()

    @classmethod
    def from_vector(cls, family, values, p=None, noise_var=0.0):
        # type: (KernelFamily, Sequence[float], Optional[float], float) -> MixedKernelSpec
        variant_cls = VARIANTS[family]
        if family is KernelFamily.RBF_PERIODIC and p is None:
            raise InvalidParameterError('p', p)
        return cls(variant=variant_cls.from_vector(values, p),
                   noise_var=noise_var)


VARIANTS = {
    KernelFamily.RBF_PERIODIC: RbfPeriodic,
    KernelFamily.TWO_RBF: TwoRbf,
}


def _read_only(entries):
    # type: (Any) -> np.ndarray
    array = np.array(entries, dtype=float)
    array.setflags(write=False)
    return array


@attrs(frozen=True)
class GramMatrix(object):
    entries = attrib(converter=_read_only, eq=False)  # type: np.ndarray

    @property
    def n(self):
        # type: () -> int
        return self.entries.shape[0]

    @property
    def min_eigenvalue(self):
        # type: () -> float
        return float(np.linalg.eigvalsh(self.entries)[0])

    def is_psd(self, tol=PSD_TOL):
        # type: (float) -> bool
        eigenvalues = np.linalg.eigvalsh(self.entries)
        return bool(eigenvalues[0] >= -tol * max(eigenvalues[-1], 0.0))

    def to_list(self):
        # type: () -> List[List[float]]
        return self.entries.tolist()


def rbf_values(sigma, ell, r):
    # type: (float, float, Any) -> Any
    return sigma ** 2 * np.exp(-np.square(r / ell))


def periodic_values(tau, s, p, delta):
    # type: (float, float, float, Any) -> Any
    return tau ** 2 * np.exp(
        -2.0 * np.square(np.sin(np.pi * delta / p)) / s ** 2)


def eval_rbf(params, r):
    # type: (RbfParams, float) -> float
    if r < 0:
        raise ValueError("Distances must be nonnegative: %r" % r)
    return float(rbf_values(params.sigma, params.ell, r))


def eval_periodic(params, delta):
    # type: (PeriodicParams, float) -> float
    return float(periodic_values(params.tau, params.s, params.p, delta))


def _as_point(x):
    # type: (Any) -> np.ndarray
    return np.atleast_1d(np.asarray(x, dtype=float))


def eval_mixed(spec, x, y):
    # type: (MixedKernelSpec, Any, Any) -> float
    x, y = _as_point(x), _as_point(y)
    if x.shape != y.shape:
        raise DimensionMismatch(
            "Points have different dimensions: %s and %s"
            % (x.size, y.size))
    variant = spec.variant
    if variant.family is KernelFamily.RBF_PERIODIC and x.size != 1:
        raise DimensionMismatch(
            "The RBF-periodic kernel only accepts 1-dimensional points, "
            "got %s dimensions" % x.size)
    diff = x - y
    r = float(np.sqrt(np.sum(np.square(diff))))
    return float(_pair_values(variant, r, diff[0]))


def _pair_values(variant, r, delta):
    # type: (Variant, Any, Any) -> Any
    if variant.family is KernelFamily.RBF_PERIODIC:
        rbf, per = variant.rbf, variant.periodic
        return (rbf_values(rbf.sigma, rbf.ell, r) +
                periodic_values(per.tau, per.s, per.p, delta))
    return (rbf_values(variant.first.sigma, variant.first.ell, r) +
            rbf_values(variant.second.sigma, variant.second.ell, r))


@attrs(frozen=True)
class Lags(object):
    """Upper-triangle lags of a design, diagonal included.

    ``offsets`` holds the signed differences ``x_j - x_i`` and is only set
    for one-dimensional designs.

    """
    n = attrib()          # type: int
    rows = attrib(eq=False)       # type: np.ndarray
    cols = attrib(eq=False)       # type: np.ndarray
    distances = attrib(eq=False)  # type: np.ndarray
    offsets = attrib(eq=False)    # type: Optional[np.ndarray]

    def assemble(self, values):
        # type: (np.ndarray) -> np.ndarray
        entries = np.empty((self.n, self.n))
        entries[self.rows, self.cols] = values
        entries[self.cols, self.rows] = values
        return entries


def design_lags(design, family=None):
    # type: (Design, Optional[KernelFamily]) -> Lags
    if family is KernelFamily.RBF_PERIODIC and design.dim != 1:
        raise DimensionMismatch(
            "The RBF-periodic kernel needs a 1-dimensional design, "
            "got dim=%s" % design.dim)
    points = design.array
    rows, cols = np.triu_indices(design.n)
    diff = points[cols] - points[rows]
    distances = np.sqrt(np.sum(np.square(diff), axis=1))
    offsets = diff[:, 0] if design.dim == 1 else None
    return Lags(n=design.n, rows=rows, cols=cols, distances=distances,
                offsets=offsets)


def gram_from_vector(family, values, lags, p=None):
    # type: (KernelFamily, Sequence[float], Lags, Optional[float]) -> np.ndarray
    """Assemble a mixed Gram matrix from raw parameter values.

    No validation happens here; optimizers call this in their inner loop
    with whatever the log-space point maps to.

    """
    a, b, c, d = values
    if family is KernelFamily.RBF_PERIODIC:
        triangle = (rbf_values(a, b, lags.distances) +
                    periodic_values(c, d, p, lags.offsets))
    else:
        triangle = (rbf_values(a, b, lags.distances) +
                    rbf_values(c, d, lags.distances))
    return lags.assemble(triangle)


def unit_component_grams(family, scales, lags, p=None):
    # type: (KernelFamily, Sequence[float], Lags, Optional[float]) -> List[np.ndarray]
    """Unit-amplitude Gram matrices of both components.

    ``scales`` is (ell, s) for RBF + periodic and (ell1, ell2) for RBF +
    RBF.  The mixed Gram is linear in the squared amplitudes of these.

    """
    first, second = scales
    if family is KernelFamily.RBF_PERIODIC:
        return [lags.assemble(rbf_values(1.0, first, lags.distances)),
                lags.assemble(
                    periodic_values(1.0, second, p, lags.offsets))]
    return [lags.assemble(rbf_values(1.0, first, lags.distances)),
            lags.assemble(rbf_values(1.0, second, lags.distances))]


def build_gram(spec, design, include_noise=False):
    # type: (MixedKernelSpec, Design, bool) -> GramMatrix
    lags = design_lags(design, spec.family)
    entries = gram_from_vector(spec.family, spec.to_vector(), lags,
                               spec.period)
    if include_noise and spec.noise_var:
        entries[np.diag_indices(lags.n)] += spec.noise_var
    return GramMatrix(entries=entries)


def rbf_gram(params, design):
    # type: (RbfParams, Design) -> GramMatrix
    lags = design_lags(design)
    return GramMatrix(entries=lags.assemble(
        rbf_values(params.sigma, params.ell, lags.distances)))


def periodic_gram(params, design):
    # type: (PeriodicParams, Design) -> GramMatrix
    lags = design_lags(design, KernelFamily.RBF_PERIODIC)
    return GramMatrix(entries=lags.assemble(
        periodic_values(params.tau, params.s, params.p, lags.offsets)))
