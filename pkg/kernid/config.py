from typing import Dict, Any, Optional, Tuple  # noqa

from kernid import constants
from kernid.lemmas import GridSpec, SamplingMode
from kernid.witness import WitnessSearchConfig


StrMap = Dict[str, Any]

INT_KEYS = ('seed', 'threads', 'starts', 'max_iters', 'samples',
            'samples_per_axis')
FLOAT_KEYS = ('div_tol', 'dedup_tol', 'residual_tol', 'distinct_tol',
              'log_bound_low', 'log_bound_high', 'min_gap')


class InvalidConfigError(ValueError):
    def __init__(self, name, value, reason):
        # type: (str, Any, str) -> None
        self.name = name
        self.value = value
        self.reason = reason
        super(InvalidConfigError, self).__init__(
            "Invalid config value %s=%r: %s" % (name, value, reason))


DEFAULT_PARAMS = {
    'div_tol': constants.DEFAULT_DIV_TOL,
    'dedup_tol': constants.DEFAULT_DEDUP_TOL,
    'seed': constants.DEFAULT_SEED,
    'threads': constants.DEFAULT_THREADS,
    'starts': constants.DEFAULT_STARTS,
    'max_iters': constants.DEFAULT_MAX_ITERS,
    'residual_tol': constants.DEFAULT_RESIDUAL_TOL,
    'distinct_tol': constants.DEFAULT_DISTINCT_TOL,
    'log_bound_low': constants.DEFAULT_LOG_BOUND_LOW,
    'log_bound_high': constants.DEFAULT_LOG_BOUND_HIGH,
    'samples': constants.DEFAULT_LEMMA_SAMPLES,
    'samples_per_axis': constants.DEFAULT_SAMPLES_PER_AXIS,
    'min_gap': constants.DEFAULT_MIN_GAP,
    'output_format': constants.DEFAULT_OUTPUT_FORMAT,
}  # type: StrMap


class Config(object):
    """Configuration for a kernid command.

    Values can come from command line flags, the environment, a config
    file, or built in defaults.  The precedence for looking up a value
    is:

        * User specified params (command line flags)
        * Environment variables (``KERNID_THREADS``)
        * The command's section of the config file
        * Top level keys of the config file
        * Default values

    The config file can set values for every command, or for a single
    command under the ``commands`` key.  Consider this config file::

        {
          "version": "1.0",
          "seed": 7,
          "starts": 32,
          "commands": {
            "witness": {
              "starts": 128
            }
          }
        }

    ``kernid witness`` runs 128 starts, ``kernid fit`` runs 32, and both
    use seed 7 unless ``--seed`` is given.

    """

    def __init__(self,
                 command=None,
                 user_provided_params=None,
                 environ_params=None,
                 config_from_disk=None,
                 default_params=None):
        # type: (Optional[str], StrMap, StrMap, StrMap, StrMap) -> None
        self.command = command
        #: Params that a user provided explicitly,
        #: typically via the command line.
        if user_provided_params is None:
            user_provided_params = {}
        self._user_provided_params = user_provided_params
        if environ_params is None:
            environ_params = {}
        self._environ_params = environ_params
        #: The parsed contents of the config file.
        if config_from_disk is None:
            config_from_disk = {}
        self._config_from_disk = config_from_disk
        if default_params is None:
            default_params = DEFAULT_PARAMS
        self._default_params = default_params

    @classmethod
    def create(cls, command=None, **kwargs):
        # type: (Optional[str], **Any) -> Config
        return cls(command=command, user_provided_params=kwargs.copy())

    def _chain_lookup(self, name, varies_per_command=True):
        # type: (str, bool) -> Any
        search_dicts = [self._user_provided_params, self._environ_params]
        if varies_per_command and self.command is not None:
            search_dicts.append(
                self._config_from_disk.get('commands', {}).get(
                    self.command, {}))
        search_dicts.extend([self._config_from_disk, self._default_params])
        for cfg_dict in search_dicts:
            if isinstance(cfg_dict, dict) and cfg_dict.get(name) is not None:
                return self._coerce(name, cfg_dict[name])

    def _coerce(self, name, value):
        # type: (str, Any) -> Any
        if name in INT_KEYS:
            if isinstance(value, bool):
                raise InvalidConfigError(name, value, 'must be an integer')
            try:
                number = int(value)
            except (TypeError, ValueError):
                raise InvalidConfigError(name, value, 'must be an integer')
            if number != value and str(number) != str(value).strip():
                raise InvalidConfigError(name, value, 'must be an integer')
            return number
        if name in FLOAT_KEYS:
            try:
                return float(value)
            except (TypeError, ValueError):
                raise InvalidConfigError(name, value, 'must be a number')
        return value

    @property
    def div_tol(self):
        # type: () -> float
        return self._nonnegative('div_tol')

    @property
    def dedup_tol(self):
        # type: () -> float
        return self._nonnegative('dedup_tol')

    @property
    def seed(self):
        # type: () -> int
        return self._chain_lookup('seed')

    @property
    def threads(self):
        # type: () -> int
        return self._nonnegative('threads')

    @property
    def starts(self):
        # type: () -> int
        return self._chain_lookup('starts')

    @property
    def max_iters(self):
        # type: () -> int
        return self._chain_lookup('max_iters')

    @property
    def residual_tol(self):
        # type: () -> float
        return self._chain_lookup('residual_tol')

    @property
    def distinct_tol(self):
        # type: () -> float
        return self._chain_lookup('distinct_tol')

    @property
    def log_bounds(self):
        # type: () -> Tuple[float, float]
        return (self._chain_lookup('log_bound_low'),
                self._chain_lookup('log_bound_high'))

    @property
    def samples(self):
        # type: () -> int
        return self._chain_lookup('samples')

    @property
    def samples_per_axis(self):
        # type: () -> int
        return self._chain_lookup('samples_per_axis')

    @property
    def min_gap(self):
        # type: () -> float
        return self._nonnegative('min_gap')

    @property
    def output_format(self):
        # type: () -> str
        value = self._chain_lookup('output_format')
        if value not in constants.OUTPUT_FORMATS:
            raise InvalidConfigError(
                'output_format', value,
                'must be one of %s' % ', '.join(constants.OUTPUT_FORMATS))
        return value

    def _nonnegative(self, name):
        # type: (str) -> Any
        value = self._chain_lookup(name)
        if value < 0:
            raise InvalidConfigError(name, value, 'must be nonnegative')
        return value

    def witness_search_config(self):
        # type: () -> WitnessSearchConfig
        params = dict(starts=self.starts, max_iters=self.max_iters,
                      residual_tol=self.residual_tol,
                      distinct_tol=self.distinct_tol,
                      param_bounds=self.log_bounds, rng_seed=self.seed,
                      max_workers=self.threads)
        try:
            return WitnessSearchConfig(**params)
        except ValueError as e:
            raise InvalidConfigError('search', None, str(e))

    def grid_spec(self, mode=SamplingMode.RANDOM):
        # type: (SamplingMode) -> GridSpec
        params = dict(samples_per_axis=self.samples_per_axis,
                      rng_seed=self.seed, samples=self.samples,
                      min_gap=self.min_gap)
        try:
            return GridSpec(mode=mode, **params)
        except ValueError as e:
            raise InvalidConfigError('samples', self.samples, str(e))
