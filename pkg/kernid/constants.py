import os
import math


# Tolerances used when reasoning about distance sets.
DEFAULT_DIV_TOL = 1e-9
DEFAULT_DEDUP_TOL = 1e-9

# Multi-start search defaults (witness search and likelihood fits).
DEFAULT_STARTS = 64
DEFAULT_MAX_ITERS = 2000
DEFAULT_RESIDUAL_TOL = 1e-8
DEFAULT_DISTINCT_TOL = 1e-3
DEFAULT_LOG_BOUND_LOW = -5.0
DEFAULT_LOG_BOUND_HIGH = 5.0
DEFAULT_SEED = 0
# 0 means "use os.cpu_count()".
DEFAULT_THREADS = 0

# Numeric property checks.
DEFAULT_LEMMA_SAMPLES = 10000
DEFAULT_SAMPLES_PER_AXIS = 10
DEFAULT_MIN_GAP = 0.05
DETERMINANT_TOL = 1e-12
RANK_TOL = 1e-10
IDENTITY_TOL = 1e-12

# Gram matrices.
PSD_TOL = 1e-8
JITTER_SCALES = (1e-10, 1e-8, 1e-6)

OUTPUT_FORMATS = ('text', 'json')
DEFAULT_OUTPUT_FORMAT = 'text'

CONFIG_VERSION = '1.0'
CONFIG_DIR = '.kernid'
CONFIG_FILENAME = 'config.json'
DEFAULT_CONFIG_FILE = os.path.join(CONFIG_DIR, CONFIG_FILENAME)
THREADS_ENV_VAR = 'KERNID_THREADS'

EXIT_USAGE = 2
EXIT_NEGATIVE = 3
EXIT_DIMENSION = 4
EXIT_VERIFICATION = 5


# Reference counterexamples.  Each entry lists the design, the two
# parameterizations that share a Gram matrix, and the matrix itself as
# printed (seven decimals for the off-grid periodic example).
ALIGNED_PERIOD = 7.0
ALIGNED_DESIGN = (1.0, 8.0, 15.0, 22.0, 29.0, 36.0)
ALIGNED_FIRST = {'sigma': 1.0, 'ell': 1.0, 'tau': 1.0, 's': 1.0}
ALIGNED_SECOND = {'sigma': 1.0, 'ell': 1.0, 'tau': 1.0, 's': 2.0}
ALIGNED_GRAM = tuple(
    tuple(2.0 if i == j else 1.0 for j in range(6)) for i in range(6)
)
ALIGNED_TOL = 1e-12

OFFGRID_PERIOD = 4.0
OFFGRID_DESIGN = (0.0, 1.0, 2.0, 3.0)
OFFGRID_FIRST = {'sigma': 1.5720871, 'ell': 1.0045602,
                 'tau': 1.4284245, 's': 1.2011224}
OFFGRID_SECOND = {'sigma': 1.2295748, 'ell': 1.4468554,
                  'tau': 1.7320508, 's': 0.9540646}
OFFGRID_LAGS = (4.5118543, 1.9376702, 0.5570357, 1.0205292)
OFFGRID_GRAM = tuple(
    tuple(OFFGRID_LAGS[abs(i - j)] for j in range(4)) for i in range(4)
)
OFFGRID_COEFFICIENTS = (1.0, -3.0, 6.0, -2.0)
OFFGRID_TOL = 5e-7
OFFGRID_CROSS_TOL = 1e-6

_ROOT2 = math.sqrt(2.0)
OCTAHEDRON_DESIGN = (
    (1.0, 1.0, 0.0),
    (1.0, -1.0, 0.0),
    (-1.0, 1.0, 0.0),
    (-1.0, -1.0, 0.0),
    (0.0, 0.0, _ROOT2),
    (0.0, 0.0, -_ROOT2),
)
# Length-scales are twice the commonly quoted 1/sqrt(ln k) values: on
# these points the printed matrix needs exp(-r**2/l**2) = k**(-r**2/4).
OCTAHEDRON_FIRST = (
    {'sigma': 24.0, 'ell': 2.0 / math.sqrt(math.log(4.0))},
    {'sigma': 32.0 * math.sqrt(15.0), 'ell': 2.0 / math.sqrt(math.log(16.0))},
)
OCTAHEDRON_SECOND = (
    {'sigma': 81.0, 'ell': 2.0 / math.sqrt(math.log(9.0))},
    {'sigma': 25.0 * math.sqrt(15.0), 'ell': 2.0 / math.sqrt(math.log(25.0))},
)
_D, _E, _F = 15936.0, 1104.0, 96.0
OCTAHEDRON_GRAM = (
    (_D, _E, _E, _F, _E, _E),
    (_E, _D, _F, _E, _E, _E),
    (_E, _F, _D, _E, _E, _E),
    (_F, _E, _E, _D, _E, _E),
    (_E, _E, _E, _E, _D, _F),
    (_E, _E, _E, _E, _F, _D),
)
OCTAHEDRON_TOL = 1e-9
