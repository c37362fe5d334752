from decouple import config


THREADS = config('ECHO_IMAGER_THREADS', default=1, cast=int)
LOG_LEVEL = config('ECHO_IMAGER_LOG_LEVEL', default='INFO')
OUTPUT_DIR = config('ECHO_IMAGER_OUTPUT_DIR', default='results')

FOCK_CUTOFF = config('ECHO_IMAGER_FOCK_CUTOFF', default=8, cast=int)
REPLICATIONS = config('ECHO_IMAGER_REPLICATIONS', default=200, cast=int)
RNG_ALGORITHM = config('ECHO_IMAGER_RNG', default='PCG64')

SCHEMA_VERSION = 1

SYMPLECTIC_TOL = 1e-10
PHYSICALITY_TOL = 1e-9
SYMMETRY_TOL = 1e-12
KRAUS_TOL = 1e-8
EIGEN_CLIP_TOL = 1e-10
PROBABILITY_FLOOR = 1e-15
PROBABILITY_SUM_TOL = 1e-10
PERTURBATIVE_WARN = 0.1
BRIGHTNESS_WARN = 0.5

GAUSS_HERMITE_NODES = 200
CSV_SIGNIFICANT_DIGITS = 17
