"""Constants for grids, windows, serialization and experiments"""
import numpy as np

# Exponents
INF = np.inf

# Grid defaults (desk scale)
DEFAULT_GRIDS = {
    1: {'n': 512, 'l': 32.0},
    2: {'n': 128, 'l': 16.0},
}
MIN_SAMPLES = 4
SUPPORTED_DIMENSIONS = (1, 2)

# Domain tags
SPATIAL = 'spatial'
FREQUENCY = 'frequency'

# Binary GridFunction format
GRID_MAGIC = b'TFWG'
GRID_FORMAT_VERSION = 1
GRID_HEADER_FORMAT = '<4sIIId'

# Windows
WINDOW_GAUSSIAN = 'gaussian'
WINDOW_BUMP = 'bump'
DEFAULT_BUMP_RADIUS = 1.0

# Lattice x-strides per dimension; xi-stride is always 1
DEFAULT_X_STRIDE = {1: 1, 2: 8}

# Cutoff radii: chi = 1 on |xi| <= inner, 0 on |xi| >= outer
CUTOFF_INNER = 1.0
CUTOFF_OUTER = 2.0

# Local grid used to evaluate sigma * T_x g in symbol norms
SYMBOL_LOCAL_N = 256
SYMBOL_LOCAL_L = 8.0
SYMBOL_SCAN_FRACTION = 0.25

# Symbol kinds
SYMBOL_SINPOW = 'sinpow'
SYMBOL_COS = 'cos'
SYMBOL_WAVE_COS = 'wavecos'
SYMBOL_WAVE_SINC = 'wavesinc'
SYMBOL_KG_COS = 'kgcos'
SYMBOL_KG_SINC = 'kgsinc'
SYMBOL_ONE = 'one'
SYMBOL_CUSTOM = 'custom'

# Kernel norms taper the symbol at this fraction of the band edge
KERNEL_TAPER_FRACTION = 0.75

# Sampler
GABOR_ATOMS = 10
REFINEMENT_ROUNDS = 3
REFINEMENT_ATOMS = 2
REFINEMENT_SCALE = 0.25
INNER_FRACTION = 0.5

# Solver
MAX_BISECTIONS = 6
DEFAULT_SERIES_DEGREE = 9
BLOWUP_THRESHOLD = 1e6
AIA_GROWTH_FACTOR = 2.0

# Calibration
SAFETY_FACTOR = 1.25
STREAM_VERIFY = 0
STREAM_CALIBRATE = 1
STREAM_DATA = 2

# Reports
CSV_COLUMNS = ['trial', 'seed', 'lhs', 'rhs', 'ratio']
SUMMARY_FILE = 'summary.json'
TRIALS_FILE = 'trials.csv'
MANIFEST_FILE = 'manifest.json'
