import os

PROJECT_DIR = os.path.dirname(__file__)
for _ in range(2):
    PROJECT_DIR = os.path.dirname(PROJECT_DIR)
CONFIG_DIR = os.path.join(PROJECT_DIR, "configs")
SRC_DIR = os.path.join(PROJECT_DIR, "src")
TEST_DIR = os.path.join(SRC_DIR, "tests")
# Base dynamics
TORUS_ROTATION = "rotation"
SKEW_SHIFT = "skew"
BASE_KINDS = [TORUS_ROTATION, SKEW_SHIFT]
GOLDEN_ALPHA = (5**0.5 - 1)/2
# Matrix kinds
SL2R = "sl2r"
SU11 = "su11"
# Operator families
JACOBI = "jacobi"
CMV = "cmv"
FAMILY_KINDS = [JACOBI, CMV]
PRESET_FREE = "free"
PRESET_AMO = "amo"
PRESET_SKEW_AMO = "skew_amo"
PRESET_CMV_FREE = "cmv_free"
PRESET_CMV_CONSTANT = "cmv_constant"
PRESET_CMV_COS = "cmv_cos"
JACOBI_PRESETS = [PRESET_FREE, PRESET_AMO, PRESET_SKEW_AMO]
CMV_PRESETS = [PRESET_CMV_FREE, PRESET_CMV_CONSTANT, PRESET_CMV_COS]
PRESETS = JACOBI_PRESETS + CMV_PRESETS
# Truncation boundaries
BOUNDARY_DIRICHLET = "dirichlet"
BOUNDARY_UNITARY = "unitary"
BOUNDARIES = [BOUNDARY_DIRICHLET, BOUNDARY_UNITARY]
# Verdicts and regimes
UH = "UH"
NOT_UH = "NotUH"
INCONCLUSIVE = "Inconclusive"
CONVERGED = "Converged"
SUBCRITICAL = "Subcritical"
CRITICAL = "Critical"
SUPERCRITICAL = "Supercritical"
REGIMES = [SUBCRITICAL, CRITICAL, SUPERCRITICAL]
# Tasks
TASK_SPECTRUM = "spectrum"
TASK_IDS = "ids"
TASK_ROTATION = "rotation"
TASK_UH = "uh"
TASK_CLASSIFY = "classify"
TASK_GAPS = "gaps"
TASK_OPEN = "open"
TASK_PROJECT = "project"
TASK_TONGUES = "tongues"
TASKS = [TASK_SPECTRUM, TASK_IDS, TASK_ROTATION, TASK_UH, TASK_CLASSIFY,
        TASK_GAPS, TASK_OPEN, TASK_PROJECT, TASK_TONGUES]
REPRODUCE = "reproduce"
RUN = "run"
# Exit codes
EXIT_SUCCESS = 0
EXIT_MISMATCH = 1
EXIT_PRECONDITION = 2
EXIT_COMPUTATIONAL = 3
# Tolerances
DET_TOL = 1e-10
REAL_TOL = 1e-12
UNITARY_TOL = 1e-8
OVERFLOW_NORM = 1e150
# Default values
D_ALPHA = GOLDEN_ALPHA
D_LAMBDA = 0.5
D_N = 1000
D_MIN_N = 16
D_SAMPLES = 8
D_TRIG_GRID = 1024
D_FAMILY_GRID = 4096
D_N_ROT = 200000
D_BURN_IN = 1000
D_NUM_BLOCK = 20
D_CONVERGENCE_SIGMA = 5.0
D_N_LYAPUNOV = 5000
D_LYAPUNOV_SAMPLES = 8
D_UH_GRID = 64
D_UH_N_MAX = 1024
D_UH_MIN_EXPANSION = 1.0 + 1e-6
D_UH_ELLIPTIC_FRACTION = 0.2
D_EPSILONS = [0.01, 0.02, 0.05]
D_REGIME_SCALE = 10.0
D_K_MAX = 50
D_MIN_WIDTH = 0.02
D_EDGE_FRACTION = 0.125
D_EDGE_WEIGHT = 0.5
D_LABEL_TOL = 5e-3
D_TOL = 1e-6
D_RHO_TOL = 1e-8
D_SLOPE_TOL = 1e-3
D_FALLBACK_N = 1000
D_SMOOTHNESS_WINDOW = 3
D_NEWTON_STEPS = 100
D_NEWTON_DAMPING = 0.5
D_NBHD_RADIUS = 0.05
D_CASE1_RADIUS = 0.01
D_CASE1_SCAN = 201
D_SINGULAR_TOL = 1e-10
D_PROBE_GRID = 256
D_CONJUGACY_GRID = 4096
D_BUMP_SIZE = 1e-3
D_SEED = 0
D_E_MIN = -2.5
D_E_MAX = 2.5
D_E_POINTS = 101
D_WORKERS = 1
# Files
MANIFEST_FILE = "manifest.json"
CSV_EXT = ".csv"
JSON_EXT = ".json"
FLOAT_FORMAT = "%.15g"
HASH_PREFIX = "# config_hash: "
