"""
Workbench constants for the lacunary rectangle campaigns
Default sequence, tolerances and acceptance budgets
"""

# Default lacunary sequence (geometric generator)
DEFAULT_THETA0 = 0.5
DEFAULT_SIGMA = 0.6
DEFAULT_LAMBDA = 0.5
DEFAULT_MU = 0.8

# Campaign scale
DEFAULT_K_MAX = 10
K_CAP = 40  # beyond this lambda^-k exceeds 1e12
DEFAULT_PREFIX = 30
DEFAULT_SEED = 20240601

# Tolerances
GEOMETRY_TOL = 1e-12  # relative to the smaller area
SLACK_TOL = 1e-9
DISK_AREA_TOL = 1e-9

# Sampling
DEFAULT_MC_SAMPLES = 1_000_000
MIN_MC_SAMPLES = 10_000
MC_CHUNK = 1_000_000
DEFAULT_CERTIFICATION_POINTS = 1_000
DEFAULT_PIXEL_RESOLUTION = 2048

# Translation search (supremum discretization)
DEFAULT_STEP_FRACTION = 1.0 / 8.0
DEFAULT_WINDOW_MULTIPLIER = 1.0
MAX_STEPS_PER_AXIS = 256
GRID_DIAGNOSTIC_POINTS = 16

# Orlicz table validation grid
ORLICZ_GRID_POINTS = 256

# Acceptance budgets
WEAK11_BUDGET = 10.0
DIVERGENCE_GROWTH_FACTOR = 5.0
DIVERGENCE_GROWTH_MIN_K = 40
DIVERGENCE_GAIN_K = 10  # gain r_10 - r_2 >= 4 log(1/lambda)
REMARK_SAFETY_FACTOR = 1.01
COINCIDENT_ANGLE_TOL = 1e-12

# Default alpha grid exponents (alpha = 2**e * peak)
DEFAULT_ALPHA_EXPONENTS = tuple(range(-6, 7))
ROTATED_ALPHA_EXPONENTS = tuple(range(-20, 1))

# Default campaign file names
REPORT_FILE = "report.json"
FIGURE_FILES = ("fig1.svg", "fig2.svg")
CSV_FLOAT_FORMAT = "%.17g"

# Suites accepted by `verify`
SUITES = ("lemma1", "lemma2", "prop2", "claim-mphi", "divergence", "remark", "weak11")

