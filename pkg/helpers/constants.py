"""
Constants shared across the lab: verdicts, exit codes and numeric defaults.
"""

# Verdicts
PASS = "PASS"
FAIL = "FAIL"
UNDECIDED = "UNDECIDED"

VERDICT_ORDER = {PASS: 0, UNDECIDED: 1, FAIL: 2}

# CLI exit codes
EXIT_PASS = 0
EXIT_ERROR = 1
EXIT_FAIL = 2
EXIT_UNDECIDED = 3
EXIT_INTERRUPTED = 130

# Leibniz constants of a spectral triple seminorm
LEIBNIZ_OMEGA = 1.0
LEIBNIZ_OMEGA_PRIME = 0.0

# Numeric defaults (overridable through config/app.json and the environment)
DEFAULT_BUDGET = 1_000_000
DEFAULT_TOLERANCE = 1e-9
DEFAULT_SAMPLE_COUNT = 200
DEFAULT_WINDOW_FACTOR = 4.0
DEFAULT_SEED = 20240101
DEFAULT_EXACT_LP_MAX_POINTS = 12
DEFAULT_VERTEX_BUDGET = 4096
DEFAULT_DENSE_CUTOFF = 512
DEFAULT_MAX_ITERATIONS = 5000

# Significant digits for every number written to disk
OUTPUT_DIGITS = 17

# Family tags
FAMILY_SOLENOID = "solenoid"
FAMILY_BUNCE_DEDDENS = "bunce_deddens"
FAMILY_ROOTS_OF_UNITY = "roots_of_unity"
FAMILY_FINITE = "finite"

FAMILY_CHOICES = [FAMILY_SOLENOID, FAMILY_BUNCE_DEDDENS, FAMILY_ROOTS_OF_UNITY, FAMILY_FINITE]

NORM_CHOICES = ["max", "l1", "l2"]
CIRCLE_LENGTH_CHOICES = ["arc", "chordal"]
COMBINATOR_CHOICES = ["max", "sum", "euclidean"]
COCYCLE_CHOICES = ["trivial", "skew", "bunce_deddens"]
FUNCTION_PRESETS = ["resolvent", "gaussian", "zero"]
