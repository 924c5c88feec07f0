"""
Constants for volsel
All limits, tags, modes, exit codes and user-facing messages
"""

import math

# =============================================================================
# ARITHMETIC MODES
# =============================================================================

MODE_FLOAT = "float"
MODE_EXACT = "exact"

MODES = (MODE_FLOAT, MODE_EXACT)

# =============================================================================
# DEFAULT LIMITS (overridable through VolselSettings / VOLSEL_* env vars)
# =============================================================================

INCLUSION_EXCLUSION_LIMIT = 25  # 2^25 terms is the ceiling for an oracle
BRUTE_FORCE_BUDGET = 10_000_000  # subsets enumerated by volsel_brute
SUBSET_TABLE_LIMIT = 20  # largest set handled by the vectorized subset table
MONTE_CARLO_CONSTANT = 8.0  # c in ceil(c * n * ln(2/delta) / eps^2)
EPTAS_CELL_CAP = 20  # points per cell after pruning
EPTAS_EPS_DIVISOR = 5  # eps' = eps_user / 5
DP_CELL_BUDGET = 50_000_000  # sum of row lengths times k in combine_dp
REDUCTION_BUDGET = 1_000_000  # subsets of A examined by verify_reduction
MAX_HARDNESS_M = 50

# Exact int64 subset tables need every partial sum below this bound
INT64_SAFE_BOUND = 2**62

# =============================================================================
# ALGORITHM TAGS
# =============================================================================

ALGO_BRUTE = "brute"
ALGO_EXACT_2D = "exact2d"
ALGO_GREEDY = "greedy"
ALGO_EPTAS = "eptas"

ALGORITHMS = (ALGO_BRUTE, ALGO_EXACT_2D, ALGO_GREEDY, ALGO_EPTAS)

# =============================================================================
# HYPERVOLUME ENGINES
# =============================================================================

ENGINE_SWEEP = "sweep"
ENGINE_INCLUSION_EXCLUSION = "ie"
ENGINE_ESTIMATE = "estimate"

ENGINES = (ENGINE_SWEEP, ENGINE_INCLUSION_EXCLUSION, ENGINE_ESTIMATE)

# =============================================================================
# GUARANTEE KINDS
# =============================================================================

GUARANTEE_NONE = "none"
GUARANTEE_EXACT = "exact"
GUARANTEE_FACTOR = "factor"
GUARANTEE_EPTAS = "eptas"

GREEDY_FACTOR = 1.0 - 1.0 / math.e

# =============================================================================
# EPTAS CELL FALLBACK POLICIES
# =============================================================================

FALLBACK_ERROR = "error"
FALLBACK_GREEDY = "greedy"

FALLBACK_POLICIES = (FALLBACK_ERROR, FALLBACK_GREEDY)

# =============================================================================
# OUTPUT SCHEMAS
# =============================================================================

RUN_RECORD_SCHEMA_VERSION = 1
BENCH_SCHEMA_VERSION = 1
VERIFY_SCHEMA_VERSION = 1
HARDNESS_SIDECAR_SCHEMA_VERSION = 1

# =============================================================================
# EXIT CODES
# =============================================================================

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_PARSE = 4

# =============================================================================
# VERIFICATION SUITES
# =============================================================================

SUITE_BOUNDARY = "boundary"
SUITE_ROUNDING = "rounding"
SUITE_INDEPENDENCE = "independence"
SUITE_INDEPENDENCE_II = "independence2"
SUITE_ALL_P = "allp"
SUITE_REDUCTION = "reduction"

LEMMA_SUITES = (
    SUITE_BOUNDARY,
    SUITE_ROUNDING,
    SUITE_INDEPENDENCE,
    SUITE_INDEPENDENCE_II,
    SUITE_ALL_P,
    SUITE_REDUCTION,
)

# =============================================================================
# ERROR MESSAGES
# =============================================================================

ERR_DIMENSION_MISMATCH = "Dimension mismatch: expected {expected}, got {got}"
ERR_EMPTY_DIMENSION = "Point dimension must be at least 1"
ERR_NON_POSITIVE = "Point {index} has a non-positive coordinate: {coords}"
ERR_NOT_INTEGER = "Point {index} has a non-integer coordinate in exact mode: {coords}"
ERR_NOT_FINITE = "Point {index} has a non-finite coordinate: {coords}"
ERR_UNKNOWN_MODE = "Unknown arithmetic mode '{mode}', use one of: float, exact"
ERR_FLOAT_ONLY = "{operation} requires float mode"
ERR_K_RANGE = "k must satisfy 0 <= k <= {n}, got {k}"
ERR_EPS_RANGE = "eps must satisfy 0 < eps <= 1/2, got {eps}"
ERR_ESTIMATE_PARAMS = "Estimator needs eps > 0 and 0 < delta < 1, got eps={eps}, delta={delta}"
ERR_IE_LIMIT = "Inclusion-exclusion limited to {limit} points, got {n}"
ERR_BRUTE_BUDGET = "Brute force would enumerate {count} subsets, budget is {budget}"
ERR_DP_BUDGET = "Combine table needs {cost} entries, budget is {budget}"
ERR_CELL_CAP = "Grid cell holds {size} points after pruning, cap is {cap}"
ERR_NEEDS_2D = "exact2d requires dimension 2, got {d}"
ERR_HARDNESS_M = "m must satisfy 3 <= m <= {max_m}, got {m}"
ERR_EMPTY_GAMMA = "Triangular-grid vertex set must be nonempty"
ERR_ELL_RANGE = "ell must satisfy 1 <= ell <= |A| = {size}, got {ell}"
ERR_REDUCTION_BUDGET = "Reduction check needs {count} subsets, budget is {budget}"
ERR_EMBEDDING = "Embedding of the vertex set into T_{m} does not preserve adjacency"
ERR_PARSE_FIELDS = "Line {line}: expected {expected} values, got {got}"
ERR_PARSE_VALUE = "Line {line}: cannot parse '{value}'"
ERR_PARSE_EMPTY = "No points found in input"
ERR_READ_FILE = "Cannot read {path}: {reason}"
ERR_INDEX_RANGE = "Point index {index} out of range for {n} points"
ERR_PARSE_POSITIVE = "Line {line}: coordinates must be strictly positive, got {coords}"
ERR_FALLBACK = "Unknown cell fallback policy '{policy}', use one of: error, greedy"
ERR_SETTING = "Invalid setting {name}={value}: {reason}"
ERR_UNKNOWN_ALGO = "Unknown algorithm '{algo}', use one of: {choices}"
ERR_REFERENCE = "Point {index} is not strictly inside the reference point {reference}"

# =============================================================================
# LOG MESSAGES
# =============================================================================

MSG_SOLVER_DONE = "{algo}: n={n} d={d} k={k} value={value} ({elapsed:.1f} ms)"
MSG_CELL_FALLBACK = "Cell of {size} points exceeds cap {cap}, using greedy (guarantee void)"
MSG_EPTAS_SUMMARY = (
    "eptas: {offsets} offsets, {partitions} distinct partitions, "
    "{cells} cells solved, {fallbacks} fallback events"
)
