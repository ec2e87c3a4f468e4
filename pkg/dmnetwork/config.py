"""Configurable parameters for the DM network simulator.

Every tolerance and run default lives here so an acceptance run can be tuned
from one place. CLI flags override the run defaults; tolerances are fixed.
"""

# Numerical tolerances
NORM_TOL = 1e-12             # state-vector normalisation
HERMITIAN_TOL = 1e-10        # Hermiticity / trace checks on operators
PSD_CLAMP = 1e-10            # eigenvalues in [-PSD_CLAMP, 0) are roundoff and clamped to 0
UNITARY_TOL = 1e-10          # ||U U^dagger - I||_max
PURITY_GATE = 1e-8           # global purity must be >= 1 - PURITY_GATE for C_min
SQRT_EIG_CLAMP = 1e-12       # sqrt(lambda_i) below this is treated as 0 in the concurrence
RANK_CUTOFF = 1e-14         # PSD eigenvalues at or below this (times max(1, lambda_max)) count as exact zeros
ZERO_PROBABILITY = 1e-14     # teleportation branches below this carry no output state

# Jacobi eigensolver
JACOBI_OFF_TOL = 1e-13       # off-diagonal Frobenius norm target
JACOBI_MAX_SWEEPS = 100

# Run defaults (every figure preset uses D = 0.2 over t in [0, 20])
DEFAULT_STRENGTH = 0.2
DEFAULT_T_MAX = 20.0
DEFAULT_DT = 0.05
DEFAULT_AXIS = "z"
DEFAULT_METHOD = "oracle"
DEFAULT_CORRECTIONS = True
DEFAULT_INPUT_ALPHA2 = 0.7   # |alpha|^2 of the teleported qubit, real amplitudes
DEFAULT_BELL_PAIRS = 2
DEFAULT_SEED = 20240601

# Output
CSV_FLOAT_FORMAT = "%.12g"
GRID_DECIMALS = 10           # t values are rounded so they print exactly
UNITS_NOTE = "dimensionless time, hbar = 1, D in inverse time units"
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
LOG_DATEFMT = "%Y-%m-%d %H:%M:%S"
