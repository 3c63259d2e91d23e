"""Configuration management for the comb-map approximation pipeline."""

import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


def _env_float(name: str, default: float) -> float:
    value = os.getenv(name)
    return float(value) if value not in (None, "") else default


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name)
    return int(value) if value not in (None, "") else default


def _env_levels(name: str, default: tuple[int, ...]) -> tuple[int, ...]:
    value = os.getenv(name)
    if value in (None, ""):
        return default
    return tuple(int(item) for item in value.replace("[", "").replace("]", "").split(",") if item.strip())


# Project paths
PROJECT_ROOT = Path(__file__).parent.parent
OUTPUT_DIR = Path(os.getenv("COMBMAP_OUTPUT_DIR", str(PROJECT_ROOT / "output")))

# Continuation schedule
DEFAULT_SCHEDULE = _env_levels("COMBMAP_SCHEDULE", (8, 16, 32, 64, 128))
DEFAULT_TOL_B0 = _env_float("COMBMAP_TOL_B0", 1e-3)
EXTRAPOLATE = os.getenv("COMBMAP_EXTRAPOLATE", "0") not in ("0", "false", "False")
CONTINUATION_RATIO = 1.5

# Level solver tolerances
CURVE_TOL = 1e-8
NORMALIZATION_TOL = 1e-10
TIP_ARGMIN_TOL = 1e-12
STATIONARITY_TOL = 1e-9
NEWTON_MAX_ITER = 60
LINE_SEARCH_MIN_STEP = 1e-10
BOUNDARY_FRACTION = 0.9
ARMIJO_SLOPE = 1e-4
FOLD_BOUNDS = (0.01, 0.99)

# Degeneracy bounds on B0 ("B0 -> 0" or "B0 -> inf" trends)
B0_MIN = 1e-6
B0_MAX = 40.0

# Solver strategies tried in order by the retry wrapper
SOLVER_STRATEGIES = ("newton", "sweep")
SWEEP_PASSES = 3

# Boundary evaluation
ATOM_EXCLUSION = 1e-14
QUAD_ABS_TOL = 1e-11
QUAD_REL_TOL = 1e-12
QUAD_LIMIT = 400
QUAD_NEAR_ATOM = 0.25

# Extremal function analysis
DEFAULT_GRID = _env_int("COMBMAP_GRID", 10_000)
EXTRACTION_TOL = 1e-6
EXTRACTION_MAX_COND = 1e12
VERIFICATION_POINTS = 1000

# Remez oracle
REMEZ_TOL = 1e-13
REMEZ_MAX_ITER = 60
REMEZ_MAX_COND = 1e14
REMEZ_LEVEL_TOL = 1e-12

# Comparison
COMPARE_THRESHOLD = _env_float("COMBMAP_COMPARE_THRESHOLD", 2.5e-2)

# CSV traces
CURVE_SAMPLES = 401
BOUNDARY_SAMPLES = 801
CSV_DIGITS = 17

# Logging Configuration
LOG_LEVEL = os.getenv("COMBMAP_LOG_LEVEL", "INFO")
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
