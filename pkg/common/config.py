"""
Configuration layer.

Defaults for the library and the command-line front end are read from the
environment. A ``.env`` file in the working directory is loaded first, so
local runs can pin a seed or a tolerance without exporting variables.

If a variable is not set, the value below is used.
"""

import os

from dotenv import load_dotenv

load_dotenv()

# Seed for simulations when --seed is not given.
DEFAULT_SEED = int(os.getenv("AOI_DEFAULT_SEED", "20170625"))

# Relative tolerance for the truncated max-of-m moment sums.
DEFAULT_TOL = float(os.getenv("AOI_DEFAULT_TOL", "1e-10"))

# eta_0 used when evaluating beta_k and the optimized-age bound.
DEFAULT_ETA0 = float(os.getenv("AOI_DEFAULT_ETA0", "0.1"))

DEFAULT_HORIZON = int(os.getenv("AOI_DEFAULT_HORIZON", "100000"))
DEFAULT_REPS = int(os.getenv("AOI_DEFAULT_REPS", "16"))

LOG_LEVEL = os.getenv("AOI_LOG_LEVEL", "WARNING")

# |z| above this fails a formula-vs-simulation check.
VERIFY_Z_LIMIT = float(os.getenv("AOI_VERIFY_Z_LIMIT", "4.0"))

# Extension rounds before a certified sum or scan gives up.
MAX_TRUNCATION_ROUNDS = int(os.getenv("AOI_MAX_TRUNCATION_ROUNDS", "64"))
