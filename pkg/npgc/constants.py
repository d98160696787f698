import os

LOGDIR = os.environ.get("NPGC_LOGDIR")
WORKERS_ENV = "NPGC_WORKERS"
ERROR_PREFIX = "npgc-error"

# Bandwidth h = c * n^(-1/BANDWIDTH_RATE)
BANDWIDTH_RATE = 3.5
SILVERMAN_FACTOR = 1.06

# Simulation design
DEFAULT_BURN_IN = 500
DESK_REPS = 500
DESK_BOOTSTRAP = 200
FULL_REPS = 2000
FULL_BOOTSTRAP = 1000
DEFAULT_ALPHA = 0.05

REPORTED_QUANTILES = (0.90, 0.95, 0.99)

# Bootstrap replications evaluated per matrix product
BOOTSTRAP_CHUNK = 256
