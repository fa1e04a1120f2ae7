"""
Configuration module for SALHI
Loads environment variables from .env file and provides default configuration
"""

import os
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Probe defaults
SEED_PHOTONS = float(os.getenv("SALHI_SEED_PHOTONS", "1e6"))
DELTA = float(os.getenv("SALHI_DELTA", "1e-3"))  # modulation amplitude, rad
DARK_OFFSET = float(os.getenv("SALHI_DARK_OFFSET", "1e-3"))  # phi = pi + offset, rad

# Recombination gain search
G2_MIN = float(os.getenv("SALHI_G2_MIN", "1.0"))
G2_MAX = float(os.getenv("SALHI_G2_MAX", "10.0"))
GOLDEN_TOL = float(os.getenv("SALHI_GOLDEN_TOL", "1e-6"))
PRESCAN_POINTS = int(os.getenv("SALHI_PRESCAN_POINTS", "64"))

# Moments engine
FRINGE_POINTS = int(os.getenv("SALHI_FRINGE_POINTS", "720"))
FRINGE_TOL = float(os.getenv("SALHI_FRINGE_TOL", "1e-10"))
FD_STEP = float(os.getenv("SALHI_FD_STEP", "1e-5"))  # rad
FOCK_CUTOFF = int(os.getenv("SALHI_FOCK_CUTOFF", "24"))
FOCK_TAIL_TOL = float(os.getenv("SALHI_FOCK_TAIL_TOL", "1e-10"))

# Output
CSV_DIGITS = int(os.getenv("SALHI_CSV_DIGITS", "12"))
OUTPUT_DIR = os.getenv("SALHI_OUTPUT_DIR", "out")
LOG_LEVEL = os.getenv("SALHI_LOG_LEVEL", "INFO")

# Random grids used by the verification suite
RANDOM_SEED = int(os.getenv("SALHI_RANDOM_SEED", "20240601"))
