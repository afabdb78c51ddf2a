"""nilsolv Configuration - Environment and settings management."""

import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Paths
BASE_DIR = Path(__file__).parent

# Logging
LOG_LEVEL = os.getenv("NILSOLV_LOG_LEVEL", "WARNING")

# Resource ceilings
MAX_DIM = int(os.getenv("NILSOLV_MAX_DIM", "2048"))
MAX_P_TWO_GENERATORS = int(os.getenv("NILSOLV_MAX_P_TWO_GENERATORS", "14"))
MAX_P = int(os.getenv("NILSOLV_MAX_P", "7"))
MAX_SCREEN_P = int(os.getenv("NILSOLV_MAX_SCREEN_P", "14"))

# Parallelism for grid fan-out and flow restarts
WORKERS = int(os.getenv("NILSOLV_WORKERS", "4"))

# Residual flow defaults
FLOW_RESTARTS = int(os.getenv("NILSOLV_FLOW_RESTARTS", "20"))
FLOW_MAX_ITER = int(os.getenv("NILSOLV_FLOW_MAX_ITER", "200"))
FLOW_TOL = float(os.getenv("NILSOLV_FLOW_TOL", "1e-10"))
FLOW_SEED = int(os.getenv("NILSOLV_FLOW_SEED", "0"))
FLOW_FLOOR = float(os.getenv("NILSOLV_FLOW_FLOOR", "1e-8"))
