"""
Application settings and configuration.
Supports environment variables so budgets can be tuned without code changes.
"""

import os
import sys
from pathlib import Path
from typing import Optional

# Exact bounds such as 2^21875 are carried as decimal strings
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)

# Base paths
BASE_DIR = Path(__file__).parent.parent
CONFIG_DIR = BASE_DIR / "config"

# App metadata
VERSION = "1.0.0"
APP_NAME = "arithdyn"
SCHEMA_VERSION = "arithdyn/1"

# Factorization budget
FACTOR_TRIAL_LIMIT = int(os.getenv("FACTOR_TRIAL_LIMIT", str(10**6)))
FACTOR_RHO_MAX_STEPS = int(os.getenv("FACTOR_RHO_MAX_STEPS", "200000"))
FACTOR_RHO_RETRIES = int(os.getenv("FACTOR_RHO_RETRIES", "8"))
FACTOR_SEED = int(os.getenv("FACTOR_SEED", "1234"))

# Dynamics
ITERATE_DEGREE_CAP = int(os.getenv("ITERATE_DEGREE_CAP", "4096"))
DEFAULT_PERIOD_CAP = int(os.getenv("DEFAULT_PERIOD_CAP", "4"))

# Bounds
INTERVAL_PRECISION_BITS = int(os.getenv("INTERVAL_PRECISION_BITS", "128"))
DEFAULT_BOUND_FAMILY = os.getenv("DEFAULT_BOUND_FAMILY", "evertse")

# Display
DISPLAY_MAX_DIGITS = int(os.getenv("DISPLAY_MAX_DIGITS", "40"))

# Enumeration cache (disabled unless a directory is given)
_cache_dir = os.getenv("CACHE_DIR")
CACHE_DIR: Optional[Path] = Path(_cache_dir) if _cache_dir else None
CACHE_MAX_AGE_HOURS = float(os.getenv("CACHE_MAX_AGE_HOURS", str(24 * 30)))

# Logging
LOG_LEVEL = os.getenv("LOG_LEVEL", "WARNING")
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

# Table columns for the CLI reports
PERIODIC_COLUMNS = ['point', 'period']
BOUND_COLUMNS = ['bound', 'kind', 'value']
CENSUS_COLUMNS = ['residue', 'image', 'periodic']
