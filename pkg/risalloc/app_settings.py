"""App Settings"""

# Django
from django.conf import settings

# =============================================================================
# Campaign Defaults
# =============================================================================

# Monte Carlo trials per sweep point when the config file does not say otherwise
RIS_SIM_DEFAULT_TRIALS = getattr(settings, "RIS_SIM_DEFAULT_TRIALS", 1000)

# Base seed; trial i draws from seed ^ i
RIS_SIM_DEFAULT_SEED = getattr(settings, "RIS_SIM_DEFAULT_SEED", 0)

# Geometry re-draws allowed per trial before it is declared failed
RIS_SIM_MAX_REDRAWS = getattr(settings, "RIS_SIM_MAX_REDRAWS", 10)

# =============================================================================
# Alternating Optimization
# =============================================================================

# Hard cap on JBPDA iterations
RIS_SIM_MAX_ITERATIONS = getattr(settings, "RIS_SIM_MAX_ITERATIONS", 100)

# Relative sum-rate change that counts as converged
RIS_SIM_RATE_TOLERANCE = getattr(settings, "RIS_SIM_RATE_TOLERANCE", 1e-4)

# Exhaustive search is refused above min(K, L) = this value (and above this many factorial candidates)
RIS_SIM_ES_MAX_SIZE = getattr(settings, "RIS_SIM_ES_MAX_SIZE", 9)

# =============================================================================
# Linear Algebra
# =============================================================================

# G is treated as rank deficient when sigma_min^2 <= rtol * sigma_max^2
RIS_SIM_PINV_RTOL = getattr(settings, "RIS_SIM_PINV_RTOL", 1e-10)

# Gram condition above which the Cholesky path gives way to an SVD
RIS_SIM_SVD_FALLBACK_CONDITION = getattr(settings, "RIS_SIM_SVD_FALLBACK_CONDITION", 1e10)

# =============================================================================
# Dispatch & Output
# =============================================================================

# Fan trials out to Celery workers instead of running them in-process
RIS_SIM_USE_CELERY = getattr(settings, "RIS_SIM_USE_CELERY", False)

# Seconds to wait for a dispatched sweep point to come back
RIS_SIM_CELERY_TIMEOUT = getattr(settings, "RIS_SIM_CELERY_TIMEOUT", 3600)

# Default directory for CSV and manifest output
RIS_SIM_OUTPUT_DIR = getattr(settings, "RIS_SIM_OUTPUT_DIR", "ris_sim_output")
