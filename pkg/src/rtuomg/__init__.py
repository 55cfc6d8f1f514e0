"""Record-transmuted unit omega (RTUOMG) distribution and its competitors on (0, 1)."""

from .distributions import (
    Cug,
    Cul,
    RtuomgParams,
    Rtuomg,
    Uomg,
    Uw,
    make_model,
    rtuomg_cdf,
    rtuomg_hazard,
    rtuomg_log_pdf,
    rtuomg_pdf,
    rtuomg_quantile,
    rtuomg_sample,
    rtuomg_sf,
)
from .errors import ConvergenceError, DegenerateDataError, DomainError
from .estimation import FitOptions, FitResult, fit
from .gof import gof_report, selection_table
from .moments import moment_set, raw_moment

__version__ = "0.1.0"

__all__ = [
    "Cug", "Cul", "Rtuomg", "RtuomgParams", "Uomg", "Uw", "make_model",
    "rtuomg_cdf", "rtuomg_hazard", "rtuomg_log_pdf", "rtuomg_pdf", "rtuomg_quantile",
    "rtuomg_sample", "rtuomg_sf",
    "ConvergenceError", "DegenerateDataError", "DomainError",
    "FitOptions", "FitResult", "fit", "gof_report", "selection_table",
    "moment_set", "raw_moment",
]
