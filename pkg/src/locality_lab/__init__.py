"""Colouring functions on directed cycles: verification, speedup, search, simulation."""

from .core import (
    ColouringFunction,
    FormatError,
    GuardError,
    IdSpace,
    ValidityReport,
    tuple_rank,
    tuple_unrank,
    verify,
)
from .numerics import log_star, power_tower, round_lower_bound
from .search import SearchExhausted, SearchResult, enumerate_valid, min_colours, sample_valid
from .simulator import (
    CycleInstance,
    RadiusAlgorithm,
    RunOutcome,
    extract_colouring_function,
    reference_colour_reduction,
    run_on_cycle,
)
from .speedup import SpeedupTrace, base_check, iterate_speedup, speedup

__version__ = "0.1.0"
