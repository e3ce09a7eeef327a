"""Thermodynamic quantities of finitely generated semigroups of expanding maps."""
from .core import (
    CircleLinear,
    CircleNonlinear,
    Potential,
    RandomWalk,
    SemigroupSpec,
    SpecError,
    TorusLinear,
    Word,
    WordClass,
    all_words,
    apply,
    apply_word,
    enumerate_word_classes,
    load_spec,
    parse_walk,
    sample_word,
    word_degree,
    word_log_degree,
)
from .measures import DensityFunction, EmpiricalMeasure, l1_distance
from .periodic import (
    CapExceeded,
    EntropyReport,
    PeriodicCountSeries,
    PeriodicSet,
    fekete_check,
    fix_count,
    fix_locate,
    periodic_entropy,
    periodic_series,
)
from .pressure import (
    PressureReport,
    distinguished_vector_m,
    entropy_map_maximize,
    equal_degree_test,
    matching_walk,
    pressure_report,
)
from .randomwalk import SimConfig, simulate_empirical, skew_invariance_check, stationarity_test
from .transfer import (
    ConvergenceError,
    SpectralResult,
    UlamOperator,
    build_ulam,
    periodic_mass_measure,
    power_iterate,
    preimage_measure,
    stationary_density,
)
from .zeta import ZetaSeries, radius_vs_entropy, zeta_eval, zeta_rational, zeta_series

__version__ = "0.1.0"
