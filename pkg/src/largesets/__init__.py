"""Exact constructions of large subsets of the line avoiding affine copies of sequences."""

from .constructions import (
    AvoiderSet,
    DepthError,
    EnumerationAvoider,
    IntegerPowerAvoider,
    LemmaAvoider,
    PairIndex,
    PowerStrip,
    avoider_from_descriptor,
    build_enumeration_avoider,
    build_integer_power,
    build_lemma_avoider,
    build_power_strip,
    pair,
    positive_rationals,
    reduced_length_rational,
    unpair,
)
from .intervals import (
    Interval,
    IntervalSet,
    PeriodicSet,
    Window,
    affine_image,
    boolean_combine,
    materialize_periodic,
    measure,
    min_unit_window_measure,
    normalize,
)
from .orbits import (
    CongruenceCase,
    ExceptionalProbe,
    Grid,
    OrbitStats,
    box_dimension_estimate,
    chung_erdos_check,
    delta_escape_probe,
    exceptional_probe,
    fractional_orbit,
    lemma41_exact_measure,
    max_gap,
    orbit_stats,
    star_discrepancy,
)
from .rationals import Approximant, PrecisionError, approximant, as_rat, frac
from .sequences import (
    Block,
    DensityEstimate,
    Explicit,
    Geometric,
    IntegerPower,
    Polynomial,
    PrimePower,
    SequenceError,
    SequenceSpec,
    banach_density_estimate,
    growth_profile,
    identity,
    powers_of,
    sequence_from_json,
    squares,
)
from .verification import (
    EscapeWitness,
    LargenessReport,
    PeriodCertificate,
    ScanResult,
    eventual_period,
    find_escape_witness,
    grid_escape_scan,
    verify_largeness,
)

__version__ = "0.1.0"
