"""Geodetic cycles and thin sums in graphs with rational edge lengths."""

from .decompose import Decomposition, geodetic_decomposition, geodetic_generating_set, short_decomposition
from .errors import (
    BudgetError,
    CertificationError,
    ContractViolation,
    GeoCyclesError,
    InputError,
    NoPathError,
    NoSequenceError,
    PropertyViolation,
)
from .families import LengthScheme, family_from_spec, finite_family, ladder, strip, subdivided_ladder_family
from .geodesy import DistanceOracle, Shortcut, all_pairs, find_shortcut, is_geodetic, shortest_path
from .graph import Cycle, Edge, Graph, Path, decompose_into_circuits, is_cycle_space_member, symmetric_sum
from .truncation import (
    GraphFamily,
    Hierarchy,
    Interval,
    Truncation,
    ball,
    build_truncation,
    distance_estimate,
    epsilon_estimate,
    metric_diagnostic,
    restrict,
)

__version__ = "0.1.0"
