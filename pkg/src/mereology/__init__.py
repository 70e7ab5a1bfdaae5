"""Finite models of systems, their parts, and the constraints parts place on one another."""

from .core import (
    BehaviorType,
    EmptySystemError,
    MereologyError,
    NotSurjectiveError,
    Part,
    PartOrderWitness,
    SystemMismatchError,
    bottom,
    compatibility_matrix,
    compatible,
    compatible_family,
    determination_matrix,
    determines,
    disjoint,
    join,
    meet,
    observationally_equivalent,
    part_determines,
    part_from_observation,
    part_leq,
    part_order_conditions,
    render_label,
    restrict,
    same_partition,
    strongly_disjoint,
    top,
)
from .laws import LAWS, LawReport, law_suite, random_law_runs
from .logic import (
    CarrierMismatchError,
    Constraint,
    allows,
    ensures,
    entails,
    equivalence_part,
    exists_along,
    forall_along,
    kripke_modalities,
    necessity,
    point_constraint,
    possibility,
    pullback_along,
    roundtrip_allows,
    roundtrip_ensures,
)
from .models import (
    GridAxis,
    GridSpec,
    ModelBundle,
    SimSpec,
    SystemModel,
    build_bicycle,
    build_ecosystem,
    build_water,
    project,
    random_system,
)

__version__ = "0.1.0"
