"""Picking sequences, efficiency and fairness of additive allocations of indivisible goods."""

from .ceei import better_bundles, build_s_prime, ceei_test, verify_ceei
from .core import (
    Allocation,
    CapacityError,
    DomainError,
    Instance,
    SubAllocation,
    all_allocations,
    best,
    is_frustrating,
    same_order,
    strict_on_objects,
    strict_on_shares,
    utilities,
    utility,
)
from .efficiency import (
    EfficiencyLevel,
    TradingCycle,
    dominates,
    efficiency_level,
    find_dominating_via_cycle,
    is_pareto_optimal,
)
from .fairness import FairnessLevel, fairness_level, is_envy_free
from .sequences import enumerate_relation, execute_sequence, is_sequenceable, sequence_of

__version__ = "0.1.0"
