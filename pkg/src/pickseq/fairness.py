"""The fairness scale: NONE < MFS < PFS < mFS < EF < CEEI."""

from __future__ import annotations

from enum import IntEnum
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import lcm
from typing import Callable

from .core import Allocation, Instance, utility


class FairnessLevel(IntEnum):
    NONE = 0
    MFS = 1  # maxmin fair share
    PFS = 2  # proportional fair share
    mFS = 3  # minmax fair share
    EF = 4
    CEEI = 5


def is_envy_free(inst: Instance, alloc: Allocation) -> bool:
    inst.check_allocation(alloc)
    for i in inst.agents:
        own = utility(inst, i, alloc.shares[i])
        if any(utility(inst, i, other) > own for other in alloc.shares):
            return False
    return True


def proportional_share(inst: Instance, agent: int) -> Fraction:
    return utility(inst, agent, inst.objects) / inst.num_agents


@lru_cache(maxsize=256)
def _share_extremes(inst: Instance, agent: int) -> tuple[Fraction, Fraction]:
    # every labelled split of all objects into N (possibly empty) shares
    inst.check_agent(agent)
    inst.check_enumerable()
    row = inst.integer_weights[agent]
    scale = lcm(*(w.denominator for w in inst.weights[agent]))
    n = inst.num_agents
    maxmin = None
    minmax = None
    for owners in product(range(n), repeat=inst.num_objects):
        sums = [0] * n
        for obj, owner in enumerate(owners):
            sums[owner] += row[obj]
        lo, hi = min(sums), max(sums)
        if maxmin is None or lo > maxmin:
            maxmin = lo
        if minmax is None or hi < minmax:
            minmax = hi
    return Fraction(maxmin, scale), Fraction(minmax, scale)


def maxmin_fair_share(inst: Instance, agent: int) -> Fraction:
    return _share_extremes(inst, agent)[0]


def minmax_fair_share(inst: Instance, agent: int) -> Fraction:
    return _share_extremes(inst, agent)[1]


def _meets(inst: Instance, alloc: Allocation, threshold: Callable[[Instance, int], Fraction]) -> bool:
    inst.check_allocation(alloc)
    return all(utility(inst, i, alloc.shares[i]) >= threshold(inst, i) for i in inst.agents)


def satisfies_pfs(inst: Instance, alloc: Allocation) -> bool:
    return _meets(inst, alloc, proportional_share)


def satisfies_maxmin(inst: Instance, alloc: Allocation) -> bool:
    """Every agent gets at least her maxmin fair share (MFS)."""
    return _meets(inst, alloc, maxmin_fair_share)


def satisfies_minmax(inst: Instance, alloc: Allocation) -> bool:
    """Every agent gets at least her minmax fair share (mFS)."""
    return _meets(inst, alloc, minmax_fair_share)


def fairness_level(inst: Instance, alloc: Allocation, ceei_decider=None) -> FairnessLevel:
    """Highest level of the fairness scale that ``alloc`` reaches.

    ``ceei_decider(inst, alloc)`` returns prices or None; it is consulted
    only for envy-free allocations.
    """
    if is_envy_free(inst, alloc):
        if ceei_decider is None:
            from .ceei import ceei_test as ceei_decider
        if ceei_decider(inst, alloc) is not None:
            return FairnessLevel.CEEI
        return FairnessLevel.EF
    if satisfies_minmax(inst, alloc):
        return FairnessLevel.mFS
    if satisfies_pfs(inst, alloc):
        return FairnessLevel.PFS
    if satisfies_maxmin(inst, alloc):
        return FairnessLevel.MFS
    return FairnessLevel.NONE


def fairness_report(inst: Instance, alloc: Allocation, ceei_decider=None) -> dict:
    level = fairness_level(inst, alloc, ceei_decider)
    agents = []
    for i in inst.agents:
        agents.append(
            {
                "agent": i + 1,
                "utility": utility(inst, i, alloc.shares[i]),
                "maxmin_share": maxmin_fair_share(inst, i),
                "proportional_share": proportional_share(inst, i),
                "minmax_share": minmax_fair_share(inst, i),
            }
        )
    return {"level": level.name, "agents": agents}
