"""Pareto dominance, trading cycles and the three-level efficiency scale."""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

from .core import Allocation, Instance, all_allocations, best, utilities
from .sequences import frustrating_residual, is_sequenceable


class EfficiencyLevel(IntEnum):
    NS = 0  # non-sequenceable
    SnP = 1  # sequenceable, not Pareto-optimal
    PO = 2  # Pareto-optimal


@dataclass(frozen=True)
class TradingCycle:
    """Agent ``agents[j]`` wants ``objects[j]``, currently held by ``agents[j + 1]`` (cyclically)."""

    agents: tuple[int, ...]
    objects: tuple[int, ...]

    def __post_init__(self):
        if len(self.agents) < 2 or len(self.agents) != len(self.objects):
            raise ValueError("a trading cycle needs at least two (agent, object) pairs")
        if len(set(self.agents)) != len(self.agents) or len(set(self.objects)) != len(self.objects):
            raise ValueError("agents and objects of a trading cycle must be distinct")

    def pairs(self) -> list[tuple[int, int]]:
        return list(zip(self.agents, self.objects))

    def apply(self, alloc: Allocation) -> Allocation:
        shares = [set(s) for s in alloc.shares]
        k = len(self.agents)
        for j, (agent, obj) in enumerate(self.pairs()):
            holder = self.agents[(j + 1) % k]
            shares[holder].discard(obj)
            shares[agent].add(obj)
        return Allocation(tuple(frozenset(s) for s in shares))

    def to_json(self) -> dict:
        return {"agents": [a + 1 for a in self.agents], "objects": [o + 1 for o in self.objects]}

    def __str__(self) -> str:
        steps = [f"({a + 1}, {o + 1})" for a, o in self.pairs()]
        return " -> ".join(steps + steps[:1])


def dominates(inst: Instance, a: Allocation, b: Allocation) -> bool:
    """True iff ``a`` Pareto-dominates ``b``."""
    inst.check_allocation(a)
    inst.check_allocation(b)
    ua, ub = utilities(inst, a), utilities(inst, b)
    return all(x >= y for x, y in zip(ua, ub)) and any(x > y for x, y in zip(ua, ub))


def find_dominator(inst: Instance, alloc: Allocation) -> Allocation | None:
    """First allocation (lexicographic owner order) dominating ``alloc``, by exhaustive scan."""
    inst.check_allocation(alloc)
    inst.check_enumerable()
    target = utilities(inst, alloc)
    for other in all_allocations(inst):
        u = utilities(inst, other)
        if all(x >= y for x, y in zip(u, target)) and u != target:
            return other
    return None


def is_pareto_optimal(inst: Instance, alloc: Allocation) -> bool:
    return find_dominator(inst, alloc) is None


def _canonical_rotation(agents: list[int], objects: list[int]) -> TradingCycle:
    start = objects.index(min(objects))
    return TradingCycle(tuple(agents[start:] + agents[:start]), tuple(objects[start:] + objects[:start]))


def find_dominating_via_cycle(inst: Instance, alloc: Allocation) -> tuple[TradingCycle, Allocation] | None:
    """Trading cycle inside a frustrating sub-allocation, and the improved allocation.

    The frustrating sub-allocation is the one left when sequencing gets
    stuck.  The walk starts from its lowest-indexed agent and always follows
    the lowest-indexed top object.  The cycle is reported rotated to start
    at its lowest-indexed object.  Returns None for sequenceable allocations.
    """
    domain = frustrating_residual(inst, alloc)
    if domain is None:
        return None
    sub = alloc.restrict(domain)
    agent = min(i for i, share in enumerate(sub.shares) if share)
    path_agents: list[int] = []
    path_objects: list[int] = []
    while agent not in path_agents:
        wanted = min(best(inst, agent, domain))
        path_agents.append(agent)
        path_objects.append(wanted)
        agent = sub.owner(wanted)
    first = path_agents.index(agent)
    cycle = _canonical_rotation(path_agents[first:], path_objects[first:])
    return cycle, cycle.apply(alloc)


def efficiency_level(inst: Instance, alloc: Allocation) -> EfficiencyLevel:
    if not is_sequenceable(inst, alloc):
        return EfficiencyLevel.NS
    if is_pareto_optimal(inst, alloc):
        return EfficiencyLevel.PO
    return EfficiencyLevel.SnP
