"""Sequences of sincere choices: execution, sequencing, and the relation s(I)."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .core import (
    Allocation,
    CapacityError,
    Instance,
    SubAllocation,
    all_allocations,
    best,
    is_frustrating,
    nonempty_subsets,
)

MAX_SUBSET_SCAN_OBJECTS = 20


def execute_sequence(inst: Instance, seq: Sequence[int]) -> frozenset[Allocation]:
    """All allocations the picking sequence ``seq`` can generate.

    Every tie at a pick opens a branch; branches ending in the same
    allocation are merged.
    """
    inst.check_sequence(seq)
    results: set[Allocation] = set()
    shares = [set() for _ in inst.agents]

    def explore(t: int, remaining: frozenset[int]) -> None:
        if t == len(seq):
            results.add(Allocation(tuple(frozenset(s) for s in shares)))
            return
        agent = seq[t]
        for obj in sorted(best(inst, agent, remaining)):
            shares[agent].add(obj)
            explore(t + 1, remaining - {obj})
            shares[agent].discard(obj)

    explore(0, frozenset(inst.objects))
    return frozenset(results)


def _sequencing(inst: Instance, alloc: Allocation) -> tuple[tuple[int, ...], frozenset[int]]:
    """Greedy sequencing of ``alloc``.

    Returns the picks emitted so far and the objects left over.  The
    leftover set is empty exactly when ``alloc`` is sequenceable; otherwise
    the restriction of ``alloc`` to it is frustrating.  Ties go to the lowest
    agent index, then the lowest object index.
    """
    inst.check_allocation(alloc)
    remaining = set(inst.objects)
    picks: list[int] = []
    while remaining:
        for i, share in enumerate(alloc.shares):
            if not share & remaining:
                continue
            hit = best(inst, i, remaining) & share
            if hit:
                picks.append(i)
                remaining.discard(min(hit))
                break
        else:
            break
    return tuple(picks), frozenset(remaining)


def sequence_of(inst: Instance, alloc: Allocation) -> tuple[int, ...] | None:
    """A sequence generating ``alloc``, or None if it is non-sequenceable."""
    picks, remaining = _sequencing(inst, alloc)
    return None if remaining else picks


def is_sequenceable(inst: Instance, alloc: Allocation) -> bool:
    return sequence_of(inst, alloc) is not None


def frustrating_residual(inst: Instance, alloc: Allocation) -> frozenset[int] | None:
    """Objects left when sequencing gets stuck, or None if ``alloc`` is sequenceable."""
    _, remaining = _sequencing(inst, alloc)
    return remaining or None


def has_frustrating_suballocation_bruteforce(inst: Instance, alloc: Allocation) -> bool:
    """Scan every nonempty restriction of ``alloc`` for a frustrating one."""
    return frustrating_subdomain_bruteforce(inst, alloc) is not None


def frustrating_subdomain_bruteforce(inst: Instance, alloc: Allocation) -> frozenset[int] | None:
    if inst.num_objects > MAX_SUBSET_SCAN_OBJECTS:
        raise CapacityError(
            f"subset scan over 2^{inst.num_objects} domains exceeds the guard M <= {MAX_SUBSET_SCAN_OBJECTS}"
        )
    inst.check_allocation(alloc)
    for objs in nonempty_subsets(list(inst.objects)):
        if is_frustrating(inst, alloc.restrict(objs)):
            return frozenset(objs)
    return None


@dataclass(frozen=True)
class GenerationRelation:
    """The pairs (sequence, allocation) such that the sequence generates the allocation."""

    pairs: frozenset[tuple[tuple[int, ...], Allocation]]

    def edges(self) -> list[tuple[tuple[int, ...], Allocation]]:
        return sorted(self.pairs, key=lambda p: (p[0], p[1].sort_key()))

    def images(self, seq: Sequence[int]) -> set[Allocation]:
        seq = tuple(seq)
        return {a for s, a in self.pairs if s == seq}

    def preimages(self, alloc: SubAllocation) -> set[tuple[int, ...]]:
        return {s for s, a in self.pairs if a == alloc}

    def is_function(self) -> bool:
        """Every sequence generates exactly one allocation."""
        counts: dict[tuple[int, ...], int] = {}
        for s, _ in self.pairs:
            counts[s] = counts.get(s, 0) + 1
        return all(c == 1 for c in counts.values())

    def is_bijection(self, num_allocations: int) -> bool:
        if not self.is_function():
            return False
        targets = [a for _, a in self.pairs]
        return len(set(targets)) == len(targets) == num_allocations


def enumerate_relation(inst: Instance) -> GenerationRelation:
    inst.check_enumerable("sequences")
    pairs = set()
    for seq in product(inst.agents, repeat=inst.num_objects):
        for alloc in execute_sequence(inst, seq):
            pairs.add((seq, alloc))
    return GenerationRelation(frozenset(pairs))


def non_sequenceable_allocations(inst: Instance) -> list[Allocation]:
    return [a for a in all_allocations(inst) if not is_sequenceable(inst, a)]
