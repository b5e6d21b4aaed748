"""Exact data model for additive fair-division instances.

Agents and objects are 0-based in the Python API.  The JSON formats in
:mod:`pickseq.io` and everything printed by the CLI use 1-based indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import lcm
from typing import Iterable, Iterator, Sequence

import numpy as np


class PickseqError(Exception):
    """Base class for errors raised by this package."""


class DomainError(PickseqError, ValueError):
    """An operation was called outside the domain where it is defined."""


class CapacityError(PickseqError):
    """An exhaustive procedure was asked to enumerate more than its guard allows."""


MAX_ENUMERATION = 10**6
MAX_SHARE_STRICTNESS_OBJECTS = 25


def as_rational(value) -> Fraction:
    if isinstance(value, bool):
        raise TypeError("booleans are not weights")
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


@dataclass(frozen=True)
class Instance:
    """An add-MARA instance: ``weights[i][l]`` is agent i's weight for object l."""

    weights: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(as_rational(w) for w in row) for row in self.weights)
        if not rows or not rows[0]:
            raise DomainError("an instance needs at least one agent and one object")
        width = len(rows[0])
        for i, row in enumerate(rows):
            if len(row) != width:
                raise DomainError(f"row {i + 1} has {len(row)} weights, expected {width}")
            for l, w in enumerate(row):
                if w < 0:
                    raise DomainError(f"negative weight {w} at row {i + 1}, column {l + 1}")
        object.__setattr__(self, "weights", rows)

    @property
    def num_agents(self) -> int:
        return len(self.weights)

    @property
    def num_objects(self) -> int:
        return len(self.weights[0])

    @property
    def agents(self) -> range:
        return range(self.num_agents)

    @property
    def objects(self) -> range:
        return range(self.num_objects)

    def weight(self, agent: int, obj: int) -> Fraction:
        return self.weights[agent][obj]

    def num_allocations(self) -> int:
        return self.num_agents**self.num_objects

    @cached_property
    def integer_weights(self) -> tuple[tuple[int, ...], ...]:
        """Each row rescaled by the LCM of its denominators.

        Comparisons made within one agent's valuation are unchanged by
        the rescaling, so the integer rows can stand in for the exact ones.
        """
        out = []
        for row in self.weights:
            scale = lcm(*(w.denominator for w in row))
            out.append(tuple(int(w * scale) for w in row))
        return tuple(out)

    def weight_array(self) -> np.ndarray:
        """Integer weights as an ndarray; int64 when it cannot overflow, else object."""
        iw = self.integer_weights
        if max(sum(row) for row in iw) < 2**62:
            return np.array(iw, dtype=np.int64)
        return np.array(iw, dtype=object)

    def check_agent(self, agent: int) -> None:
        if not 0 <= agent < self.num_agents:
            raise IndexError(f"agent index {agent} out of range [0, {self.num_agents})")

    def check_objects(self, objects: Iterable[int]) -> None:
        for obj in objects:
            if not 0 <= obj < self.num_objects:
                raise IndexError(f"object index {obj} out of range [0, {self.num_objects})")

    def check_allocation(self, alloc: "SubAllocation") -> None:
        if len(alloc.shares) != self.num_agents:
            raise DomainError(
                f"allocation has {len(alloc.shares)} shares, instance has {self.num_agents} agents"
            )
        self.check_objects(alloc.domain)
        if alloc.domain != frozenset(self.objects):
            missing = sorted(set(self.objects) - alloc.domain)
            raise DomainError(f"objects {[o + 1 for o in missing]} are not allocated")

    def check_sequence(self, seq: Sequence[int]) -> None:
        if len(seq) != self.num_objects:
            raise DomainError(f"sequence has length {len(seq)}, expected {self.num_objects}")
        for agent in seq:
            self.check_agent(agent)

    def check_enumerable(self, what: str = "allocations") -> None:
        if self.num_allocations() > MAX_ENUMERATION:
            raise CapacityError(
                f"{self.num_agents}^{self.num_objects} {what} exceeds the "
                f"enumeration guard of {MAX_ENUMERATION}"
            )


@dataclass(frozen=True)
class SubAllocation:
    """Pairwise-disjoint shares; the domain is the union of the shares."""

    shares: tuple[frozenset[int], ...]

    def __post_init__(self):
        shares = tuple(frozenset(s) for s in self.shares)
        seen: set[int] = set()
        for i, share in enumerate(shares):
            overlap = seen & share
            if overlap:
                raise DomainError(
                    f"objects {sorted(o + 1 for o in overlap)} given twice (again to agent {i + 1})"
                )
            seen |= share
        object.__setattr__(self, "shares", shares)

    @property
    def domain(self) -> frozenset[int]:
        return frozenset().union(*self.shares)

    @property
    def num_agents(self) -> int:
        return len(self.shares)

    def owner(self, obj: int) -> int | None:
        for i, share in enumerate(self.shares):
            if obj in share:
                return i
        return None

    def restrict(self, objects: Iterable[int]) -> "SubAllocation":
        keep = frozenset(objects)
        return SubAllocation(tuple(share & keep for share in self.shares))

    def to_one_based(self) -> list[list[int]]:
        return [sorted(o + 1 for o in share) for share in self.shares]

    def __str__(self) -> str:
        parts = ("{" + ",".join(map(str, s)) + "}" for s in self.to_one_based())
        return "<" + ", ".join(parts) + ">"


class Allocation(SubAllocation):
    """A sub-allocation whose domain is every object of its instance."""

    @classmethod
    def from_owners(cls, owners: Sequence[int], num_agents: int) -> "Allocation":
        shares: list[set[int]] = [set() for _ in range(num_agents)]
        for obj, agent in enumerate(owners):
            shares[agent].add(obj)
        return cls(tuple(frozenset(s) for s in shares))

    @classmethod
    def from_one_based(cls, shares: Iterable[Iterable[int]]) -> "Allocation":
        return cls(tuple(frozenset(o - 1 for o in share) for share in shares))

    def owners(self, num_objects: int) -> tuple[int, ...]:
        out = [-1] * num_objects
        for i, share in enumerate(self.shares):
            for obj in share:
                out[obj] = i
        return tuple(out)

    def sort_key(self) -> tuple:
        return tuple(tuple(sorted(s)) for s in self.shares)


def all_allocations(inst: Instance) -> Iterator[Allocation]:
    """Every allocation of ``inst``, in lexicographic order of owner vectors."""
    from itertools import product

    inst.check_enumerable()
    for owners in product(inst.agents, repeat=inst.num_objects):
        yield Allocation.from_owners(owners, inst.num_agents)


def utility(inst: Instance, agent: int, share: Iterable[int]) -> Fraction:
    inst.check_agent(agent)
    share = list(share)
    inst.check_objects(share)
    row = inst.weights[agent]
    return sum((row[o] for o in share), Fraction(0))


def utilities(inst: Instance, alloc: SubAllocation) -> tuple[Fraction, ...]:
    return tuple(utility(inst, i, share) for i, share in enumerate(alloc.shares))


def best(inst: Instance, agent: int, objects: Iterable[int]) -> frozenset[int]:
    """Objects of ``objects`` that ``agent`` weighs highest (ties all kept)."""
    inst.check_agent(agent)
    objects = list(objects)
    if not objects:
        raise DomainError("best() needs a nonempty set of objects")
    inst.check_objects(objects)
    row = inst.weights[agent]
    top = max(row[o] for o in objects)
    return frozenset(o for o in objects if row[o] == top)


def is_frustrating(inst: Instance, sub: SubAllocation) -> bool:
    """True iff no agent holding something in ``sub`` holds one of her top objects.

    Agents with an empty share impose no condition.
    """
    domain = sub.domain
    if not domain:
        raise DomainError("frustration is undefined on an empty sub-allocation")
    if len(sub.shares) != inst.num_agents:
        raise DomainError("sub-allocation does not match the number of agents")
    for i, share in enumerate(sub.shares):
        if share and best(inst, i, domain) & share:
            return False
    return True


def strict_on_objects(inst: Instance) -> bool:
    return all(len(set(row)) == len(row) for row in inst.weights)


def strict_on_shares(inst: Instance) -> bool:
    """No agent values two distinct shares equally (exhaustive over 2^M shares)."""
    if inst.num_objects > MAX_SHARE_STRICTNESS_OBJECTS:
        raise CapacityError(
            f"strict_on_shares enumerates 2^M shares; M={inst.num_objects} "
            f"exceeds {MAX_SHARE_STRICTNESS_OBJECTS}"
        )
    arr = inst.weight_array()
    for row in arr:
        sums = np.zeros(1, dtype=arr.dtype)
        for w in row:
            sums = np.concatenate([sums, sums + w])
            # a duplicate among prefix subsets survives into the full power set
            if len(np.unique(sums)) != len(sums):
                return False
    return True


def same_order(inst: Instance) -> tuple[int, ...] | None:
    """A common non-increasing order of the objects for all agents, or None.

    The result lists objects from most to least preferred.
    """
    order = sorted(inst.objects, key=lambda o: tuple(-row[o] for row in inst.weights) + (o,))
    for row in inst.weights:
        if any(row[a] < row[b] for a, b in zip(order, order[1:])):
            return None
    return tuple(order)


def nonempty_subsets(items: Sequence[int]) -> Iterator[tuple[int, ...]]:
    for k in range(1, len(items) + 1):
        yield from combinations(items, k)
