"""Exact CEEI test for a given allocation.

With equal unit budgets, an allocation is CEEI iff there are prices
p in [0, 1]^M under which every share is affordable and every strictly
better bundle is not.  The strict inequalities are removed by scaling:
with p' = d * p the system becomes

    p' >= 0,   A p' <= d,   B p' >= d + 1

where row i of A is agent i's share and each row of B is a bundle some
agent strictly prefers to her share.  Any solution gives prices p'/d.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import Allocation, CapacityError, Instance
from .fairness import is_envy_free
from .lp import LinearConstraint, feasible, format_system, ge, le
from .sequences import is_sequenceable

MAX_BUNDLE_OBJECTS = 20


def _check_bundle_guard(inst: Instance) -> None:
    if inst.num_objects > MAX_BUNDLE_OBJECTS:
        raise CapacityError(
            f"bundle enumeration over 2^{inst.num_objects} subsets exceeds the guard M <= {MAX_BUNDLE_OBJECTS}"
        )


def _share_value(row: Sequence[int], share) -> int:
    return sum(row[o] for o in share)


def better_bundles(inst: Instance, alloc: Allocation, agent: int, minimal: bool = True) -> list[frozenset[int]]:
    """Bundles that ``agent`` values strictly more than her share.

    With ``minimal`` only the inclusion-minimal ones are kept; with
    nonnegative prices the price constraint of any superset follows from
    them.  Bundles come out sorted by (size, sorted objects).
    """
    _check_bundle_guard(inst)
    inst.check_allocation(alloc)
    inst.check_agent(agent)
    row = inst.integer_weights[agent]
    own = _share_value(row, alloc.shares[agent])
    if not minimal:
        out = []
        for mask in range(1 << inst.num_objects):
            bundle = frozenset(o for o in inst.objects if mask >> o & 1)
            if _share_value(row, bundle) > own:
                out.append(bundle)
        return sorted(out, key=_bundle_key)

    # Minimal bundles are built by adding objects in decreasing weight order:
    # the first time the total exceeds ``own`` the last object added is the
    # lightest, and dropping it falls back under the threshold.
    order = sorted((o for o in inst.objects if row[o] > 0), key=lambda o: (-row[o], o))
    suffix = [0] * (len(order) + 1)
    for k in range(len(order) - 1, -1, -1):
        suffix[k] = suffix[k + 1] + row[order[k]]
    out = []
    chosen: list[int] = []

    def grow(start: int, total: int) -> None:
        if total + suffix[start] <= own:
            return
        for k in range(start, len(order)):
            obj = order[k]
            chosen.append(obj)
            value = total + row[obj]
            if value > own:
                out.append(frozenset(chosen))
            else:
                grow(k + 1, value)
            chosen.pop()

    grow(0, 0)
    return sorted(out, key=_bundle_key)


def _bundle_key(bundle: frozenset[int]) -> tuple:
    return (len(bundle), sorted(bundle))


@dataclass(frozen=True)
class LpSystem:
    """The scaled CEEI system over variables (p'_1, ..., p'_M, d)."""

    num_objects: int
    affordability: tuple[tuple[int, ...], ...]
    better: tuple[tuple[int, ...], ...]
    better_owner: tuple[int, ...] = ()

    @property
    def num_price_vars(self) -> int:
        return self.num_objects

    @property
    def num_vars(self) -> int:
        return self.num_objects + 1

    @property
    def nonneg_vars(self) -> range:
        return range(self.num_vars)

    def constraints(self, better_rows: Sequence[int] | None = None) -> list[LinearConstraint]:
        rows = range(len(self.better)) if better_rows is None else better_rows
        out = [le(list(a) + [-1], 0) for a in self.affordability]
        out += [ge(list(self.better[k]) + [-1], 1) for k in rows]
        return out

    def is_satisfied_by(self, witness: Sequence[Fraction]) -> bool:
        return all(c.holds(witness) for c in self.constraints()) and all(v >= 0 for v in witness)

    def dump(self) -> str:
        names = [f"p{l + 1}" for l in range(self.num_objects)] + ["d"]
        return format_system(self.constraints(), self.nonneg_vars, names)


def _indicator(bundle, m: int) -> tuple[int, ...]:
    return tuple(1 if o in bundle else 0 for o in range(m))


def build_s_prime(inst: Instance, alloc: Allocation, minimal: bool = True) -> LpSystem:
    m = inst.num_objects
    afford = tuple(_indicator(share, m) for share in alloc.shares)
    seen = {}
    for i in inst.agents:
        for bundle in better_bundles(inst, alloc, i, minimal=minimal):
            seen.setdefault(_indicator(bundle, m), i)
    return LpSystem(m, afford, tuple(seen), tuple(seen.values()))


def prices_from_witness(witness: Sequence[Fraction], m: int) -> tuple[Fraction, ...]:
    d = witness[m]
    if d == 0:
        # only possible when there is no better bundle at all, and then the
        # share constraints force p' = 0
        return tuple(Fraction(0) for _ in range(m))
    return tuple(v / d for v in witness[:m])


def solve_s_prime(system: LpSystem) -> tuple[Fraction, ...] | None:
    """Solve the whole system at once; returns the (p', d) witness or None."""
    result = feasible(system.constraints(), system.nonneg_vars, system.num_vars)
    return result.witness


def _solve_lazily(system: LpSystem) -> tuple[Fraction, ...] | None:
    # Start from the share constraints only and add, per agent, the cheapest
    # violated better-bundle row until the witness satisfies all of them.
    m = system.num_objects
    by_agent: dict[int, list[int]] = {}
    for k, owner in enumerate(system.better_owner):
        by_agent.setdefault(owner, []).append(k)
    active: list[int] = []
    while True:
        result = feasible(system.constraints(active), system.nonneg_vars, system.num_vars)
        if not result.feasible:
            return None
        witness = result.witness
        d = witness[m]
        added = False
        for rows in by_agent.values():
            cheapest, cost = None, None
            for k in rows:
                c = sum((witness[o] for o, bit in enumerate(system.better[k]) if bit), Fraction(0))
                if cost is None or c < cost:
                    cheapest, cost = k, c
            if cheapest is not None and cost < d + 1:
                active.append(cheapest)
                added = True
        if not added:
            return witness


def verify_ceei(inst: Instance, alloc: Allocation, prices: Sequence[Fraction]) -> bool:
    """Check by brute force over all bundles that (alloc, prices) is a CEEI."""
    _check_bundle_guard(inst)
    inst.check_allocation(alloc)
    prices = [Fraction(p) for p in prices]
    if len(prices) != inst.num_objects or any(not 0 <= p <= 1 for p in prices):
        return False
    m = inst.num_objects
    cost = [Fraction(0)] * (1 << m)
    for mask in range(1, 1 << m):
        low = (mask & -mask).bit_length() - 1
        cost[mask] = cost[mask & (mask - 1)] + prices[low]
    for i in inst.agents:
        row = inst.integer_weights[i]
        share = alloc.shares[i]
        own_mask = sum(1 << o for o in share)
        if cost[own_mask] > 1:
            return False
        own = _share_value(row, share)
        value = [0] * (1 << m)
        for mask in range(1, 1 << m):
            low = (mask & -mask).bit_length() - 1
            value[mask] = value[mask & (mask - 1)] + row[low]
            if value[mask] > own and cost[mask] <= 1:
                return False
    return True


def ceei_test(
    inst: Instance,
    alloc: Allocation,
    *,
    lazy: bool = True,
    minimal: bool = True,
    prefilter: bool = True,
) -> tuple[Fraction, ...] | None:
    """Equilibrium prices making ``alloc`` a CEEI, or None if there are none.

    Envy and non-sequenceability each rule a CEEI out, so unless
    ``prefilter`` is off both are checked before any LP is built.  ``lazy``
    adds better-bundle rows on demand instead of handing the whole system
    to the solver.
    """
    inst.check_allocation(alloc)
    if prefilter and (not is_envy_free(inst, alloc) or not is_sequenceable(inst, alloc)):
        return None
    system = build_s_prime(inst, alloc, minimal=minimal)
    witness = _solve_lazily(system) if lazy else solve_s_prime(system)
    if witness is None:
        return None
    prices = prices_from_witness(witness, inst.num_objects)
    if not verify_ceei(inst, alloc, prices):
        raise RuntimeError(f"CEEI witness {prices} failed verification")
    return prices


def is_ceei(inst: Instance, alloc: Allocation) -> bool:
    return ceei_test(inst, alloc) is not None
