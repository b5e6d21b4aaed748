import random
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from pickseq.core import Instance, all_allocations
from pickseq.fairness import (
    FairnessLevel,
    fairness_level,
    fairness_report,
    is_envy_free,
    maxmin_fair_share,
    minmax_fair_share,
    proportional_share,
    satisfies_maxmin,
    satisfies_minmax,
    satisfies_pfs,
)

from conftest import alloc, instance_and_allocation, instances


def set_partitions(items):
    """Unlabelled set partitions, built block by block."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1 :]
        yield [[first]] + part


def share_thresholds(row, n):
    """Maxmin and minmax shares over partitions into at most n blocks (missing blocks are empty)."""
    best_min, best_max = None, None
    for part in set_partitions(list(range(len(row)))):
        if len(part) > n:
            continue
        sums = [sum(row[o] for o in block) for block in part] + [0] * (n - len(part))
        lo, hi = min(sums), max(sums)
        best_min = lo if best_min is None else max(best_min, lo)
        best_max = hi if best_max is None else min(best_max, hi)
    return best_min, best_max


def test_envy_free_examples(ex5, ex6):
    assert is_envy_free(ex6, alloc([3, 5], [1, 4], [2]))
    assert not is_envy_free(ex5, alloc([1], [2, 3]))
    assert is_envy_free(Instance(((1, 2),)), alloc([1, 2]))


def test_proportional_share(ex1, ex6):
    assert proportional_share(ex1, 0) == Fraction(11, 2)
    assert satisfies_pfs(ex6, alloc([3, 5], [1, 4], [2]))
    assert [proportional_share(ex6, i) for i in range(3)] == [Fraction(47, 3)] * 3
    assert satisfies_pfs(Instance(((1, 2),)), alloc([1, 2]))


def test_share_thresholds_examples(ex1):
    assert maxmin_fair_share(ex1, 0) == 3
    assert share_thresholds([8, 2, 1], 2) == (3, 8)
    single = Instance(((1, 2, 4),))
    assert maxmin_fair_share(single, 0) == minmax_fair_share(single, 0) == 7


def test_fairness_levels(ex1, ex6, ceei_ex):
    assert fairness_level(ex6, alloc([3, 5], [1, 4], [2])) == FairnessLevel.EF
    assert fairness_level(ceei_ex, alloc([1, 4], [3], [2])) == FairnessLevel.CEEI
    # agent 2 gets nothing while her maxmin share is 5
    assert maxmin_fair_share(ex1, 1) == 5
    assert fairness_level(ex1, alloc([1, 2, 3], [])) == FairnessLevel.NONE


def test_ceei_decider_only_consulted_for_envy_free(ex5):
    calls = []

    def decider(inst, a):
        calls.append(a)
        return None

    fairness_level(ex5, alloc([1], [2, 3]), decider)
    assert calls == []


def test_fairness_report(ex6):
    report = fairness_report(ex6, alloc([3, 5], [1, 4], [2]))
    assert report["level"] == "EF"
    assert report["agents"][0]["utility"] == 18
    assert report["agents"][0]["proportional_share"] == Fraction(47, 3)


def test_threshold_ordering_random():
    rng = random.Random(20240611)
    for _ in range(100):
        n, m = rng.randint(1, 3), rng.randint(1, 6)
        inst = Instance(tuple(tuple(rng.randint(0, 20) for _ in range(m)) for _ in range(n)))
        for i in inst.agents:
            lo, hi = maxmin_fair_share(inst, i), minmax_fair_share(inst, i)
            assert (lo, hi) == share_thresholds(inst.weights[i], n)
            assert lo <= proportional_share(inst, i) <= hi


@settings(max_examples=200, deadline=None)
@given(instance_and_allocation(max_objects=5))
def test_fairness_chain(case):
    inst, a = case
    ef = is_envy_free(inst, a)
    mfs_minmax = satisfies_minmax(inst, a)
    pfs = satisfies_pfs(inst, a)
    mfs = satisfies_maxmin(inst, a)
    assert (not ef or mfs_minmax) and (not mfs_minmax or pfs) and (not pfs or mfs)


@settings(max_examples=200, deadline=None)
@given(instance_and_allocation(max_objects=5), st.integers(0, 2), st.fractions(min_value=Fraction(1, 10), max_value=10))
def test_envy_freeness_scale_invariant(case, agent, factor):
    inst, a = case
    agent %= inst.num_agents
    rows = list(inst.weights)
    rows[agent] = tuple(w * factor for w in rows[agent])
    assert is_envy_free(Instance(tuple(rows)), a) == is_envy_free(inst, a)


@settings(max_examples=40, deadline=None)
@given(instances(max_objects=4))
def test_level_is_highest_satisfied(inst):
    for a in all_allocations(inst):
        level = fairness_level(inst, a)
        checks = {
            FairnessLevel.MFS: satisfies_maxmin(inst, a),
            FairnessLevel.PFS: satisfies_pfs(inst, a),
            FairnessLevel.mFS: satisfies_minmax(inst, a),
            FairnessLevel.EF: is_envy_free(inst, a),
        }
        for lvl, ok in checks.items():
            assert ok == (level >= lvl)
