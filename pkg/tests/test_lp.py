import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pickseq.core import CapacityError
from pickseq.lp import (
    DimensionError,
    LinearConstraint,
    feasible,
    format_system,
    fourier_motzkin_feasible,
    ge,
    le,
)


def random_system(rng, max_vars=4, max_rows=10):
    n = rng.randint(1, max_vars)
    rows = [
        LinearConstraint(
            tuple(Fraction(rng.randint(-4, 4), rng.choice([1, 1, 2, 3])) for _ in range(n)),
            rng.choice(["<=", ">="]),
            Fraction(rng.randint(-6, 6), rng.choice([1, 2])),
        )
        for _ in range(rng.randint(1, max_rows))
    ]
    nonneg = {j for j in range(n) if rng.random() < 0.5}
    return rows, nonneg, n


def test_trivial_systems():
    assert not feasible([ge([1], 1), le([1], 0)])
    assert not fourier_motzkin_feasible([ge([1], 1), le([1], 0)])
    res = feasible([le([1, 1], 2), ge([1, 0], 1), ge([0, 1], 1)])
    assert res.witness == (1, 1)
    assert fourier_motzkin_feasible([ge([1], 0), le([1], 1)])


def test_free_and_nonnegative_variables():
    # x <= -1 needs a free variable
    assert feasible([le([1], -1)]).feasible
    assert not feasible([le([1], -1)], nonneg_vars={0}).feasible
    assert not fourier_motzkin_feasible([le([1], -1)], nonneg_vars={0})
    res = feasible([le([1, -1], -3), ge([1, 1], Fraction(1, 2))])
    assert res.witness[0] - res.witness[1] <= -3


def test_empty_system():
    assert feasible([], num_vars=3).witness == (0, 0, 0)
    assert fourier_motzkin_feasible([], num_vars=2)


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        feasible([le([1, 2], 0), le([1], 0)])
    with pytest.raises(DimensionError):
        feasible([le([1], 0)], nonneg_vars={3})


def test_fm_guard():
    with pytest.raises(CapacityError):
        fourier_motzkin_feasible([le([1] * 9, 0)])


def test_relation_symbols():
    assert LinearConstraint((1,), "≤", 2).relation == "<="
    with pytest.raises(ValueError):
        LinearConstraint((1,), "<", 2)


def test_degenerate_cycling_prone_system():
    # Beale-like degenerate data; Bland's rule must terminate
    rows = [
        le([Fraction(1, 4), -8, -1, 9], 0),
        le([Fraction(1, 2), -12, Fraction(-1, 2), 3], 0),
        le([0, 0, 1, 0], 1),
        ge([Fraction(3, 4), -20, Fraction(1, 2), -6], Fraction(1, 20)),
    ]
    res = feasible(rows, nonneg_vars=range(4))
    assert res.feasible == fourier_motzkin_feasible(rows, nonneg_vars=range(4))


def test_format_system():
    text = format_system([le([1, -2], 3), ge([0, 1], Fraction(1, 2))], nonneg_vars=[0], names=["p", "d"])
    assert text.splitlines() == ["p - 2 d <= 3", "d >= 1/2", "p >= 0"]


def test_cross_oracle_500():
    rng = random.Random(7)
    verdicts = []
    for _ in range(500):
        rows, nonneg, n = random_system(rng)
        res = feasible(rows, nonneg, n)
        assert res.feasible == fourier_motzkin_feasible(rows, nonneg, n)
        if res.feasible:
            assert all(c.holds(res.witness) for c in rows)
            assert all(res.witness[j] >= 0 for j in nonneg)
        verdicts.append(res.feasible)
    assert 50 < sum(verdicts) < 450


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32), st.fractions(min_value=Fraction(1, 50), max_value=50))
def test_scale_invariance(seed, factor):
    rows, nonneg, n = random_system(random.Random(seed))
    scaled = [c.scaled(factor) for c in rows]
    assert feasible(rows, nonneg, n).feasible == feasible(scaled, nonneg, n).feasible
