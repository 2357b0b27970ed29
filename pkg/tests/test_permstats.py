from collections import Counter
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from rtshuffle import (
    CycleCensus,
    PermState,
    SimConfig,
    SizeLimitError,
    count_small_cycle_perms,
    cycle_census,
    empirical_fixed_point_hist,
    fixed_point_law,
    qcycle_probability,
    simulate_walk,
    small_cycle_log_margin,
)

from oracles import exhaustive_class_census, exhaustive_small_cycle_counts


def test_fixed_point_law_known():
    assert fixed_point_law(4, 0) == Fraction(3, 8)
    for n in range(1, 8):
        assert fixed_point_law(n, n) == Fraction(1, factorial(n))
        if n >= 1:
            assert fixed_point_law(n, n - 1) == 0
    with pytest.raises(ValueError):
        fixed_point_law(4, 5)
    with pytest.raises(ValueError):
        fixed_point_law(4, -1)


@pytest.mark.parametrize("n", list(range(0, 21)) + [35, 50])
def test_fixed_point_law_sums_to_one(n):
    assert sum(fixed_point_law(n, m) for m in range(n + 1)) == 1


@pytest.mark.parametrize("n", range(0, 51, 5))
def test_fixed_point_law_factorial_bound(n):
    for m in range(n + 1):
        assert fixed_point_law(n, m) <= Fraction(1, factorial(m))


@pytest.mark.parametrize("n", range(1, 8))
def test_fixed_point_law_matches_exhaustive(n):
    census = exhaustive_class_census(n)
    for m in range(n + 1):
        count = sum(
            size for mu, size in census.items() if sum(1 for p in mu if p == 1) == m
        )
        assert fixed_point_law(n, m) == Fraction(count, factorial(n))


def test_qcycle_probability_known():
    assert qcycle_probability(4, 2, 2) == Fraction(1, 8)
    assert qcycle_probability(4, 2, 1) == Fraction(1, 4)
    assert qcycle_probability(5, 7, 1) == 0
    assert qcycle_probability(5, 7, 0) == 1
    with pytest.raises(SizeLimitError):
        qcycle_probability(13, 2, 1)


@pytest.mark.parametrize("n", range(1, 10))
def test_qcycle_probability_reduces_to_fixed_point_law(n):
    for m in range(n + 1):
        assert qcycle_probability(n, 1, m) == fixed_point_law(n, m)


def test_qcycle_bound_spot():
    for n in (6, 9, 12):
        for q in range(1, n + 1):
            for m in range(n + 1):
                assert qcycle_probability(n, q, m) <= Fraction(1, q**m * factorial(m))


def test_count_small_cycle_perms_known():
    for n in range(0, 12):
        assert count_small_cycle_perms(n, 1) == 1
        for j in range(n, n + 3):
            if j >= 1:
                assert count_small_cycle_perms(n, max(j, 1)) == factorial(n)
    assert count_small_cycle_perms(4, 2) == 10


@pytest.mark.parametrize("n", range(1, 8))
def test_count_small_cycle_perms_matches_exhaustive(n):
    expected = exhaustive_small_cycle_counts(n)
    for j in range(1, n + 1):
        assert count_small_cycle_perms(n, j) == expected[j]


def test_small_cycle_log_margin():
    # the rarity bound is asymptotic; small n may give positive margins,
    # large n must not (200 is comfortably past the threshold for j = 2, 3)
    assert small_cycle_log_margin(200, 2) < 0
    assert small_cycle_log_margin(200, 3) < 0
    with pytest.raises(ValueError):
        small_cycle_log_margin(50, 1)


def test_perm_state_basics():
    ident = PermState.identity(4)
    assert ident.mapping == (0, 1, 2, 3)
    swap = PermState((1, 0, 2, 3))
    assert swap.compose(swap) == ident
    with pytest.raises(ValueError):
        PermState((0, 0, 1))


def test_cycle_census_known():
    assert cycle_census(PermState.identity(5)).counts == {1: 5}
    assert cycle_census((1, 2, 3, 4, 0)).counts == {5: 1}
    assert cycle_census((1, 0, 3, 2)).counts == {2: 2}
    census = cycle_census((1, 0, 3, 2))
    assert census.cycle_type() == (2, 2)
    assert census.fixed_points() == 0


@given(st.permutations(list(range(8))))
def test_cycle_census_total(perm):
    census = cycle_census(tuple(perm))
    assert census.total_points == 8
    assert sum(census.cycle_type()) == 8


def test_sim_config_validation():
    with pytest.raises(ValueError):
        SimConfig(n=1, t=3)
    with pytest.raises(ValueError):
        SimConfig(n=5, t=-1)
    with pytest.raises(ValueError):
        SimConfig(n=5, t=3, sample_count=0)


def test_simulate_walk_zero_steps_is_identity():
    cfg = SimConfig(n=7, t=0, sample_count=1, seed=123)
    assert simulate_walk(cfg) == PermState.identity(7)


def test_simulate_walk_deterministic():
    cfg = SimConfig(n=9, t=40, sample_count=3, seed=2026)
    first = [simulate_walk(cfg, k) for k in range(3)]
    second = [simulate_walk(cfg, k) for k in range(3)]
    assert first == second
    # different trajectories almost surely differ after 40 steps
    assert len({state.mapping for state in first}) > 1


def test_single_trajectory_matches_batched_histogram():
    cfg = SimConfig(n=6, t=12, sample_count=40, seed=7)
    hist = empirical_fixed_point_hist(cfg, ref_rate=1.0)
    expected = Counter(
        cycle_census(simulate_walk(cfg, k)).fixed_points() for k in range(40)
    )
    assert hist.counts == dict(sorted(expected.items()))
    assert sum(hist.counts.values()) == 40


def test_two_point_walk_single_step_mass():
    # after one step the two-point deck is identity with probability 1/2
    cfg = SimConfig(n=2, t=1, sample_count=4000, seed=11)
    hist = empirical_fixed_point_hist(cfg, ref_rate=1.0)
    assert hist.counts.get(0, 0) + hist.counts.get(2, 0) == 4000
    assert abs(hist.counts.get(2, 0) / 4000 - 0.5) < 0.03


def test_histogram_degenerate_sample():
    cfg = SimConfig(n=5, t=3, sample_count=1, seed=0)
    hist = empirical_fixed_point_hist(cfg, ref_rate=2.0)
    assert sum(hist.counts.values()) == 1
    assert 0.0 <= hist.tv <= 1.0


def test_histogram_reference_rate_validation():
    cfg = SimConfig(n=5, t=3, sample_count=2, seed=0)
    with pytest.raises(ValueError):
        empirical_fixed_point_hist(cfg, ref_rate=0.0)
