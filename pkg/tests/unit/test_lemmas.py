import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis.strategies import floats

from kernid.design import Design
from kernid.lemmas import (
    GridSpec, LemmaId, SamplingMode, ConditionNotMetError,
    decay_ratio, gaussian_gap_ratio, shifted_gap_ratio, anchored_gap_ratio,
    power_gap_ratio, exp_pair_matrix, absolute_permanent,
    relative_rank_margin, check_exponential_pair_independence,
    check_decay_monotonicity, check_gap_ratio_monotonicity,
    check_power_determinant, check_gaussian_determinant, check_feature_rank,
    run_checks,
)
from kernid.search import InvalidBoundsError


@pytest.fixture
def small_grid():
    return GridSpec(samples=2000, rng_seed=1)


def test_decay_ratio_value():
    assert decay_ratio(1.0, 1.0) == pytest.approx(1.0 / (math.e - 1.0))


def test_gap_ratios_equal_one_at_zero_offset():
    assert gaussian_gap_ratio(0.0, 0.7, 1.3) == pytest.approx(1.0)
    assert shifted_gap_ratio(0.0, 1.3, 2.0) == pytest.approx(1.0)


def test_shifted_gap_ratio_increases_with_length_scale():
    assert shifted_gap_ratio(1.0, 2.0, 1.0) < shifted_gap_ratio(1.0, 2.0, 2.0)


def test_reciprocal_identity_of_anchored_ratio():
    product = anchored_gap_ratio(-1.0, 3.0, 1.7) * anchored_gap_ratio(
        1.0, 2.0, 1.7)
    assert product == pytest.approx(1.0, abs=1e-12)


def test_shifted_ratio_does_not_satisfy_reciprocal_identity():
    assert 1.0 / shifted_gap_ratio(-1.0, 3.0, 1.7) == pytest.approx(
        2.0912, abs=1e-4)
    assert shifted_gap_ratio(1.0, 2.0, 1.7) == pytest.approx(0.8848,
                                                             abs=1e-4)


@given(x=floats(min_value=0.01, max_value=0.49),
       a=floats(min_value=1.1, max_value=3.0))
def test_power_gap_ratio_increases(x, a):
    b = a + 1.0
    assert power_gap_ratio(x, a, b) < power_gap_ratio(x + 0.5, a, b)


def test_exp_pair_matrix_layout():
    matrix = exp_pair_matrix(1.0, 2.0, 0.0, 1.0)
    assert matrix.shape == (2, 2)
    assert np.allclose(matrix, [[1.0, 1.0], [math.e, math.e ** 2]])


def test_absolute_permanent():
    assert absolute_permanent(np.array([[1.0, -2.0], [3.0, 4.0]])) == 10.0
    assert absolute_permanent(np.eye(3)) == 1.0


def test_relative_rank_margin():
    assert relative_rank_margin(np.eye(3)) == pytest.approx(1.0)
    assert relative_rank_margin(np.ones((2, 2))) < 1e-12


def test_grid_spec_validation():
    with pytest.raises(ValueError):
        GridSpec(samples=0)
    with pytest.raises(ValueError):
        GridSpec(samples_per_axis=1)
    with pytest.raises(InvalidBoundsError):
        GridSpec(ranges={'x': (2.0, 1.0)})


def test_grid_spec_range_override():
    grid = GridSpec(ranges={'t': (1.0, 2.0)})
    assert grid.range_for('t', (0.0, 5.0)) == (1.0, 2.0)
    assert grid.range_for('s', (0.0, 5.0)) == (0.0, 5.0)


@pytest.mark.parametrize('check,lemma_id', [
    (check_exponential_pair_independence, LemmaId.EXP_PAIR),
    (check_decay_monotonicity, LemmaId.DECAY_MONOTONE),
    (check_gap_ratio_monotonicity, LemmaId.GAP_RATIO_MONOTONE),
    (check_power_determinant, LemmaId.POWER_DETERMINANT),
    (check_gaussian_determinant, LemmaId.GAUSSIAN_DETERMINANT),
])
def test_checks_pass_on_random_samples(check, lemma_id, small_grid):
    result = check(small_grid)
    assert result.lemma_id is lemma_id
    assert result.cases_run > 0
    assert result.passed, result.violations[:3]


def test_periodic_feature_rank(small_grid, identifiable_design):
    result = check_feature_rank([identifiable_design], 7.0, small_grid)
    assert result.lemma_id is LemmaId.PERIODIC_RANK
    assert result.cases_run > 0
    assert result.passed


def test_two_rbf_feature_rank(small_grid):
    result = check_feature_rank([Design.from_points([0, 1, 2, 3])], None,
                                small_grid)
    assert result.lemma_id is LemmaId.TWO_RBF_RANK
    assert result.passed


def test_feature_rank_needs_a_certified_design(small_grid, aligned_design):
    with pytest.raises(ConditionNotMetError) as e:
        check_feature_rank([aligned_design], 7.0, small_grid)
    assert e.value.design_index == 0


def test_unseparated_samples_are_reported_as_violations():
    # Without a minimum gap the grid pairs every t with itself.
    grid = GridSpec(mode=SamplingMode.GRID, samples_per_axis=3, min_gap=0.0)
    result = check_decay_monotonicity(grid)
    assert result.cases_run == 27
    assert not result.passed
    assert len(result.violations) == 9
    assert all(v.inputs['t1'] == v.inputs['t2'] for v in result.violations)


def test_checks_are_reproducible_under_a_seed():
    first = check_power_determinant(GridSpec(samples=500, rng_seed=9))
    second = check_power_determinant(GridSpec(samples=500, rng_seed=9))
    assert first == second


def test_suite_runs_every_check():
    results = run_checks(GridSpec(samples=500, rng_seed=1))
    assert [r.lemma_id for r in results] == [
        LemmaId.EXP_PAIR, LemmaId.DECAY_MONOTONE,
        LemmaId.GAP_RATIO_MONOTONE, LemmaId.PERIODIC_RANK,
        LemmaId.POWER_DETERMINANT, LemmaId.TWO_RBF_RANK,
        LemmaId.GAUSSIAN_DETERMINANT]
    assert all(r.passed for r in results)


def test_suite_on_a_grid():
    results = run_checks(GridSpec(mode=SamplingMode.GRID,
                                  samples_per_axis=4))
    assert all(r.passed for r in results)


@pytest.mark.slow
def test_full_suite_has_no_violations():
    results = run_checks(GridSpec(samples=10000, rng_seed=1))
    for result in results:
        assert result.passed, (result.lemma_id, result.violations[:3])
