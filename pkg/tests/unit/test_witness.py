import numpy as np
import pytest
from hypothesis import given, assume
from hypothesis.strategies import floats

from kernid import constants
from kernid.design import (
    Design, distance_set, check_rbf_periodic_condition,
    check_two_rbf_condition,
)
from kernid.kernels import (
    MixedKernelSpec, KernelFamily, DimensionMismatch, RbfParams, TwoRbf,
    build_gram, rbf_gram,
)
from kernid.search import InvalidBoundsError
from kernid.witness import (
    WitnessSearchConfig, WitnessFound, NoWitness, InfeasibleError,
    gram_residual, find_witness, solve_periodic_counterexample,
    reference_examples, reproduce_reference_examples,
)


def offgrid_spec(values):
    return MixedKernelSpec.from_vector(
        KernelFamily.RBF_PERIODIC,
        [values['sigma'], values['ell'], values['tau'], values['s']],
        p=constants.OFFGRID_PERIOD)


def test_all_reference_examples_reproduce():
    results = reproduce_reference_examples()
    assert [r.example_id for r in results] == [
        'rbf-periodic-aligned', 'rbf-periodic-offgrid',
        'two-rbf-octahedron']
    assert all(r.passed for r in results)


def test_reference_deviations():
    results = dict((r.example_id, r) for r in reproduce_reference_examples())
    assert results['rbf-periodic-aligned'].max_abs_deviation <= 1e-12
    assert results['rbf-periodic-aligned'].cross_deviation <= 1e-12
    assert results['rbf-periodic-offgrid'].max_abs_deviation <= 5e-7
    assert results['rbf-periodic-offgrid'].cross_deviation <= 1e-6
    assert results['two-rbf-octahedron'].max_abs_deviation <= 1e-9


def test_octahedron_example_uses_ordered_components():
    example = [e for e in reference_examples()
               if e.example_id == 'two-rbf-octahedron'][0]
    assert example.first.variant.first.sigma == pytest.approx(
        32.0 * np.sqrt(15.0))
    assert example.second.variant.first.sigma == pytest.approx(
        25.0 * np.sqrt(15.0))


def test_printed_offgrid_sets_share_a_gram(offgrid_design):
    first = offgrid_spec(constants.OFFGRID_FIRST)
    second = offgrid_spec(constants.OFFGRID_SECOND)
    target = build_gram(second, offgrid_design)
    assert gram_residual(first, target, offgrid_design) <= 1e-6


def test_gram_residual_of_identical_specs_is_zero(sample_spec,
                                                  identifiable_design):
    target = build_gram(sample_spec, identifiable_design)
    assert gram_residual(sample_spec, target, identifiable_design) == 0.0


def test_gram_residual_checks_dimensions(sample_spec, identifiable_design):
    with pytest.raises(DimensionMismatch):
        gram_residual(sample_spec, np.eye(3), identifiable_design)


def test_solved_counterexample_matches_printed_pair(offgrid_design):
    pair = solve_periodic_counterexample(
        constants.OFFGRID_DESIGN, constants.OFFGRID_PERIOD,
        coefficients=constants.OFFGRID_COEFFICIENTS)
    target = build_gram(pair.second, offgrid_design)
    assert gram_residual(pair.first, target, offgrid_design) <= 1e-7
    expected_first = offgrid_spec(constants.OFFGRID_FIRST).to_vector()
    expected_second = offgrid_spec(constants.OFFGRID_SECOND).to_vector()
    assert pair.first.to_vector() == pytest.approx(expected_first, rel=1e-6)
    assert pair.second.to_vector() == pytest.approx(expected_second,
                                                    rel=1e-6)
    assert pair.second.variant.periodic.tau ** 2 == pytest.approx(3.0)
    assert pair.coefficients == constants.OFFGRID_COEFFICIENTS


def test_counterexample_tau_scale_is_configurable(offgrid_design):
    pair = solve_periodic_counterexample(
        constants.OFFGRID_DESIGN, constants.OFFGRID_PERIOD,
        coefficients=constants.OFFGRID_COEFFICIENTS, tau_sq=1.0)
    assert pair.second.variant.periodic.tau == pytest.approx(1.0)
    target = build_gram(pair.second, offgrid_design)
    assert gram_residual(pair.first, target, offgrid_design) <= 1e-7


def test_counterexample_infeasible_when_all_lags_are_multiples():
    with pytest.raises(InfeasibleError):
        solve_periodic_counterexample([0.0, 4.0, 8.0, 12.0], 4.0,
                                      coefficients=[1.0, -3.0, 6.0, -2.0])


@pytest.mark.parametrize('x4,p', [
    ([0.0, 1.0, 1.0, 3.0], 4.0),
    ([0.0, 1.0, 2.0], 4.0),
    ([0.0, 1.0, 2.0, 3.0], 0.0),
])
def test_counterexample_input_validation(x4, p):
    with pytest.raises(ValueError):
        solve_periodic_counterexample(x4, p)


def test_search_config_validation():
    with pytest.raises(ValueError):
        WitnessSearchConfig(starts=0)
    with pytest.raises(ValueError):
        WitnessSearchConfig(residual_tol=0.0)


def test_find_witness_rejects_bad_bounds(sample_spec, identifiable_design):
    config = WitnessSearchConfig(starts=1, param_bounds=(2.0, -2.0))
    with pytest.raises(InvalidBoundsError):
        find_witness(sample_spec, identifiable_design, config)


def test_witness_search_is_deterministic(offgrid_design):
    target = offgrid_spec(constants.OFFGRID_FIRST)
    serial = find_witness(target, offgrid_design, WitnessSearchConfig(
        starts=4, max_iters=300, rng_seed=3, max_workers=1))
    parallel = find_witness(target, offgrid_design, WitnessSearchConfig(
        starts=4, max_iters=300, rng_seed=3, max_workers=4))
    assert serial.outcome == parallel.outcome
    assert serial.starts_converged == parallel.starts_converged


def test_identifiable_design_yields_no_witness(sample_spec,
                                               identifiable_design):
    report = find_witness(sample_spec, identifiable_design,
                          WitnessSearchConfig(starts=16, rng_seed=0))
    assert not report.found
    assert isinstance(report.outcome, NoWitness)
    assert report.target_params == sample_spec


@pytest.mark.slow
def test_witness_on_aligned_design(aligned_design):
    target = MixedKernelSpec.from_vector(
        KernelFamily.RBF_PERIODIC, [1.0, 1.0, 1.0, 1.0],
        p=constants.ALIGNED_PERIOD)
    config = WitnessSearchConfig()
    report = find_witness(target, aligned_design, config)
    assert report.found
    outcome = report.outcome
    assert outcome.distance >= config.distinct_tol
    assert outcome.residual <= config.residual_tol
    assert outcome.params.variant.rbf.sigma == pytest.approx(1.0, rel=1e-3)
    assert outcome.params.variant.periodic.tau == pytest.approx(1.0,
                                                                rel=1e-3)
    # The reported residual is the one a fresh rebuild gives.
    target_gram = build_gram(target, aligned_design)
    assert gram_residual(outcome.params, target_gram,
                         aligned_design) == pytest.approx(
        outcome.residual, abs=1e-12)


@pytest.mark.slow
def test_witness_recovers_offgrid_second_set(offgrid_design):
    target = offgrid_spec(constants.OFFGRID_FIRST)
    expected = offgrid_spec(constants.OFFGRID_SECOND).to_vector()
    found = []
    for seed in range(5):
        report = find_witness(target, offgrid_design,
                              WitnessSearchConfig(rng_seed=seed))
        if report.found:
            found.append(report.outcome)
    assert len(found) >= 4
    for outcome in found:
        assert isinstance(outcome, WitnessFound)
        assert outcome.residual <= constants.DEFAULT_RESIDUAL_TOL
    closest = min(np.max(np.abs(o.params.to_vector() - expected) / expected)
                  for o in found)
    assert closest <= 1e-3


def _fuzzed_cases(count, rng):
    # Every design holds lags 1, 2 and 3, so no length-scale drawn below
    # leaves the RBF part numerically flat.
    cases = []
    while len(cases) < count:
        extra = rng.choice(np.arange(4, 13), size=int(rng.integers(0, 3)),
                           replace=False).tolist()
        design = Design.from_points(sorted([0, 1, 2, 3] + extra))
        distances = distance_set(design)
        if len(cases) % 2 == 0:
            p = float(rng.integers(3, 9))
            if not check_rbf_periodic_condition(distances, p).holds:
                continue
            target = MixedKernelSpec.from_vector(
                KernelFamily.RBF_PERIODIC,
                [rng.uniform(0.5, 2.0), rng.uniform(1.0, 3.0),
                 rng.uniform(0.5, 2.0), rng.uniform(0.7, 2.0)], p=p)
        else:
            if not check_two_rbf_condition(distances).holds:
                continue
            ell1 = rng.uniform(0.8, 1.5)
            target = MixedKernelSpec.from_vector(
                KernelFamily.TWO_RBF,
                [rng.uniform(0.5, 2.0), ell1, rng.uniform(0.5, 2.0),
                 ell1 * rng.uniform(2.0, 3.0)])
        cases.append((target, design))
    return cases


@pytest.mark.slow
def test_no_witness_on_designs_meeting_a_condition():
    rng = np.random.default_rng(2024)
    config = WitnessSearchConfig(starts=8, max_iters=600)
    for target, design in _fuzzed_cases(200, rng):
        report = find_witness(target, design, config)
        assert not report.found, (target, design.points)


@given(sigma1=floats(min_value=0.1, max_value=10),
       ell1=floats(min_value=0.1, max_value=10),
       sigma2=floats(min_value=0.1, max_value=10),
       ell2=floats(min_value=0.1, max_value=10))
def test_residual_ignores_component_order(sigma1, ell1, sigma2, ell2):
    assume(abs(ell1 - ell2) > 1e-6 * max(ell1, ell2))
    design = Design.from_points([0.0, 1.0, 2.5, 4.0])
    target = build_gram(MixedKernelSpec.from_vector(
        KernelFamily.TWO_RBF, [1.0, 0.5, 2.0, 2.0]), design)
    a = RbfParams(sigma=sigma1, ell=ell1)
    b = RbfParams(sigma=sigma2, ell=ell2)
    forward = MixedKernelSpec(variant=TwoRbf.canonical(a, b))
    swapped = MixedKernelSpec(variant=TwoRbf.canonical(b, a))
    assert gram_residual(swapped, target, design) == gram_residual(
        forward, target, design)
    summed = rbf_gram(a, design).entries + rbf_gram(b, design).entries
    assert np.allclose(build_gram(swapped, design).entries, summed,
                       rtol=1e-14, atol=0.0)
