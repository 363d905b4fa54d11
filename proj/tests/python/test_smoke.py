"""Smoke tests for the python bindings: the main operations are importable and
produce sane values; heavy verification lives in the C++ suites."""

import math

import pytest

import critforest as cf


def test_version():
    assert cf.__version__


def test_stable_density():
    g0 = cf.eval_g(0.0)
    assert abs(g0 - 0.25881940379287) < 1e-9
    assert cf.integrate_g(-10.0, 10.0) == pytest.approx(1.0, abs=2e-2)


def test_counts_and_probability():
    table = cf.ForestCountTable.build(10)
    assert math.exp(table.log_count(3, 2)) == pytest.approx(3.0)
    assert math.exp(table.log_count(5, 3)) == pytest.approx(110.0)
    assert cf.acyclic_probability(table, 3, 0.5) == pytest.approx(0.875)
    with pytest.raises(ValueError):
        table.log_count(4, 9)


def test_profile_matches_table():
    table = cf.ForestCountTable.build(50)
    prof = cf.AcyclicProbabilityProfile.build(50, 0.02)
    direct = math.log(cf.acyclic_probability(table, 50, 0.02))
    assert prof.log_acyclic(50) == pytest.approx(direct, abs=1e-10)


def test_drift_values():
    a1 = cf.eval_alpha(1.0, 0.0)
    assert 0.0 < a1 < 2.0
    assert cf.eval_alpha(2.0, 0.0) > a1
    g1, g3, g5 = cf.gamma_limits(0.0)
    assert g5 == pytest.approx(g3)
    assert g1 > 0


def test_samplers_and_exploration():
    rng = cf.Rng(7)
    edges = cf.sample_forest_nm(30, 12, rng)
    assert len(edges) == 12
    assert cf.is_forest(30, edges)
    lens = cf.excursion_lengths(30, edges)
    assert sum(lens) == 30
    assert sorted(lens, reverse=True) == list(lens)
    assert lens == cf.component_sizes(30, edges)

    tree = cf.sample_uniform_tree(12, rng)
    assert len(tree) == 11
    order, stacks = cf.explore(12, tree)
    assert sorted(order) == list(range(12))
    assert stacks[0] == 0 and stacks[-1] == 0


def test_kernel_chain():
    prof = cf.AcyclicProbabilityProfile.build(40, 1.0 / 40.0)
    cache = cf.SeparatedProbCache(prof, 0, 39, 20)
    cache.prefill()
    probs = cf.transition_kernel(cache, 40, 0, 1)
    assert sum(probs) == pytest.approx(1.0, abs=1e-12)
    rng = cf.Rng(11)
    z = cf.simulate_kernel_chain(cache, 40, 40, rng)
    assert z[0] == 0 and min(z) >= 0


def test_diffusion():
    spec = cf.AlphaGridSpec()
    spec.b_max = 2.0
    spec.b_step = 0.1
    spec.lambda_min = -4.0
    spec.lambda_max = 0.5
    spec.lambda_step = 0.25
    table = cf.AlphaTable.build(spec)
    rng = cf.Rng(5)
    path = cf.simulate_Z(0.0, 2.0, 1e-3, rng, table)
    assert path[0] == 0.0
    assert min(path) >= 0.0
    lengths = cf.diffusion_excursion_lengths(path, 1e-3, 2e-3)
    assert all(b <= a for a, b in zip(lengths, lengths[1:]))


def test_statistics():
    assert cf.ks_distance([1.0, 2.0], [1.0, 2.0]) == 0.0
    assert cf.weak_majorises([3.0, 2.0, 1.0], [2.0, 2.0, 2.0])
    assert not cf.weak_majorises([1.0, 1.0], [3.0, 0.0])
    assert cf.l2_tail([3.0, 2.0, 1.0], 1) == pytest.approx(5.0)
