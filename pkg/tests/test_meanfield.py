import numpy as np
import pytest
from scipy.optimize import brentq

from sisnet import meanfield
from sisnet.errors import InvalidArgumentError, NonConvergenceError
from sisnet.graph import DegreeDistribution, joint_degree_stats, uncorrelated_stats
from sisnet.params import MONOPHILIC, NON_MONOPHILIC, RULES, SisParams

# --- thresholds ----------------------------------------------------------------


def test_star_thresholds(star):
    s = joint_degree_stats(star)
    assert meanfield.critical_threshold(s, NON_MONOPHILIC) == pytest.approx(2.5, abs=1e-12)
    assert meanfield.critical_threshold(s, MONOPHILIC) == pytest.approx(20 / 17, abs=1e-12)


def test_regular_thresholds(ring4):
    s = joint_degree_stats(ring4)
    for rule in RULES:
        assert meanfield.critical_threshold(s, rule) == pytest.approx(1.0, abs=1e-14)


def test_threshold_ordering(powerlaw_graph, small_graph):
    for g in (powerlaw_graph, small_graph):
        s = joint_degree_stats(g)
        assert meanfield.critical_threshold(s, MONOPHILIC) <= meanfield.critical_threshold(
            s, NON_MONOPHILIC)


# --- drift and weights ---------------------------------------------------------


def test_drift_zero_state(small_graph):
    s = joint_degree_stats(small_graph)
    for rule in RULES:
        np.testing.assert_array_equal(
            meanfield.drift(np.zeros(len(s.degrees)), s, SisParams(0.7, 0.3, 6), rule), 0.0)


def test_drift_all_infected_no_infection(small_graph):
    s = joint_degree_stats(small_graph)
    d = meanfield.drift(np.ones(len(s.degrees)), s, SisParams(0.0, 0.3, 6), MONOPHILIC)
    np.testing.assert_allclose(d, -0.3, atol=1e-15)


def test_drift_regular_closed_form(ring4):
    s = joint_degree_stats(ring4)
    p = SisParams(0.8, 0.4, 4)
    for rho in (0.1, 0.3, 0.5, 0.9):
        expect = (1 - rho) * p.nu * rho - rho * p.delta
        for rule in RULES:
            assert meanfield.drift([rho], s, p, rule)[0] == pytest.approx(expect, abs=1e-15)
    assert meanfield.drift([1 - 1 / p.lam], s, p, MONOPHILIC)[0] == pytest.approx(0, abs=1e-15)


def test_step1_weights(powerlaw_graph):
    s = joint_degree_stats(powerlaw_graph)
    p = s.degree_dist.probs
    np.testing.assert_allclose(meanfield.step1_weights(s, "X"), 1.0)
    # every weight vector is a selection rate relative to uniform, so averages to one
    for sampler in "XYZ":
        assert np.dot(p, meanfield.step1_weights(s, sampler)) == pytest.approx(1.0, abs=1e-12)


def test_uncorrelated_z_weights_equal_y_weights():
    dist = DegreeDistribution.from_probs([1, 2, 5, 9], [0.4, 0.3, 0.2, 0.1])
    s = uncorrelated_stats(dist)
    np.testing.assert_allclose(meanfield.step1_weights(s, "Z"), meanfield.step1_weights(s, "Y"),
                               atol=1e-12)
    printed = meanfield.step1_weights(s, "Z", printed_z_form=True)
    assert not np.allclose(printed, meanfield.step1_weights(s, "Y"))


# --- iterate ---------------------------------------------------------------------


def test_iterate_zero_stays_zero(small_graph):
    s = joint_degree_stats(small_graph)
    tr = meanfield.iterate(np.zeros(len(s.degrees)), s, SisParams(1.0, 0.2, 6), MONOPHILIC,
                           "Z", 300, 5000, 100)
    assert np.all(tr.x == 0)


def test_iterate_matches_python_loop(small_graph):
    # independent route: the recursion written out with numpy
    s = joint_degree_stats(small_graph)
    p = SisParams(0.9, 0.3, 6)
    x = np.linspace(0.05, 0.5, len(s.degrees))
    tr = meanfield.iterate(x, s, p, MONOPHILIC, "Y", 300, 200, 200)
    w = s.degrees / np.dot(s.degrees, s.degree_dist.probs)
    theta_w = s.cond @ s.degree_dist.probs
    for _ in range(200):
        theta = np.dot(theta_w, x)
        x = x + w * ((1 - x) * p.nu * s.degrees * theta / 6 - x * p.delta) / 300
    np.testing.assert_allclose(tr.final, x, atol=1e-14)


@pytest.mark.parametrize("sampler", ["X", "Y", "Z"])
def test_iterate_regular_converges(ring4, sampler):
    s = joint_degree_stats(ring4)
    M = ring4.n_nodes
    p = SisParams.from_lambda(2.0, 4)
    tr = meanfield.iterate([0.01], s, p, NON_MONOPHILIC, sampler, M, 10_000 * M, 1000 * M)
    assert tr.final[0] == pytest.approx(0.5, abs=1e-6)


@pytest.mark.parametrize("rule", RULES)
def test_iterate_fixed_point_sampler_invariance(small_graph, rule):
    s = joint_degree_stats(small_graph)
    p = SisParams(1.0, 0.25, 6)
    x0 = np.full(len(s.degrees), 0.1)
    finals = [meanfield.iterate(x0, s, p, rule, w, 100, 200_000, 200_000).final for w in "XYZ"]
    for f in finals[1:]:
        np.testing.assert_allclose(f, finals[0], atol=1e-6)
    np.testing.assert_allclose(finals[0], meanfield.stationary_solve(4.0, s, rule).x, atol=1e-6)


def test_iterate_rejects_bad_state(small_graph):
    s = joint_degree_stats(small_graph)
    with pytest.raises(InvalidArgumentError):
        meanfield.iterate(np.full(len(s.degrees), 1.5), s, SisParams(1, 1, 6), MONOPHILIC)


# --- stationary map and solver ----------------------------------------------------


@pytest.mark.parametrize("rule", RULES)
def test_stationary_map_monotone_concave(powerlaw_graph, rule):
    s = joint_degree_stats(powerlaw_graph)
    h = 1e-3
    t = np.arange(0, 1 - 2 * h + 1e-12, h)
    H0, H1, H2 = (meanfield.stationary_map(t + i * h, 3.0, s, rule) for i in range(3))
    assert np.all(H1 >= H0)
    assert np.all(H1 >= (H0 + H2) / 2 - 1e-15)


@pytest.mark.parametrize("rule", RULES)
def test_stationary_map_slope_at_zero(powerlaw_graph, rule):
    s = joint_degree_stats(powerlaw_graph)
    lam = 3.0
    fd = meanfield.stationary_map(1e-8, lam, s, rule) / 1e-8
    expect = lam * meanfield.expected_observed_degree(s, rule) / s.max_degree
    assert fd == pytest.approx(expect, rel=1e-4)


@pytest.mark.parametrize("rule", RULES)
@pytest.mark.parametrize("lam", [1.5, 2.0, 4.0])
def test_regular_closed_form(ring4, rule, lam):
    sp = meanfield.stationary_solve(lam, joint_degree_stats(ring4), rule)
    assert sp.rho == pytest.approx(1 - 1 / lam, abs=1e-8)
    assert sp.theta == pytest.approx(1 - 1 / lam, abs=1e-8)


def test_subcritical_is_zero(powerlaw_graph):
    s = joint_degree_stats(powerlaw_graph)
    for rule in RULES:
        lam_star = meanfield.critical_threshold(s, rule)
        for lam in (0.5 * lam_star, lam_star):
            sp = meanfield.stationary_solve(lam, s, rule)
            assert sp.rho == 0 and sp.theta == 0


@pytest.mark.parametrize("rule", RULES)
def test_solver_matches_root_finder(powerlaw_graph, rule):
    # independent route: bracketed root of H(theta) - theta on (0, 1]
    s = joint_degree_stats(powerlaw_graph)
    lam_star = meanfield.critical_threshold(s, rule)
    for lam in (1.2 * lam_star, 2 * lam_star, 5 * lam_star):
        root = brentq(lambda t: meanfield.stationary_map(t, lam, s, rule) - t, 1e-9, 1.0,
                      xtol=1e-15)
        assert meanfield.stationary_solve(lam, s, rule).theta == pytest.approx(root, abs=1e-8)


def test_solver_nonconvergence(powerlaw_graph):
    s = joint_degree_stats(powerlaw_graph)
    lam = 1.0001 * meanfield.critical_threshold(s, MONOPHILIC)
    with pytest.raises(NonConvergenceError) as info:
        meanfield.stationary_solve(lam, s, MONOPHILIC, tol=1e-15, max_iters=10)
    assert info.value.iterations == 10


def test_case2_curve_dominates_case1(powerlaw_graph):
    s = joint_degree_stats(powerlaw_graph)
    grid = np.linspace(0.5, 40, 80)
    c1 = meanfield.rho_lambda_curve(s, NON_MONOPHILIC, grid)
    c2 = meanfield.rho_lambda_curve(s, MONOPHILIC, grid)
    assert np.all(c2 >= c1 - 1e-9)


def test_onset():
    assert meanfield.onset([1, 2, 3], [0, 0, 0.1]) == 3
    assert np.isnan(meanfield.onset([1, 2], [0, 0]))
