"""scikit-learn style wrappers so the analyses compose with pipelines and parameter search."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import meanfield, sim
from ._validation import check_graph, check_lambdas, check_state_vector, check_stats
from .graph.rewire import rewire_to_assortativity
from .graph.stats import assortativity, degree_law, expected_degree, joint_degree_stats
from .params import SisParams, check_rule, check_sampler


class MeanFieldSIS(BaseEstimator):
    """Mean-field analysis of the SIS model for one adoption rule.

    Parameters
    ----------
    rule : {"non-monophilic", "monophilic"}
    sampler : {"X", "Y", "Z"}
        Step-1 sampler; changes the transient of :meth:`trajectory` but not
        the stationary prevalence returned by :meth:`predict`.
    tol : float
        Fixed-point tolerance for the stationary solver.
    max_iter : int

    Attributes
    ----------
    stats_ : JointDegreeStats
    threshold_ : float
        ``D / E[d]`` with ``d`` the degree of an observed agent.
    expected_degree_ : float
    weights_ : ndarray
        Step-1 drift multipliers per degree class.
    """

    def __init__(self, rule="monophilic", sampler="X", tol=1e-10, max_iter=1_000_000):
        self.rule = rule
        self.sampler = sampler
        self.tol = tol
        self.max_iter = max_iter

    def fit(self, G, y=None):
        check_rule(self.rule)
        check_sampler(self.sampler)
        self.stats_ = check_stats(G)
        self.threshold_ = meanfield.critical_threshold(self.stats_, self.rule)
        self.expected_degree_ = meanfield.expected_observed_degree(self.stats_, self.rule)
        self.weights_ = meanfield.step1_weights(self.stats_, self.sampler)
        return self

    def predict(self, lambdas):
        """Stationary infected fraction at each effective spreading rate."""
        check_is_fitted(self, "stats_")
        lam = check_lambdas(lambdas)
        return np.array([meanfield.stationary_solve(l, self.stats_, self.rule, tol=self.tol,
                                                    max_iters=self.max_iter).rho for l in lam])

    def stationary_state(self, lam):
        check_is_fitted(self, "stats_")
        return meanfield.stationary_solve(lam, self.stats_, self.rule, tol=self.tol,
                                          max_iters=self.max_iter)

    def trajectory(self, x0, nu, delta, n_steps, n_nodes=10_000, record_every=1):
        check_is_fitted(self, "stats_")
        x0 = check_state_vector(x0, len(self.stats_.degrees))
        params = SisParams(nu, delta, self.stats_.max_degree)
        return meanfield.iterate(x0, self.stats_, params, self.rule, self.weights_,
                                 n_nodes, n_steps, record_every)


class MonteCarloSIS(BaseEstimator):
    """Monte Carlo terminal prevalence over a grid of spreading rates.

    ``predict`` returns the seed-averaged terminal infected fraction; the
    full table and threshold estimate are kept on ``result_``.
    """

    def __init__(self, rule="monophilic", sampler="X", nu=1.0, init_fraction=0.1, sweeps=200,
                 tail_fraction=0.1, rho_cut=0.01, seeds=(0,), n_jobs=1):
        self.rule = rule
        self.sampler = sampler
        self.nu = nu
        self.init_fraction = init_fraction
        self.sweeps = sweeps
        self.tail_fraction = tail_fraction
        self.rho_cut = rho_cut
        self.seeds = seeds
        self.n_jobs = n_jobs

    def fit(self, G, y=None):
        check_rule(self.rule)
        check_sampler(self.sampler)
        self.graph_ = check_graph(G)
        self.n_nodes_ = self.graph_.n_nodes
        return self

    def predict(self, lambdas):
        check_is_fitted(self, "graph_")
        lam = check_lambdas(lambdas, increasing=True)
        cfg = sim.SweepConfig(nu=self.nu, init_fraction=self.init_fraction, sweeps=self.sweeps,
                              tail_fraction=self.tail_fraction, rho_cut=self.rho_cut)
        self.result_ = sim.estimate_threshold(self.graph_, self.rule, self.sampler, lam,
                                              self.seeds, cfg, workers=self.n_jobs)
        self.threshold_ = self.result_.lambda_star
        return self.result_.mean


class AssortativityRewirer(TransformerMixin, BaseEstimator):
    """Degree-preserving rewiring toward a target assortativity.

    ``fit`` records the input assortativity; ``transform`` returns the
    rewired graph and stores the reached value on ``assortativity_``.
    """

    def __init__(self, target_r=0.0, tolerance=0.01, max_swaps=None, random_state=None):
        self.target_r = target_r
        self.tolerance = tolerance
        self.max_swaps = max_swaps
        self.random_state = random_state

    def fit(self, G, y=None):
        g = check_graph(G)
        self.assortativity_in_ = assortativity(joint_degree_stats(g))
        return self

    def transform(self, G):
        check_is_fitted(self, "assortativity_in_")
        rng = np.random.default_rng(self.random_state)
        res = rewire_to_assortativity(check_graph(G), self.target_r, self.max_swaps,
                                      self.tolerance, rng)
        self.assortativity_ = res.assortativity
        self.converged_ = res.converged
        self.accepted_swaps_ = res.accepted_swaps
        return res.graph


class DegreeLawTransformer(TransformerMixin, BaseEstimator):
    """Map a graph to the exact degree laws of its X, Y and Z samplers.

    ``transform`` returns an array of shape ``(3, K)`` over ``degrees_``.
    """

    def fit(self, G, y=None):
        return self

    def transform(self, G):
        stats = check_stats(G)
        self.degrees_ = stats.degrees
        laws = np.vstack([degree_law(stats, s) for s in "XYZ"])
        self.expected_degrees_ = np.array([expected_degree(stats, law) for law in laws])
        return laws
