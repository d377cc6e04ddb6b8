import networkx as nx
import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from sisnet.estimators import (
    AssortativityRewirer,
    DegreeLawTransformer,
    MeanFieldSIS,
    MonteCarloSIS,
)
from sisnet.errors import InvalidArgumentError
from sisnet.graph import DegreeDistribution


def test_meanfield_estimator_star(star):
    est = MeanFieldSIS(rule="monophilic").fit(star)
    assert est.threshold_ == pytest.approx(20 / 17, abs=1e-12)
    assert est.expected_degree_ == pytest.approx(17 / 5, abs=1e-12)
    rho = est.predict([1.0, 3.0, 10.0])
    assert rho[0] == 0 and 0 < rho[1] < rho[2] < 1


def test_meanfield_estimator_params_and_clone():
    est = MeanFieldSIS(rule="non-monophilic", sampler="Y", tol=1e-9)
    assert est.get_params() == {"rule": "non-monophilic", "sampler": "Y", "tol": 1e-9,
                                "max_iter": 1_000_000}
    c = clone(est).set_params(sampler="Z")
    assert c.sampler == "Z" and est.sampler == "Y"


def test_meanfield_estimator_validation(star):
    with pytest.raises(NotFittedError):
        MeanFieldSIS().predict([1.0])
    with pytest.raises(InvalidArgumentError):
        MeanFieldSIS(rule="nope").fit(star)
    with pytest.raises(InvalidArgumentError):
        MeanFieldSIS().fit(star).predict([-1.0])


def test_meanfield_accepts_networkx_and_distributions(small_graph):
    nxg = nx.Graph()
    nxg.add_edges_from(small_graph.edges.tolist())
    a = MeanFieldSIS().fit(nxg).threshold_
    b = MeanFieldSIS().fit(small_graph).threshold_
    assert a == pytest.approx(b, abs=1e-14)
    dist = DegreeDistribution.from_probs([1, 2, 3], [0.5, 0.3, 0.2])
    est = MeanFieldSIS(rule="non-monophilic").fit(dist)
    assert est.threshold_ == pytest.approx(3 / 1.7, abs=1e-12)


def test_meanfield_trajectory(small_graph):
    est = MeanFieldSIS(sampler="Z").fit(small_graph)
    K = len(est.stats_.degrees)
    tr = est.trajectory(np.full(K, 0.1), 1.0, 0.25, 50_000, n_nodes=100, record_every=50_000)
    np.testing.assert_allclose(tr.final, est.stationary_state(4.0).x, atol=1e-6)
    with pytest.raises(InvalidArgumentError):
        est.trajectory(np.zeros(K + 1), 1.0, 0.25, 10)


def test_monte_carlo_estimator(small_graph):
    est = MonteCarloSIS(sweeps=20, seeds=(0, 1)).fit(small_graph)
    rho = est.predict([0.5, 6.0])
    assert rho.shape == (2,)
    assert rho[0] < est.rho_cut < rho[1]
    assert est.threshold_ == 6.0
    with pytest.raises(InvalidArgumentError):
        est.predict([2.0, 1.0])


def test_rewirer(powerlaw_graph):
    rw = AssortativityRewirer(target_r=-0.1, tolerance=0.01, random_state=0)
    out = rw.fit_transform(powerlaw_graph)
    assert abs(rw.assortativity_ + 0.1) <= 0.01
    np.testing.assert_array_equal(out.degrees, powerlaw_graph.degrees)
    again = AssortativityRewirer(target_r=-0.1, tolerance=0.01, random_state=0)
    assert again.fit_transform(powerlaw_graph) == out


def test_degree_law_transformer(star):
    tr = DegreeLawTransformer()
    laws = tr.fit_transform(star)
    np.testing.assert_allclose(laws, [[0.8, 0.2], [0.5, 0.5], [0.2, 0.8]], atol=1e-15)
    np.testing.assert_allclose(tr.expected_degrees_, [1.6, 2.5, 3.4], atol=1e-14)
