"""Estimator wrappers stay in lockstep with the functional API."""

import numpy as np
import pytest
from sklearn.base import clone

from campusnet import (DyadTieModel, LouvainCommunities, SpectralCommunities,
                       build_design, fit_ergm_mple, fit_logistic, kl_refine,
                       louvain, modularity, spectral_partition)

from conftest import make_network, planted_edges


@pytest.fixture
def clustered_net():
    rng = np.random.default_rng(55)
    n = 60
    attrs = {"year": rng.integers(1, 4, size=n),
             "major": rng.integers(1, 5, size=n),
             "residence": rng.integers(1, 4, size=n),
             "high_school": rng.integers(1, 6, size=n)}
    edges = planted_edges(attrs, seed=9, p_base=0.03, p_match=0.4, key="year")
    return make_network(n, edges, **attrs)


def test_params_roundtrip_and_clone():
    est = SpectralCommunities(mode="two", refine=True)
    assert est.get_params() == {"mode": "two", "refine": True}
    twin = clone(est)
    assert twin.get_params() == est.get_params()
    assert not hasattr(twin, "labels_")

    est = LouvainCommunities(random_state=7)
    est.set_params(random_state=11, refine=True)
    assert est.get_params() == {"random_state": 11, "refine": True}

    est = DyadTieModel(model="ergm", max_nodes=None)
    assert clone(est).get_params() == {"model": "ergm",
                                       "drop_nonidentifiable": False,
                                       "max_nodes": None}


def test_spectral_estimator_matches_function(clustered_net):
    for mode in ("one", "two"):
        est = SpectralCommunities(mode=mode).fit(clustered_net)
        direct = spectral_partition(clustered_net, mode=mode)
        assert np.array_equal(est.labels_, direct.assignment)
        assert est.n_communities_ == direct.n_communities
        assert est.modularity_ == pytest.approx(
            modularity(clustered_net, direct).q)

    refined = SpectralCommunities(mode="one", refine=True).fit(clustered_net)
    expected = kl_refine(clustered_net, spectral_partition(clustered_net))
    assert np.array_equal(refined.labels_, expected.assignment)
    assert refined.partition_.method == "spectral-one+kl"


def test_louvain_estimator_matches_function(clustered_net):
    est = LouvainCommunities(random_state=5).fit(clustered_net)
    direct = louvain(clustered_net, seed=5)
    assert np.array_equal(est.labels_, direct.assignment)
    assert est.fit(clustered_net) is est  # refitting works and returns self


def test_dyad_estimator_matches_function(clustered_net):
    est = DyadTieModel().fit(clustered_net)
    direct = fit_logistic(build_design(clustered_net))
    assert est.coef_ == pytest.approx(direct.theta)
    assert est.stderr_ == pytest.approx(direct.std_errors)
    assert est.feature_names_ == direct.feature_names
    assert est.loglik_ == pytest.approx(direct.loglik)
    assert est.converged_

    erg = DyadTieModel(model="ergm").fit(clustered_net)
    expected = fit_ergm_mple(build_design(clustered_net, with_triangle=True))
    assert erg.coef_ == pytest.approx(expected.theta)
    assert erg.fit_.estimator == "ergm-mple"


def test_dyad_estimator_rejects_unknown_model(clustered_net):
    with pytest.raises(ValueError):
        DyadTieModel(model="probit").fit(clustered_net)
