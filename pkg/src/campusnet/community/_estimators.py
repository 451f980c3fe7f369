"""Estimator-style wrappers over the community detectors.

These follow the familiar clusterer protocol: construct with parameters,
``fit`` a view, read ``labels_`` (and here ``partition_``,
``modularity_``) afterwards. The functional API underneath does the
work, so functions and estimators always agree.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator, ClusterMixin

from ..validation import check_nonempty_view
from ._louvain import louvain
from ._partition import modularity
from ._refine import kl_refine
from ._spectral import spectral_partition

__all__ = ["SpectralCommunities", "LouvainCommunities"]


class _CommunityEstimator(ClusterMixin, BaseEstimator):
    def _detect(self, view):
        raise NotImplementedError

    def fit(self, X, y=None):
        """Detect communities on a view.

        Parameters
        ----------
        X : NetworkView or Network
        y : ignored

        Returns
        -------
        self
        """
        check_nonempty_view(X, type(self).__name__)
        partition = self._detect(X)
        if self.refine:
            partition = kl_refine(X, partition)
        self.partition_ = partition
        self.labels_ = partition.assignment
        self.n_communities_ = partition.n_communities
        self.modularity_ = modularity(X, partition).q
        return self


class SpectralCommunities(_CommunityEstimator):
    """Recursive spectral community detection.

    Parameters
    ----------
    mode : {"one", "two"}, default "one"
        Number of eigenvectors guiding each division.
    refine : bool, default False
        Apply node-move refinement to the result.
    """

    def __init__(self, mode="one", refine=False):
        self.mode = mode
        self.refine = refine

    def _detect(self, view):
        return spectral_partition(view, mode=self.mode)


class LouvainCommunities(_CommunityEstimator):
    """Seeded greedy modularity optimization.

    Parameters
    ----------
    random_state : int, default 42
        Seed for the node sweep order.
    refine : bool, default False
        Apply node-move refinement to the result.
    """

    def __init__(self, random_state=42, refine=False):
        self.random_state = random_state
        self.refine = refine

    def _detect(self, view):
        return louvain(view, seed=self.random_state)
