"""Partitions of a view into communities, and their modularity."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DegenerateInputError
from ..validation import check_assignment, check_view

__all__ = ["Partition", "ModularityScore", "modularity", "modularity_value"]


@dataclass(frozen=True, eq=False)
class Partition:
    """Community assignment over the nodes of one view.

    ``assignment[i]`` is the community of node ``i``; labels form the
    contiguous range 0..c-1 in canonical order (community 0 is the one
    containing node 0, and so on by first occurrence). ``method`` and
    ``seed`` record how the partition was produced.
    """

    assignment: np.ndarray
    method: str = ""
    seed: int | None = None

    def __post_init__(self):
        arr = np.asarray(self.assignment, dtype=np.int64)
        if arr.ndim != 1:
            raise ValueError("assignment must be one-dimensional")
        if arr.size:
            c = int(arr.max()) + 1
            if arr.min() < 0 or np.unique(arr).size != c:
                raise ValueError("community labels must be contiguous 0..c-1")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "assignment", arr)

    @classmethod
    def from_labels(cls, labels, method="", seed=None):
        """Build a partition from arbitrary integer labels.

        Labels are renumbered to the canonical first-occurrence order, so
        two label vectors describing the same grouping map to identical
        assignments.
        """
        labels = np.asarray(labels, dtype=np.int64)
        n = labels.size
        if n == 0:
            return cls(assignment=labels, method=method, seed=seed)
        uniq, inv = np.unique(labels, return_inverse=True)
        first = np.full(uniq.size, n, dtype=np.int64)
        np.minimum.at(first, inv, np.arange(n))
        new_id = np.empty(uniq.size, dtype=np.int64)
        new_id[np.argsort(first)] = np.arange(uniq.size)
        return cls(assignment=new_id[inv], method=method, seed=seed)

    @property
    def n_communities(self):
        if self.assignment.size == 0:
            return 0
        return int(self.assignment.max()) + 1

    def sizes(self):
        return np.bincount(self.assignment, minlength=self.n_communities)

    def communities(self):
        """List of node-index arrays, one per community."""
        order = np.argsort(self.assignment, kind="stable")
        bounds = np.cumsum(self.sizes())[:-1]
        return np.split(order, bounds)

    def with_method(self, method):
        return Partition(assignment=self.assignment, method=method,
                         seed=self.seed)

    def __len__(self):
        return self.assignment.size

    def __repr__(self):
        return "Partition(n=%d, communities=%d, method=%r)" % (
            len(self), self.n_communities, self.method)


@dataclass(frozen=True)
class ModularityScore:
    """Modularity value with its community-mixing decomposition.

    ``e[i, j]`` is the fraction of edge ends joining communities i and j;
    ``b`` holds row sums, and ``q = trace(e) - sum(b**2)``.
    """

    q: float
    e: np.ndarray
    b: np.ndarray


def modularity(view, partition):
    """Modularity of a partition on a view.

    Raises
    ------
    DegenerateInputError
        If the view has no edges (the score divides by the edge count).
    ValueError
        If the assignment does not cover the view's nodes exactly.
    """
    net = check_view(view)
    assignment = partition.assignment if isinstance(partition, Partition) \
        else np.asarray(partition, dtype=np.int64)
    assignment = check_assignment(net, assignment)
    if net.m == 0:
        raise DegenerateInputError("modularity undefined on an edgeless view")

    c = int(assignment.max()) + 1
    e = np.zeros((c, c), dtype=np.float64)
    ca = assignment[net.edges[:, 0]]
    cb = assignment[net.edges[:, 1]]
    np.add.at(e, (ca, cb), 1.0)
    np.add.at(e, (cb, ca), 1.0)
    e /= 2.0 * net.m
    b = e.sum(axis=1)
    q = float(np.trace(e) - b @ b)
    return ModularityScore(q=q, e=e, b=b)


def modularity_value(net, assignment):
    """Fast modularity of an integer assignment; no validation, no matrix."""
    m = net.m
    internal = np.bincount(
        assignment[net.edges[:, 0]],
        weights=(assignment[net.edges[:, 0]] == assignment[net.edges[:, 1]]),
        minlength=int(assignment.max()) + 1)
    degsum = np.bincount(assignment, weights=net.degrees,
                         minlength=int(assignment.max()) + 1)
    return float(internal.sum() / m - ((degsum / (2.0 * m)) ** 2).sum())
