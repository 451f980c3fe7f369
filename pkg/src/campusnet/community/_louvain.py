"""Seeded greedy modularity optimization with graph aggregation.

Phase one sweeps nodes in a seed-determined permutation, moving each to
the neighboring community with the largest positive modularity gain
(ties to the lowest community id), repeating until a full sweep makes no
move. Phase two collapses communities to weighted super-nodes and the
procedure recurses until aggregation stops shrinking the graph. With the
seed fixed the result is identical across runs and platforms.
"""

from __future__ import annotations

import numpy as np
from scipy import sparse

from ..validation import check_nonempty_view
from ._partition import Partition

__all__ = ["louvain"]

_GAIN_TOL = 1e-12


def louvain(view, seed=42):
    """Two-phase greedy modularity partition of a view.

    Parameters
    ----------
    view : NetworkView or Network
    seed : int
        Seeds the node sweep order; one permutation is drawn per
        aggregation level.
    """
    net = check_nonempty_view(view, "louvain")
    rng = np.random.default_rng(seed)

    if net.m == 0:
        return Partition.from_labels(np.arange(net.n), method="louvain", seed=seed)

    # level adjacency keeps self-loop weight 2w on the diagonal so row
    # sums equal strengths and aggregation preserves total weight
    level = net.adjacency()
    total_w = level.sum() / 2.0
    assignment = np.arange(net.n, dtype=np.int64)

    while True:
        comm, moved = _one_level(level, total_w, rng)
        if not moved:
            break
        comm = _relabel(comm)
        assignment = comm[assignment]
        n_next = int(comm.max()) + 1
        if n_next == level.shape[0]:
            break
        onehot = sparse.csr_matrix(
            (np.ones(comm.size), (np.arange(comm.size), comm)),
            shape=(comm.size, n_next))
        level = (onehot.T @ level @ onehot).tocsr()
    return Partition.from_labels(assignment, method="louvain", seed=seed)


def _one_level(level, total_w, rng):
    """Greedy node moves on one aggregation level.

    Returns the community array (labels are arbitrary ints) and whether
    any move happened.
    """
    n = level.shape[0]
    indptr, indices, data = level.indptr, level.indices, level.data
    strength = np.asarray(level.sum(axis=1)).ravel()
    comm = np.arange(n, dtype=np.int64)
    sigma = strength.copy()
    order = rng.permutation(n)

    moved_any = False
    while True:
        moved_pass = False
        for i in order:
            js = indices[indptr[i]:indptr[i + 1]]
            ws = data[indptr[i]:indptr[i + 1]]
            keep = js != i
            js, ws = js[keep], ws[keep]
            if js.size == 0:
                continue
            a = comm[i]
            cs, inv = np.unique(comm[js], return_inverse=True)
            links = np.bincount(inv, weights=ws)
            pos = np.searchsorted(cs, a)
            w_ia = links[pos] if pos < cs.size and cs[pos] == a else 0.0
            sigma_a = sigma[a] - strength[i]
            gains = (links - w_ia) / total_w \
                - strength[i] * (sigma[cs] - sigma_a) / (2.0 * total_w ** 2)
            if pos < cs.size and cs[pos] == a:
                gains[pos] = 0.0
            best = int(np.argmax(gains))  # first max: lowest community id
            if gains[best] > _GAIN_TOL and cs[best] != a:
                sigma[a] -= strength[i]
                sigma[cs[best]] += strength[i]
                comm[i] = cs[best]
                moved_pass = True
        if not moved_pass:
            break
        moved_any = True
    return comm, moved_any


def _relabel(comm):
    uniq = np.unique(comm)
    lookup = np.zeros(int(uniq.max()) + 1, dtype=np.int64)
    lookup[uniq] = np.arange(uniq.size)
    return lookup[comm]
