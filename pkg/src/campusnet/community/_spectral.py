"""Recursive spectral community detection.

Each candidate group g is examined through its generalized modularity
operator

    B(g)_ij = A_ij - k_i k_j / (2m) - delta_ij d_i,
    d_i = (degree of i inside g) - k_i K_g / (2m),

whose quadratic forms give exact modularity changes for splitting g while
keeping the rest of the partition fixed. The operator is applied
matrix-free; leading eigenvectors come from shifted power iteration with
a deterministic start vector. Mode "one" splits by the sign of the
leading eigenvector; mode "two" also takes the second eigenvector (by
deflation) and sweeps line cuts through the origin of the (u1, u2) plane,
plus one further cut on each side of the best line, so groups may split
in two or three. A group is final when its leading eigenvalue is not
positive or no candidate split improves modularity.
"""

from __future__ import annotations

from collections import deque

import numpy as np

from ..validation import check_nonempty_view, check_view
from ._partition import Partition

__all__ = ["spectral_partition"]

_EIG_TOL = 1e-10
_MAX_ITER = 100_000
_DQ_TOL = 1e-12


def spectral_partition(view, mode="one"):
    """Partition a view by recursive spectral division.

    Parameters
    ----------
    view : NetworkView or Network
    mode : {"one", "two"}
        "one" uses leading-eigenvector bisection only; "two" additionally
        uses the second eigenvector and may split a group into three.

    Returns
    -------
    Partition
        Deterministic for a given view and mode.
    """
    if mode not in ("one", "two"):
        raise ValueError("mode must be 'one' or 'two', got %r" % (mode,))
    net = check_nonempty_view(view, "spectral_partition")

    adjacency = net.adjacency()
    degrees = net.degrees.astype(np.float64)
    two_m = float(degrees.sum())
    labels = np.zeros(net.n, dtype=np.int64)
    if two_m == 0.0:
        return Partition.from_labels(np.arange(net.n), method="spectral-" + mode)

    queue = deque([np.arange(net.n, dtype=np.int64)])
    next_label = 0
    while queue:
        group = queue.popleft()
        parts = _split_group(group, adjacency, degrees, two_m, mode)
        if parts is None:
            labels[group] = next_label
            next_label += 1
        else:
            queue.extend(parts)
    return Partition.from_labels(labels, method="spectral-" + mode)


class _GroupOperator:
    """Matrix-free B(g) restricted to one group."""

    def __init__(self, group, adjacency, degrees, two_m):
        self.n = group.size
        self.local = adjacency[group][:, group].tocsr()
        self.k = degrees[group]
        self.two_m = two_m
        self.ksum = float(self.k.sum())
        in_deg = np.asarray(self.local.sum(axis=1)).ravel()
        self.d = in_deg - self.k * self.ksum / two_m
        # Gershgorin row bound for the shift that keeps iteration stable
        row_abs = in_deg + self.k * self.ksum / two_m + np.abs(self.d)
        self.shift = float(row_abs.max()) + 1.0

    def matvec(self, x):
        return self.local @ x - self.k * (self.k @ x) / self.two_m - self.d * x

    def leading(self, deflate=None):
        """Leading eigenpair, optionally after deflating a known pair.

        Returns (eigenvalue, unit eigenvector); the start vector is fixed
        so repeated runs agree bit for bit.
        """
        idx = np.arange(1, self.n + 1, dtype=np.float64)
        if deflate is None:
            x = 1.0 + 0.01 * np.sin(idx)
        else:
            lam1, u1 = deflate
            x = 1.0 + 0.01 * np.cos(idx)
            x -= (u1 @ x) * u1
            if np.linalg.norm(x) < 1e-12:
                x = np.sin(2.3 * idx)
                x -= (u1 @ x) * u1
        x /= np.linalg.norm(x)

        prev = np.inf
        lam = 0.0
        for _ in range(_MAX_ITER):
            y = self.matvec(x)
            if deflate is not None:
                lam1, u1 = deflate
                y -= lam1 * (u1 @ x) * u1
            lam = float(x @ y)
            if abs(lam - prev) < _EIG_TOL:
                break
            prev = lam
            y += self.shift * x
            if deflate is not None:
                y -= (u1 @ y) * u1
            norm = np.linalg.norm(y)
            if norm == 0.0:
                break
            x = y / norm
        return lam, x


def _split_group(group, adjacency, degrees, two_m, mode):
    """Best admissible split of ``group`` or None if it stays whole."""
    if group.size < 2:
        return None
    op = _GroupOperator(group, adjacency, degrees, two_m)
    lam1, u1 = op.leading()
    if lam1 <= _EIG_TOL:
        return None

    candidates = []
    sign_parts = _sign_split(u1)
    if sign_parts is not None:
        candidates.append(sign_parts)
    if mode == "two":
        lam2, u2 = op.leading(deflate=(lam1, u1))
        candidates.extend(_plane_splits(op, u1, u2))

    best_dq, best = -np.inf, None
    for parts in candidates:
        dq = sum(_bsum(op, part) for part in parts) / two_m
        if dq > best_dq:
            best_dq, best = dq, parts
    if best is None or best_dq <= _DQ_TOL:
        return None
    return [np.sort(group[part]) for part in best]


def _sign_split(u1):
    side = u1 >= 0.0
    if side.all() or not side.any():
        return None
    return [np.flatnonzero(side), np.flatnonzero(~side)]


def _bsum(op, part):
    """Sum of B(g) entries over part x part."""
    mask = np.zeros(op.n, dtype=bool)
    mask[part] = True
    internal2 = float(mask @ (op.local @ mask.astype(np.float64)))
    ks = float(op.k[part].sum())
    return internal2 - ks * ks / op.two_m - float(op.d[part].sum())


def _plane_splits(op, u1, u2):
    """Line-cut bipartitions of the (u1, u2) plane and arc tripartitions.

    Every bipartition induced by a line through the origin is visited by
    sweeping the cut angle across the node angles; group sums are updated
    incrementally so the sweep is O(m + n log n). The best line cut's two
    arcs are then each cut once more along the angular order to propose
    three-way splits.
    """
    theta = np.arctan2(u2, u1)
    psi = np.mod(theta, np.pi)
    if np.allclose(psi, psi[0], atol=1e-12):
        return []

    n = op.n
    in_s = (theta >= 0.0) & (theta < np.pi)  # cut angle just below zero
    state = _SideState(op, in_s)

    order = np.lexsort((np.arange(n), psi))
    splits = []
    best = (-np.inf, None)
    i = 0
    while i < n:
        j = i
        while j < n and psi[order[j]] - psi[order[i]] < 1e-15:
            state.flip(order[j])
            j += 1
        i = j
        if i == n:
            break  # full sweep returns to the starting bipartition
        dq = state.delta_q()
        if state.nonempty() and dq > best[0]:
            best = (dq, state.sides())
    if best[1] is not None:
        s_idx, t_idx = best[1]
        splits.append([s_idx, t_idx])
        for arc, other in ((s_idx, t_idx), (t_idx, s_idx)):
            splits.extend(_arc_cuts(op, theta, arc, other))
    return splits


class _SideState:
    """Incremental bookkeeping for one side S of a bipartition sweep."""

    def __init__(self, op, in_s):
        self.op = op
        self.in_s = in_s.copy()
        mask = self.in_s.astype(np.float64)
        self.e_s = 0.5 * float(mask @ (op.local @ mask))
        comp = 1.0 - mask
        self.e_t = 0.5 * float(comp @ (op.local @ comp))
        self.k_s = float(op.k[self.in_s].sum())
        self.d_s = float(op.d[self.in_s].sum())
        self.d_total = float(op.d.sum())
        self.count = int(self.in_s.sum())

    def flip(self, i):
        op = self.op
        nbrs = op.local.indices[op.local.indptr[i]:op.local.indptr[i + 1]]
        to_s = np.count_nonzero(self.in_s[nbrs])
        to_t = nbrs.size - to_s
        if self.in_s[i]:
            self.e_s -= to_s
            self.e_t += to_t
            self.k_s -= op.k[i]
            self.d_s -= op.d[i]
            self.count -= 1
        else:
            self.e_s += to_s
            self.e_t -= to_t
            self.k_s += op.k[i]
            self.d_s += op.d[i]
            self.count += 1
        self.in_s[i] = ~self.in_s[i]

    def nonempty(self):
        return 0 < self.count < self.op.n

    def delta_q(self):
        op = self.op
        k_t = op.ksum - self.k_s
        d_t = self.d_total - self.d_s
        b_s = 2.0 * self.e_s - self.k_s ** 2 / op.two_m - self.d_s
        b_t = 2.0 * self.e_t - k_t ** 2 / op.two_m - d_t
        return (b_s + b_t) / op.two_m

    def sides(self):
        return np.flatnonzero(self.in_s), np.flatnonzero(~self.in_s)


def _arc_cuts(op, theta, arc, other):
    """Tripartitions that cut ``arc`` once along its angular order."""
    if arc.size < 2:
        return []
    key = theta[arc]
    arc = arc[np.lexsort((arc, key))]
    in_head = np.zeros(op.n, dtype=bool)
    e_head = 0.0
    mask = np.zeros(op.n, dtype=bool)
    mask[arc] = True
    e_tail = 0.5 * float(mask @ (op.local @ mask.astype(np.float64)))
    k_head = d_head = 0.0
    k_tail = float(op.k[arc].sum())
    d_tail = float(op.d[arc].sum())
    b_other = _bsum(op, other)

    out = []
    best = (-np.inf, None)
    for t in range(arc.size - 1):
        i = arc[t]
        nbrs = op.local.indices[op.local.indptr[i]:op.local.indptr[i + 1]]
        to_head = np.count_nonzero(in_head[nbrs])
        to_tail = np.count_nonzero(mask[nbrs])
        e_head += to_head
        e_tail -= to_tail
        in_head[i] = True
        mask[i] = False
        k_head += op.k[i]
        k_tail -= op.k[i]
        d_head += op.d[i]
        d_tail -= op.d[i]
        b_head = 2.0 * e_head - k_head ** 2 / op.two_m - d_head
        b_tail = 2.0 * e_tail - k_tail ** 2 / op.two_m - d_tail
        dq = (b_head + b_tail + b_other) / op.two_m
        if dq > best[0]:
            best = (dq, t + 1)
    if best[1] is not None:
        head = arc[:best[1]]
        tail = arc[best[1]:]
        out.append([head, tail, other])
    return out
