"""Independent reference implementations used to check the package.

Everything here favors directness over speed: definition-level loops,
exhaustive enumeration, and Monte Carlo, kept free of the package's own
algorithmic choices so agreement is meaningful.
"""

from __future__ import annotations

from itertools import combinations
from math import comb

import numpy as np


def union_find_components(n, edges):
    """Connected components via union-find; returns list of sorted lists."""
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, v in edges:
        ra, rb = find(u), find(v)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def naive_assortativity(edges, codes):
    """Assortativity from edge-end tallies kept in plain dicts."""
    counts = {}
    for u, v in edges:
        for s, t in ((codes[u], codes[v]), (codes[v], codes[u])):
            counts[(s, t)] = counts.get((s, t), 0) + 1
    total = sum(counts.values())
    cats = sorted({s for s, _ in counts} | {t for _, t in counts})
    e = {(s, t): counts.get((s, t), 0) / total for s in cats for t in cats}
    trace = sum(e[(s, s)] for s in cats)
    row = {s: sum(e[(s, t)] for t in cats) for s in cats}
    col = {t: sum(e[(s, t)] for s in cats) for t in cats}
    ab = sum(row[s] * col[s] for s in cats)
    return (trace - ab) / (1.0 - ab)


def naive_modularity(n, edges, assignment):
    """Modularity straight from its definition, O(n^2)."""
    m = len(edges)
    adj = set()
    deg = [0] * n
    for u, v in edges:
        adj.add((u, v))
        adj.add((v, u))
        deg[u] += 1
        deg[v] += 1
    q = 0.0
    for i in range(n):
        for j in range(n):
            if assignment[i] != assignment[j]:
                continue
            a_ij = 1.0 if (i, j) in adj else 0.0
            q += a_ij - deg[i] * deg[j] / (2.0 * m)
    return q / (2.0 * m)


def set_partitions(n):
    """All partitions of range(n) as restricted-growth label tuples."""
    labels = [0] * n
    maxes = [0] * n

    def rec(i):
        if i == n:
            yield tuple(labels)
            return
        top = maxes[i - 1] if i else -1
        for c in range(top + 2):
            labels[i] = c
            maxes[i] = max(top, c)
            yield from rec(i + 1)

    yield from rec(0)


def best_partition_q(n, edges):
    """Exhaustive best modularity over all set partitions."""
    m = len(edges)
    deg = [0] * n
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    best = -np.inf
    for labels in set_partitions(n):
        c = max(labels) + 1
        internal = [0] * c
        degsum = [0] * c
        for u, v in edges:
            if labels[u] == labels[v]:
                internal[labels[u]] += 1
        for i in range(n):
            degsum[labels[i]] += deg[i]
        q = sum(internal[k] / m - (degsum[k] / (2.0 * m)) ** 2
                for k in range(c))
        if q > best:
            best = q
    return best


def pair_statistics(a, b):
    """(M, M1, M2, w) by direct pair enumeration."""
    n = len(a)
    m_pairs = m1 = m2 = w = 0
    for i, j in combinations(range(n), 2):
        m_pairs += 1
        sa = a[i] == a[j]
        sb = b[i] == b[j]
        m1 += sa
        m2 += sb
        w += sa and sb
    return m_pairs, m1, m2, w


def mc_rand_zscore(a, b, samples, seed, chunk=20_000):
    """Monte Carlo z-score of w under random relabelings of b.

    Permutes b uniformly, recomputing the co-pair count w each time from
    the contingency table; returns (w_obs - mean) / std over the samples.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    n = a.size
    _, ia = np.unique(a, return_inverse=True)
    _, ib = np.unique(b, return_inverse=True)
    r = ia.max() + 1
    c = ib.max() + 1
    k = r * c

    def w_of(rows):
        """Co-pair counts for a (batch, n) array of permuted b labels."""
        batch = rows.shape[0]
        keys = ia[None, :] * c + rows
        keys += (np.arange(batch) * k)[:, None]
        counts = np.bincount(keys.ravel(), minlength=batch * k)
        counts = counts.reshape(batch, k)
        return (counts * (counts - 1) // 2).sum(axis=1)

    w_obs = w_of(ib[None, :])[0]
    rng = np.random.default_rng(seed)
    total = 0
    acc = 0.0
    acc2 = 0.0
    while total < samples:
        size = min(chunk, samples - total)
        block = rng.permuted(np.tile(ib, (size, 1)), axis=1)
        ws = w_of(block).astype(np.float64)
        acc += ws.sum()
        acc2 += (ws ** 2).sum()
        total += size
    mean = acc / total
    var = acc2 / total - mean ** 2
    return (float(w_obs) - mean) / np.sqrt(var)


def exhaustive_rand_zscore(a, b):
    """Exact z-score of w by enumerating every permutation of b.

    Feasible for n <= 8; the mean and variance are over all n!
    relabelings, the distribution the analytic formula describes.
    """
    from itertools import permutations

    n = len(a)
    w_obs = pair_statistics(a, b)[3]
    total = 0
    acc = 0
    acc2 = 0
    for perm in permutations(b):
        w = pair_statistics(a, perm)[3]
        total += 1
        acc += w
        acc2 += w * w
    from fractions import Fraction
    mean = Fraction(acc, total)
    var = Fraction(acc2, total) - mean * mean
    return float(Fraction(w_obs) - mean) / float(var) ** 0.5


def common_neighbor_counts(n, edges):
    """Dict (i, j) -> shared-neighbor count for all i < j."""
    nbrs = [set() for _ in range(n)]
    for u, v in edges:
        nbrs[u].add(v)
        nbrs[v].add(u)
    return {(i, j): len(nbrs[i] & nbrs[j])
            for i, j in combinations(range(n), 2)}


def dyad_rows(n, edges, attrs, with_triangle=False):
    """Per-dyad design rows (no grouping): (x_vector, y) pairs.

    attrs maps attribute name -> code list; match means equal and
    nonzero. Column order matches the package: edges, match_year,
    match_residence, match_hs, match_major, then the shared-neighbor
    count when requested.
    """
    edge_set = {(min(u, v), max(u, v)) for u, v in edges}
    tri = common_neighbor_counts(n, edges) if with_triangle else None
    rows = []
    order = ("year", "residence", "high_school", "major")
    for i, j in combinations(range(n), 2):
        x = [1.0]
        for name in order:
            codes = attrs[name]
            x.append(1.0 if codes[i] == codes[j] and codes[i] != 0 else 0.0)
        if with_triangle:
            x.append(float(tri[(i, j)]))
        rows.append((x, 1.0 if (i, j) in edge_set else 0.0))
    return rows


def ungrouped_loglik(rows, theta):
    """Bernoulli log-likelihood over per-dyad rows."""
    theta = np.asarray(theta)
    total = 0.0
    for x, y in rows:
        eta = float(np.dot(x, theta))
        total += y * eta - np.logaddexp(0.0, eta)
    return total
