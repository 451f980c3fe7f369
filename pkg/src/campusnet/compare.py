"""Comparing partitions: contingency tables, Rand scores, z-scores.

Two partitions of the same node set are compared through the pair counts
of their contingency table: M node pairs in total, M1 and M2 pairs kept
together by each partition, and w pairs kept together by both. The Rand
coefficient is the agreeing fraction

    S = (w + (M - M1 - M2 + w)) / M,

and its z-score standardizes w against the exact mean and variance of a
uniformly random relabeling with the same group sizes:

    z = (w - M1 M2 / M) / sigma_w,
    sigma_w^2 = M/16 - (4M1 - 2M)^2 (4M2 - 2M)^2 / (256 M^2)
              + C1 C2 / (16 n (n-1) (n-2))
              + ((4M1 - 2M)^2 - 4 C1 - 4M) ((4M2 - 2M)^2 - 4 C2 - 4M)
                / (64 n (n-1) (n-2) (n-3)),
    C1 = n (n^2 - 3n - 2) - 8 (n+1) M1 + 4 sum_i r_i^3,
    C2 = n (n^2 - 3n - 2) - 8 (n+1) M2 + 4 sum_j c_j^3,

with r and c the row and column sums. The pair counts grow like n^4
inside these products, so everything is evaluated in exact integer and
rational arithmetic and converted to float only at the end.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, sqrt

import numpy as np

from .community import Partition
from .errors import DegenerateInputError
from .graph import MISSING, SCORED_ATTRIBUTES
from .validation import check_nonempty_view

__all__ = [
    "ContingencyTable",
    "ZScoreQuad",
    "AttributeComparison",
    "attribute_partition",
    "contingency",
    "rand_coefficient",
    "rand_zscore",
    "score_against_attributes",
]


@dataclass(frozen=True)
class ContingencyTable:
    """Joint group-size counts of two partitions plus exact pair counts.

    ``M``, ``M1``, ``M2``, ``w`` are Python integers (they overflow
    64-bit intermediates on large networks when combined).
    """

    table: np.ndarray
    row_sums: tuple
    col_sums: tuple
    n: int
    M: int
    M1: int
    M2: int
    w: int


@dataclass(frozen=True)
class ZScoreQuad:
    """Rand z-scores of one partition against the four node attributes."""

    method: str
    z: dict
    rand: dict
    degenerate: tuple

    def max_attribute(self):
        finite = {a: v for a, v in self.z.items() if np.isfinite(v)}
        if not finite:
            return None
        return max(sorted(finite), key=lambda a: finite[a])


@dataclass(frozen=True)
class AttributeComparison:
    """Scores of several partitions against the attribute partitions."""

    quads: list
    max_z: dict
    best_method: dict

    def dominant(self):
        """Attribute with the largest max-over-methods z, if any."""
        finite = {a: v for a, v in self.max_z.items() if np.isfinite(v)}
        if not finite:
            return None
        return max(sorted(finite), key=lambda a: finite[a])


def attribute_partition(view, attribute):
    """Partition of a view by one attribute; every code is a group.

    Missing (code 0) forms its own group. Use the ``exclude_missing``
    path of `score_against_attributes` to restrict scoring to known
    codes instead.
    """
    net = check_nonempty_view(view, "attribute_partition")
    if attribute not in SCORED_ATTRIBUTES:
        raise ValueError("unknown attribute %r; expected one of %s"
                         % (attribute, ", ".join(SCORED_ATTRIBUTES)))
    codes = net.attributes[attribute]
    return Partition.from_labels(np.unique(codes, return_inverse=True)[1],
                                 method="attribute:" + attribute)


def contingency(first, second):
    """Contingency table of two label vectors over the same nodes.

    Accepts `Partition` objects or integer arrays; labels need not be
    contiguous. Raises ValueError on length mismatch or empty input.
    """
    a = first.assignment if isinstance(first, Partition) else np.asarray(first)
    b = second.assignment if isinstance(second, Partition) else np.asarray(second)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("label vectors must be one-dimensional and equal length")
    n = a.size
    if n == 0:
        raise ValueError("cannot compare empty partitions")
    _, ia = np.unique(a, return_inverse=True)
    _, ib = np.unique(b, return_inverse=True)
    r = int(ia.max()) + 1
    c = int(ib.max()) + 1
    table = np.bincount(ia * c + ib, minlength=r * c).reshape(r, c)

    row_sums = tuple(int(x) for x in table.sum(axis=1))
    col_sums = tuple(int(x) for x in table.sum(axis=0))
    m_pairs = comb(n, 2)
    m1 = sum(comb(x, 2) for x in row_sums)
    m2 = sum(comb(x, 2) for x in col_sums)
    w = sum(comb(int(x), 2) for x in table.ravel().tolist())
    return ContingencyTable(table=table, row_sums=row_sums, col_sums=col_sums,
                            n=n, M=m_pairs, M1=m1, M2=m2, w=w)


def rand_coefficient(ct):
    """Rand coefficient S in [0, 1]; 1 means identical partitions."""
    agree = ct.w + (ct.M - ct.M1 - ct.M2 + ct.w)
    return float(Fraction(agree, ct.M))


def rand_zscore(ct):
    """Exact-permutation z-score of the Rand pair count w.

    Raises
    ------
    ValueError
        If n < 4 (the variance formula needs four distinct indices).
    DegenerateInputError
        If the permutation variance is zero or negative, e.g. when either
        partition is a single group or all singletons.
    """
    n, M, M1, M2, w = ct.n, ct.M, ct.M1, ct.M2, ct.w
    if n < 4:
        raise ValueError("z-score needs at least 4 nodes, got %d" % n)

    c1 = n * (n * n - 3 * n - 2) - 8 * (n + 1) * M1 \
        + 4 * sum(x ** 3 for x in ct.row_sums)
    c2 = n * (n * n - 3 * n - 2) - 8 * (n + 1) * M2 \
        + 4 * sum(x ** 3 for x in ct.col_sums)
    a1 = (4 * M1 - 2 * M) ** 2
    a2 = (4 * M2 - 2 * M) ** 2

    var = (Fraction(M, 16)
           - Fraction(a1 * a2, 256 * M * M)
           + Fraction(c1 * c2, 16 * n * (n - 1) * (n - 2))
           + Fraction((a1 - 4 * c1 - 4 * M) * (a2 - 4 * c2 - 4 * M),
                      64 * n * (n - 1) * (n - 2) * (n - 3)))
    if var <= 0:
        raise DegenerateInputError(
            "degenerate pair-count variance; z-score undefined")
    mean = Fraction(M1 * M2, M)
    return float(Fraction(w) - mean) / sqrt(float(var))


def score_against_attributes(view, partitions, exclude_missing=False):
    """Score detected partitions against the four attribute partitions.

    Parameters
    ----------
    view : NetworkView
    partitions : sequence of Partition
        Typically the six detector outputs.
    exclude_missing : bool, default False
        Score each attribute on the subset of nodes with a known code
        instead of treating Missing as a group.

    Returns
    -------
    AttributeComparison
        Per-partition `ZScoreQuad` rows plus the per-attribute maximum
        over partitions. A degenerate attribute (constant codes, or a
        zero-variance pairing) is flagged on the quad and scored NaN;
        other attributes are unaffected.
    """
    net = check_nonempty_view(view, "score_against_attributes")
    quads = []
    max_z = {a: float("nan") for a in SCORED_ATTRIBUTES}
    best_method = {}
    for partition in partitions:
        if len(partition) != net.n:
            raise ValueError("partition covers %d nodes, view has %d"
                             % (len(partition), net.n))
        z = {}
        rand = {}
        degenerate = []
        for attribute in SCORED_ATTRIBUTES:
            codes = net.attributes[attribute]
            labels = partition.assignment
            if exclude_missing:
                known = codes != MISSING
                codes, labels = codes[known], labels[known]
            try:
                if codes.size == 0:
                    raise DegenerateInputError("no known codes")
                ct = contingency(labels, codes)
                rand[attribute] = rand_coefficient(ct)
                z[attribute] = rand_zscore(ct)
            except (DegenerateInputError, ValueError):
                z[attribute] = float("nan")
                rand[attribute] = float("nan")
                degenerate.append(attribute)
                continue
            current = max_z[attribute]
            if not np.isfinite(current) or z[attribute] > current:
                max_z[attribute] = z[attribute]
                best_method[attribute] = partition.method
        quads.append(ZScoreQuad(method=partition.method, z=z, rand=rand,
                                degenerate=tuple(degenerate)))
    return AttributeComparison(quads=quads, max_z=max_z, best_method=best_method)
