"""Categorical mixing matrices and attribute assortativity.

For an attribute with K observed codes, the mixing matrix counts edge
ends by the code pair at the two endpoints; each undirected edge adds one
to both (s, t) and (t, s), so counts are symmetric and sum to 2m. The
assortativity coefficient is

    r = (sum_i e_ii - sum_i a_i**2) / (1 - sum_i a_i**2)

with e the normalized matrix and a its row sums. r is 1 when all edges
join like with like and 0 when ends pair independently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError
from .graph import ATTRIBUTE_FIELDS, MISSING
from .validation import check_view

__all__ = ["MixingMatrix", "mixing_matrix", "assortativity"]


@dataclass(frozen=True)
class MixingMatrix:
    """Edge-end code-pair counts for one attribute on one view.

    Attributes
    ----------
    attribute : str
        Attribute field name.
    categories : ndarray
        The K distinct codes, ascending; row/column i is ``categories[i]``.
    counts : ndarray of shape (K, K)
        Symmetric integer counts summing to twice the edge count.
    normalized : ndarray of shape (K, K)
        ``counts`` divided by its total; sums to 1.
    """

    attribute: str
    categories: np.ndarray
    counts: np.ndarray
    normalized: np.ndarray

    def __post_init__(self):
        c = self.counts
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise ValueError("counts must be square")
        if not np.array_equal(c, c.T):
            raise ValueError("counts must be symmetric")
        total = self.normalized.sum()
        if not np.isclose(total, 1.0, rtol=0, atol=1e-12):
            raise ValueError("normalized matrix must sum to 1")


def mixing_matrix(view, attribute, exclude_missing=False):
    """Mixing matrix of ``attribute`` over the edges of ``view``.

    Parameters
    ----------
    view : NetworkView or Network
        The graph whose edges are tallied.
    attribute : str
        One of the six attribute fields.
    exclude_missing : bool, default False
        Drop edges with a Missing (code 0) endpoint for this attribute
        and drop the Missing category, instead of treating Missing as a
        category of its own.

    Raises
    ------
    DegenerateInputError
        If no edges remain to tally.
    ValueError
        If ``attribute`` is not a known field.
    """
    net = check_view(view)
    if attribute not in ATTRIBUTE_FIELDS:
        raise ValueError("unknown attribute %r; expected one of %s"
                         % (attribute, ", ".join(ATTRIBUTE_FIELDS)))
    if net.m == 0:
        raise DegenerateInputError("view has no edges to tally")

    codes = net.attributes[attribute]
    ends_a = codes[net.edges[:, 0]]
    ends_b = codes[net.edges[:, 1]]
    node_mask = np.ones(net.n, dtype=bool)
    if exclude_missing:
        keep = (ends_a != MISSING) & (ends_b != MISSING)
        if not keep.any():
            raise DegenerateInputError(
                "all edges touch a Missing code for %r" % attribute)
        ends_a, ends_b = ends_a[keep], ends_b[keep]
        node_mask = codes != MISSING

    categories = np.unique(codes[node_mask])
    k = categories.size
    ia = np.searchsorted(categories, ends_a)
    ib = np.searchsorted(categories, ends_b)
    counts = np.zeros((k, k), dtype=np.int64)
    np.add.at(counts, (ia, ib), 1)
    np.add.at(counts, (ib, ia), 1)
    normalized = counts / counts.sum()
    return MixingMatrix(attribute=attribute, categories=categories,
                        counts=counts, normalized=normalized)


def assortativity(mm):
    """Assortativity coefficient of a mixing matrix.

    Raises
    ------
    DegenerateInputError
        If every edge end has the same code, which makes the coefficient
        0/0 (for example a single-gender view scored on gender).
    """
    e = mm.normalized
    trace = float(np.trace(e))
    a2 = float(e.sum(axis=1) @ e.sum(axis=0))
    denom = 1.0 - a2
    if abs(denom) < 1e-12:
        raise DegenerateInputError(
            "assortativity undefined: single %r category" % mm.attribute)
    return (trace - a2) / denom
