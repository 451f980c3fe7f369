"""Run the standard battery of community detectors on one view."""

from __future__ import annotations

from ._louvain import louvain
from ._refine import kl_refine
from ._spectral import spectral_partition

__all__ = ["detect_all", "METHOD_NAMES"]

#: method tags in output order
METHOD_NAMES = ("spectral1", "spectral1+kl", "spectral2", "spectral2+kl",
                "louvain", "louvain+kl")


def detect_all(view, seed=42):
    """All six partitions of a view: three detectors, raw and refined.

    The detectors are leading-eigenvector spectral division, two-vector
    spectral division, and seeded greedy optimization; each is returned
    as found and after node-move refinement, in ``METHOD_NAMES`` order.

    Returns
    -------
    list of Partition
    """
    out = []
    for base, maker in (("spectral1", lambda: spectral_partition(view, mode="one")),
                        ("spectral2", lambda: spectral_partition(view, mode="two")),
                        ("louvain", lambda: louvain(view, seed=seed))):
        raw = maker().with_method(base)
        out.append(raw)
        out.append(kl_refine(view, raw))
    return out
