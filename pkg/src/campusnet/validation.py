"""Input-validation helpers shared across modules."""

from __future__ import annotations

import numpy as np

from .graph import Network, NetworkView

__all__ = ["check_view", "check_nonempty_view", "check_assignment"]


def check_view(view):
    """Return the underlying Network of a view, or the network itself.

    Accepting both keeps the functional API usable on bare networks in
    tests and scripts while the pipeline always passes views.
    """
    if isinstance(view, NetworkView):
        return view.network
    if isinstance(view, Network):
        return view
    raise TypeError("expected NetworkView or Network, got %s"
                    % type(view).__name__)


def check_nonempty_view(view, what):
    net = check_view(view)
    if net.n == 0:
        raise ValueError("%s requires a nonempty view" % what)
    return net


def check_assignment(net, assignment):
    """Validate a community assignment for ``net``.

    Must cover every node exactly once with labels forming the contiguous
    range 0..c-1. Returns the assignment as an int64 array.
    """
    arr = np.asarray(assignment, dtype=np.int64)
    if arr.shape != (net.n,):
        raise ValueError("assignment covers %d nodes, view has %d"
                         % (arr.size, net.n))
    if arr.size == 0:
        return arr
    c = int(arr.max()) + 1
    if arr.min() < 0 or np.unique(arr).size != c:
        raise ValueError("community labels must be contiguous 0..c-1")
    return arr
