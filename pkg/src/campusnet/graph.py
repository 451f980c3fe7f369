"""Attributed undirected networks, TSV ingestion, and view extraction.

A network is a simple undirected graph whose nodes carry six integer-coded
attributes (``status``, ``gender``, ``major``, ``residence``, ``year``,
``high_school``). Code 0 always means Missing. Analysis runs on *views*:
the largest connected component of the whole network (Full) and of the
subgraphs induced by students, women, and men.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from .errors import DegenerateInputError, GraphFormatError

ATTRIBUTE_FIELDS = ("status", "gender", "major", "residence", "year", "high_school")

#: attributes compared against community structure and used as dyad covariates
SCORED_ATTRIBUTES = ("major", "residence", "year", "high_school")

MISSING = 0

NODE_HEADER = ("id",) + ATTRIBUTE_FIELDS

_DEFAULT_CODES = {"status": {"student": 1}, "gender": {"female": 1, "male": 2}}

VIEW_KINDS = ("Full", "Student", "Female", "Male")


class Network:
    """Simple undirected graph with integer node attributes.

    Parameters
    ----------
    labels : sequence of str
        Unique node identifiers in file order; node ``i`` is ``labels[i]``.
    edges : array_like of shape (m, 2)
        Undirected edges as index pairs. Stored canonically with
        ``edges[:, 0] < edges[:, 1]`` and rows sorted lexicographically.
    attributes : dict of str to array_like
        One integer array per field in ``ATTRIBUTE_FIELDS``; 0 is Missing.
    code_labels : dict, optional
        Per-field mapping of human-readable code labels to integer codes,
        e.g. ``{"gender": {"female": 1, "male": 2}}``. Defaults cover
        ``status`` and ``gender``.
    """

    def __init__(self, labels, edges, attributes, code_labels=None, _edge_keys=None):
        self.labels = [str(x) for x in labels]
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise ValueError("node labels must be unique")
        self.n = n

        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if edges.size:
            if edges.min() < 0 or edges.max() >= n:
                raise ValueError("edge endpoint out of range")
            if np.any(edges[:, 0] == edges[:, 1]):
                raise ValueError("self-loops are not allowed")
            lo = np.minimum(edges[:, 0], edges[:, 1])
            hi = np.maximum(edges[:, 0], edges[:, 1])
            order = np.lexsort((hi, lo))
            edges = np.column_stack((lo[order], hi[order]))
            if edges.shape[0] > 1:
                dup = np.all(edges[1:] == edges[:-1], axis=1)
                if np.any(dup):
                    raise ValueError("duplicate edges are not allowed")
        self.edges = edges
        self.m = int(edges.shape[0])

        self.attributes = {}
        for name in ATTRIBUTE_FIELDS:
            if name not in attributes:
                raise ValueError("missing attribute column: %s" % name)
            col = np.asarray(attributes[name], dtype=np.int64)
            if col.shape != (n,):
                raise ValueError("attribute %s has length %d, expected %d"
                                 % (name, col.size, n))
            if col.size and col.min() < 0:
                raise ValueError("attribute codes must be nonnegative")
            self.attributes[name] = col

        merged = {f: dict(v) for f, v in _DEFAULT_CODES.items()}
        for f, v in (code_labels or {}).items():
            merged.setdefault(f, {}).update(v)
        self.code_labels = merged

        self._indptr, self._indices = _build_csr_arrays(n, edges)
        self._edge_keys = _edge_keys

    @property
    def degrees(self):
        return np.diff(self._indptr)

    def neighbors(self, i):
        """Sorted array of neighbors of node ``i``."""
        return self._indices[self._indptr[i]:self._indptr[i + 1]]

    def has_edge(self, i, j):
        """Edge membership test, O(1) amortized after first use."""
        if i == j:
            return False
        if self._edge_keys is None:
            lo = np.minimum(self.edges[:, 0], self.edges[:, 1])
            hi = np.maximum(self.edges[:, 0], self.edges[:, 1])
            self._edge_keys = set((lo * self.n + hi).tolist())
        a, b = (i, j) if i < j else (j, i)
        return a * self.n + b in self._edge_keys

    def adjacency(self):
        """Unweighted adjacency matrix as symmetric CSR."""
        data = np.ones(2 * self.m, dtype=np.float64)
        rows = np.concatenate((self.edges[:, 0], self.edges[:, 1]))
        cols = np.concatenate((self.edges[:, 1], self.edges[:, 0]))
        return sparse.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))

    def code_for(self, fld, label, default):
        table = self.code_labels.get(fld, {})
        for key, value in table.items():
            if key.lower() == label.lower():
                return value
        return default

    def __repr__(self):
        return "Network(n=%d, m=%d)" % (self.n, self.m)


def _build_csr_arrays(n, edges):
    if edges.size == 0:
        return np.zeros(n + 1, dtype=np.int64), np.empty(0, dtype=np.int64)
    src = np.concatenate((edges[:, 0], edges[:, 1]))
    dst = np.concatenate((edges[:, 1], edges[:, 0]))
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, src + 1, 1)
    np.cumsum(indptr, out=indptr)
    return indptr, dst


@dataclass(frozen=True)
class NetworkView:
    """One analysis view: a connected induced subgraph plus its origin.

    ``index_map[v]`` is the index in the source network of view node ``v``.
    An empty view (no nodes) marks a selection whose induced subgraph had
    no edges; downstream stages skip it rather than fail.
    """

    kind: str
    network: Network
    index_map: np.ndarray

    @property
    def n(self):
        return self.network.n

    @property
    def m(self):
        return self.network.m

    @property
    def is_empty(self):
        return self.network.n == 0

    def attribute(self, name):
        return self.network.attributes[name]

    @property
    def labels(self):
        return self.network.labels

    def __repr__(self):
        return "NetworkView(kind=%r, n=%d, m=%d)" % (self.kind, self.n, self.m)


@dataclass(frozen=True)
class Views:
    """The four standard views in fixed order."""

    full: NetworkView
    student: NetworkView
    female: NetworkView
    male: NetworkView

    def items(self):
        return [("Full", self.full), ("Student", self.student),
                ("Female", self.female), ("Male", self.male)]

    def __iter__(self):
        return iter(v for _, v in self.items())


def load_network(node_path, edge_path):
    """Load a network from a node-attribute TSV and an edge-list TSV.

    The node table starts with the exact header
    ``id<TAB>status<TAB>gender<TAB>major<TAB>residence<TAB>year<TAB>high_school``
    followed by one row per node; attribute values are nonnegative integer
    codes and 0 means Missing. Lines starting with ``#`` are comments;
    ``#code <field> <value> <label>`` lines may precede the header to name
    codes (e.g. ``#code gender 2 male``). The edge list has two id columns
    per line; self-loops, duplicate edges (in either orientation), and
    references to unknown ids are rejected with their line number.

    Returns
    -------
    Network

    Raises
    ------
    GraphFormatError
        On any malformed or inconsistent line.
    """
    labels = []
    columns = {name: [] for name in ATTRIBUTE_FIELDS}
    index = {}
    code_labels = {}

    header_seen = False
    with open(node_path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line.strip():
                continue
            if line.startswith("#"):
                _parse_code_comment(line, code_labels)
                continue
            parts = line.split("\t")
            if not header_seen:
                if tuple(parts) != NODE_HEADER:
                    raise GraphFormatError(
                        "bad node-table header, expected %s" % "\\t".join(NODE_HEADER),
                        path=node_path, line=lineno)
                header_seen = True
                continue
            if len(parts) != len(NODE_HEADER):
                raise GraphFormatError(
                    "expected %d columns, found %d" % (len(NODE_HEADER), len(parts)),
                    path=node_path, line=lineno)
            node_id = parts[0]
            if not node_id:
                raise GraphFormatError("empty node id", path=node_path, line=lineno)
            if node_id in index:
                raise GraphFormatError("duplicate node id %r" % node_id,
                                       path=node_path, line=lineno)
            index[node_id] = len(labels)
            labels.append(node_id)
            for name, text in zip(ATTRIBUTE_FIELDS, parts[1:]):
                try:
                    code = int(text)
                except ValueError:
                    code = -1
                if code < 0:
                    raise GraphFormatError(
                        "attribute %s must be a nonnegative integer, got %r"
                        % (name, text), path=node_path, line=lineno)
                columns[name].append(code)
    if not header_seen:
        raise GraphFormatError("node table has no header", path=node_path)

    n = len(labels)
    edge_rows = []
    seen = set()
    with open(edge_path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t") if "\t" in line else line.split()
            if len(parts) != 2:
                raise GraphFormatError("expected two columns",
                                       path=edge_path, line=lineno)
            try:
                u = index[parts[0]]
                v = index[parts[1]]
            except KeyError as exc:
                raise GraphFormatError("unknown node id %s" % exc,
                                       path=edge_path, line=lineno) from None
            if u == v:
                raise GraphFormatError("self-loop on id %r" % parts[0],
                                       path=edge_path, line=lineno)
            key = (u * n + v) if u < v else (v * n + u)
            if key in seen:
                raise GraphFormatError(
                    "duplicate edge %r -- %r" % (parts[0], parts[1]),
                    path=edge_path, line=lineno)
            seen.add(key)
            edge_rows.append((u, v) if u < v else (v, u))

    edges = np.asarray(edge_rows, dtype=np.int64).reshape(-1, 2)
    return Network(labels, edges, {k: np.asarray(v, dtype=np.int64)
                                   for k, v in columns.items()},
                   code_labels=code_labels, _edge_keys=seen)


def _parse_code_comment(line, out):
    parts = line[1:].split()
    if len(parts) >= 4 and parts[0] == "code":
        fld, value, label = parts[1], parts[2], " ".join(parts[3:])
        if fld in ATTRIBUTE_FIELDS:
            try:
                out.setdefault(fld, {})[label] = int(value)
            except ValueError:
                pass


def induced_subgraph(net, nodes):
    """Subgraph of ``net`` on the given node indices.

    Nodes are reindexed in ascending order of their original index; the
    returned pair is ``(subnetwork, index_map)`` with ``index_map`` giving
    each new node's index in ``net``.
    """
    nodes = np.unique(np.asarray(nodes, dtype=np.int64))
    if nodes.size and (nodes[0] < 0 or nodes[-1] >= net.n):
        raise ValueError("node index out of range")
    keep = np.zeros(net.n, dtype=bool)
    keep[nodes] = True
    rank = np.full(net.n, -1, dtype=np.int64)
    rank[nodes] = np.arange(nodes.size)

    if net.m:
        mask = keep[net.edges[:, 0]] & keep[net.edges[:, 1]]
        edges = rank[net.edges[mask]]
    else:
        edges = np.empty((0, 2), dtype=np.int64)
    labels = [net.labels[i] for i in nodes]
    attrs = {k: v[nodes] for k, v in net.attributes.items()}
    sub = Network(labels, edges, attrs, code_labels=net.code_labels)
    return sub, nodes


def connected_components(net):
    """Node-index arrays of the connected components, one per component.

    Components are listed by their smallest member, ascending; isolated
    nodes form singleton components.
    """
    order = np.full(net.n, -1, dtype=np.int64)
    comps = []
    for seed in range(net.n):
        if order[seed] >= 0:
            continue
        order[seed] = len(comps)
        frontier = np.array([seed], dtype=np.int64)
        members = [frontier]
        while frontier.size:
            nbrs = np.concatenate([net.neighbors(i) for i in frontier])
            nbrs = np.unique(nbrs)
            nbrs = nbrs[order[nbrs] < 0]
            order[nbrs] = len(comps)
            members.append(nbrs)
            frontier = nbrs
        comps.append(np.sort(np.concatenate(members)))
    return comps


def largest_connected_component(net, kind="Full"):
    """Largest connected component of ``net`` as a view.

    Ties between equal-size components go to the one containing the
    smallest node index. A network with nodes but no edges yields the
    single-node view on its smallest index.

    Raises
    ------
    DegenerateInputError
        If the network has no nodes.
    """
    if net.n == 0:
        raise DegenerateInputError("network has no nodes")
    comps = connected_components(net)
    best = max(comps, key=len)  # first maximum: smallest-index tie-break
    sub, index_map = induced_subgraph(net, best)
    return NetworkView(kind=kind, network=sub, index_map=index_map)


def _empty_view(kind, net):
    empty = Network([], np.empty((0, 2), dtype=np.int64),
                    {k: np.empty(0, dtype=np.int64) for k in ATTRIBUTE_FIELDS},
                    code_labels=net.code_labels)
    return NetworkView(kind=kind, network=empty,
                       index_map=np.empty(0, dtype=np.int64))


def extract_views(net):
    """Build the four standard views of a network.

    Full is the largest connected component of the whole network. Student,
    Female, and Male take the Full view's nodes with the matching code
    (``status == student``, ``gender == female`` / ``male``), induce the
    subgraph on them, and keep its largest connected component, so the
    gender views are subsets of Full rather than of Student. A selection
    whose induced subgraph has no edges becomes an explicit empty view.

    Returns
    -------
    Views
        Container with ``full``, ``student``, ``female``, ``male``; index
        maps point into ``net``.
    """
    full = largest_connected_component(net, kind="Full")
    status = net.attributes["status"]
    gender = net.attributes["gender"]
    student_code = net.code_for("status", "student", 1)
    female_code = net.code_for("gender", "female", 1)
    male_code = net.code_for("gender", "male", 2)

    out = {}
    for kind, cond in (("Student", status == student_code),
                       ("Female", gender == female_code),
                       ("Male", gender == male_code)):
        subset = full.index_map[cond[full.index_map]]
        sub, abs_map = induced_subgraph(net, subset)
        if sub.m == 0:
            out[kind] = _empty_view(kind, net)
            continue
        view = largest_connected_component(sub, kind=kind)
        out[kind] = NetworkView(kind=kind, network=view.network,
                                index_map=abs_map[view.index_map])
    return Views(full=full, student=out["Student"],
                 female=out["Female"], male=out["Male"])
