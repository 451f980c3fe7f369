"""Shared fixtures and synthetic-data builders."""

from __future__ import annotations

import numpy as np
import pytest

from campusnet import ATTRIBUTE_FIELDS, Network

HEADER = "id\tstatus\tgender\tmajor\tresidence\tyear\thigh_school"


def make_network(n, edges, **attrs):
    """Network with given edges; unspecified attributes default to code 1."""
    columns = {}
    for name in ATTRIBUTE_FIELDS:
        value = attrs.get(name, 1)
        if np.isscalar(value):
            columns[name] = np.full(n, value, dtype=np.int64)
        else:
            columns[name] = np.asarray(value, dtype=np.int64)
    return Network([str(i) for i in range(n)],
                   np.asarray(edges, dtype=np.int64).reshape(-1, 2), columns)


def random_gnp(n, p, seed):
    """Edge list of a G(n, p) draw."""
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    return np.column_stack((iu[keep], ju[keep]))


def random_connected_gnp(n, p, seed):
    """G(n, p) edges plus a path so the graph is connected."""
    edges = {(int(u), int(v)) for u, v in random_gnp(n, p, seed)}
    edges |= {(i, i + 1) for i in range(n - 1)}
    return np.asarray(sorted(edges), dtype=np.int64)


def synth_attributes(n, seed, missing_rate=0.1, single_gender=False):
    """Plausible attribute columns with some Missing codes."""
    rng = np.random.default_rng(seed)
    attrs = {
        "status": rng.choice([1, 1, 1, 2], size=n),
        "gender": (np.ones(n, dtype=np.int64) if single_gender
                   else rng.choice([1, 2], size=n)),
        "major": rng.integers(1, 9, size=n),
        "residence": rng.integers(1, 6, size=n),
        "year": rng.integers(2006, 2010, size=n),
        "high_school": rng.integers(1, 40, size=n),
    }
    for name in ("major", "residence", "year", "high_school", "gender"):
        if name == "gender" and single_gender:
            continue
        mask = rng.random(n) < missing_rate
        attrs[name] = np.where(mask, 0, attrs[name])
    return {k: np.asarray(v, dtype=np.int64) for k, v in attrs.items()}


def planted_edges(attrs, seed, p_base=0.02, p_match=0.20, key="year"):
    """Random edges with extra density inside equal-code groups."""
    rng = np.random.default_rng(seed)
    codes = attrs[key]
    n = codes.size
    iu, ju = np.triu_indices(n, k=1)
    match = (codes[iu] == codes[ju]) & (codes[iu] != 0)
    p = np.where(match, p_match, p_base)
    keep = rng.random(iu.size) < p
    edges = {(int(u), int(v)) for u, v in zip(iu[keep], ju[keep])}
    edges |= {(i, i + 1) for i in range(n - 1)}
    return np.asarray(sorted(edges), dtype=np.int64)


def write_institution(directory, name, n=80, seed=0, single_gender=False,
                      p_base=0.02, p_match=0.20):
    """Write a synthetic institution's TSV pair; returns the two paths."""
    attrs = synth_attributes(n, seed, single_gender=single_gender)
    edges = planted_edges(attrs, seed + 1, p_base=p_base, p_match=p_match)
    node_path = directory / ("%s_nodes.tsv" % name)
    edge_path = directory / ("%s_edges.tsv" % name)
    lines = [HEADER]
    for i in range(n):
        lines.append("\t".join(
            ["n%d" % i] + [str(int(attrs[f][i])) for f in ATTRIBUTE_FIELDS]))
    node_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    edge_path.write_text(
        "".join("n%d\tn%d\n" % (u, v) for u, v in edges), encoding="utf-8")
    return node_path, edge_path


@pytest.fixture
def two_cliques():
    """Two K5 cliques joined by one bridge edge: an obvious bisection."""
    edges = []
    for base in (0, 5):
        for i in range(5):
            for j in range(i + 1, 5):
                edges.append((base + i, base + j))
    edges.append((0, 5))
    return make_network(10, edges, year=[1] * 5 + [2] * 5)
