"""Community detection: modularity oracle checks, detector behavior."""

import numpy as np
import pytest

from campusnet import (DegenerateInputError, Partition, detect_all, kl_refine,
                       louvain, modularity, spectral_partition)
from campusnet.community import modularity_value

from conftest import make_network, random_connected_gnp, random_gnp
from oracles import best_partition_q, naive_modularity


def random_partition(n, rng, max_groups=4):
    labels = rng.integers(0, max_groups, size=n)
    return Partition.from_labels(labels)


def test_modularity_matches_definition():
    rng = np.random.default_rng(7)
    for trial in range(20):
        n = int(rng.integers(4, 25))
        edges = random_connected_gnp(n, 0.2, seed=50 + trial)
        net = make_network(n, edges)
        p = random_partition(n, rng)
        expected = naive_modularity(n, [tuple(e) for e in edges], p.assignment)
        score = modularity(net, p)
        assert score.q == pytest.approx(expected, abs=1e-12)
        assert modularity_value(net, p.assignment) == pytest.approx(expected,
                                                                    abs=1e-12)
        assert score.e.sum() == pytest.approx(1.0)
        assert score.q == pytest.approx(
            float(np.trace(score.e) - score.b @ score.b))


def test_modularity_errors():
    net = make_network(3, np.empty((0, 2), dtype=np.int64))
    with pytest.raises(DegenerateInputError):
        modularity(net, Partition.from_labels([0, 0, 0]))
    net = make_network(3, [(0, 1), (1, 2)])
    with pytest.raises(ValueError):
        modularity(net, Partition.from_labels([0, 1]))  # wrong length
    with pytest.raises(ValueError):
        Partition(assignment=np.array([0, 2, 2]))  # gap in labels


def test_partition_canonical_form():
    p = Partition.from_labels([5, 5, 2, 7, 2])
    assert p.assignment.tolist() == [0, 0, 1, 2, 1]
    assert p.n_communities == 3
    assert p.sizes().tolist() == [2, 2, 1]
    assert [c.tolist() for c in p.communities()] == [[0, 1], [2, 4], [3]]
    q = Partition.from_labels([1, 1, 0, 2, 0])
    assert np.array_equal(p.assignment, q.assignment)


def test_two_cliques_split(two_cliques):
    expected = [0] * 5 + [1] * 5
    for p in (spectral_partition(two_cliques, mode="one"),
              spectral_partition(two_cliques, mode="two"),
              louvain(two_cliques, seed=42)):
        assert p.assignment.tolist() == expected, p.method


def test_complete_graph_stays_whole():
    n = 6
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
    net = make_network(n, edges)
    for p in (spectral_partition(net, mode="one"),
              spectral_partition(net, mode="two"),
              louvain(net, seed=1)):
        assert p.n_communities == 1, p.method


def test_detectors_near_exhaustive_optimum():
    # small-scale version of the acceptance sweep
    rng = np.random.default_rng(13)
    for trial in range(12):
        n = int(rng.integers(4, 9))
        edges = random_connected_gnp(n, 0.35, seed=400 + trial)
        net = make_network(n, edges)
        best = best_partition_q(n, [tuple(e) for e in edges])
        found = max(modularity(net, p).q for p in detect_all(net, seed=3))
        assert found <= best + 1e-9
        assert found >= best - 0.05


def test_spectral_deterministic():
    net = make_network(40, random_connected_gnp(40, 0.12, seed=8))
    for mode in ("one", "two"):
        a = spectral_partition(net, mode=mode)
        b = spectral_partition(net, mode=mode)
        assert np.array_equal(a.assignment, b.assignment)


def test_spectral_mode_validation(two_cliques):
    with pytest.raises(ValueError):
        spectral_partition(two_cliques, mode="three")


def test_louvain_seed_determinism():
    net = make_network(60, random_connected_gnp(60, 0.1, seed=14))
    a = louvain(net, seed=123)
    b = louvain(net, seed=123)
    assert np.array_equal(a.assignment, b.assignment)
    assert a.method == "louvain" and a.seed == 123
    c = louvain(net, seed=7)
    assert c.n_communities >= 1  # different seed still yields a partition


def test_kl_refine_never_decreases():
    rng = np.random.default_rng(23)
    for trial in range(25):
        n = int(rng.integers(5, 30))
        edges = random_connected_gnp(n, 0.2, seed=800 + trial)
        net = make_network(n, edges)
        p = random_partition(n, rng, max_groups=5)
        refined = kl_refine(net, p)
        q_in = modularity(net, p).q
        q_out = modularity(net, refined).q
        assert q_out >= q_in - 1e-12
        assert refined.n_communities <= p.n_communities
        assert refined.method == "kl"  # unnamed input gets the bare tag


def test_kl_refine_fixes_swapped_pair(two_cliques):
    # perfect split with nodes 0 and 5 exchanged: refinement restores it
    wrong = Partition.from_labels([1, 0, 0, 0, 0, 0, 1, 1, 1, 1])
    refined = kl_refine(two_cliques, wrong)
    assert refined.assignment.tolist() == [0] * 5 + [1] * 5
    q_perfect = modularity(two_cliques,
                           Partition.from_labels([0] * 5 + [1] * 5)).q
    assert modularity(two_cliques, refined).q == pytest.approx(q_perfect)


def test_kl_refine_single_community_unchanged(two_cliques):
    p = Partition.from_labels([0] * 10)
    refined = kl_refine(two_cliques, p)
    assert refined.n_communities == 1


def test_detect_all_contract(two_cliques):
    parts = detect_all(two_cliques, seed=42)
    assert [p.method for p in parts] == [
        "spectral1", "spectral1+kl", "spectral2", "spectral2+kl",
        "louvain", "louvain+kl"]
    for p in parts:
        assert len(p) == two_cliques.n
        uniq = np.unique(p.assignment)
        assert uniq.tolist() == list(range(uniq.size))
    again = detect_all(two_cliques, seed=42)
    for p, q in zip(parts, again):
        assert np.array_equal(p.assignment, q.assignment)


def test_refined_no_worse_across_random_graphs():
    rng = np.random.default_rng(31)
    for trial in range(6):
        n = int(rng.integers(12, 40))
        edges = random_connected_gnp(n, 0.15, seed=900 + trial)
        net = make_network(n, edges)
        parts = detect_all(net, seed=5)
        by_method = {p.method: modularity(net, p).q for p in parts}
        for base in ("spectral1", "spectral2", "louvain"):
            assert by_method[base + "+kl"] >= by_method[base] - 1e-12
