"""Mixing matrices and assortativity against a dict-based oracle."""

import numpy as np
import pytest

from campusnet import (DegenerateInputError, assortativity, mixing_matrix)

from conftest import make_network, random_connected_gnp
from oracles import naive_assortativity


def test_matches_naive_oracle():
    rng = np.random.default_rng(11)
    for trial in range(20):
        n = int(rng.integers(6, 50))
        edges = random_connected_gnp(n, 0.15, seed=trial)
        codes = rng.integers(0, 4, size=n)
        if np.unique(codes[np.unique(edges)]).size < 2:
            continue
        net = make_network(n, edges, year=codes)
        mm = mixing_matrix(net, "year")
        expected = naive_assortativity([tuple(e) for e in edges], codes)
        assert assortativity(mm) == pytest.approx(expected, abs=1e-12)


def test_counts_shape_and_sum():
    net = make_network(4, [(0, 1), (1, 2), (2, 3)], major=[1, 1, 2, 0])
    mm = mixing_matrix(net, "major")
    assert mm.categories.tolist() == [0, 1, 2]
    assert mm.counts.sum() == 2 * net.m
    assert (mm.counts == mm.counts.T).all()
    assert mm.normalized.sum() == pytest.approx(1.0)


def test_perfectly_assortative():
    net = make_network(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)],
                       residence=[7, 7, 7, 9, 9, 9])
    assert assortativity(mixing_matrix(net, "residence")) == pytest.approx(1.0)


def test_perfectly_disassortative_two_types():
    net = make_network(4, [(0, 1), (2, 3), (0, 3), (2, 1)],
                       gender=[1, 2, 1, 2])
    assert assortativity(mixing_matrix(net, "gender")) == pytest.approx(-1.0)


def test_known_two_by_two_value():
    # e = [[0.4, 0.1], [0.1, 0.4]] gives r = 0.6
    edges = []
    year = [1] * 4 + [2] * 4
    edges += [(0, 1), (1, 2), (2, 3), (0, 2)]
    edges += [(4, 5), (5, 6), (6, 7), (4, 6)]
    edges += [(0, 4), (1, 5)]
    net = make_network(8, edges, year=year)
    assert assortativity(mixing_matrix(net, "year")) == pytest.approx(0.6)


def test_single_category_is_degenerate():
    net = make_network(3, [(0, 1), (1, 2)], year=5)
    with pytest.raises(DegenerateInputError):
        assortativity(mixing_matrix(net, "year"))


def test_no_edges_is_degenerate():
    net = make_network(3, np.empty((0, 2), dtype=np.int64))
    with pytest.raises(DegenerateInputError):
        mixing_matrix(net, "year")


def test_unknown_attribute():
    net = make_network(3, [(0, 1)])
    with pytest.raises(ValueError):
        mixing_matrix(net, "dorm")


def test_exclude_missing_drops_edges_and_category():
    year = [2006, 0, 2006, 2007]
    net = make_network(4, [(0, 1), (0, 2), (2, 3), (1, 3)], year=year)
    full = mixing_matrix(net, "year")
    assert 0 in full.categories.tolist()
    assert full.counts.sum() == 8
    trimmed = mixing_matrix(net, "year", exclude_missing=True)
    assert trimmed.categories.tolist() == [2006, 2007]
    assert trimmed.counts.sum() == 4  # only 0-2 and 2-3 survive


def test_exclude_missing_all_edges_touch_missing():
    net = make_network(3, [(0, 1), (1, 2)], year=[0, 2006, 0])
    with pytest.raises(DegenerateInputError):
        mixing_matrix(net, "year", exclude_missing=True)


def test_category_relabel_invariance():
    rng = np.random.default_rng(3)
    edges = random_connected_gnp(30, 0.2, seed=9)
    codes = rng.integers(1, 5, size=30)
    net = make_network(30, edges, major=codes)
    r1 = assortativity(mixing_matrix(net, "major"))
    # bijective renaming of the codes must not change r
    remap = {1: 40, 2: 17, 3: 99, 4: 3}
    renamed = np.array([remap[int(c)] for c in codes])
    net2 = make_network(30, edges, major=renamed)
    r2 = assortativity(mixing_matrix(net2, "major"))
    assert r1 == pytest.approx(r2, abs=1e-12)


def test_shuffled_labels_center_near_zero():
    rng = np.random.default_rng(21)
    edges = random_connected_gnp(60, 0.1, seed=2)
    codes = rng.integers(1, 4, size=60)
    values = []
    for _ in range(50):
        net = make_network(60, edges, year=rng.permutation(codes))
        values.append(assortativity(mixing_matrix(net, "year")))
    assert abs(float(np.mean(values))) < 0.05
    assert all(-1.0 - 1e-9 <= v <= 1.0 + 1e-9 for v in values)
