import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import treescope as ts
from conftest import adj_dict, is_peo, rand_connected, rand_graph, rand_ktree

ALL = sorted(ts.HEURISTICS)


# ---------------------------------------------------------------------------
# basic contract: permutations, reproducibility


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(ALL))
def test_every_heuristic_returns_a_permutation(seed, name):
    rng = np.random.default_rng(seed)
    g = rand_connected(rng, int(rng.integers(2, 40)), extra=int(rng.integers(0, 30)))
    ordering = ts.compute_ordering(g, name, seed=seed)
    assert sorted(ordering.pi) == list(range(g.n))
    pos = ordering.position()
    assert all(ordering.pi[pos[v]] == v for v in range(g.n))


def test_compute_ordering_rejects_unknown_name():
    with pytest.raises(ValueError, match="heuristic"):
        ts.compute_ordering(ts.gen_cycle(4), "bogus", seed=0)


def test_seed_reproducibility_greedy():
    g = ts.gen_er(150, 0.05, seed=2)
    a = ts.order_mindeg(g, seed=3)
    b = ts.order_mindeg(g, seed=3)
    c = ts.order_mindeg(g, seed=4)
    assert a.pi == b.pi
    assert a.pi != c.pi  # overwhelmingly likely on a graph with many ties


def test_search_family_is_seed_independent():
    g = ts.gen_grid(8, 8)
    assert ts.order_mcs(g, seed=0).pi == ts.order_mcs(g, seed=99).pi
    assert ts.order_lexm(g, seed=0).pi == ts.order_lexm(g, seed=99).pi
    assert ts.order_mcs(g, seed=0).tiebreak == "min-index"


# ---------------------------------------------------------------------------
# width pins on closed-form families


def width_of(g, name, seed=0):
    return ts.gavril_td(g, ts.compute_ordering(g, name, seed=seed)).width()


def test_paths_and_trees_width_one():
    path = ts.from_edges(10, [(i, i + 1) for i in range(9)])
    tree = ts.gen_binary_tree(5)
    for name in ["mindeg", "minfill", "amd", "mcs", "lexm"]:
        assert width_of(path, name) == 1
        assert width_of(tree, name) == 1


def test_cycle_width_two_all_heuristics():
    c10 = ts.gen_cycle(10)
    for name in ALL:
        assert width_of(c10, name) == 2


def test_clique_single_bag():
    k20 = ts.gen_clique(20)
    for name in ALL:
        td = ts.gavril_td(k20, ts.compute_ordering(k20, name, seed=0))
        assert td.n_bags == 1 and td.width() == 19


def test_grid_width_pins():
    g = ts.gen_grid(10, 10)
    assert abs(width_of(g, "lexm") - 10) <= 1
    assert abs(width_of(g, "mcs") - 10) <= 1
    assert width_of(g, "mindeg") <= 16
    assert width_of(g, "minfill") <= 16
    assert width_of(g, "amd") <= 16
    assert width_of(g, "metnnd") <= 20


def test_small_er_mcs_width():
    g = ts.giant_component(ts.gen_er(100, 0.5, seed=0))
    w = width_of(g, "mcs")
    assert abs(w - 91) <= 0.10 * 91


def test_er16_amd_width():
    g = ts.giant_component(ts.gen_er(5000, 1.6 / 5000, seed=0))
    w = width_of(g, "amd")
    assert abs(w - 79) <= 0.20 * 79


# ---------------------------------------------------------------------------
# amd matches mindeg where the degree bound is exact (fill-free graphs)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_amd_width_one_on_trees(seed):
    rng = np.random.default_rng(seed)
    g = rand_connected(rng, int(rng.integers(2, 50)), extra=0)
    assert width_of(g, "amd", seed=seed) == 1


# ---------------------------------------------------------------------------
# mcs / lexm: zero fill on chordal inputs, minimal triangulations


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 4))
def test_mcs_and_lexm_zero_fill_on_ktrees(seed, k):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(k + 2, 30))
    g = rand_ktree(rng, n, k)
    for fn in (ts.order_mcs, ts.order_lexm):
        tri = ts.triangulate(g, fn(g, seed=0))
        assert tri.fill_edges == []


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_lexm_ordering_is_peo_of_filled_graph(seed):
    rng = np.random.default_rng(seed)
    g = rand_connected(rng, int(rng.integers(3, 25)), extra=int(rng.integers(0, 15)))
    ordering = ts.order_lexm(g, seed=0)
    tri = ts.triangulate(g, ordering)
    filled = adj_dict(g)
    for u, v in tri.fill_edges:
        filled[u].add(v)
        filled[v].add(u)
    assert is_peo(filled, ordering.pi)


# ---------------------------------------------------------------------------
# nested dissection


def test_nested_dissection_parameters_validated():
    g = ts.gen_grid(4, 4)
    with pytest.raises(ValueError):
        ts.order_nested_dissection(g, seed=0, leaf_threshold=0)
    with pytest.raises(ValueError):
        ts.order_nested_dissection(g, seed=0, balance=0.7)


def test_nested_dissection_handles_disconnected():
    g = ts.from_edges(8, [(0, 1), (1, 2), (4, 5), (5, 6), (6, 7)])
    ordering = ts.order_nested_dissection(g, seed=0)
    assert sorted(ordering.pi) == list(range(8))


def test_nested_dissection_on_large_grid():
    g = ts.gen_grid(20, 20)
    ordering = ts.order_nested_dissection(g, seed=0, leaf_threshold=16)
    assert sorted(ordering.pi) == list(range(400))
    td = ts.gavril_td(g, ordering)
    assert ts.validate_td(g, td).valid
    assert td.width() <= 2 * 20  # coarse sanity: near sqrt(n)-scaled


# ---------------------------------------------------------------------------
# serialization


def test_save_load_ordering_round_trip(tmp_path):
    g = ts.gen_grid(5, 5)
    ordering = ts.order_mindeg(g, seed=1)
    dest = tmp_path / "g.ord"
    ts.save_ordering(ordering, g, dest, header_comments=["hello"])
    loaded = ts.load_ordering(g, dest)
    assert loaded.pi == ordering.pi
    assert dest.read_text().startswith("# hello")


def test_load_ordering_rejects_non_permutation(tmp_path):
    g = ts.gen_cycle(4)
    dest = tmp_path / "bad.ord"
    dest.write_text("0\n1\n1\n2\n")
    with pytest.raises(ValueError):
        ts.load_ordering(g, dest)
    dest.write_text("0\n1\n")
    with pytest.raises(ValueError):
        ts.load_ordering(g, dest)
