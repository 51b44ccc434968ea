import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import treescope as ts
from conftest import delta_brute, rand_connected


# ---------------------------------------------------------------------------
# four-point delta


def test_delta_known_families():
    assert ts.delta_exact(ts.gen_clique(6)).delta == 0.0
    assert ts.delta_exact(ts.gen_binary_tree(4)).delta == 0.0
    assert ts.delta_exact(ts.gen_cycle(4)).delta == 1.0
    assert ts.delta_exact(ts.gen_cycle(5)).delta == 0.5


def test_delta_block_graph_is_zero():
    # two cliques sharing nothing but a bridge edge: every block is a clique
    e = []
    for a in range(6):
        for b in range(a + 1, 6):
            e.append((a, b))
            e.append((6 + a, 6 + b))
    e.append((0, 6))
    assert ts.delta_exact(ts.from_edges(12, e)).delta == 0.0


@settings(max_examples=35, deadline=None)
@given(st.integers(0, 10_000))
def test_delta_matches_quadruple_enumeration(seed):
    rng = np.random.default_rng(seed)
    g = rand_connected(rng, int(rng.integers(4, 13)), extra=int(rng.integers(0, 12)))
    got = ts.delta_exact(g)
    assert got.delta == delta_brute(g)
    assert (2 * got.delta) == int(2 * got.delta)  # always a half-integer
    assert got.delta <= got.diameter / 2


def test_delta_small_graphs_zero():
    assert ts.delta_exact(ts.from_edges(1, [])).delta == 0.0
    assert ts.delta_exact(ts.from_edges(2, [(0, 1)])).delta == 0.0
    assert ts.delta_exact(ts.gen_clique(3)).delta == 0.0


def test_delta_cap_and_force():
    g = ts.gen_er(350, 0.02, seed=0)
    g = ts.giant_component(g)
    assert g.n > 300
    with pytest.raises(ValueError, match="force"):
        ts.delta_exact(g)
    # force actually runs above the cap
    out = ts.delta_exact(ts.gen_grid(4, 4), cap=10, force=True)
    assert out.delta == 3.0


def test_delta_threads_invariant():
    g = ts.giant_component(ts.gen_er(80, 0.06, seed=1))
    a = ts.delta_exact(g, threads=1)
    b = ts.delta_exact(g, threads=3)
    assert a.delta == b.delta


def test_delta_disconnected_rejected():
    g = ts.from_edges(6, [(0, 1), (2, 3)])
    with pytest.raises(ValueError, match="giant_component"):
        ts.delta_exact(g)


def test_delta_subdivided_grid_closed_form():
    """Doubling the edge length scales the four-point maximum accordingly."""
    for n, k in [(2, 0), (3, 0), (2, 1), (3, 1), (2, 2), (4, 0)]:
        g = ts.gen_grid_subdivision(n, k)
        assert ts.delta_exact(g).delta == (n - 1) * (k + 1)


# ---------------------------------------------------------------------------
# geodesic cycles


def test_check_geodesic_cycle_on_cycles():
    c6 = ts.gen_cycle(6)
    chk = ts.check_geodesic_cycle(c6, [0, 1, 2, 3, 4, 5])
    assert chk.is_cycle and chk.is_geodesic and chk.length == 6


def test_check_geodesic_cycle_chord_breaks_geodesic():
    g = ts.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)])
    chk = ts.check_geodesic_cycle(g, [0, 1, 2, 3, 4, 5])
    assert chk.is_cycle and not chk.is_geodesic


def test_check_geodesic_cycle_non_cycle_input():
    g = ts.gen_grid(3, 3)
    chk = ts.check_geodesic_cycle(g, [0, 1, 2])  # a path, not a closed triangle
    assert not chk.is_cycle
    assert chk.length == 0


def test_check_geodesic_cycle_validation():
    g = ts.gen_cycle(5)
    with pytest.raises(ValueError):
        ts.check_geodesic_cycle(g, [0, 1])
    with pytest.raises(ValueError):
        ts.check_geodesic_cycle(g, [0, 1, 1])
    with pytest.raises(ValueError):
        ts.check_geodesic_cycle(g, [0, 1, 99])


def longest_geodesic_tiny_oracle(g: ts.Graph) -> int:
    """Enumerate every vertex subset and cyclic order (n <= 7)."""
    best = 0
    verts = range(g.n)
    for size in range(3, g.n + 1):
        for subset in itertools.combinations(verts, size):
            first = subset[0]
            for rest in itertools.permutations(subset[1:]):
                cyc = [first, *rest]
                try:
                    chk = ts.check_geodesic_cycle(g, cyc)
                except ValueError:
                    continue
                if chk.is_cycle and chk.is_geodesic:
                    best = max(best, chk.length)
    return best


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_longest_geodesic_cycle_matches_tiny_oracle(seed):
    rng = np.random.default_rng(seed)
    g = rand_connected(rng, int(rng.integers(3, 8)), extra=int(rng.integers(0, 6)))
    assert ts.longest_geodesic_cycle_bruteforce(g) == longest_geodesic_tiny_oracle(g)


def test_longest_geodesic_cycle_knowns():
    assert ts.longest_geodesic_cycle_bruteforce(ts.gen_cycle(9)) == 9
    assert ts.longest_geodesic_cycle_bruteforce(ts.gen_binary_tree(2)) == 0
    assert ts.longest_geodesic_cycle_bruteforce(ts.gen_grid(3, 3)) == 4
    with pytest.raises(ValueError):
        ts.longest_geodesic_cycle_bruteforce(ts.gen_grid(4, 4))  # n = 16 > 14


# ---------------------------------------------------------------------------
# the inequality chain


def test_verify_theorem3_small_case():
    rep = ts.verify_theorem3(2, 1, seed=0)
    assert rep.treewidth == 2 and rep.treewidth_source == "oracle"
    assert rep.nu == 8
    assert rep.tl_analytic == 4
    assert rep.face_cycle_geodesic and rep.face_cycle_length == 8
    assert rep.chain_holds
    best = min(rep.td_lengths.values())
    assert rep.delta <= best <= (rep.treewidth + 1) * rep.nu
    assert rep.bound() == (rep.treewidth + 1) * rep.nu


def test_verify_theorem3_heuristic_subset():
    rep = ts.verify_theorem3(2, 0, heuristics=["mindeg", "lexm"], seed=0)
    assert set(rep.td_lengths) == {"mindeg", "lexm"}
    assert rep.chain_holds


def test_verify_theorem3_lengths_at_least_analytic_floor():
    # each heuristic's bag-tree length is at least the analytic treelength
    for n, k in [(2, 0), (3, 0), (2, 1)]:
        rep = ts.verify_theorem3(n, k, seed=0)
        assert min(rep.td_lengths.values()) >= rep.tl_analytic - (k + 1)
