"""Shared graph builders and independent brute-force oracles.

The oracles here deliberately avoid the library's own data structures and
algorithms (plain dict-of-set adjacency, itertools enumeration) so that a
bug in the package cannot hide inside its own test harness.
"""

from __future__ import annotations

import itertools

import numpy as np

import treescope as ts


def rand_connected(rng: np.random.Generator, n: int, extra: int = 0) -> ts.Graph:
    """Random connected graph: random recursive tree plus `extra` chords."""
    edges = set()
    for v in range(1, n):
        u = int(rng.integers(v))
        edges.add((u, v))
    tries = 0
    while extra > 0 and tries < 50 * (extra + 1):
        tries += 1
        u, v = rng.integers(n), rng.integers(n)
        u, v = int(min(u, v)), int(max(u, v))
        if u != v and (u, v) not in edges:
            edges.add((u, v))
            extra -= 1
    return ts.from_edges(n, sorted(edges))


def rand_graph(rng: np.random.Generator, n: int, p: float) -> ts.Graph:
    """Possibly-disconnected binomial graph over fixed vertex set 0..n-1."""
    edges = [
        (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p
    ]
    return ts.from_edges(n, edges)


def rand_ktree(rng: np.random.Generator, n: int, k: int) -> ts.Graph:
    """Random k-tree on n > k vertices (chordal, treewidth exactly k)."""
    assert n > k
    edges = [(a, b) for a in range(k + 1) for b in range(a + 1, k + 1)]
    cliques = [list(range(k + 1))]
    for v in range(k + 1, n):
        base = cliques[int(rng.integers(len(cliques)))]
        drop = int(rng.integers(k + 1))
        face = [u for i, u in enumerate(base) if i != drop]
        for u in face:
            edges.append((u, v))
        cliques.append(face + [v])
    return ts.from_edges(n, edges)


def adj_dict(g: ts.Graph) -> dict[int, set[int]]:
    return {v: set(g.adj[v]) for v in range(g.n)}


def kcore_brute(g: ts.Graph) -> list[int]:
    """Core numbers by literal iterative deletion, one k at a time."""
    core = [0] * g.n
    k = 1
    while True:
        adj = adj_dict(g)
        # delete everything of degree < k until stable
        changed = True
        while changed:
            changed = False
            for v in list(adj):
                if len(adj[v]) < k:
                    for u in adj[v]:
                        adj[u].discard(v)
                    del adj[v]
                    changed = True
        if not adj:
            return core
        for v in adj:
            core[v] = k
        k += 1


def conductance_brute(g: ts.Graph, side: set[int]) -> float:
    cut = 0
    vol = 0
    for v in side:
        for u in g.adj[v]:
            if u not in side:
                cut += 1
        vol += len(g.adj[v])
    return cut / min(vol, 2 * g.m - vol)


def delta_brute(g: ts.Graph) -> float:
    """Four-point hyperbolicity by direct enumeration of all quadruples."""
    dist = [ts.bfs_distances(g, v) for v in range(g.n)]
    best = 0
    for x, y, u, v in itertools.combinations(range(g.n), 4):
        s1 = dist[x][y] + dist[u][v]
        s2 = dist[x][u] + dist[y][v]
        s3 = dist[x][v] + dist[y][u]
        a, b, _ = sorted((s1, s2, s3), reverse=True)
        best = max(best, a - b)
    return best / 2.0


def is_peo(g_adj: dict[int, set[int]], pi: list[int]) -> bool:
    """Perfect-elimination check: each vertex's later neighbors form a clique."""
    pos = {v: i for i, v in enumerate(pi)}
    for v in pi:
        later = [u for u in g_adj[v] if pos[u] > pos[v]]
        for a, b in itertools.combinations(later, 2):
            if b not in g_adj[a]:
                return False
    return True


def treewidth_brute_tiny(g: ts.Graph) -> int:
    """Exact treewidth by trying every elimination ordering (n <= 8)."""
    best = g.n - 1
    for pi in itertools.permutations(range(g.n)):
        adj = adj_dict(g)
        width = 0
        for v in pi:
            nbrs = list(adj[v])
            width = max(width, len(nbrs))
            for a, b in itertools.combinations(nbrs, 2):
                adj[a].add(b)
                adj[b].add(a)
            for u in nbrs:
                adj[u].discard(v)
            del adj[v]
            if width >= best:
                break
        best = min(best, width)
    return best


def valid_td_brute(g: ts.Graph, td: ts.TreeDecomposition) -> bool:
    """Direct re-check of the three decomposition conditions."""
    nb = len(td.bags)
    if len(td.tree) != nb - 1:
        return False
    # tree connectivity
    nbrs: dict[int, list[int]] = {b: [] for b in range(nb)}
    for i, j in td.tree:
        nbrs[i].append(j)
        nbrs[j].append(i)
    seen = {0}
    stack = [0]
    while stack:
        b = stack.pop()
        for c in nbrs[b]:
            if c not in seen:
                seen.add(c)
                stack.append(c)
    if len(seen) != nb:
        return False
    # coverage
    covered = set()
    for bag in td.bags:
        covered |= bag
    if covered != set(range(g.n)):
        return False
    for u in range(g.n):
        for v in g.adj[u]:
            if u < v and not any(u in bag and v in bag for bag in td.bags):
                return False
    # connected subtree per vertex
    for v in range(g.n):
        holding = [b for b in range(nb) if v in td.bags[b]]
        if not holding:
            return False
        hold = set(holding)
        seen = {holding[0]}
        stack = [holding[0]]
        while stack:
            b = stack.pop()
            for c in nbrs[b]:
                if c in hold and c not in seen:
                    seen.add(c)
                    stack.append(c)
        if seen != hold:
            return False
    return True
