"""Immutable undirected simple graphs and the metric/degree/cut primitives.

Vertices are 0-based contiguous internal indices. Original labels from the
input (strings or integers) are kept in a bidirectional map so every report
can speak the caller's language. All graphs are simple: loaders drop
self-loops and parallel edges, counting what they dropped.
"""

from __future__ import annotations

import io
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

# A vertex set is just a set of internal indices; kept as an alias so
# signatures read like the design documents.
VertexSet = set


@dataclass
class Graph:
    n: int
    m: int
    adj: list[tuple[int, ...]]  # sorted neighbor tuples per internal vertex
    labels: list  # internal index -> original label
    index: dict = field(repr=False)  # original label -> internal index
    _adj_sets: list[frozenset] | None = field(default=None, repr=False)
    _csr_arrays: tuple[np.ndarray, np.ndarray] | None = field(default=None, repr=False)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    @property
    def adj_sets(self) -> list[frozenset]:
        """Neighbor sets, built lazily (adjacency tuples stay the source of truth)."""
        if self._adj_sets is None:
            self._adj_sets = [frozenset(nbrs) for nbrs in self.adj]
        return self._adj_sets

    def csr_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """(indptr, indices) flat adjacency, built lazily and cached."""
        if self._csr_arrays is None:
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            for v in range(self.n):
                indptr[v + 1] = indptr[v] + len(self.adj[v])
            indices = np.fromiter(
                (u for v in range(self.n) for u in self.adj[v]),
                dtype=np.int64,
                count=int(indptr[-1]),
            )
            self._csr_arrays = (indptr, indices)
        return self._csr_arrays

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj_sets[u]

    def edges(self) -> Iterator[tuple[int, int]]:
        """Yield each edge once as (u, v) with u < v, in sorted order."""
        for u in range(self.n):
            for v in self.adj[u]:
                if u < v:
                    yield u, v

    def degree_volume(self) -> int:
        return 2 * self.m


def _build(
    pairs: Iterable[tuple],
    all_labels: Sequence | None = None,
) -> tuple[Graph, int, int]:
    """Build a simple graph from (label, label) pairs.

    Returns (graph, dropped_duplicates, dropped_self_loops). When all_labels
    is given it fixes the internal index order and admits isolated vertices;
    otherwise labels are indexed in order of first appearance.
    """
    index: dict = {}
    labels: list = []
    if all_labels is not None:
        for lab in all_labels:
            if lab in index:
                raise ValueError(f"duplicate vertex label {lab!r}")
            index[lab] = len(labels)
            labels.append(lab)

    def intern(lab) -> int:
        i = index.get(lab)
        if i is None:
            if all_labels is not None:
                raise ValueError(f"edge endpoint {lab!r} not in vertex set")
            i = index[lab] = len(labels)
            labels.append(lab)
        return i

    edge_set: set[tuple[int, int]] = set()
    dup = loops = 0
    for a, b in pairs:
        u, v = intern(a), intern(b)
        if u == v:
            loops += 1
            continue
        e = (u, v) if u < v else (v, u)
        if e in edge_set:
            dup += 1
        else:
            edge_set.add(e)

    n = len(labels)
    if n == 0:
        raise ValueError("empty graph: no vertices")
    nbrs: list[list[int]] = [[] for _ in range(n)]
    for u, v in edge_set:
        nbrs[u].append(v)
        nbrs[v].append(u)
    adj = [tuple(sorted(ns)) for ns in nbrs]
    return Graph(n=n, m=len(edge_set), adj=adj, labels=labels, index=index), dup, loops


def from_edges(n: int, edges: Iterable[tuple[int, int]], labels: Sequence | None = None) -> Graph:
    """Graph on vertices 0..n-1 (labels default to the indices themselves)."""
    g, _, _ = _build(edges, all_labels=labels if labels is not None else range(n))
    return g


def _open_text(source) -> tuple[io.TextIOBase, bool]:
    if isinstance(source, (str, Path)):
        return open(source, "r"), True
    return source, False


def load_edge_list(source) -> Graph:
    """Parse whitespace-delimited "u v" lines into a simple graph.

    Lines starting with '#' or '%' are comments. Duplicate edges and
    self-loops are dropped; the counts are reported on stderr because real
    edge lists are dirty and silent repair hides data problems.

    Raises ValueError on malformed lines (with the line number) and on an
    empty graph.
    """
    stream, should_close = _open_text(source)
    pairs = []
    try:
        for ln, line in enumerate(stream, start=1):
            text = line.strip()
            if not text or text.startswith("#") or text.startswith("%"):
                continue
            tokens = text.split()
            if len(tokens) != 2:
                raise ValueError(
                    f"edge list line {ln}: expected two vertex tokens, got {len(tokens)}: {text!r}"
                )
            pairs.append((tokens[0], tokens[1]))
    finally:
        if should_close:
            stream.close()
    if not pairs:
        raise ValueError("empty graph: edge list has no edges")
    g, dup, loops = _build(pairs)
    if dup or loops:
        print(
            f"load_edge_list: dropped {dup} duplicate edge(s) and {loops} self-loop(s)",
            file=sys.stderr,
        )
    return g


def save_edge_list(g: Graph, dest, header_comments: Sequence[str] = ()) -> None:
    """Write "u v" lines using original labels; comments go first, '#'-prefixed."""
    stream, should_close = (open(dest, "w"), True) if isinstance(dest, (str, Path)) else (dest, False)
    try:
        for comment in header_comments:
            stream.write(f"# {comment}\n")
        for u, v in g.edges():
            stream.write(f"{g.labels[u]} {g.labels[v]}\n")
    finally:
        if should_close:
            stream.close()


def load_pace_gr(source) -> Graph:
    """Read a PACE-style .gr file: "p tw <n> <m>" header, 1-based edge lines.

    'c'-prefixed lines are comments. Vertex labels are the original 1-based
    integers.
    """
    stream, should_close = _open_text(source)
    n = None
    pairs: list[tuple[int, int]] = []
    try:
        for ln, line in enumerate(stream, start=1):
            text = line.strip()
            if not text or text.startswith("c"):
                continue
            tokens = text.split()
            if tokens[0] == "p":
                if len(tokens) != 4 or tokens[1] != "tw":
                    raise ValueError(f".gr line {ln}: bad problem line {text!r}")
                n = int(tokens[2])
                continue
            if len(tokens) != 2:
                raise ValueError(f".gr line {ln}: expected two endpoints, got {text!r}")
            pairs.append((int(tokens[0]), int(tokens[1])))
    finally:
        if should_close:
            stream.close()
    if n is None:
        raise ValueError(".gr stream has no 'p tw' problem line")
    for u, v in pairs:
        if not (1 <= u <= n and 1 <= v <= n):
            raise ValueError(f".gr edge ({u},{v}) outside 1..{n}")
    g, _, _ = _build(pairs, all_labels=range(1, n + 1))
    return g


def subgraph(g: Graph, vertices: Iterable[int]) -> Graph:
    """Induced subgraph; original labels retained, internal indices reassigned
    in increasing order of the old indices."""
    keep = sorted(set(vertices))
    keep_set = set(keep)
    edges = [
        (g.labels[u], g.labels[v])
        for u in keep
        for v in g.adj[u]
        if u < v and v in keep_set
    ]
    sub, _, _ = _build(edges, all_labels=[g.labels[u] for u in keep])
    return sub


def connected_components(g: Graph) -> list[list[int]]:
    """Components as sorted index lists, in order of their smallest vertex."""
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        comp = [s]
        seen[s] = True
        for u in comp:
            for v in g.adj[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
        comps.append(sorted(comp))
    return comps


def giant_component(g: Graph) -> Graph:
    """Induced subgraph on the largest component.

    Ties go to the component containing the smallest internal index (the
    first one discovered, since discovery scans indices in order).
    """
    best: list[int] = []
    for comp in connected_components(g):
        if len(comp) > len(best):
            best = comp
    return subgraph(g, best)


def bfs_distances(g: Graph, s: int) -> list[int]:
    """Unweighted shortest-path distances from s; unreachable vertices get -1."""
    if not (0 <= s < g.n):
        raise ValueError(f"vertex {s} out of range 0..{g.n - 1}")
    dist = [-1] * g.n
    dist[s] = 0
    frontier = [s]
    while frontier:
        nxt = []
        for u in frontier:
            du = dist[u] + 1
            for v in g.adj[u]:
                if dist[v] < 0:
                    dist[v] = du
                    nxt.append(v)
        frontier = nxt
    return dist


def _csr(g: Graph):
    from scipy.sparse import csr_matrix

    indptr, indices = g.csr_arrays()
    data = np.ones(len(indices), dtype=np.int8)
    return csr_matrix((data, indices, indptr), shape=(g.n, g.n))


def all_pairs_distances(g: Graph) -> np.ndarray:
    """Dense n-by-n unweighted distance matrix (scipy BFS per source).

    Memory is O(n^2); intended for the exact-metric paths, not million-node
    graphs. Unreachable pairs come back as -1.
    """
    from scipy.sparse.csgraph import shortest_path

    if g.n == 1:
        return np.zeros((1, 1), dtype=np.int32)
    d = shortest_path(_csr(g), method="D", unweighted=True, directed=False)
    out = np.where(np.isinf(d), -1, d).astype(np.int32)
    return out


def _require_connected(dist_row: Sequence[int]) -> None:
    if any(d < 0 for d in dist_row):
        raise ValueError(
            "graph is disconnected; take giant_component() first"
        )


def eccentricity(g: Graph, v: int) -> int:
    dist = bfs_distances(g, v)
    _require_connected(dist)
    return max(dist)


def diameter(g: Graph, sample_sources: int | None = None, seed: int = 0) -> int:
    """Exact diameter by all-sources BFS.

    For large graphs pass sample_sources to BFS from a random subset only
    (returns a lower bound; documented trade-off, the exact path is O(n*m)).
    """
    dist0 = bfs_distances(g, 0)
    _require_connected(dist0)
    if sample_sources is not None and sample_sources < g.n:
        rng = np.random.Generator(np.random.Philox(seed))
        sources = rng.choice(g.n, size=sample_sources, replace=False)
        return max(max(bfs_distances(g, int(s))) for s in sources)
    if g.n <= 4096:
        return int(all_pairs_distances(g).max())
    return max(max(bfs_distances(g, s)) for s in range(g.n))


def avg_clustering(g: Graph) -> float:
    """Mean of per-vertex clustering coefficients.

    Vertices of degree < 2 contribute 0 (a convention; the coefficient is
    otherwise undefined for them).
    """
    sets = g.adj_sets
    total = 0.0
    for v in range(g.n):
        d = len(g.adj[v])
        if d < 2:
            continue
        links = sum(len(sets[v] & sets[u]) for u in g.adj[v]) // 2
        total += links / (d * (d - 1) / 2)
    return total / g.n


def conductance(g: Graph, s: Iterable[int]) -> float:
    """Cut size over the smaller side's degree volume.

    phi(S) = cut(S, ~S) / min(vol(S), vol(~S)). Raises if S is empty or all
    of V, or if the smaller side has zero volume.
    """
    side = set(s)
    if not side:
        raise ValueError("conductance: S is empty")
    if len(side) >= g.n:
        raise ValueError("conductance: S is the whole vertex set")
    for v in side:
        if not (0 <= v < g.n):
            raise ValueError(f"conductance: vertex {v} out of range")
    vol = sum(len(g.adj[v]) for v in side)
    cut = sum(1 for v in side for u in g.adj[v] if u not in side)
    denom = min(vol, 2 * g.m - vol)
    if denom == 0:
        raise ValueError("conductance: smaller side has zero volume")
    return cut / denom


@dataclass
class CoreDecomposition:
    core: list[int]  # per-vertex core number
    k_min: int
    k_max: int


def k_core(g: Graph) -> CoreDecomposition:
    """Core numbers by min-degree peeling with a bucket queue (linear time)."""
    n = g.n
    deg = [len(g.adj[v]) for v in range(n)]
    maxdeg = max(deg) if n else 0
    # bucket sort vertices by degree; pos/vert arrays let us swap in O(1)
    bins = [0] * (maxdeg + 2)
    for d in deg:
        bins[d] += 1
    start = 0
    for d in range(maxdeg + 1):
        bins[d], start = start, start + bins[d]
    vert = [0] * n
    pos = [0] * n
    fill = bins[: maxdeg + 1].copy()
    for v in range(n):
        pos[v] = fill[deg[v]]
        vert[pos[v]] = v
        fill[deg[v]] += 1
    core = deg[:]
    for i in range(n):
        v = vert[i]
        for u in g.adj[v]:
            if core[u] > core[v]:
                du = core[u]
                pu, pw = pos[u], bins[du]
                w = vert[pw]
                if u != w:
                    vert[pu], vert[pw] = w, u
                    pos[u], pos[w] = pw, pu
                bins[du] += 1
                core[u] -= 1
    return CoreDecomposition(core=core, k_min=min(core), k_max=max(core))
