"""Tree decompositions from elimination orderings.

The pipeline is: ordering -> implicit chordal fill -> bags. Higher
neighborhoods in the filled graph are computed symbolically with the
elimination-tree recurrence (no quadratic fill materialization), and the
moment the remaining suffix of the ordering becomes one clique the
construction switches to an implicit representation — the bag-merging rule
collapses a trailing clique into a single bag anyway, so the result is
identical to the literal loop.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .graph import Graph, all_pairs_distances, bfs_distances
from .ordering import EliminationOrdering, _bits


@dataclass
class Triangulation:
    base: Graph
    fill_edges: list[tuple[int, int]]
    ordering: EliminationOrdering

    def filled_adjacency(self) -> list[set[int]]:
        adj = [set(nbrs) for nbrs in self.base.adj]
        for u, v in self.fill_edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj


@dataclass
class TreeDecomposition:
    bags: list[frozenset[int]]
    tree: list[tuple[int, int]]  # undirected edges over bag indices
    root: int = 0
    source_heuristic: str = ""

    @property
    def n_bags(self) -> int:
        return len(self.bags)

    def width(self) -> int:
        return max(len(b) for b in self.bags) - 1

    def tree_adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.bags]
        for i, j in self.tree:
            adj[i].append(j)
            adj[j].append(i)
        return adj

    def bags_of_vertex(self) -> dict[int, list[int]]:
        member: dict[int, list[int]] = {}
        for b, bag in enumerate(self.bags):
            for v in bag:
                member.setdefault(v, []).append(b)
        return member


def _higher_neighborhoods(g: Graph, pi: Sequence[int]) -> tuple[list[set[int]], int]:
    """Higher-ordered neighborhoods B_i in the filled graph, symbolically.

    Returns (B, s): explicit sets for positions 0..s-1 and the position s
    from which the remaining vertices form a clique in the filled graph
    (detected as |B_s| = n - s - 1; always true at the last position).
    Recurrence: B_i = higher original neighbors of pi[i], plus B_j minus
    pi[i] for every earlier j whose lowest higher neighbor is pi[i].
    """
    n = g.n
    if sorted(pi) != list(range(n)):
        raise ValueError("ordering is not a permutation of the vertex set")
    pos = [0] * n
    for i, v in enumerate(pi):
        pos[v] = i
    children: list[list[int]] = [[] for _ in range(n)]
    bsets: list[set[int]] = []
    for i in range(n):
        v = pi[i]
        b = {u for u in g.adj[v] if pos[u] > i}
        for j in children[i]:
            b |= bsets[j]
            b.discard(v)
        if len(b) == n - i - 1:
            bsets.append(b)
            return bsets[:i], i
        if not b:
            raise ValueError(
                "graph is disconnected; take giant_component() first"
            )
        bsets.append(b)
        parent = min(b, key=lambda u: pos[u])
        children[pos[parent]].append(i)
    raise AssertionError("unreachable: the last position always closes a clique")


def triangulate(g: Graph, ordering: EliminationOrdering | Sequence[int]) -> Triangulation:
    """Chordal fill-in: processing vertices in elimination order, each
    vertex's not-yet-eliminated neighborhood (in the partially filled graph)
    becomes a clique. The ordering is a perfect elimination ordering of the
    result.

    Fill is materialized (memory O(n * width)); intended for graphs where
    the fill fits, which is all analysis-scale inputs.
    """
    pi = ordering.pi if isinstance(ordering, EliminationOrdering) else list(ordering)
    bsets, s = _higher_neighborhoods(g, pi)
    sets = g.adj_sets
    fill: list[tuple[int, int]] = []
    for i, b in enumerate(bsets):
        v = pi[i]
        fill.extend((v, u) for u in b if u not in sets[v])
    suffix = pi[s:]
    for a_idx in range(len(suffix)):
        u = suffix[a_idx]
        for w in suffix[a_idx + 1 :]:
            if w not in sets[u]:
                fill.append((u, w))
    ordering_obj = (
        ordering
        if isinstance(ordering, EliminationOrdering)
        else EliminationOrdering(pi=pi, heuristic="given", seed=0, tiebreak="none")
    )
    return Triangulation(base=g, fill_edges=fill, ordering=ordering_obj)


def is_perfect_elimination(adj_sets: Sequence[set[int]], pi: Sequence[int]) -> bool:
    """True when each vertex's later neighbors form a clique (the defining
    property of a perfect elimination ordering on a chordal graph)."""
    n = len(pi)
    pos = [0] * n
    for i, v in enumerate(pi):
        pos[v] = i
    for i, v in enumerate(pi):
        later = [u for u in adj_sets[v] if pos[u] > i]
        for a in range(len(later)):
            for b in range(a + 1, len(later)):
                if later[b] not in adj_sets[later[a]]:
                    return False
    return True


def gavril_td(g: Graph, ordering: EliminationOrdering | Sequence[int]) -> TreeDecomposition:
    """Bags from a perfect elimination ordering of the fill graph.

    Processing vertices from last to first: the last vertex seeds the first
    bag; every earlier vertex v either joins the bag of the earliest-
    eliminated member m of its higher neighborhood B (when B equals that
    bag exactly) or opens a new bag B + {v} hanging off m's bag.
    """
    pi = ordering.pi if isinstance(ordering, EliminationOrdering) else list(ordering)
    heuristic = ordering.heuristic if isinstance(ordering, EliminationOrdering) else "given"
    n = g.n
    pos = [0] * n
    for i, v in enumerate(pi):
        pos[v] = i
    bsets, s = _higher_neighborhoods(g, pi)
    bags: list[set[int]] = [set(pi[s:])]  # the trailing clique merges into one bag
    bag_of = {v: 0 for v in pi[s:]}
    tree: list[tuple[int, int]] = []
    for i in range(s - 1, -1, -1):
        v = pi[i]
        b = bsets[i]
        m = min(b, key=lambda u: pos[u])
        tm = bag_of[m]
        if b == bags[tm]:
            bags[tm].add(v)
            bag_of[v] = tm
        else:
            bags.append(b | {v})
            tree.append((len(bags) - 1, tm))
            bag_of[v] = len(bags) - 1
    return TreeDecomposition(
        bags=[frozenset(b) for b in bags],
        tree=tree,
        root=0,
        source_heuristic=heuristic,
    )


def decompose(g: Graph, heuristic: str = "mindeg", seed: int = 0) -> TreeDecomposition:
    """Convenience wrapper: compute an ordering and its bag tree."""
    from .ordering import compute_ordering

    return gavril_td(g, compute_ordering(g, heuristic, seed))


@dataclass
class TDValidation:
    valid: bool
    problems: list[str]

    def __bool__(self) -> bool:
        return self.valid


def validate_td(g: Graph, td: TreeDecomposition) -> TDValidation:
    """Check the three defining properties plus tree-ness.

    Every violation found is reported with a witness (vertex, edge, or bag
    pair); an empty problem list means the decomposition is valid.
    """
    problems: list[str] = []
    nb = td.n_bags
    if nb == 0:
        return TDValidation(False, ["no bags"])
    for i, j in td.tree:
        if not (0 <= i < nb and 0 <= j < nb):
            return TDValidation(False, [f"tree edge ({i},{j}) references a missing bag"])
    if len(td.tree) != nb - 1:
        problems.append(f"tree has {len(td.tree)} edges for {nb} bags (want {nb - 1})")
    else:
        seen = {0}
        stack = [0]
        tadj = td.tree_adjacency()
        while stack:
            u = stack.pop()
            for w in tadj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != nb:
            problems.append(f"bag tree is disconnected ({len(seen)}/{nb} bags reachable)")
    covered: set[int] = set()
    for bag in td.bags:
        covered |= bag
    stray = [v for v in covered if not (0 <= v < g.n)]
    if stray:
        problems.append(f"bag member {stray[0]} is not a graph vertex")
    missing = [v for v in range(g.n) if v not in covered]
    if missing:
        problems.append(f"vertex {missing[0]} appears in no bag")
    member = td.bags_of_vertex()
    for u in range(g.n):
        for v in g.adj[u]:
            if u < v:
                if not any(v in td.bags[b] for b in member.get(u, ())):
                    problems.append(f"edge ({u},{v}) is contained in no bag")
                    break
        else:
            continue
        break
    if len(td.tree) == nb - 1 and not any("disconnected" in p for p in problems):
        tadj = td.tree_adjacency()
        for v, blist in member.items():
            want = set(blist)
            seen = {blist[0]}
            stack = [blist[0]]
            while stack:
                b = stack.pop()
                for w in tadj[b]:
                    if w in want and w not in seen:
                        seen.add(w)
                        stack.append(w)
            if seen != want:
                problems.append(
                    f"vertex {v}'s bags do not induce a connected subtree "
                    f"(bags {sorted(want - seen)[:3]} unreachable from bag {blist[0]})"
                )
                break
    return TDValidation(valid=not problems, problems=problems)


def _tree_eccentricities(td: TreeDecomposition) -> list[int]:
    """Eccentricity of every bag in the tree metric.

    Uses the double-sweep fact for trees: every node's eccentricity is its
    distance to one of the two endpoints of a diameter path.
    """
    nb = td.n_bags
    if nb == 1:
        return [0]
    tadj = td.tree_adjacency()

    def bfs(src: int) -> list[int]:
        dist = [-1] * nb
        dist[src] = 0
        frontier = [src]
        while frontier:
            nxt = []
            for u in frontier:
                for w in tadj[u]:
                    if dist[w] < 0:
                        dist[w] = dist[u] + 1
                        nxt.append(w)
            frontier = nxt
        return dist

    d0 = bfs(0)
    a = d0.index(max(d0))
    da = bfs(a)
    b = da.index(max(da))
    db = bfs(b)
    return [max(x, y) for x, y in zip(da, db)]


@dataclass
class TDStats:
    n_bags: int
    td_diameter: int
    width_max: int
    width_median: float
    cardinality_max: int
    cardinality_median: float
    density_median: float
    bag_cardinality: list[int] = field(repr=False)
    bag_density: list[float] = field(repr=False)
    bag_eccentricity: list[int] = field(repr=False)
    bag_avg_core: list[float] = field(repr=False)


def td_stats(g: Graph, td: TreeDecomposition, cores) -> TDStats:
    """Per-bag and summary measures.

    Bag density counts graph edges inside the bag against the possible
    pairs; a singleton bag has density 1.0 by convention (it cannot miss
    any edge). Eccentricity is measured in the bag tree, avg_core averages
    the members' peeling numbers.
    """
    check = validate_td(g, td)
    if not check.valid:
        raise ValueError(f"invalid tree decomposition: {check.problems[0]}")
    sets = g.adj_sets
    cards: list[int] = []
    dens: list[float] = []
    avg_core: list[float] = []
    for bag in td.bags:
        k = len(bag)
        cards.append(k)
        if k == 1:
            dens.append(1.0)
        else:
            inside = sum(len(sets[v] & bag) for v in bag) // 2
            dens.append(inside / (k * (k - 1) / 2))
        avg_core.append(sum(cores.core[v] for v in bag) / k)
    ecc = _tree_eccentricities(td)
    return TDStats(
        n_bags=td.n_bags,
        td_diameter=max(ecc),
        width_max=max(cards) - 1,
        width_median=statistics.median(c - 1 for c in cards),
        cardinality_max=max(cards),
        cardinality_median=statistics.median(cards),
        density_median=statistics.median(dens),
        bag_cardinality=cards,
        bag_density=dens,
        bag_eccentricity=ecc,
        bag_avg_core=avg_core,
    )


def td_length(g: Graph, td: TreeDecomposition, _dist: np.ndarray | None = None) -> int:
    """Maximum over bags of the graph-metric diameter of the bag.

    Distances are measured in the whole graph, not inside the bag's induced
    subgraph.
    """
    check = validate_td(g, td)
    if not check.valid:
        raise ValueError(f"invalid tree decomposition: {check.problems[0]}")
    multi = sorted({v for bag in td.bags if len(bag) > 1 for v in bag})
    if not multi:
        return 0
    if _dist is not None:
        dist = _dist
    elif g.n <= 2048:
        dist = all_pairs_distances(g)
    else:
        dist = None
    if dist is None:
        rows = {v: bfs_distances(g, v) for v in multi}
        get = lambda u, v: rows[u][v]
    else:
        get = lambda u, v: int(dist[u, v])
    best = 0
    for bag in td.bags:
        if len(bag) < 2:
            continue
        members = sorted(bag)
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                d = get(members[a], members[b])
                if d < 0:
                    raise ValueError("graph is disconnected; take giant_component() first")
                if d > best:
                    best = d
    return best


# ---------------------------------------------------------------------------
# exact treewidth oracle


def _reduce_for_treewidth(adj: dict[int, set[int]]) -> tuple[dict[int, set[int]], int]:
    """Exactness-preserving shrink: strip isolated vertices and leaves, and
    contract degree-2 vertices once a cycle is certified (minimum degree 2
    everywhere). Returns (kernel adjacency, lower bound)."""
    lb = 0
    changed = True
    while changed and adj:
        changed = False
        for v in list(adj):
            if len(adj[v]) == 0:
                del adj[v]
                changed = True
            elif len(adj[v]) == 1:
                (u,) = adj[v]
                adj[u].discard(v)
                del adj[v]
                lb = max(lb, 1)
                changed = True
        if changed or not adj:
            continue
        if min(len(s) for s in adj.values()) == 2:
            # every vertex has degree >= 2 here, so a cycle exists and the
            # series contraction below cannot change the treewidth
            lb = max(lb, 2)
            v = next(u for u in adj if len(adj[u]) == 2)
            a, b = adj[v]
            adj[a].discard(v)
            adj[b].discard(v)
            adj[a].add(b)
            adj[b].add(a)
            del adj[v]
            changed = True
    return adj, lb


def brute_force_treewidth(g: Graph) -> int:
    """Exact treewidth by dynamic programming over vertex subsets.

    Safe reductions (leaf stripping, guarded degree-2 contraction) shrink
    the input first; the O(2^k) subset recurrence runs on the reduced
    kernel, which must have at most 18 vertices. Memory is O(2^k).
    """
    best = 0
    seen = [False] * g.n
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
        adj = {v: set(g.adj[v]) & set(comp) for v in comp}
        kernel, lb = _reduce_for_treewidth(adj)
        best = max(best, lb)
        if not kernel:
            continue
        k = len(kernel)
        if k > 18:
            raise ValueError(
                f"treewidth oracle: graph reduces to {k} vertices, above the 18-vertex cap"
            )
        idx = {v: i for i, v in enumerate(sorted(kernel))}
        nb = [0] * k
        for v, nbrs in kernel.items():
            for u in nbrs:
                nb[idx[v]] |= 1 << idx[u]
        full = (1 << k) - 1
        dp = np.zeros(1 << k, dtype=np.int8)
        for sset in range(1, full + 1):
            bestv = 127
            rest = sset
            while rest:
                bit = rest & -rest
                rest ^= bit
                v = bit.bit_length() - 1
                r = sset ^ bit
                # vertices reachable from v through r, then their outside boundary
                x = bit
                reach = nb[v]
                while True:
                    add = reach & r & ~x
                    if not add:
                        break
                    x |= add
                    for u in _bits(add):
                        reach |= nb[u]
                q = (reach & ~r & ~bit).bit_count()
                cand = max(dp[r], q)
                if cand < bestv:
                    bestv = cand
            dp[sset] = bestv
        best = max(best, int(dp[full]))
    return best


# ---------------------------------------------------------------------------
# .td text format


def export_td(
    td: TreeDecomposition,
    dest,
    n_vertices: int | None = None,
    header_comments: Sequence[str] = (),
) -> None:
    """Write the bag-tree text format.

    Header "s td <bags> <max-cardinality> <n>", then "b <id> <v>..." lines
    with 1-based ids, then one "<i> <j>" line per tree edge. 'c' lines are
    comments.
    """
    n = n_vertices
    if n is None:
        n = 1 + max((v for bag in td.bags for v in bag), default=-1)
    maxcard = max(len(b) for b in td.bags)
    stream, close = (open(dest, "w"), True) if isinstance(dest, (str, Path)) else (dest, False)
    try:
        for comment in header_comments:
            stream.write(f"c {comment}\n")
        stream.write(f"s td {td.n_bags} {maxcard} {n}\n")
        for b, bag in enumerate(td.bags, start=1):
            members = " ".join(str(v + 1) for v in sorted(bag))
            stream.write(f"b {b} {members}\n".replace(" \n", "\n"))
        for i, j in td.tree:
            stream.write(f"{i + 1} {j + 1}\n")
    finally:
        if close:
            stream.close()


def import_td(source) -> TreeDecomposition:
    """Parse the .td text format back into a TreeDecomposition.

    The result is whatever the file says — run validate_td to find out
    whether it is actually a tree decomposition of your graph.
    """
    stream, close = (open(source, "r"), True) if isinstance(source, (str, Path)) else (source, False)
    n_bags = None
    bags: dict[int, frozenset[int]] = {}
    tree: list[tuple[int, int]] = []
    try:
        for ln, line in enumerate(stream, start=1):
            text = line.strip()
            if not text or text.startswith("c"):
                continue
            tokens = text.split()
            if tokens[0] == "s":
                if len(tokens) != 5 or tokens[1] != "td":
                    raise ValueError(f".td line {ln}: bad solution line {text!r}")
                n_bags = int(tokens[2])
            elif tokens[0] == "b":
                if n_bags is None:
                    raise ValueError(f".td line {ln}: bag before the 's td' header")
                bid = int(tokens[1])
                members = [int(tok) for tok in tokens[2:]]
                if members and members[-1] == 0:
                    members.pop()  # tolerate a terminating 0
                if not (1 <= bid <= n_bags):
                    raise ValueError(f".td line {ln}: bag id {bid} out of range")
                bags[bid] = frozenset(v - 1 for v in members)
            else:
                if len(tokens) != 2:
                    raise ValueError(f".td line {ln}: expected a tree edge, got {text!r}")
                tree.append((int(tokens[0]) - 1, int(tokens[1]) - 1))
    finally:
        if close:
            stream.close()
    if n_bags is None:
        raise ValueError(".td stream has no 's td' line")
    if len(bags) != n_bags:
        raise ValueError(f".td stream defines {len(bags)} of {n_bags} bags")
    ordered = [bags[b] for b in range(1, n_bags + 1)]
    return TreeDecomposition(bags=ordered, tree=tree, root=0, source_heuristic="file")


def export_td_dot(td: TreeDecomposition, dest) -> None:
    """Bag tree as DOT, one node per bag labeled with its members."""
    stream, close = (open(dest, "w"), True) if isinstance(dest, (str, Path)) else (dest, False)
    try:
        stream.write("graph bagtree {\n  node [shape=box];\n")
        for b, bag in enumerate(td.bags):
            label = ",".join(str(v) for v in sorted(bag))
            stream.write(f'  b{b} [label="{{{label}}}"];\n')
        for i, j in td.tree:
            stream.write(f"  b{i} -- b{j};\n")
        stream.write("}\n")
    finally:
        if close:
            stream.close()
