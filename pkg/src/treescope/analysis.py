"""Structural lenses over a graph and its bag tree: local clustering sweeps,
community-profile envelopes, cluster-to-bag localization, and ground-truth
community recovery from frequent bags."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .graph import Graph, conductance
from .generators import stream_rng
from .treedecomp import TreeDecomposition, td_stats


@dataclass
class NCPPoint:
    size: int
    conductance: float
    members: frozenset
    seed_vertex: int
    alpha: float
    epsilon: float


def ppr_vector(g: Graph, seed_vertex: int, alpha: float, epsilon: float) -> tuple[np.ndarray, np.ndarray]:
    """Approximate personalized-PageRank by residual pushing.

    Returns (p, r). Pushes run in vectorized rounds: every vertex whose
    residual is at least epsilon * degree is pushed simultaneously — alpha of
    the captured residual moves into p, half the rest stays, and the other
    half spreads evenly over the neighbors. Each round is a batch of valid
    individual pushes, so the usual approximation guarantee holds,
    p.sum() + r.sum() stays 1 (to float rounding), and the result is
    deterministic with no dependence on a queue order. Rounds repeat until
    every residual is below its threshold.
    """
    if not (0.0 < alpha < 1.0):
        raise ValueError("ppr: alpha must be in (0, 1)")
    if epsilon <= 0.0:
        raise ValueError("ppr: epsilon must be positive")
    if not (0 <= seed_vertex < g.n):
        raise ValueError(f"ppr: seed vertex {seed_vertex} out of range")
    from scipy.sparse import csr_matrix

    indptr, indices = g.csr_arrays()
    deg = np.diff(indptr).astype(np.float64)
    if deg[seed_vertex] == 0:
        raise ValueError("ppr: seed vertex is isolated")
    threshold = epsilon * np.maximum(deg, 1.0)
    nnz = int(indptr[-1])
    adj_mat = csr_matrix((np.ones(nnz), indices, indptr), shape=(g.n, g.n))
    p = np.zeros(g.n)
    r = np.zeros(g.n)
    r[seed_vertex] = 1.0
    hot = np.array([seed_vertex], dtype=np.int64)
    while hot.size:
        captured = r[hot]
        p[hot] += alpha * captured
        keep = (1.0 - alpha) * captured / 2.0
        r[hot] = keep
        counts = (indptr[hot + 1] - indptr[hot]).astype(np.int64)
        hot_nnz = int(counts.sum())
        if 4 * hot_nnz >= nnz:
            # dense hot set: one sparse matvec beats per-row gathering
            shares_vec = np.zeros(g.n)
            shares_vec[hot] = keep / counts
            r += adj_mat.dot(shares_vec)
        else:
            # flatten the hot rows of the CSR adjacency
            slots = np.repeat(
                indptr[hot] - np.concatenate(([0], np.cumsum(counts)[:-1])), counts
            )
            nbrs = indices[np.arange(hot_nnz, dtype=np.int64) + slots]
            shares = np.repeat(keep / counts, counts)
            r += np.bincount(nbrs, weights=shares, minlength=g.n)
        hot = np.flatnonzero(r >= threshold)
    return p, r


def ppr_cluster(g: Graph, seed_vertex: int, alpha: float, epsilon: float) -> NCPPoint:
    """Best-conductance sweep set of the push-approximated PageRank vector.

    Vertices are ranked by p/degree; the returned set is the prefix (of
    size at most n/2) minimizing conductance. Degenerate pushes (epsilon too
    coarse to spread any mass) fall back to the seed singleton.
    """
    p, _ = ppr_vector(g, seed_vertex, alpha, epsilon)
    support = np.nonzero(p)[0]
    if len(support) == 0:
        members = frozenset([seed_vertex])
        return NCPPoint(
            size=1,
            conductance=conductance(g, members),
            members=members,
            seed_vertex=seed_vertex,
            alpha=alpha,
            epsilon=epsilon,
        )
    indptr, indices = g.csr_arrays()
    deg = (indptr[support + 1] - indptr[support]).astype(np.float64)
    order = support[np.lexsort((support, -p[support] / deg))]
    total_vol = 2 * g.m
    cap = min(len(order), g.n // 2)
    # prefix k is internal-edge counting: a directed edge is inside the
    # prefix when both endpoint sweep positions are below k
    pos = np.full(g.n, g.n, dtype=np.int64)
    pos[order] = np.arange(len(order), dtype=np.int64)
    counts = (indptr[order + 1] - indptr[order]).astype(np.int64)
    slots = np.repeat(indptr[order] - np.concatenate(([0], np.cumsum(counts)[:-1])), counts)
    dst = indices[np.arange(int(counts.sum()), dtype=np.int64) + slots]
    maxpos = np.maximum(np.repeat(pos[order], counts), pos[dst])
    inside2 = np.cumsum(np.bincount(maxpos[maxpos < cap], minlength=cap))
    vol = np.cumsum(counts)[:cap]
    cut = vol - inside2
    denom = np.minimum(vol, total_vol - vol)
    phi = np.where(denom > 0, cut / np.where(denom > 0, denom, 1), math.inf)
    best = int(np.argmin(phi))
    best_phi = float(phi[best])
    best_k = best + 1 if math.isfinite(best_phi) else 0
    if best_k == 0:
        members = frozenset([seed_vertex])
        return NCPPoint(
            size=1,
            conductance=conductance(g, members),
            members=members,
            seed_vertex=seed_vertex,
            alpha=alpha,
            epsilon=epsilon,
        )
    members = frozenset(order[:best_k].tolist())
    return NCPPoint(
        size=best_k,
        conductance=best_phi,
        members=members,
        seed_vertex=seed_vertex,
        alpha=alpha,
        epsilon=epsilon,
    )


DEFAULT_ALPHAS = (0.01, 0.1)
DEFAULT_EPSILONS = (1e-3, 1e-4, 1e-5, 1e-6, 1e-7)


def size_bin(size: int) -> int:
    """Logarithmic size bin, ten per decade."""
    return int(math.floor(10.0 * math.log10(size))) if size > 1 else 0


def ncp(
    g: Graph,
    seeds: int | Iterable[int] | None = None,
    alpha_grid: Sequence[float] = DEFAULT_ALPHAS,
    epsilon_grid: Sequence[float] = DEFAULT_EPSILONS,
    seed: int = 0,
    threads: int = 1,
) -> list[NCPPoint]:
    """Community-profile lower envelope: the best cluster found per log size
    bin over a grid of (seed vertex, alpha, epsilon) sweep runs.

    seeds may be an explicit vertex collection or a sample size (default
    min(n, 500), sampled without replacement under the master seed). Runs
    are independent; with threads > 1 they execute on a pool, and the
    envelope is reduced in fixed run order so the result is identical for
    every thread count.
    """
    if seeds is None:
        seeds = min(g.n, 500)
    if isinstance(seeds, int):
        rng = stream_rng(seed, "ncp-seeds")
        count = min(seeds, g.n)
        seed_list = sorted(int(v) for v in rng.choice(g.n, size=count, replace=False))
    else:
        seed_list = [int(v) for v in seeds]
    runs = [
        (s, a, e)
        for s in seed_list
        for a in alpha_grid
        for e in epsilon_grid
        if len(g.adj[s]) > 0
    ]

    def one(run: tuple[int, float, float]) -> NCPPoint:
        s, a, e = run
        return ppr_cluster(g, s, a, e)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, runs))
    else:
        results = [one(run) for run in runs]
    envelope: dict[int, NCPPoint] = {}
    for point in results:  # fixed run order makes the reduction deterministic
        if point.size < 1:
            continue
        b = size_bin(point.size)
        cur = envelope.get(b)
        if cur is None or point.conductance < cur.conductance:
            envelope[b] = point
    return sorted(envelope.values(), key=lambda pt: pt.size)


@dataclass
class LocalizationPoint:
    size: int
    conductance: float
    bag_count: int
    threshold: int
    localized: bool


@dataclass
class LocalizationReport:
    points: list[LocalizationPoint]


def localize(td: TreeDecomposition, points: Sequence[NCPPoint]) -> LocalizationReport:
    """Count, per cluster, the bags containing at least one member.

    A cluster is localized when it touches strictly fewer bags than it has
    vertices (the threshold column equals the cluster size).
    """
    member = td.bags_of_vertex()
    out: list[LocalizationPoint] = []
    for pt in points:
        bags: set[int] = set()
        for v in pt.members:
            blist = member.get(v)
            if blist is None:
                raise ValueError(f"localize: vertex {v} appears in no bag of the decomposition")
            bags.update(blist)
        out.append(
            LocalizationPoint(
                size=pt.size,
                conductance=pt.conductance,
                bag_count=len(bags),
                threshold=pt.size,
                localized=len(bags) < pt.size,
            )
        )
    return LocalizationReport(points=out)


@dataclass
class CommunityTable:
    assignment: dict  # node label -> community label

    def members_in(self, g: Graph, label) -> set[int]:
        """Internal indices of the label's members present in g."""
        return {
            g.index[node]
            for node, lab in self.assignment.items()
            if lab == label and node in g.index
        }

    def labels(self) -> set:
        return set(self.assignment.values())


def load_communities(source) -> CommunityTable:
    """Read node<TAB>label lines ('#' comments allowed)."""
    stream, close = (open(source, "r"), True) if isinstance(source, (str, Path)) else (source, False)
    assignment: dict = {}
    try:
        for ln, line in enumerate(stream, start=1):
            text = line.rstrip("\n")
            if not text.strip() or text.lstrip().startswith("#"):
                continue
            parts = text.split("\t")
            if len(parts) != 2:
                raise ValueError(f"community TSV line {ln}: expected node<TAB>label")
            assignment[parts[0].strip()] = parts[1].strip()
    finally:
        if close:
            stream.close()
    return CommunityTable(assignment=assignment)


def _resolve_assignment(g: Graph, table: CommunityTable) -> dict[int, object]:
    """Map internal vertex -> community label, tolerating int/str label styles."""
    resolved: dict[int, object] = {}
    for node, lab in table.assignment.items():
        if node in g.index:
            resolved[g.index[node]] = lab
            continue
        try:
            node_int = int(node)
        except (TypeError, ValueError):
            continue
        if node_int in g.index:
            resolved[g.index[node_int]] = lab
    return resolved


def frequent_bag_classifier(
    g: Graph, td: TreeDecomposition, communities: CommunityTable, label
) -> tuple[float, float, list[int]]:
    """Recover a ground-truth community from the bags that over-represent it.

    A bag is frequent when its member fraction carrying the label strictly
    exceeds the label's global fraction F. The classifier set is the union
    of the largest connected component of frequent bags in the bag tree
    (ties: more bags, then larger union, then lowest bag id). Returns
    (recall, precision, frequent bag ids).
    """
    resolved = _resolve_assignment(g, communities)
    community = {v for v, lab in resolved.items() if lab == label}
    if not community:
        raise ValueError(f"classifier: label {label!r} has no members in the graph")
    f_global = len(community) / g.n
    frequent = [
        b
        for b, bag in enumerate(td.bags)
        if len(bag) > 0 and len(bag & community) / len(bag) > f_global
    ]
    if not frequent:
        return 0.0, 0.0, []
    fset = set(frequent)
    tadj = td.tree_adjacency()
    comps: list[list[int]] = []
    unvisited = set(frequent)
    while unvisited:
        start = min(unvisited)
        comp = [start]
        unvisited.discard(start)
        for b in comp:
            for w in tadj[b]:
                if w in unvisited:
                    unvisited.discard(w)
                    comp.append(w)
        comps.append(sorted(comp))
    def comp_key(comp: list[int]):
        union: set[int] = set()
        for b in comp:
            union |= td.bags[b]
        return (len(comp), len(union), -comp[0])
    best = max(comps, key=comp_key)
    union: set[int] = set()
    for b in best:
        union |= td.bags[b]
    hit = len(union & community)
    recall = hit / len(community)
    precision = hit / len(union) if union else 0.0
    return recall, precision, best


@dataclass
class BagProfiles:
    cardinality_hist: list[tuple[int, int, float]]  # cardinality, count, cumulative fraction
    density_by_cardinality: list[tuple[int, float]]
    core_by_eccentricity: list[tuple[int, float]]


def bag_profiles(g: Graph, td: TreeDecomposition, cores) -> BagProfiles:
    """Three per-bag summary curves: the cardinality histogram (with
    cumulative fraction), mean density per cardinality, and mean member
    core number per tree eccentricity."""
    stats = td_stats(g, td, cores)
    nb = stats.n_bags
    hist: list[tuple[int, int, float]] = []
    running = 0
    for card in sorted(set(stats.bag_cardinality)):
        count = sum(1 for c in stats.bag_cardinality if c == card)
        running += count
        hist.append((card, count, running / nb))
    dens: list[tuple[int, float]] = []
    for card in sorted(set(stats.bag_cardinality)):
        vals = [d for c, d in zip(stats.bag_cardinality, stats.bag_density) if c == card]
        dens.append((card, sum(vals) / len(vals)))
    core_ecc: list[tuple[int, float]] = []
    for ecc in sorted(set(stats.bag_eccentricity)):
        vals = [k for e, k in zip(stats.bag_eccentricity, stats.bag_avg_core) if e == ecc]
        core_ecc.append((ecc, sum(vals) / len(vals)))
    return BagProfiles(
        cardinality_hist=hist,
        density_by_cardinality=dens,
        core_by_eccentricity=core_ecc,
    )
