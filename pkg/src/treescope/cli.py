"""Command-line pipeline: generate, order, decompose, validate, and analyze
graphs through composable files.

Every output file starts with provenance comments (the command line, the
seed, and a timestamp unless --no-timestamp is given), so re-running a
command with identical flags plus --no-timestamp reproduces the bytes
exactly. All randomness flows from --seed through named per-stage streams.

Exit codes: 0 success, 1 domain failure (bad input, invalid decomposition,
failed verification), 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
import time
from pathlib import Path

from . import analysis, generators, graph, hyperbolicity, ordering, treedecomp


def _default_threads() -> int:
    env = os.environ.get("TREESCOPE_THREADS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def _load_graph(path: str) -> graph.Graph:
    if path.endswith(".gr"):
        return graph.load_pace_gr(path)
    return graph.load_edge_list(path)


def _provenance(args: argparse.Namespace) -> list[str]:
    out = [f"treescope {' '.join(args._argv)}"]
    if hasattr(args, "seed"):
        out.append(f"seed: {args.seed}")
    if not getattr(args, "no_timestamp", False):
        out.append(f"written: {time.strftime('%Y-%m-%dT%H:%M:%S')}")
    return out


def _write_csv(dest, header: list[str], rows: list[list], comments: list[str]) -> None:
    with open(dest, "w", newline="") as fh:
        for c in comments:
            fh.write(f"# {c}\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _fmt(x) -> str:
    if isinstance(x, float) and x == int(x):
        return str(int(x))
    return str(x)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_gen(args) -> int:
    fam = args.family
    if fam == "er":
        g = generators.gen_er(args.n, args.p, args.seed)
    elif fam == "chung_lu":
        g = generators.gen_chung_lu(args.n, args.gamma, args.seed)
    elif fam == "binary_tree":
        g = generators.gen_binary_tree(args.depth)
    elif fam == "grid":
        g = generators.gen_grid(args.rows, args.cols)
    elif fam == "cycle":
        g = generators.gen_cycle(args.n)
    elif fam == "clique":
        g = generators.gen_clique(args.n)
    else:  # grid_subdivision
        g = generators.gen_grid_subdivision(args.n, args.k)
    graph.save_edge_list(g, args.output, header_comments=_provenance(args))
    print(f"wrote {args.output}: n={g.n} m={g.m}")
    return 0


def _cmd_order(args) -> int:
    g = _load_graph(args.graph)
    ordv = ordering.compute_ordering(g, args.heuristic, args.seed)
    ordering.save_ordering(ordv, g, args.output, header_comments=_provenance(args))
    print(f"wrote {args.output}: heuristic={args.heuristic} n={g.n}")
    return 0


def _cmd_decompose(args) -> int:
    g = _load_graph(args.graph)
    if args.ordering:
        ordv = ordering.load_ordering(g, args.ordering)
    else:
        ordv = ordering.compute_ordering(g, args.heuristic, args.seed)
    td = treedecomp.gavril_td(g, ordv)
    treedecomp.export_td(td, args.output, n_vertices=g.n, header_comments=_provenance(args))
    if args.dot:
        treedecomp.export_td_dot(td, args.dot)
    print(
        f"wrote {args.output}: bags={td.n_bags} max_cardinality={td.width() + 1} width={td.width()}"
    )
    return 0


def _cmd_validate(args) -> int:
    g = _load_graph(args.graph)
    td = treedecomp.import_td(args.td)
    report = treedecomp.validate_td(g, td)
    if report.valid:
        print("VALID")
        return 0
    print("INVALID")
    for problem in report.problems:
        print(f"  {problem}")
    return 1


def _cmd_stats(args) -> int:
    g = _load_graph(args.graph)
    td = treedecomp.import_td(args.td)
    cores = graph.k_core(g)
    stats = treedecomp.td_stats(g, td, cores)
    rows: list[list] = [
        [b + 1, c, f"{d:.6g}", e, f"{k:.6g}"]
        for b, (c, d, e, k) in enumerate(
            zip(stats.bag_cardinality, stats.bag_density, stats.bag_eccentricity, stats.bag_avg_core)
        )
    ]
    rows.append(
        ["summary", stats.cardinality_max, f"{stats.density_median:.6g}", stats.td_diameter,
         f"{sum(stats.bag_avg_core) / stats.n_bags:.6g}"]
    )
    comments = _provenance(args) + [
        f"n_bags: {stats.n_bags}",
        f"width_max: {stats.width_max}  width_median: {_fmt(stats.width_median)}",
        f"cardinality_max: {stats.cardinality_max}  cardinality_median: {_fmt(stats.cardinality_median)}",
        f"density_median: {stats.density_median:.6g}",
        f"td_diameter: {stats.td_diameter}",
    ]
    _write_csv(args.output, ["bag_id", "cardinality", "density", "eccentricity", "avg_core"], rows, comments)
    if args.profiles:
        profiles = analysis.bag_profiles(g, td, cores)
        base = args.profiles
        _write_csv(
            f"{base}.hist.csv",
            ["cardinality", "count", "cumulative_fraction"],
            [[c, k, f"{f:.6g}"] for c, k, f in profiles.cardinality_hist],
            comments,
        )
        _write_csv(
            f"{base}.density.csv",
            ["cardinality", "mean_density"],
            [[c, f"{d:.6g}"] for c, d in profiles.density_by_cardinality],
            comments,
        )
        _write_csv(
            f"{base}.core_ecc.csv",
            ["eccentricity", "mean_avg_core"],
            [[e, f"{k:.6g}"] for e, k in profiles.core_by_eccentricity],
            comments,
        )
    print(f"wrote {args.output}: bags={stats.n_bags} width_max={stats.width_max}")
    return 0


def _cmd_kcore(args) -> int:
    g = _load_graph(args.graph)
    cores = graph.k_core(g)
    rows = [[g.labels[v], cores.core[v]] for v in range(g.n)]
    comments = _provenance(args) + [f"k_min: {cores.k_min}", f"k_max: {cores.k_max}"]
    _write_csv(args.output, ["vertex", "core"], rows, comments)
    print(f"wrote {args.output}: k_max={cores.k_max}")
    return 0


def _cmd_ncp(args) -> int:
    g = _load_graph(args.graph)
    points = analysis.ncp(
        g,
        seeds=args.seeds,
        alpha_grid=args.alpha,
        epsilon_grid=args.epsilon,
        seed=args.seed,
        threads=args.threads,
    )
    members_dir = Path(args.members_dir)
    members_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for i, pt in enumerate(points):
        member_file = members_dir / f"cluster_{i:04d}.txt"
        with open(member_file, "w") as fh:
            for v in sorted(pt.members):
                fh.write(f"{g.labels[v]}\n")
        rows.append(
            [
                analysis.size_bin(pt.size),
                pt.size,
                f"{pt.conductance:.8g}",
                g.labels[pt.seed_vertex],
                pt.alpha,
                pt.epsilon,
                str(member_file),
            ]
        )
    _write_csv(
        args.output,
        ["size_bin", "best_size", "conductance", "seed", "alpha", "epsilon", "members_file"],
        rows,
        _provenance(args),
    )
    print(f"wrote {args.output}: {len(points)} envelope points")
    return 0


def _cmd_localize(args) -> int:
    g = _load_graph(args.graph)
    td = treedecomp.import_td(args.td)
    points: list[analysis.NCPPoint] = []
    with open(args.ncp_csv, newline="") as fh:
        reader = csv.DictReader(row for row in fh if not row.startswith("#"))
        for rec in reader:
            with open(rec["members_file"]) as mf:
                labels = [line.strip() for line in mf if line.strip()]
            members = frozenset(_vertex_from_label(g, lab) for lab in labels)
            points.append(
                analysis.NCPPoint(
                    size=int(rec["best_size"]),
                    conductance=float(rec["conductance"]),
                    members=members,
                    seed_vertex=_vertex_from_label(g, rec["seed"]),
                    alpha=float(rec["alpha"]),
                    epsilon=float(rec["epsilon"]),
                )
            )
    report = analysis.localize(td, points)
    rows = [
        [pt.size, f"{pt.conductance:.8g}", pt.bag_count, pt.threshold, pt.localized]
        for pt in report.points
    ]
    _write_csv(
        args.output,
        ["size", "conductance", "bag_count", "threshold", "localized"],
        rows,
        _provenance(args),
    )
    localized = sum(1 for pt in report.points if pt.localized)
    print(f"wrote {args.output}: {localized}/{len(report.points)} clusters localized")
    return 0


def _vertex_from_label(g: graph.Graph, label: str) -> int:
    if label in g.index:
        return g.index[label]
    try:
        as_int = int(label)
    except ValueError as exc:
        raise ValueError(f"unknown vertex label {label!r}") from exc
    if as_int in g.index:
        return g.index[as_int]
    raise ValueError(f"unknown vertex label {label!r}")


def _cmd_classify(args) -> int:
    g = _load_graph(args.graph)
    td = treedecomp.import_td(args.td)
    table = analysis.load_communities(args.communities)
    recall, precision, bags = analysis.frequent_bag_classifier(g, td, table, args.label)
    print(f"label={args.label}")
    print(f"recall={recall:.6g}")
    print(f"precision={precision:.6g}")
    print(f"bags={','.join(str(b) for b in bags) if bags else '-'}")
    return 0


def _cmd_hyperbolicity(args) -> int:
    g = _load_graph(args.graph)
    profile = hyperbolicity.delta_exact(g, cap=args.cap, force=args.force, threads=args.threads)
    print(f"delta={_fmt(profile.delta)}")
    print(f"diameter={profile.diameter}")
    print(f"n={profile.n}")
    if args.csv:
        _write_csv(
            args.csv,
            ["delta", "diameter", "n"],
            [[_fmt(profile.delta), profile.diameter, profile.n]],
            _provenance(args),
        )
    return 0


def _cmd_verify_thm3(args) -> int:
    names = args.heuristics.split(",") if args.heuristics else None
    report = hyperbolicity.verify_theorem3(args.n, args.k, heuristics=names, seed=args.seed)
    print(f"delta={_fmt(report.delta)}")
    print(f"tw={report.treewidth} ({report.treewidth_source})")
    print(f"nu={report.nu}")
    print(f"tl_analytic={report.tl_analytic}")
    for name, tl in sorted(report.td_lengths.items()):
        print(f"td_length[{name}]={tl}")
    face = "geodesic" if report.face_cycle_geodesic else "NOT geodesic"
    print(f"face_cycle: length={report.face_cycle_length} {face}")
    best = min(report.td_lengths.values())
    if report.chain_holds:
        print(f"chain {_fmt(report.delta)} <= {best} <= {report.bound()} holds")
        return 0
    print(f"chain {_fmt(report.delta)} <= {best} <= {report.bound()} FAILS")
    return 1


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treescope",
        description="Profile sparse graphs through elimination orderings and bag trees.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
        p.add_argument(
            "--no-timestamp",
            action="store_true",
            help="omit the timestamp provenance line for byte-identical reruns",
        )

    p = sub.add_parser("gen", help="generate a graph family as an edge list")
    p.add_argument(
        "--family",
        required=True,
        choices=["er", "chung_lu", "binary_tree", "grid", "cycle", "clique", "grid_subdivision"],
    )
    p.add_argument("--n", type=int, help="vertex count (er, chung_lu, cycle, clique) or grid side (grid_subdivision)")
    p.add_argument("--p", type=float, help="edge probability (er)")
    p.add_argument("--gamma", type=float, help="power-law exponent (chung_lu)")
    p.add_argument("--depth", type=int, help="tree depth (binary_tree)")
    p.add_argument("--rows", type=int, help="grid rows")
    p.add_argument("--cols", type=int, help="grid cols")
    p.add_argument("--k", type=int, help="interior vertices per edge (grid_subdivision)")
    p.add_argument("-o", "--output", required=True)
    common(p)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("order", help="compute an elimination ordering")
    p.add_argument("graph")
    p.add_argument("--heuristic", required=True, choices=sorted(ordering.HEURISTICS))
    p.add_argument("-o", "--output", required=True)
    common(p)
    p.set_defaults(func=_cmd_order)

    p = sub.add_parser("decompose", help="build a bag tree from an ordering heuristic")
    p.add_argument("graph")
    p.add_argument("--heuristic", default="mindeg", choices=sorted(ordering.HEURISTICS))
    p.add_argument("--ordering", help="use a saved .ord file instead of computing one")
    p.add_argument("--dot", help="also write the bag tree as DOT to this path")
    p.add_argument("-o", "--output", required=True)
    common(p)
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("validate", help="check a .td file against a graph")
    p.add_argument("graph")
    p.add_argument("td")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("stats", help="per-bag statistics CSV (plus optional profile curves)")
    p.add_argument("graph")
    p.add_argument("td")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--profiles", help="prefix for .hist/.density/.core_ecc profile CSVs")
    common(p)
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("kcore", help="peeling core numbers as CSV")
    p.add_argument("graph")
    p.add_argument("-o", "--output", required=True)
    common(p)
    p.set_defaults(func=_cmd_kcore)

    p = sub.add_parser("ncp", help="community-profile envelope over PPR sweep runs")
    p.add_argument("graph")
    p.add_argument("--seeds", type=int, default=None, help="number of seed vertices (default min(n, 500))")
    p.add_argument("--alpha", type=float, nargs="+", default=list(analysis.DEFAULT_ALPHAS))
    p.add_argument("--epsilon", type=float, nargs="+", default=list(analysis.DEFAULT_EPSILONS))
    p.add_argument("--threads", type=int, default=_default_threads())
    p.add_argument("--members-dir", default="ncp_members", help="directory for per-point member files")
    p.add_argument("-o", "--output", required=True)
    common(p)
    p.set_defaults(func=_cmd_ncp)

    p = sub.add_parser("localize", help="count bags touched by each NCP cluster")
    p.add_argument("graph")
    p.add_argument("td")
    p.add_argument("ncp_csv")
    p.add_argument("-o", "--output", required=True)
    common(p)
    p.set_defaults(func=_cmd_localize)

    p = sub.add_parser("classify", help="frequent-bag recovery of a labeled community")
    p.add_argument("graph")
    p.add_argument("td")
    p.add_argument("communities", help="TSV file: node<TAB>label")
    p.add_argument("--label", required=True)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("hyperbolicity", help="exact four-point hyperbolicity")
    p.add_argument("graph")
    p.add_argument("--cap", type=int, default=300)
    p.add_argument("--force", action="store_true", help="run above the cap anyway")
    p.add_argument("--threads", type=int, default=_default_threads())
    p.add_argument("--csv", help="also write a one-row CSV report")
    common(p)
    p.set_defaults(func=_cmd_hyperbolicity)

    p = sub.add_parser(
        "verify-thm3",
        help="check hyperbolicity <= bag-tree length <= (treewidth+1) * geodesic-cycle bound on a subdivided grid",
    )
    p.add_argument("--n", type=int, required=True, help="grid side length")
    p.add_argument("--k", type=int, required=True, help="interior vertices per grid edge")
    p.add_argument("--heuristics", help="comma-separated subset of ordering heuristics")
    common(p)
    p.set_defaults(func=_cmd_verify_thm3)

    return parser


def run(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args._argv = argv
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
