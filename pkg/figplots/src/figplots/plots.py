"""Render figures from treescope CSV reports.

Every figure is rebuilt purely from the CSV — nothing is recomputed from
the graph — so plots stay reproducible from the shipped report files alone.
Rows are read with the producer's conventions: comma separation, a header
row, and '#'-prefixed provenance comments.
"""

import csv

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def read_rows(path, required):
    """Parse a report CSV, skipping comment lines; check required columns."""
    with open(path) as fh:
        reader = csv.DictReader(ln for ln in fh if not ln.startswith("#"))
        rows = list(reader)
        header = reader.fieldnames or []
    for col in required:
        if col not in header:
            raise ValueError(f"missing column '{col}' in {path}")
    if not rows:
        raise ValueError(f"no data rows in {path}")
    return rows


def _finish(fig, ax, out):
    fig.canvas.draw()
    width, height = fig.canvas.get_width_height()
    summary = {
        "size": (width, height),
        "xlim": ax.get_xlim(),
        "ylim": ax.get_ylim(),
    }
    fig.savefig(out)
    plt.close(fig)
    return summary


def plot_ncp(csv_path, out):
    """Conductance envelope vs cluster size on log-log axes."""
    rows = read_rows(csv_path, ["best_size", "conductance"])
    pts = sorted((int(r["best_size"]), float(r["conductance"])) for r in rows)
    fig, ax = plt.subplots()
    ax.loglog([s for s, _ in pts], [c for _, c in pts], "o-", color="tab:blue")
    ax.set_xlabel("cluster size")
    ax.set_ylabel("conductance")
    ax.set_title("network community profile")
    summary = _finish(fig, ax, out)
    summary["n_points"] = len(pts)
    return summary


def plot_localization(csv_path, out):
    """Bags touched per cluster, with the bag_count = size threshold line."""
    rows = read_rows(csv_path, ["size", "bag_count", "localized"])
    sizes = [int(r["size"]) for r in rows]
    counts = [int(r["bag_count"]) for r in rows]
    local = [r["localized"] == "True" for r in rows]
    fig, ax = plt.subplots()
    for flag, marker, label in ((True, "o", "localized"), (False, "x", "spread out")):
        xs = [s for s, keep in zip(sizes, local) if keep == flag]
        ys = [c for c, keep in zip(counts, local) if keep == flag]
        if xs:
            ax.scatter(xs, ys, marker=marker, label=label)
    hi = max(sizes + counts) + 1
    ax.plot([0, hi], [0, hi], "--", color="green", label="threshold (bags = size)")
    ax.set_xlabel("cluster size")
    ax.set_ylabel("bags touched")
    ax.set_title("cluster localization in the bag tree")
    ax.legend()
    summary = _finish(fig, ax, out)
    summary["n_points"] = len(sizes)
    summary["threshold_line"] = True
    return summary


def plot_bag_hist(csv_path, out):
    """Bag-cardinality histogram with the cumulative-fraction curve."""
    rows = read_rows(csv_path, ["cardinality", "count", "cumulative_fraction"])
    cards = [int(r["cardinality"]) for r in rows]
    counts = [int(r["count"]) for r in rows]
    cum = [float(r["cumulative_fraction"]) for r in rows]
    fig, ax = plt.subplots()
    ax.bar(cards, counts, color="tab:blue", label="bags")
    ax.set_xlabel("bag cardinality")
    ax.set_ylabel("count")
    twin = ax.twinx()
    twin.plot(cards, cum, "o-", color="tab:orange", label="cumulative")
    twin.set_ylabel("cumulative fraction")
    twin.set_ylim(0, 1.05)
    ax.set_title("bag cardinality distribution")
    summary = _finish(fig, ax, out)
    summary["n_points"] = len(cards)
    summary["cumulative_final"] = cum[-1]
    return summary


def plot_density(csv_path, out):
    """Mean bag density against bag cardinality."""
    rows = read_rows(csv_path, ["cardinality", "mean_density"])
    pts = sorted((int(r["cardinality"]), float(r["mean_density"])) for r in rows)
    fig, ax = plt.subplots()
    ax.plot([c for c, _ in pts], [d for _, d in pts], "o-", color="tab:blue")
    ax.set_xlabel("bag cardinality")
    ax.set_ylabel("mean density")
    ax.set_ylim(0, 1.05)
    ax.set_title("bag density by cardinality")
    summary = _finish(fig, ax, out)
    summary["n_points"] = len(pts)
    return summary


def plot_core_ecc(csv_path, out):
    """Mean member core number against bag eccentricity in the tree."""
    rows = read_rows(csv_path, ["eccentricity", "mean_avg_core"])
    pts = sorted((int(r["eccentricity"]), float(r["mean_avg_core"])) for r in rows)
    fig, ax = plt.subplots()
    ax.plot([e for e, _ in pts], [k for _, k in pts], "o-", color="tab:blue")
    ax.set_xlabel("bag eccentricity")
    ax.set_ylabel("mean core number")
    ax.set_title("core number across the bag tree")
    summary = _finish(fig, ax, out)
    summary["n_points"] = len(pts)
    return summary


KINDS = {
    "ncp": plot_ncp,
    "localization": plot_localization,
    "bag-hist": plot_bag_hist,
    "density": plot_density,
    "core-ecc": plot_core_ecc,
}


def plot(kind, csv_path, out):
    try:
        fn = KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown figure kind {kind!r}; choose from {sorted(KINDS)}")
    return fn(csv_path, out)
