"""Structure profiling for sparse graphs: elimination orderings, bag trees,
peeling cores, seeded community sweeps, and exact metric checks."""

from .analysis import (
    BagProfiles,
    CommunityTable,
    LocalizationPoint,
    LocalizationReport,
    NCPPoint,
    bag_profiles,
    frequent_bag_classifier,
    load_communities,
    localize,
    ncp,
    ppr_cluster,
    ppr_vector,
    size_bin,
)
from .generators import (
    chung_lu_weights,
    gen_binary_tree,
    gen_chung_lu,
    gen_clique,
    gen_cycle,
    gen_er,
    gen_grid,
    gen_grid_subdivision,
    grid_subdivision_face_cycle,
    stream_rng,
)
from .graph import (
    CoreDecomposition,
    Graph,
    VertexSet,
    avg_clustering,
    bfs_distances,
    conductance,
    connected_components,
    diameter,
    eccentricity,
    from_edges,
    giant_component,
    k_core,
    load_edge_list,
    load_pace_gr,
    save_edge_list,
    subgraph,
)
from .hyperbolicity import (
    GeodesicCycleCheck,
    MetricProfile,
    Thm3Report,
    check_geodesic_cycle,
    delta_exact,
    longest_geodesic_cycle_bruteforce,
    verify_theorem3,
)
from .ordering import (
    HEURISTICS,
    EliminationOrdering,
    compute_ordering,
    load_ordering,
    order_amd,
    order_lexm,
    order_mcs,
    order_mindeg,
    order_minfill,
    order_nested_dissection,
    save_ordering,
)
from .treedecomp import (
    TDStats,
    TDValidation,
    TreeDecomposition,
    Triangulation,
    brute_force_treewidth,
    decompose,
    export_td,
    export_td_dot,
    gavril_td,
    import_td,
    td_length,
    td_stats,
    triangulate,
    validate_td,
)

__version__ = "0.1.0"

__all__ = [
    "BagProfiles",
    "CommunityTable",
    "CoreDecomposition",
    "EliminationOrdering",
    "GeodesicCycleCheck",
    "Graph",
    "HEURISTICS",
    "LocalizationPoint",
    "LocalizationReport",
    "MetricProfile",
    "NCPPoint",
    "TDStats",
    "TDValidation",
    "Thm3Report",
    "TreeDecomposition",
    "Triangulation",
    "VertexSet",
    "avg_clustering",
    "bag_profiles",
    "bfs_distances",
    "brute_force_treewidth",
    "check_geodesic_cycle",
    "chung_lu_weights",
    "compute_ordering",
    "conductance",
    "connected_components",
    "decompose",
    "delta_exact",
    "diameter",
    "eccentricity",
    "export_td",
    "export_td_dot",
    "frequent_bag_classifier",
    "from_edges",
    "gavril_td",
    "gen_binary_tree",
    "gen_chung_lu",
    "gen_clique",
    "gen_cycle",
    "gen_er",
    "gen_grid",
    "gen_grid_subdivision",
    "giant_component",
    "grid_subdivision_face_cycle",
    "import_td",
    "k_core",
    "load_communities",
    "load_edge_list",
    "load_ordering",
    "load_pace_gr",
    "localize",
    "longest_geodesic_cycle_bruteforce",
    "ncp",
    "order_amd",
    "order_lexm",
    "order_mcs",
    "order_mindeg",
    "order_minfill",
    "order_nested_dissection",
    "ppr_cluster",
    "ppr_vector",
    "save_edge_list",
    "save_ordering",
    "size_bin",
    "stream_rng",
    "subgraph",
    "td_length",
    "td_stats",
    "triangulate",
    "validate_td",
    "verify_theorem3",
]
