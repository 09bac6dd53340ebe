"""Triadic analysis of directed and signed networks.

Censuses of the 16 triad patterns and their 30 node-specific orbits,
degree-preserving switching randomization, motif Z-score profiles,
Steiner-triple-system construction, triadic random graphs, node-specific
pattern mining, and coupled-oscillator / spectral-gap experiments.
"""

from .graphs import (
    DirectedGraph,
    LoadResult,
    ParseError,
    SignedGraph,
    load_edge_list,
    load_signed_edge_list,
)
from .measures import (
    GraphStats,
    betweenness,
    clustering,
    connected_components,
    degrees,
    density,
    generate_er,
    graph_stats,
    pagerank,
    shortest_path_stats,
)
from .motifs import SignificanceProfile, ZProfile, significance_profile, z_profile
from .nospam import (
    complete_link_cluster,
    homogeneity,
    homophily,
    map_profiles,
    nospam_directed,
    nospam_signed,
)
from .randomize import ensemble, randomize_directed, randomize_signed
from .steiner import SteinerTripleSystem, sts_construct, validate
from .triads import census, classify, node_specific_counts, signed_node_specific_counts
from .trgm import er_distribution, expected_density, sample_trgm

__version__ = "0.1.0"

__all__ = [
    "DirectedGraph",
    "SignedGraph",
    "GraphStats",
    "LoadResult",
    "ParseError",
    "SignificanceProfile",
    "SteinerTripleSystem",
    "ZProfile",
    "betweenness",
    "census",
    "classify",
    "clustering",
    "complete_link_cluster",
    "connected_components",
    "degrees",
    "density",
    "ensemble",
    "er_distribution",
    "expected_density",
    "generate_er",
    "graph_stats",
    "homogeneity",
    "homophily",
    "load_edge_list",
    "load_signed_edge_list",
    "map_profiles",
    "node_specific_counts",
    "nospam_directed",
    "nospam_signed",
    "pagerank",
    "randomize_directed",
    "randomize_signed",
    "sample_trgm",
    "shortest_path_stats",
    "significance_profile",
    "signed_node_specific_counts",
    "sts_construct",
    "validate",
    "z_profile",
]
