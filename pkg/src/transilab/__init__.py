"""Graph generation, community detection and transitivity analysis."""

from .errors import (AssignmentError, DegreeSamplingError,
                     DisconnectedGraphError, FormatError, GenerationError,
                     NonGraphicalSequenceError, TransilabError)
from .graph import (DegreeSequence, Graph, PowerLawSpec, Seed,
                    connected_components, double_edge_swap, is_connected,
                    largest_component, sample_power_law_degrees)
from .partition import Partition
from .metrics import (CommunityLinkMatrix, TriadCensus, avg_local_clustering,
                      community_link_matrix, global_transitivity,
                      literal_triad_ratio, local_clustering,
                      mixing_coefficient, modularity, triad_census)
from .random_models import (EvParams, barabasi_albert, configuration_model,
                            evolutionary_pa)
from .lfr import (LfrParams, assign_communities, lfr_generate,
                  rewire_to_mixing, sample_community_sizes)
from .clustered import (HtParams, NmParams, NmStubSplit, ht_generate,
                        ht_generate_with_info, nm_generate,
                        nm_generate_with_info, nm_stub_split)
from .detect import DetectionResult, infomap_greedy, louvain, map_equation
from .io import (read_edge_list, read_partition, write_edge_list,
                 write_partition)

__version__ = "0.1.0"

__all__ = [
    "AssignmentError", "CommunityLinkMatrix", "DegreeSamplingError",
    "DegreeSequence", "DetectionResult", "DisconnectedGraphError",
    "EvParams", "FormatError", "GenerationError", "Graph", "HtParams",
    "LfrParams", "NmParams", "NmStubSplit", "NonGraphicalSequenceError",
    "Partition", "PowerLawSpec", "Seed", "TransilabError", "TriadCensus",
    "assign_communities", "avg_local_clustering", "barabasi_albert",
    "community_link_matrix", "configuration_model", "connected_components",
    "double_edge_swap", "evolutionary_pa", "global_transitivity",
    "ht_generate", "ht_generate_with_info", "infomap_greedy", "is_connected",
    "largest_component", "lfr_generate", "literal_triad_ratio",
    "local_clustering", "louvain", "map_equation", "mixing_coefficient",
    "modularity", "nm_generate", "nm_generate_with_info", "nm_stub_split",
    "read_edge_list", "read_partition", "rewire_to_mixing",
    "sample_community_sizes", "sample_power_law_degrees", "triad_census",
    "write_edge_list", "write_partition",
]
