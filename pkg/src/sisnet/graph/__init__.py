from .core import Graph, circulant_graph, complete_graph, cycle_graph, star_graph
from .generate import (
    PowerLaw,
    build_configuration_model,
    degree_sequence_from_distribution,
    sample_degree_sequence,
)
from .io import read_degree_sequence, read_edge_list, write_degree_sequence, write_edge_list
from .rewire import RewireResult, rewire_to_assortativity
from .sampling import (
    node_selection_probs,
    sample_edge_end_Y,
    sample_neighbor_Z,
    sample_node_X,
)
from .stats import (
    SAMPLERS,
    DegreeDistribution,
    JointDegreeStats,
    assortativity,
    degree_law,
    expected_degree,
    fosd_check,
    joint_degree_stats,
    uncorrelated_stats,
)

__all__ = [
    "DegreeDistribution",
    "Graph",
    "JointDegreeStats",
    "PowerLaw",
    "RewireResult",
    "SAMPLERS",
    "assortativity",
    "build_configuration_model",
    "circulant_graph",
    "complete_graph",
    "cycle_graph",
    "degree_law",
    "degree_sequence_from_distribution",
    "expected_degree",
    "fosd_check",
    "joint_degree_stats",
    "node_selection_probs",
    "read_degree_sequence",
    "read_edge_list",
    "rewire_to_assortativity",
    "sample_degree_sequence",
    "sample_edge_end_Y",
    "sample_neighbor_Z",
    "sample_node_X",
    "star_graph",
    "uncorrelated_stats",
    "write_degree_sequence",
    "write_edge_list",
]
