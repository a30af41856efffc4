"""Incremental monitor placement on shortest-path networks via group betweenness."""

__version__ = "0.1.0"

from .centrality import (
    CandidateIndex,
    MatrixPair,
    betweenness,
    group_betweenness_direct,
    init_matrices,
    path_betweenness_matrix,
    path_betweenness_pair,
    sigma_through,
)
from .graph import (
    UNREACHABLE,
    Graph,
    GraphFormatError,
    ShortestPathData,
    all_pairs,
    bfs_single_source,
    parse_edge_list,
    read_edge_list,
)
from .placement import (
    DeploymentProblem,
    PlacementError,
    PlacementResult,
    PlacementState,
    contribution_of,
    initial_state,
    place_to_coverage,
    two_phase_place,
    update,
)
