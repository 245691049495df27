"""Find, construct, and refute cycles whose complement is an independent set.

A cycle W of a graph G is an IC-cycle when V(G) - V(W) spans no edge.  Every
2-connected graph with 3*min_degree >= n + 2 has one; the bound is tight.
This package provides the exact decision procedure, a constructive search
built from local improvement moves, the tight family generator, graph6 and
edge-list I/O, and an exhaustive small-graph verification harness.
"""

from .errors import (
    GraphError,
    MalformedEdgeListError,
    MalformedGraph6Error,
    PreconditionViolatedError,
    ProofGapError,
    SelfLoopError,
    TooLargeError,
    VertexOutOfRangeError,
)
from .graph import (
    Graph,
    VertexCycle,
    VertexPath,
    build_graph,
    induced_subgraph,
    ic_cycle_violation,
    is_cycle,
    is_connected,
    is_ic_cycle,
    is_independent,
    is_two_connected,
    satisfies_degree_condition,
)
from .formats import parse_edge_list, parse_graph6, write_edge_list, write_graph6
from .oracle import (
    OracleResult,
    Outcome,
    TwoCutCertificate,
    find_ic_cycle_exact,
    find_two_cut_certificate,
    has_hamiltonian_cycle,
    has_hamiltonian_path_between,
)
from .construct import (
    BridgePair,
    CyclePathPartition,
    Move,
    PathState,
    RotationSets,
    Trace,
    bootstrap_partition,
    case1_moves,
    case2_pipeline,
    claim1_find_move,
    claim1_hamiltonian_path,
    claim4_hamiltonian_cycle_H,
    claim5_hamiltonian_path_pq,
    construct_ic_cycle,
    improve_partition,
    lemma1_close_path,
    rotation_sets,
    select_bridge_pair,
    validate_trace,
)
from .extremal import ExtremalReport, extremal_graph, validate_extremal
from .harness import (
    VerificationReport,
    boundary_scan,
    degree_threshold,
    enumerate_graphs,
    verify_theorem,
)

__version__ = "0.1.0"

__all__ = [
    "BridgePair",
    "CyclePathPartition",
    "ExtremalReport",
    "Graph",
    "GraphError",
    "MalformedEdgeListError",
    "MalformedGraph6Error",
    "Move",
    "OracleResult",
    "Outcome",
    "PathState",
    "PreconditionViolatedError",
    "ProofGapError",
    "RotationSets",
    "SelfLoopError",
    "TooLargeError",
    "Trace",
    "TwoCutCertificate",
    "VerificationReport",
    "VertexCycle",
    "VertexOutOfRangeError",
    "VertexPath",
    "bootstrap_partition",
    "boundary_scan",
    "build_graph",
    "case1_moves",
    "case2_pipeline",
    "claim1_find_move",
    "claim1_hamiltonian_path",
    "claim4_hamiltonian_cycle_H",
    "claim5_hamiltonian_path_pq",
    "construct_ic_cycle",
    "degree_threshold",
    "enumerate_graphs",
    "extremal_graph",
    "find_ic_cycle_exact",
    "find_two_cut_certificate",
    "has_hamiltonian_cycle",
    "has_hamiltonian_path_between",
    "ic_cycle_violation",
    "improve_partition",
    "induced_subgraph",
    "is_connected",
    "is_cycle",
    "is_ic_cycle",
    "is_independent",
    "is_two_connected",
    "lemma1_close_path",
    "parse_edge_list",
    "parse_graph6",
    "rotation_sets",
    "satisfies_degree_condition",
    "select_bridge_pair",
    "validate_extremal",
    "validate_trace",
    "verify_theorem",
    "write_edge_list",
    "write_graph6",
]
