"""Divide-and-conquer reduction and solving of QUBO/PUBO problems."""

from .benchgen import FamilyConfig, GraphSpec, family_matrix, generate
from .clustering import (
    LouvainConfig,
    Partition,
    WeightedGraph,
    abs_weights,
    hypergraph_to_graph,
    louvain,
    modularity,
)
from .cutoff import (
    CommunityDecomposition,
    Window,
    decompose,
    delta_pubo,
    delta_two_body,
    window,
)
from .driver import (
    RunConfig,
    RunResult,
    approximation_ratio,
    brute_force_reference,
    run,
    shift_diagnostics,
    should_recombine,
)
from .hamiltonian import PolyHamiltonian, SpinConfig, flip_all, load_problem
from .optimizer import (
    LocalSpectrum,
    OptimizerBudget,
    enumerate_low_exhaustive,
    enumerate_low_sampled,
    enumerate_window_exhaustive,
    enumerate_window_sampled,
    solve_ground,
)
from .reduction import (
    DecodeChain,
    EncodedCommunity,
    ReducedProblem,
    build_reduced,
    contracted_graph,
    decode_full,
    encode_community,
    reduced_as_poly,
)

__all__ = [
    "CommunityDecomposition",
    "DecodeChain",
    "EncodedCommunity",
    "FamilyConfig",
    "GraphSpec",
    "LocalSpectrum",
    "LouvainConfig",
    "OptimizerBudget",
    "Partition",
    "PolyHamiltonian",
    "ReducedProblem",
    "RunConfig",
    "RunResult",
    "SpinConfig",
    "WeightedGraph",
    "Window",
    "abs_weights",
    "approximation_ratio",
    "brute_force_reference",
    "build_reduced",
    "contracted_graph",
    "decode_full",
    "decompose",
    "delta_pubo",
    "delta_two_body",
    "encode_community",
    "enumerate_low_exhaustive",
    "enumerate_low_sampled",
    "enumerate_window_exhaustive",
    "enumerate_window_sampled",
    "family_matrix",
    "flip_all",
    "generate",
    "hypergraph_to_graph",
    "load_problem",
    "louvain",
    "modularity",
    "reduced_as_poly",
    "run",
    "shift_diagnostics",
    "should_recombine",
    "solve_ground",
    "window",
]

__version__ = "0.1.0"
