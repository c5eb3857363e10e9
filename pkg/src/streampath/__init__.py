"""Multi-pass streaming path covers, (1,2)-cost tours, and heavy tours.

The engines replay an edge stream a bounded number of times while keeping
only about ``64 * n * ceil(1/epsilon)`` machine words, and every run returns
its pass count and peak word usage next to the answer.  Exact oracles for
small instances live alongside so the approximation bounds can be checked
rather than trusted.
"""

from .graph import (
    ContractionMap,
    CoverCheck,
    DegreeCensus,
    Edge,
    Graph,
    Matching,
    PathCover,
    Tour,
    components_contraction,
    contract,
    contract_edges,
    dedupe_parallel_max,
    degree_census,
    matching_contraction,
    validate_path_cover,
)
from .matching import (
    ApproxParams,
    ContractionView,
    OracleLimitError,
    oracle_max_matching,
    oracle_max_weight_matching,
    release_matching,
    streaming_max_matching,
    streaming_max_weight_matching,
)
from .pathcover import (
    IterativeCoverResult,
    MpcResult,
    cover_interior_vertices,
    iterative_path_cover,
    remove_middle_incident_edges,
    two_phase_path_cover,
)
from .prng import SplitMix64
from .stream import (
    BudgetExceededError,
    EdgeStreamSource,
    FileEdgeSource,
    InMemoryEdgeSource,
    RunRecord,
    StreamFormatError,
    StreamReport,
    StreamSession,
    default_words_budget,
    load_edge_list,
    open_session,
    save_edge_list,
)
from .tsp import (
    ContractBound,
    MaxTspInstance,
    MaxTspResult,
    Tsp12Identity,
    Tsp12Instance,
    Tsp12Result,
    approx_max_tsp,
    approx_tsp12,
    contract_bound_check,
    extract_matching_from_cycle,
    extract_matching_from_path_or_cycle,
    hamiltonian_order,
    oracle_max_tsp,
    oracle_path_cover,
    oracle_tsp12,
    tsp12_identity_check,
)

__version__ = "0.1.0"

__all__ = [
    "ApproxParams",
    "BudgetExceededError",
    "ContractBound",
    "ContractionMap",
    "ContractionView",
    "CoverCheck",
    "DegreeCensus",
    "Edge",
    "EdgeStreamSource",
    "FileEdgeSource",
    "Graph",
    "InMemoryEdgeSource",
    "IterativeCoverResult",
    "Matching",
    "MaxTspInstance",
    "MaxTspResult",
    "MpcResult",
    "OracleLimitError",
    "PathCover",
    "RunRecord",
    "SplitMix64",
    "StreamFormatError",
    "StreamReport",
    "StreamSession",
    "Tour",
    "Tsp12Identity",
    "Tsp12Instance",
    "Tsp12Result",
    "approx_max_tsp",
    "approx_tsp12",
    "components_contraction",
    "contract",
    "contract_bound_check",
    "contract_edges",
    "cover_interior_vertices",
    "dedupe_parallel_max",
    "default_words_budget",
    "degree_census",
    "extract_matching_from_cycle",
    "extract_matching_from_path_or_cycle",
    "hamiltonian_order",
    "iterative_path_cover",
    "load_edge_list",
    "matching_contraction",
    "open_session",
    "oracle_max_matching",
    "oracle_max_weight_matching",
    "oracle_max_tsp",
    "oracle_path_cover",
    "oracle_tsp12",
    "release_matching",
    "remove_middle_incident_edges",
    "save_edge_list",
    "streaming_max_matching",
    "streaming_max_weight_matching",
    "tsp12_identity_check",
    "two_phase_path_cover",
    "validate_path_cover",
    "__version__",
]
