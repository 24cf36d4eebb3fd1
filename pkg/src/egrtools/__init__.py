"""Executable theory of edge-girth-regular graphs."""

from .canon import CanonicalForm, canonical_form
from .cycles import (
    INFINITE,
    EgrParams,
    LambdaProfile,
    count_g_cycles_through_edge,
    count_g_cycles_through_path,
    count_g_cycles_through_vertex,
    enumerate_shortest_cycles,
    girth,
    is_egr,
    lambda_profile,
)
from .graph import (
    Graph,
    connected_components,
    edge_connectivity,
    is_regular,
    parse_graph6,
    write_graph6,
)
from .cases import (
    CaseVerdict,
    enumerate_layer_profiles,
    feasibility_prefilter,
    known_nonexistence_oracle,
    local_completion_search,
    upper_limit_order,
)
from .layers import LayerProfile, decompose, layer_profile
from .lemmas import CheckResult, run_suite
from .search import SearchOptions, SearchOutcome, generate_regular, search_egr

__version__ = "0.1.0"
