"""Maximal operators on finite graphs and on the integers.

Exact evaluation of the centered maximal operator on small graphs, searches
for norm and variation extremizers, closed-form constants and their
``p -> infinity`` limits, an atlas of small connected graphs, and the
maximal operators on ``Z`` with rigorously bounded infinite sums.
"""

from .atlas import (
    AtlasRecord,
    ScanSummary,
    canonical_code,
    check_prop43,
    disjoint_paths,
    enumerate_connected,
    scan_variation_constants,
)
from .constants import (
    ConstantReport,
    delta_variation_ratio,
    kn_limit,
    kn_lower_bound,
    kn_var_constant,
    max_delta_variation_ratio,
    soria_tradacete_star_bounds,
    star_limit,
    star_lower_bound,
    star_norm_star,
    star_var2_constant,
    star_var2_extremizer,
)
from .errors import (
    BudgetExceededError,
    DisconnectedGraphError,
    DivergenceError,
    DuplicateEdgeError,
    GraphmaxError,
    GraphValidationError,
    InvalidParameterError,
    InvariantViolation,
    SelfLoopError,
)
from .graph import (
    Graph,
    ball,
    build_named,
    from_edge_list,
    geometry,
    min_degree_vertex,
    parse_graph_spec,
    read_graph,
)
from .maximal import (
    MaximalProfile,
    graph_maximal,
    norm_ratio,
    p_norm,
    p_variation,
    variation_ratio,
)
from .search import (
    SearchConfig,
    SearchResult,
    ascent_norm,
    ascent_variation,
    complete_norm_structured,
    grid_oracle_norm,
    grid_oracle_variation,
    normalize_norm_candidate,
    normalize_variation_candidate,
    star_norm_formula,
    star_norm_structured,
)
from .series import TailBound, conjectured_constant, cp_constant
from .zline import (
    LatticeFunction,
    centered_lipschitz_ratio,
    centered_maximal_z,
    check_lipschitz_half,
    check_var_norm_bound,
    conjecture_scan,
    delta,
    indicator,
    lattice_variation,
    tent,
    uncentered_maximal_z,
    z_variation,
)

__version__ = "0.1.0"
