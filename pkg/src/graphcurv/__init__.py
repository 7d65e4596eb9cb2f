"""Graph curvature analysis, curvature-guided rewiring, and bottleneck
diagnostics for message-passing workloads."""

from .errors import ConsistencyError, DataError, GraphcurvError, ParameterError
from .graph import (
    DirectedArcs,
    Graph,
    NodeLabeling,
    augmented_normalized_adjacency,
    barbell_graph,
    bfs_distances,
    complete_graph,
    cycle_graph,
    erdos_renyi_graph,
    generate,
    grid2d_graph,
    largest_component,
    load_edge_list,
    load_labels,
    make_undirected,
    parse_edge_list,
    save_edge_list,
    tree_graph,
)
from .curvature import (
    CurvatureReport,
    EdgeProfile,
    balanced_forman,
    curvature_report,
    edge_profile,
    forman,
    jost_liu_lower_bound,
    max_square_matching,
)
from .transport import (
    LocalMeasure,
    TransportPlan,
    alpha_measure,
    ollivier_alpha,
    ollivier_limit,
    wasserstein1,
)
from .rewiring import (
    CurvatureIndex,
    RewireTrace,
    SdrfConfig,
    WeightedGraph,
    candidate_improvements,
    digl_rewire,
    sdrf,
    softmax_sample,
)
from .spectral import (
    SpectralReport,
    check_digl_bound,
    cheeger,
    cheeger_exact,
    cheeger_sweep,
    normalized_laplacian,
    ppr_cheeger,
    ppr_mass_concentration,
    ppr_matrix,
    spectral_gap,
    spectral_report,
)
from .sensitivity import (
    BottleneckReport,
    MpnnSpec,
    ball_growth,
    betweenness,
    bottleneck_report,
    bottleneck_value,
    influence_score,
    jacobian_upper_bound,
    mpnn_forward,
    mpnn_jacobian,
    betweenness_concentration_check,
    power_entry,
    squashing_check,
)
from .metrics import ComparisonReport, compare, degree_w1, edit_stats, homophily
from .rng import SplitMix64

__version__ = "0.1.0"
