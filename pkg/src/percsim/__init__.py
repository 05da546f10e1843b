"""Continuum long-range percolation on finite boxes.

Builds the random graph on [0, N]^d whose vertices are a deterministic
lattice backbone path plus a Poisson point process and whose random edges
appear with probability 1 - exp(-beta * r**-s) of the 1-norm distance r,
then measures chemical distances, the origin-cluster diameter, and the
observables behind the four diameter-scaling regimes.
"""
from .model import (
    ModelParams,
    OutOfScopeError,
    ParityError,
    PointCloud,
    assemble_vertex_set,
    build_backbone,
    connection_probability,
    sample_poisson_points,
)
from .edges import (
    EdgeList,
    SpatialGrid,
    expected_edge_count,
    sample_edges_grid,
    sample_edges_naive,
)
from .graphdist import (
    DiameterReport,
    DisconnectedSubsetError,
    Graph,
    bfs_distances,
    component_of_origin,
    diameter_exact,
    diameter_ifub,
    origin_corner_distance,
)
from .observables import (
    DegreeStats,
    EdgeLengthHistogram,
    count_cut_intervals,
    count_isolated_intervals,
    count_local_cut_intervals,
    degree_stats,
    dyadic_bands,
    edge_length_histogram,
    renorm_event_frequency,
    subcube_connection_indicator,
)
from .experiment import (
    FitResult,
    SweepConfig,
    TrialRecord,
    classify_regime,
    fit_logratio,
    fit_polylog,
    fit_power_law,
    logratio_spread,
    parse_config,
    run_sweep,
    run_trial,
    summarize,
    theoretical_psi_bound,
    trial_seed,
)

__version__ = "0.1.0"
