"""Desk-scale tooling for thresholds of increasing set families: exact and
Monte Carlo product measures (plain and randomly colored), cover-based
expectation thresholds with certified LP duals, spread certification,
rainbow lifts with verified spread transfer, and the hybrid coupling chain
between the transversal and colored sampling models."""

from .covers import (
    CoverSolution,
    candidate_lattice,
    check_cover_certificate,
    lp_min_cover_cost,
    min_cover_cost_exhaustive,
    min_cover_cost_integer,
    solve_q,
    solve_qf,
)
from .coupling import (
    chain_hit_estimates,
    exact_hybrid_hit,
    hybrid_sample,
    pointwise_gap,
)
from .errors import (
    CapacityError,
    DomainError,
    EmptyFamilyError,
    InvalidInputError,
    NumericalError,
    PreconditionError,
    RainbowError,
)
from .families import (
    ColoredSubset,
    GroundSet,
    IncreasingFamily,
    MultiHypergraph,
    Subset,
    as_hypergraph,
    colored_subset,
    contains,
    ell,
    enumerate_members,
    family_of,
    format_hypergraph_text,
    is_all_member,
    is_rainbow_member,
    letters_ground,
    make_family,
    make_hypergraph,
    parse_hypergraph_text,
    read_hypergraph,
    write_hypergraph,
)
from .generators import (
    HostGraph,
    complete_graph,
    complete_hypergraph,
    degree,
    ell_cycles,
    hamilton_cycles,
    host_ground,
    min_degree_ell,
    perfect_matchings,
    power_hamilton,
    random_family,
    single_edge,
    sunflower,
    tree_embeddings,
)
from .lift import (
    ColoredHypergraph,
    colored_intersection_count,
    falling_factorial,
    has_rainbow_transversal,
    lift_rainbow,
    pad_lift,
    transversal_trial,
    verify_lift_spiro,
    verify_lift_spread,
)
from .measures import (
    ColoredMeasure,
    McEstimate,
    MeasureParams,
    mu_colored_all_exact,
    mu_colored_exact,
    mu_colored_mc,
    mu_exact,
    rainbow_coloring_count,
    split_generator,
)
from .spread import (
    SpreadCertificate,
    SpreadProfile,
    check_spiro,
    check_spread,
    intersection_count,
    intersection_profile,
    measure_spread,
    measured_spiro_q,
    optimal_spread,
)
from .thresholds import (
    BOUNDARY,
    INTERIOR,
    NOT_ATTAINED,
    ThresholdResult,
    solve_pc,
    solve_pc_k,
)

__version__ = "0.1.0"
