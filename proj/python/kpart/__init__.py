"""Balanced k-way edge/vertex expansion toolkit.

Planted instance generation, a low-rank SDP relaxation solver, greedy ball
rounding with structural diagnostics, and exact small-scale oracles. The heavy
lifting lives in the C++ extension module `_kpart`.
"""

from ._kpart import (  # noqa: F401
    DegenerateEmbeddingError,
    EmbeddingSolution,
    GenerationError,
    Graph,
    InfeasibleError,
    OracleBudgetError,
    ParseError,
    PartitionResult,
    PlantedInstance,
    ValidationError,
    __version__,
    apply_monotone_adversary,
    ball,
    brute_kway_opt,
    centroid_identity_check,
    check_feasibility,
    cluster_diagnostics,
    complete_partition,
    edge_boundary,
    edge_expansion,
    expansion_exact,
    gen_regular_expander,
    generate_edge_instance,
    generate_vertex_instance,
    integral_embedding,
    kway_expansion,
    load_embedding,
    load_instance,
    naive_expansion,
    poincare_check,
    read_edge_list,
    round_greedy,
    run_experiment,
    save_embedding,
    save_instance,
    separate_triangles,
    solve,
    solve_graph,
    spectral_gap,
    threshold_cut_l1,
    validate_instance,
    vertex_boundary,
    vertex_expansion,
    write_edge_list,
)
