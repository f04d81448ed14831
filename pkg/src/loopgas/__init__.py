"""Bethe free energies, loop-sum corrections and polymer expansions for
binary factor-graph models (general positive, ldgm, ldpc)."""

from .bethe import BetheBreakdown, bethe_free_energy, stationarity_check
from .bp import (
    BPResult,
    MessageSet,
    initial_messages,
    residual_of,
    solve_fixed_point,
    verify_high_noise,
    verify_high_temperature_bounds,
    verify_ldgm_message_bounds,
)
from .exact import (
    ChannelAverage,
    PartitionReport,
    brute_force_log_partition,
    channel_average,
    channel_shift,
    codeword_count_gf2,
    conditional_entropy_ldgm,
    conditional_entropy_ldpc,
    gf2_rank,
)
from .expansion import (
    QReport,
    SeriesResult,
    cayley_tree_count,
    connected_mayer_sum,
    convergence_criterion_q,
    convergence_criterion_q_bound,
    count_rooted_polymers,
    polymer_series,
    rooted_dary_tree_count,
    ursell,
)
from .graphs import (
    ChannelParams,
    ExpanderParams,
    FactorGraph,
    GeneralWeights,
    LdgmWeights,
    LdpcWeights,
    apply_channel,
    attach_random_general_weights,
    binary_entropy,
    build_factor_graph,
    check_expander_exhaustive,
    check_expander_montecarlo,
    expander_exponent_c,
    graph_from_json_dict,
    graph_to_json_dict,
    load_graph,
    sample_ldgm,
    sample_regular_bipartite,
    save_graph,
    solve_lambda0,
)
from .loops import (
    ActivityEvaluator,
    FullExpansionReport,
    IdentityReport,
    LoopSubgraph,
    LoopSumResult,
    Polymer,
    SplitResult,
    activity_bound,
    enumerate_generalized_loops,
    enumerate_polymers,
    expander_activity_bound,
    high_temperature_activity_bound,
    ldgm_activity_bound,
    ldgm_trivial_activity_bound,
    ldpc_type_activity_bound,
    loop_sum,
    loop_sum_bruteforce,
    loop_sum_direct,
    split_small_large,
    tree_exactness_report,
    verify_full_expansion,
    verify_loop_identity,
)
from .ratefunc import (
    RateFunctionResult,
    RateFunctionSpec,
    f0_restricted,
    f_xy,
    k_theta,
    maximize_f0,
    mckay_rate_function,
    omega_constant,
    rate_function_profile,
    restricted_point,
    z_star,
)

__all__ = [
    "ActivityEvaluator",
    "BPResult",
    "BetheBreakdown",
    "ChannelAverage",
    "ChannelParams",
    "ExpanderParams",
    "FactorGraph",
    "FullExpansionReport",
    "GeneralWeights",
    "IdentityReport",
    "LdgmWeights",
    "LdpcWeights",
    "LoopSubgraph",
    "LoopSumResult",
    "MessageSet",
    "PartitionReport",
    "Polymer",
    "QReport",
    "RateFunctionResult",
    "RateFunctionSpec",
    "SeriesResult",
    "SplitResult",
    "activity_bound",
    "apply_channel",
    "attach_random_general_weights",
    "bethe_free_energy",
    "binary_entropy",
    "brute_force_log_partition",
    "build_factor_graph",
    "cayley_tree_count",
    "channel_average",
    "channel_shift",
    "check_expander_exhaustive",
    "check_expander_montecarlo",
    "codeword_count_gf2",
    "conditional_entropy_ldgm",
    "conditional_entropy_ldpc",
    "connected_mayer_sum",
    "convergence_criterion_q",
    "convergence_criterion_q_bound",
    "count_rooted_polymers",
    "enumerate_generalized_loops",
    "enumerate_polymers",
    "expander_activity_bound",
    "expander_exponent_c",
    "f0_restricted",
    "f_xy",
    "gf2_rank",
    "graph_from_json_dict",
    "graph_to_json_dict",
    "high_temperature_activity_bound",
    "initial_messages",
    "k_theta",
    "ldgm_activity_bound",
    "ldgm_trivial_activity_bound",
    "ldpc_type_activity_bound",
    "load_graph",
    "loop_sum",
    "loop_sum_bruteforce",
    "loop_sum_direct",
    "maximize_f0",
    "mckay_rate_function",
    "omega_constant",
    "polymer_series",
    "rate_function_profile",
    "residual_of",
    "restricted_point",
    "rooted_dary_tree_count",
    "sample_ldgm",
    "sample_regular_bipartite",
    "save_graph",
    "solve_fixed_point",
    "solve_lambda0",
    "split_small_large",
    "stationarity_check",
    "tree_exactness_report",
    "ursell",
    "verify_full_expansion",
    "verify_high_noise",
    "verify_high_temperature_bounds",
    "verify_ldgm_message_bounds",
    "verify_loop_identity",
    "z_star",
]
