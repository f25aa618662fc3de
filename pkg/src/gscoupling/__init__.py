"""Graph-signal coupling, filtration-based signal smoothness, and
smoothness-ordered spectral filters."""

from .coupling import (
    OneParamFamily,
    PairSequence,
    ParamPoint,
    SignalSet,
    compose_coupling,
    constant_family,
    delta,
    delta_matrix,
    evaluate_coupling,
    families_equivalent,
    merge_signal_sets,
    pair_sequence,
    pairwise_thresholds,
    star_family,
    tau_roundtrip,
)
from .experiments import (
    DenoiseConfig,
    ExperimentReport,
    SpectrumConfig,
    calibrate_threshold,
    coupling_spectrum_experiment,
    denoise_experiment,
    energy_fraction,
    helix_instance,
    spearman_rho,
)
from .graphs import (
    DistanceMatrix,
    Graph,
    all_pairs_distances,
    build_graph,
    complete_graph,
    diameter,
    empty_graph,
    generate,
    graph_union,
    hamming,
    hamming_to_set,
    is_connected,
    knn_graph,
    power_graph_sequence,
    trivial_graph,
)
from .smoothness import (
    EpsSmoothSubspace,
    Partition,
    SmoothnessReport,
    brute_force_epsilon,
    d_s_direct,
    eps_smooth_subspace,
    epsilon_partition,
    is_interlacing,
    optimal_partition,
    perpendicular_complement,
    smoothness,
    smoothness_value,
)
from .spectral import (
    EigenBasis,
    FilterSpec,
    band_pass,
    basis_smoothness_values,
    eig_sym,
    gft,
    igft,
    laplacian,
    smoothness_ordered_indices,
)

__version__ = "0.1.0"
