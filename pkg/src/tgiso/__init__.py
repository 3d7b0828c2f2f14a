"""Causal topology of temporal graphs.

Event-graph representations, four temporal isomorphism notions with exact
tests and a brute-force oracle, directed Weisfeiler-Leman refinement, and
synthetic classification experiments.
"""

__version__ = "0.1.0"

from .errors import (
    BudgetExceededError,
    DeadEndError,
    DuplicateEdgeError,
    EmptyGraphError,
    EmptyInputError,
    InfeasibleDegreeError,
    ParseError,
    RetriesExhaustedError,
    SizeCapExceededError,
)
from .temporal import (
    TemporalGraph,
    TemporalPath,
    TimestampedEdge,
    enumerate_time_respecting_paths,
    parse_temporal_graph,
    temporal_reachability,
    time_respecting_successors,
    to_csv,
    to_ndjson,
)
from .static import EventNode, OriginalNode, StaticGraph, plain_graph
from .transforms import (
    ComponentClass,
    SnapshotSequence,
    TimestampSetAnnotation,
    build_augmented_event_graph,
    build_compressed_augmented_event_graph,
    build_event_graph,
    build_time_aggregated,
    build_time_concatenated,
    compress_event_graph,
    connected_components,
    tau_relabel,
    to_snapshots,
)
from .iso import (
    IsoResult,
    SearchBudget,
    Verdict,
    brute_force_trp_iso,
    consistent_event_graph_iso,
    static_iso,
    time_aggregated_iso,
    time_concatenated_iso,
    timewise_iso,
)
from .wl import (
    ColorAssignment,
    ColorDictionary,
    WLFingerprint,
    dwl_distinguish,
    dwl_refine,
    first_distinguishing_iteration,
    wl_fingerprint,
)
from .generators import (
    SigmaBias,
    k_regular_random_graph,
    shuffle_timestamps,
    sigma_bias,
    two_community_graph,
    walk_temporal_graph,
)
from .experiments import (
    Dataset,
    ExperimentConfig,
    ExperimentReport,
    featurize,
    make_dataset_A,
    make_dataset_B,
    run_experiment_grid,
    train_eval,
)
