"""Continuous-time dynamic graphs, refinement tests, and a toy dynamic GNN.

The package models a dynamic graph as a start graph plus an ordered stream
of timestamped events.  On top of that it provides per-snapshot color
refinement with per-node color trajectories, unfolding-tree signatures
with the decisive depth bound, a brute-force isomorphism oracle,
component decomposition and matching, a two-mode (symbolic / numeric)
dynamic network with training and gradient checking, and seeded
certification experiments tying those pieces together.
"""

from .cdg import (
    ADD,
    ATTR_CHANGE,
    Cdg,
    DELETE,
    Diagnostic,
    EDGE,
    Event,
    NODE,
    Snapshot,
    StartGraph,
    adjacency,
    apply_event,
    attr_bytes,
    edge_key,
    neighbors,
    replay,
    snapshots,
    timestamps,
    universe,
    validate,
    validate_stream,
)
from .cgnn import (
    CdynTarget,
    CgnnModel,
    ExpressivityReport,
    IDENTITY_ACT,
    Mlp,
    NUMERIC,
    PER_INTERVAL,
    SHARED_DT,
    SYMBOLIC,
    SgnnConfig,
    StateMatrix,
    TANH,
    TemporalConfig,
    TrainResult,
    cgnn_forward,
    expressivity_check,
    gradient_check,
    loss_and_gradients,
    model_params_json,
    readout,
    sgnn_forward,
    symbolic_state_trajectories,
    train_to_target,
    training_loss,
    trajectory_prefixes,
)
from .components import (
    ComponentMatchVerdict,
    ComponentPartition,
    components,
    is_disconnected,
    match_components,
)
from .errors import (
    AddExistingError,
    AttrChangeMissingError,
    CdgError,
    DeleteMissingError,
    DepthMismatchError,
    DimensionMismatchError,
    EdgeEndpointMissingError,
    GenerationExhaustedError,
    InvalidBoundError,
    InvalidCdgError,
    LengthMismatchError,
    TargetNotCutRespectingError,
    TimestampMismatchError,
    TooLargeError,
    UnknownTimestampError,
)
from .experiments import (
    EXPERIMENT_NAMES,
    Report,
    load_pair_corpus,
    load_stream_corpus,
    make_pair,
    run_experiment,
    sub_seed,
    write_pair_corpus,
    write_stream_corpus,
)
from .generate import (
    GeneratorConfig,
    generate,
    generate_isomorphic_pair,
    relabel_cdg,
    six_cycle,
    two_triangles,
)
from .iso import (
    IDENTITY,
    IsoVerdict,
    RENAMING,
    brute_force_isomorphic,
    check_isomorphism_witness,
)
from .serialize import cdg_from_jsonl, cdg_to_jsonl, load_cdg, save_cdg
from .trees import (
    CorrespondenceReport,
    CutVerdict,
    DepthBoundReport,
    EMPTY_TREE,
    TreeTrajectory,
    UnfoldingTree,
    cut_trajectories,
    depth_bound,
    graph_cut_equivalent,
    node_cut_equivalent,
    signature,
    stable_trajectories,
    tree_sigs_at_depth,
    tree_sigs_stable,
    unfolding_tree,
    verify_cut_cwl_correspondence,
    verify_depth_bound,
)
from .wl import (
    BIJECTION,
    BOTTOM,
    ColorDictionary,
    EXISTENCE,
    GraphComparison,
    awl_init,
    awl_stable,
    awl_step,
    check_comparable,
    compare_graphs,
    cwl,
    graph_cwl_equivalent,
    merged_snapshot,
    node_cwl_equivalent,
    partition_of,
    refine_at_depth,
)

__version__ = "0.1.0"
