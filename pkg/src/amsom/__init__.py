"""Self-organizing maps with an adaptive structure.

Neurons move in the output plane during training, connections age and are
pruned, poorly fitting neurons split and isolated ones die. A classic batch
SOM on a fixed lattice is included as the baseline, together with quality
metrics, a benchmark protocol and snapshot/SVG export.
"""

from .baseline import train_batch_som
from .bench import ExperimentSpec, run_experiment
from .core import (
    Assignment,
    Dataset,
    MapState,
    assign_all,
    find_winner_pair,
    squared_distance,
)
from .datasets import generate_cluster_dataset, load_csv, split_dataset
from .engine import (
    EpochReport,
    TrainConfig,
    batch_weight_update,
    enforce_degree,
    maybe_add_neuron,
    neighborhood_input,
    neighborhood_output,
    position_update,
    process_pattern_edges,
    prune_edges_and_neurons,
    smooth,
    train,
)
from .errors import AmsomError, ConfigError, DataError, MapStructureError, TrainingError
from .grid import (
    HEXAGONAL,
    RECTANGULAR,
    LatticeSpec,
    build_lattice,
    create_initial_map,
    growing_threshold,
    init_weights,
    side_lengths,
    target_neuron_count,
)
from .metrics import (
    QualityReport,
    dead_units,
    label_neurons,
    quality_report,
    quantization_error,
    topographic_error,
)
from .snapshot import export_snapshot_json, load_snapshot, render_svg

__version__ = "0.1.0"

__all__ = [
    "AmsomError",
    "Assignment",
    "ConfigError",
    "DataError",
    "Dataset",
    "EpochReport",
    "ExperimentSpec",
    "HEXAGONAL",
    "LatticeSpec",
    "MapState",
    "MapStructureError",
    "QualityReport",
    "RECTANGULAR",
    "TrainConfig",
    "TrainingError",
    "assign_all",
    "batch_weight_update",
    "build_lattice",
    "create_initial_map",
    "dead_units",
    "enforce_degree",
    "export_snapshot_json",
    "find_winner_pair",
    "generate_cluster_dataset",
    "growing_threshold",
    "init_weights",
    "label_neurons",
    "load_csv",
    "load_snapshot",
    "maybe_add_neuron",
    "neighborhood_input",
    "neighborhood_output",
    "position_update",
    "process_pattern_edges",
    "prune_edges_and_neurons",
    "quality_report",
    "quantization_error",
    "render_svg",
    "run_experiment",
    "side_lengths",
    "smooth",
    "split_dataset",
    "squared_distance",
    "target_neuron_count",
    "topographic_error",
    "train",
    "train_batch_som",
]
