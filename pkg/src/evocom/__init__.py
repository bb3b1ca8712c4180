"""Generator of evolving-community ground truths and an evaluation suite for dynamic community detection."""

from .errors import ConfigurationError, EvaluationError, EvocomError, ParseError
from .events import EventKind, EventLog, event_count_diff, extract_events, ground_truth_events
from .generate import generate_ground_truth
from .io import load_config, load_ground_truth, load_partition, save_ground_truth, save_partition
from .metrics import ari, contingency, f1_score, jaccard_index, nmi, nvi, score
from .model import GroundTruth, Snapshot, StaticCommunity, EvolvingCommunity, TemporalPartition, validate
from .sampling import DistributionSpec, RngStream
from .scenario import ScenarioConfig
from .transitions import partition_score, score_table, transition_score, windowed_score

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError", "EvaluationError", "EvocomError", "ParseError",
    "EventKind", "EventLog", "event_count_diff", "extract_events", "ground_truth_events",
    "generate_ground_truth",
    "load_config", "load_ground_truth", "load_partition", "save_ground_truth", "save_partition",
    "ari", "contingency", "f1_score", "jaccard_index", "nmi", "nvi", "score",
    "GroundTruth", "Snapshot", "StaticCommunity", "EvolvingCommunity", "TemporalPartition", "validate",
    "DistributionSpec", "RngStream", "ScenarioConfig",
    "partition_score", "score_table", "transition_score", "windowed_score",
]
