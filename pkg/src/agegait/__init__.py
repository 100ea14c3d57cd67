"""Gait analysis toolkit: BVH parsing, gait parameters, age-style fidelity
scoring, and a survey catalog of MoCap locomotion datasets."""

from .bvh import (
    BvhError,
    BvhSyntaxError,
    Joint,
    MotionClip,
    Skeleton,
    parse_bvh,
    parse_bvh_file,
    rescale_clip,
    write_bvh,
    write_bvh_file,
)
from .catalog import DatasetRecord, aggregates, load_catalog, parse_query, query
from .config import AnalysisConfig, JointMap, load_config, save_config
from .events import (
    FootEvents,
    GaitEvents,
    SegmentSelection,
    assess_ground_drift,
    count_steps,
    detect_foot_events,
    detect_heel_strikes,
    merge_annotations,
    merge_segments,
    select_segments,
)
from .fidelity import (
    DatasetDiagnostics,
    FidelityReport,
    compare_pair,
    dataset_inclusion_matrix,
    default_directions,
    render_report,
)
from .kinematics import (
    AngleSeries,
    JointTrajectory,
    foot_height_signal,
    forward_kinematics,
    interior_flexion_angle,
    range_of_motion,
)
from .metrics import (
    GaitMetrics,
    MetricValue,
    assemble_metrics,
    cadence,
    gait_speed,
    step_and_stride,
    walking_direction,
)
from .pipeline import AnalysisResult, analyze_clip, analyze_file, export_plot_data
from .sidecar import AnnotationSidecar, read_annotations, write_annotations
from .synth import GeneratedWalker, WalkerSpec, generate

__version__ = "0.1.0"
