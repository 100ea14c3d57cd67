"""End-to-end clip analysis: parse -> FK -> events -> segments -> metrics.

Also owns the report file formats (JSON is the canonical round-trippable
format, CSV a flat export) and the columnar plot-data exports.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .bvh import MotionClip, parse_bvh_file
from .config import AnalysisConfig
from .events import (
    NO_ANALYZABLE_SEGMENT,
    GaitEvents,
    SegmentSelection,
    detect_foot_events,
    merge_annotations,
    merge_segments,
    select_segments,
)
from .kinematics import (
    JointTrajectory,
    foot_height_signal,
    forward_kinematics,
    interior_flexion_angle,
)
from .metrics import METRIC_NAMES, GaitMetrics, assemble_metrics
from .sidecar import AnnotationSidecar, load_sidecar_for

PLOT_KINDS = ("trajectory", "foot-height", "knee-angle")


class NoAnalyzableSegmentError(ValueError):
    def __init__(self, message: str = NO_ANALYZABLE_SEGMENT):
        super().__init__(message)


@dataclass(frozen=True)
class AnalysisResult:
    clip: MotionClip
    config: AnalysisConfig
    fk: dict[str, JointTrajectory]
    events: GaitEvents
    segments: SegmentSelection
    metrics: Optional[GaitMetrics]  # None only when nothing was analyzable

    def foot_heights(self) -> dict[str, np.ndarray]:
        jm = self.config.joints
        return {
            "left": foot_height_signal(
                self.clip, jm.left_foot, self.config.up_axis, self.config.use_end_sites, self.fk
            ),
            "right": foot_height_signal(
                self.clip, jm.right_foot, self.config.up_axis, self.config.use_end_sites, self.fk
            ),
        }

    def knee_angles(self) -> dict[str, np.ndarray]:
        jm = self.config.joints
        out = {}
        for side in ("left", "right"):
            hip, knee, ankle, _ = jm.side(side)
            out[side] = interior_flexion_angle(
                self.fk[hip], self.fk[knee], self.fk[ankle]
            ).degrees
        return out


def analyze_clip(
    clip: MotionClip,
    config: AnalysisConfig,
    sidecar: Optional[AnnotationSidecar] = None,
    require_segments: bool = True,
) -> AnalysisResult:
    """Run the full pipeline on a parsed clip.

    A sidecar, when given, overrides automatic heel strikes and segment
    selection. With `require_segments`, an empty selection raises
    NoAnalyzableSegmentError; otherwise metrics are skipped only when
    nothing is analyzable.
    """
    config.bind(clip.skeleton)
    if sidecar is not None:
        sidecar.bind(clip.frame_count)
    fk = forward_kinematics(clip, include_end_sites=True)
    jm = config.joints
    dt = clip.frame_time

    feet: dict[str, object] = {}
    for side in ("left", "right"):
        foot_joint = jm.side(side)[3]
        series = foot_height_signal(
            clip, foot_joint, config.up_axis, config.use_end_sites, fk
        )
        feet[side] = detect_foot_events(
            series,
            dt,
            prominence_frac=config.prominence_frac,
            min_separation_s=config.min_separation_s,
            drift_threshold=config.drift_threshold,
            descent_frac=config.descent_frac,
        )
    events = GaitEvents(left=feet["left"], right=feet["right"])
    if sidecar is not None:
        events = merge_annotations(events, sidecar)

    segments = select_segments(
        fk[jm.root].positions,
        dt,
        events,
        up_axis=config.up_axis,
        smoothing_window_s=config.smoothing_window_s,
        turn_rate_limit_deg_s=config.turn_rate_limit_deg_s,
        turn_window_s=config.turn_window_s,
        turn_window_max_deg=config.turn_window_max_deg,
        min_segment_s=config.min_segment_s,
    )
    if sidecar is not None:
        segments = merge_segments(segments, sidecar)

    if segments.is_empty:
        if require_segments:
            raise NoAnalyzableSegmentError()
        metrics = None
    else:
        metrics = assemble_metrics(clip, events, segments, config, fk)
    return AnalysisResult(
        clip=clip, config=config, fk=fk, events=events, segments=segments, metrics=metrics
    )


def analyze_file(
    clip_path: str | Path,
    config: AnalysisConfig,
    sidecar_path: str | Path | None = None,
) -> AnalysisResult:
    clip_path = Path(clip_path)
    clip = parse_bvh_file(clip_path)
    if sidecar_path is not None:
        from .sidecar import read_annotations

        sidecar = read_annotations(Path(sidecar_path).read_text())
    else:
        sidecar = load_sidecar_for(clip_path)
    return analyze_clip(clip, config, sidecar)


# ---------------------------------------------------------------------------
# Metrics report formats


def metrics_report_json(metrics: GaitMetrics) -> str:
    return json.dumps(metrics.to_dict(), indent=2, sort_keys=True) + "\n"


def metrics_report_csv(metrics: GaitMetrics) -> str:
    lines = ["metric,value,available,reason"]
    for name in METRIC_NAMES:
        mv = metrics.get(name)
        value = "" if mv.value is None else f"{mv.value:.9g}"
        lines.append(f"{name},{value},{str(mv.available).lower()},{mv.reason or ''}")
    return "\n".join(lines) + "\n"


def load_metrics_report(path: str | Path) -> GaitMetrics:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: metrics report is not valid JSON: {exc}") from exc
    return GaitMetrics.from_dict(doc)


# ---------------------------------------------------------------------------
# Plot-data export (columnar text any plotting tool can read)


def _flags(length: int, indices) -> np.ndarray:
    flags = np.zeros(length, dtype=int)
    for i in indices or ():
        if 0 <= i < length:
            flags[i] = 1
    return flags


def export_plot_data(result: AnalysisResult, kind: str) -> str:
    """CSV with '#'-prefixed metadata lines; one row per frame."""
    if kind not in PLOT_KINDS:
        raise ValueError(f"unknown plot kind {kind!r}; expected one of {PLOT_KINDS}")
    clip = result.clip
    n = clip.frame_count
    time = np.arange(n) * clip.frame_time
    meta = [
        f"# kind={kind}",
        f"# clip={clip.source}",
        f"# spatial_unit={clip.spatial_unit}",
        f"# frame_time={clip.frame_time:.9g}",
    ]

    if kind == "trajectory":
        xy = result.fk[result.config.joints.root].positions
        from .kinematics import horizontal_components

        flat = horizontal_components(xy, result.config.up_axis)
        meta.append("# equal_axes=true")
        header = "frame,time,x,y"
        rows = (
            f"{i},{time[i]:.9g},{flat[i, 0]:.9g},{flat[i, 1]:.9g}" for i in range(n)
        )
    elif kind == "foot-height":
        heights = result.foot_heights()
        ev = result.events
        steps = {s: _flags(n, ev.foot(s).steps) for s in ("left", "right")}
        strikes = {s: _flags(n, ev.foot(s).heel_strikes) for s in ("left", "right")}
        header = (
            "frame,time,left_height,right_height,"
            "left_step,right_step,left_heel_strike,right_heel_strike"
        )
        rows = (
            f"{i},{time[i]:.9g},{heights['left'][i]:.9g},{heights['right'][i]:.9g},"
            f"{steps['left'][i]},{steps['right'][i]},"
            f"{strikes['left'][i]},{strikes['right'][i]}"
            for i in range(n)
        )
    else:  # knee-angle
        angles = result.knee_angles()
        header = "frame,time,left_knee_deg,right_knee_deg"
        rows = (
            f"{i},{time[i]:.9g},{angles['left'][i]:.9g},{angles['right'][i]:.9g}"
            for i in range(n)
        )

    return "\n".join([*meta, header, *rows]) + "\n"
