"""Spatiotemporal gait parameters over selected segments and events.

Values are reported with per-metric availability: a metric that cannot be
computed for a clip carries one exclusion reason instead of a number, and
degraded availability is data, not an error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .config import AnalysisConfig
from .events import HEEL_STRIKE_UNRELIABLE, GaitEvents, SegmentSelection
from .kinematics import (
    DegenerateGeometryError,
    JointTrajectory,
    forward_kinematics,
    horizontal_components,
    interior_flexion_angle,
    range_of_motion,
)

PROTOCOL_DEPENDENCE = "protocol dependence"
DATA_SCARCITY = "data scarcity"
INADEQUATE_ACCURACY = "inadequate accuracy"
EXCLUSION_REASONS = (
    PROTOCOL_DEPENDENCE,
    DATA_SCARCITY,
    INADEQUATE_ACCURACY,
    HEEL_STRIKE_UNRELIABLE,
)

METRIC_NAMES = (
    "gait_speed_mean",
    "gait_speed_std",
    "cadence",
    "step_length_mean",
    "step_length_std",
    "step_width_mean",
    "step_width_std",
    "stride_length_mean",
    "stride_time_mean",
    "step_time_mean",
    "stride_time_std",
    "knee_rom_left",
    "knee_rom_right",
    "knee_rom",
)


class StationarySegmentError(ValueError):
    """Net displacement too small to define a walking direction."""


class NoSpeedWindowError(ValueError):
    """No speed window fits inside any included segment."""


@dataclass(frozen=True)
class MetricValue:
    value: Optional[float]
    reason: Optional[str] = None

    def __post_init__(self):
        if self.value is None:
            if self.reason not in EXCLUSION_REASONS:
                raise ValueError(
                    f"unavailable metric needs a reason from {EXCLUSION_REASONS}, "
                    f"got {self.reason!r}"
                )
        else:
            if self.reason is not None:
                raise ValueError("available metric must not carry an exclusion reason")
            if not np.isfinite(self.value):
                raise ValueError(f"metric value must be finite, got {self.value}")

    @property
    def available(self) -> bool:
        return self.value is not None


@dataclass(frozen=True)
class GaitMetrics:
    clip_id: str
    dataset: str
    spatial_unit: str
    values: dict[str, MetricValue]
    notes: dict[str, str] = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        unknown = set(self.values) - set(METRIC_NAMES)
        if unknown:
            raise ValueError(f"unknown metric names: {sorted(unknown)}")
        for name in ("gait_speed_std", "step_length_std", "step_width_std", "stride_time_std"):
            mv = self.values.get(name)
            if mv is not None and mv.available and mv.value < 0:
                raise ValueError(f"{name} must be non-negative")

    def get(self, name: str) -> MetricValue:
        return self.values.get(name, MetricValue(None, DATA_SCARCITY))

    def value(self, name: str) -> Optional[float]:
        return self.get(name).value

    def to_dict(self) -> dict:
        return {
            "clip_id": self.clip_id,
            "dataset": self.dataset,
            "spatial_unit": self.spatial_unit,
            "metrics": {
                name: {"value": mv.value, "available": mv.available, "reason": mv.reason}
                for name, mv in self.values.items()
            },
            "notes": dict(self.notes),
            "diagnostics": dict(self.diagnostics),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "GaitMetrics":
        values = {
            name: MetricValue(entry.get("value"), entry.get("reason"))
            for name, entry in doc.get("metrics", {}).items()
        }
        return cls(
            clip_id=str(doc.get("clip_id", "")),
            dataset=str(doc.get("dataset", "")),
            spatial_unit=str(doc.get("spatial_unit", "unknown")),
            values=values,
            notes=dict(doc.get("notes", {})),
            diagnostics=dict(doc.get("diagnostics", {})),
        )


@dataclass(frozen=True)
class WalkingFrame:
    """Per-segment horizontal walking direction and its lateral axis."""

    direction: np.ndarray  # (2,) unit vector
    lateral: np.ndarray  # (2,) unit vector, +90 deg from direction


def walking_direction(
    root_positions: np.ndarray,
    segment: tuple[int, int],
    frame_time: float,
    up_axis: str = "Y",
    min_duration_s: float = 1.0,
    min_displacement: float = 1e-6,
) -> WalkingFrame:
    """Principal axis of the horizontal root path, oriented along the net
    displacement of the segment."""
    start, end = segment
    if (end - start) * frame_time < min_duration_s:
        raise ValueError(
            f"segment [{start}, {end}] shorter than {min_duration_s} s"
        )
    pts = horizontal_components(np.asarray(root_positions, dtype=float), up_axis)[
        start : end + 1
    ]
    net = pts[-1] - pts[0]
    if float(np.linalg.norm(net)) < min_displacement:
        raise StationarySegmentError(
            f"net displacement below {min_displacement} in segment [{start}, {end}]"
        )
    centered = pts - pts.mean(axis=0)
    cov = centered.T @ centered
    _, vecs = np.linalg.eigh(cov)
    direction = vecs[:, -1]  # eigenvector of the largest eigenvalue
    if float(direction @ net) < 0:
        direction = -direction
    direction = direction / np.linalg.norm(direction)
    lateral = np.array([-direction[1], direction[0]])
    return WalkingFrame(direction=direction, lateral=lateral)


def gait_speed(
    root_positions: np.ndarray,
    segments: SegmentSelection,
    frame_time: float,
    up_axis: str = "Y",
    window_s: float = 1.0,
    hop_s: float = 0.5,
) -> tuple[float, float, int]:
    """Mean and population std of per-window speeds.

    Windows of `window_s` advance by `hop_s` inside each segment and never
    span segment boundaries; each window's speed is the displacement
    projected on that segment's walking direction over the window duration.
    """
    horizontal = horizontal_components(np.asarray(root_positions, dtype=float), up_axis)
    wf = max(1, int(round(window_s / frame_time)))
    hf = max(1, int(round(hop_s / frame_time)))
    speeds: list[float] = []
    for start, end in segments.ranges:
        if (end - start) < wf:
            continue
        frame = walking_direction(root_positions, (start, end), frame_time, up_axis)
        for i in range(start, end - wf + 1, hf):
            disp = horizontal[i + wf] - horizontal[i]
            speeds.append(float(disp @ frame.direction) / (wf * frame_time))
    if not speeds:
        raise NoSpeedWindowError(
            f"no {window_s} s window fits inside the included segments"
        )
    arr = np.array(speeds)
    return float(arr.mean()), float(arr.std()), len(speeds)


def cadence(events: GaitEvents, segments: SegmentSelection, frame_time: float) -> float:
    """Steps of both feet inside the included segments, per minute."""
    count = sum(1 for i in events.all_steps if segments.contains(i))
    minutes = segments.duration(frame_time) / 60.0
    if minutes <= 0:
        raise ValueError("zero included duration")
    if count == 0:
        raise ValueError("no step events inside the included segments")
    return count / minutes


@dataclass(frozen=True)
class StepStrideSamples:
    """Pooled left/right step and stride samples inside the segments."""

    step_lengths: tuple[float, ...] = ()
    step_widths: tuple[float, ...] = ()
    step_times: tuple[float, ...] = ()
    stride_lengths: tuple[float, ...] = ()
    stride_times: tuple[float, ...] = ()

    @property
    def step_count(self) -> int:
        return len(self.step_lengths)

    @property
    def stride_count(self) -> int:
        return len(self.stride_times)


def step_and_stride(
    events: GaitEvents,
    left_foot_positions: np.ndarray,
    right_foot_positions: np.ndarray,
    root_positions: np.ndarray,
    segments: SegmentSelection,
    frame_time: float,
    up_axis: str = "Y",
) -> StepStrideSamples:
    """Heel-print geometry per gait cycle.

    A heel print is the foot's horizontal position at a heel-strike frame.
    Step quantities pair consecutive opposite-foot prints, stride quantities
    consecutive same-foot prints; lengths project on the segment's walking
    direction, widths on its lateral axis. Left and right are pooled.
    """
    feet_xy = {
        "left": horizontal_components(np.asarray(left_foot_positions, dtype=float), up_axis),
        "right": horizontal_components(np.asarray(right_foot_positions, dtype=float), up_axis),
    }
    step_lengths: list[float] = []
    step_widths: list[float] = []
    step_times: list[float] = []
    stride_lengths: list[float] = []
    stride_times: list[float] = []

    for start, end in segments.ranges:
        try:
            frame = walking_direction(root_positions, (start, end), frame_time, up_axis)
        except ValueError:
            continue
        tagged: list[tuple[int, str]] = []
        for foot in ("left", "right"):
            strikes = events.foot(foot).heel_strikes or ()
            inside = [i for i in strikes if start <= i <= end]
            tagged.extend((i, foot) for i in inside)
            for a, b in zip(inside, inside[1:]):
                delta = feet_xy[foot][b] - feet_xy[foot][a]
                stride_lengths.append(abs(float(delta @ frame.direction)))
                stride_times.append((b - a) * frame_time)
        tagged.sort()
        for (fa, foot_a), (fb, foot_b) in zip(tagged, tagged[1:]):
            if foot_a == foot_b:
                continue  # missed event; not a step pair
            delta = feet_xy[foot_b][fb] - feet_xy[foot_a][fa]
            step_lengths.append(abs(float(delta @ frame.direction)))
            step_widths.append(abs(float(delta @ frame.lateral)))
            step_times.append((fb - fa) * frame_time)

    return StepStrideSamples(
        step_lengths=tuple(step_lengths),
        step_widths=tuple(step_widths),
        step_times=tuple(step_times),
        stride_lengths=tuple(stride_lengths),
        stride_times=tuple(stride_times),
    )


# ---------------------------------------------------------------------------
# Assembly


def _mean_std(samples) -> tuple[float, float]:
    arr = np.asarray(samples, dtype=float)
    return float(arr.mean()), float(arr.std())


def assemble_metrics(
    clip,
    events: GaitEvents,
    segments: SegmentSelection,
    config: AnalysisConfig,
    fk: dict[str, JointTrajectory] | None = None,
) -> GaitMetrics:
    """Compute every includable metric and mark the rest with its exclusion
    reason. Exclusion precedence: protocol dependence, then heel-strike
    reliability, then data scarcity."""
    if segments.is_empty:
        raise ValueError("no analyzable segment")
    config.bind(clip.skeleton)
    if fk is None:
        fk = forward_kinematics(clip, include_end_sites=config.use_end_sites)
    jm = config.joints
    dt = clip.frame_time
    up = config.up_axis
    root = fk[jm.root].positions

    values: dict[str, MetricValue] = {}
    diagnostics: dict = {
        "drift_ratio_left": events.left.drift_ratio,
        "drift_ratio_right": events.right.drift_ratio,
        "segment_count": len(segments.ranges),
        "included_duration_s": segments.duration(dt),
        "heel_strike_provenance_left": events.left.heel_provenance,
        "heel_strike_provenance_right": events.right.heel_provenance,
    }

    try:
        mean, std, n_windows = gait_speed(
            root, segments, dt, up, config.speed_window_s, config.speed_hop_s
        )
        values["gait_speed_mean"] = MetricValue(mean)
        values["gait_speed_std"] = MetricValue(std)
        diagnostics["speed_window_count"] = n_windows
    except (NoSpeedWindowError, StationarySegmentError, ValueError):
        values["gait_speed_mean"] = MetricValue(None, DATA_SCARCITY)
        values["gait_speed_std"] = MetricValue(None, DATA_SCARCITY)

    if not config.cadence_comparable:
        values["cadence"] = MetricValue(None, PROTOCOL_DEPENDENCE)
    else:
        try:
            values["cadence"] = MetricValue(cadence(events, segments, dt))
        except ValueError:
            values["cadence"] = MetricValue(None, DATA_SCARCITY)

    roms: dict[str, MetricValue] = {}
    for side in ("left", "right"):
        hip, knee, ankle, _ = jm.side(side)
        try:
            flexion = interior_flexion_angle(fk[hip], fk[knee], fk[ankle])
            roms[side] = MetricValue(range_of_motion(flexion, segments))
        except (DegenerateGeometryError, ValueError):
            roms[side] = MetricValue(None, INADEQUATE_ACCURACY)
    values["knee_rom_left"] = roms["left"]
    values["knee_rom_right"] = roms["right"]
    if roms["left"].available and roms["right"].available:
        values["knee_rom"] = MetricValue((roms["left"].value + roms["right"].value) / 2.0)
    else:
        values["knee_rom"] = MetricValue(None, INADEQUATE_ACCURACY)

    heel_excluded = events.heel_strikes_excluded
    samples = StepStrideSamples()
    if not heel_excluded:
        samples = step_and_stride(
            events,
            fk[jm.left_foot].positions,
            fk[jm.right_foot].positions,
            root,
            segments,
            dt,
            up,
        )
    diagnostics["step_pair_count"] = samples.step_count
    diagnostics["stride_cycle_count"] = samples.stride_count

    def spatial_reason(has_samples: bool) -> Optional[str]:
        if not config.trajectory_comparable:
            return PROTOCOL_DEPENDENCE
        if heel_excluded:
            return HEEL_STRIKE_UNRELIABLE
        if not has_samples:
            return DATA_SCARCITY
        return None

    def temporal_reason(has_samples: bool) -> Optional[str]:
        if not config.cadence_comparable:
            return PROTOCOL_DEPENDENCE
        if heel_excluded:
            return HEEL_STRIKE_UNRELIABLE
        if not has_samples:
            return DATA_SCARCITY
        return None

    reason = spatial_reason(samples.step_count > 0)
    if reason:
        for name in ("step_length_mean", "step_length_std", "step_width_mean", "step_width_std"):
            values[name] = MetricValue(None, reason)
    else:
        m, s = _mean_std(samples.step_lengths)
        values["step_length_mean"] = MetricValue(m)
        values["step_length_std"] = MetricValue(s)
        m, s = _mean_std(samples.step_widths)
        values["step_width_mean"] = MetricValue(m)
        values["step_width_std"] = MetricValue(s)

    reason = spatial_reason(samples.stride_count > 0)
    values["stride_length_mean"] = (
        MetricValue(None, reason)
        if reason
        else MetricValue(_mean_std(samples.stride_lengths)[0])
    )

    reason = temporal_reason(samples.step_count > 0)
    values["step_time_mean"] = (
        MetricValue(None, reason) if reason else MetricValue(_mean_std(samples.step_times)[0])
    )
    reason = temporal_reason(samples.stride_count > 0)
    values["stride_time_mean"] = (
        MetricValue(None, reason)
        if reason
        else MetricValue(_mean_std(samples.stride_times)[0])
    )
    reason = temporal_reason(samples.stride_count >= config.min_cycles_for_variability)
    values["stride_time_std"] = (
        MetricValue(None, reason)
        if reason
        else MetricValue(_mean_std(samples.stride_times)[1])
    )

    notes = {
        "gait_speed": (
            f"mean/std over {config.speed_window_s:g} s windows with "
            f"{config.speed_hop_s:g} s hop (population std)"
        ),
        "knee_rom": "combined value is the mean of left and right RoM",
        "step_length_variability": "reported as step_length_std",
        "stride_time_std": (
            f"requires at least {config.min_cycles_for_variability} gait cycles"
        ),
    }

    return GaitMetrics(
        clip_id=clip.source or "clip",
        dataset=config.dataset,
        spatial_unit=clip.spatial_unit,
        values=values,
        notes=notes,
        diagnostics=diagnostics,
    )
