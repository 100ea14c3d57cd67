"""Step and heel-strike detection, ground-drift diagnosis, segment selection.

Heel strikes here are phase-consistent surrogates: the point where foot
height descends back toward the cycle-local baseline after a swing peak.
With the foot reduced to a single joint, true ground contact is not
recoverable, but a consistent phase is enough for spatiotemporal gait
parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy.ndimage import uniform_filter1d
from scipy.signal import find_peaks

from .kinematics import horizontal_components
from .sidecar import AnnotationSidecar

HEEL_STRIKE_UNRELIABLE = "heel-strike-unreliable"
NO_ANALYZABLE_SEGMENT = "no analyzable segment"


@dataclass(frozen=True)
class FootEvents:
    """Events for one foot. `heel_strikes` is None when the ground-drift
    diagnostic refused detection."""

    steps: tuple[int, ...] = ()
    heel_strikes: Optional[tuple[int, ...]] = ()
    drift_ratio: float = 0.0
    steps_provenance: str = "auto"
    heel_provenance: str = "auto"

    @property
    def heel_strikes_excluded(self) -> bool:
        return self.heel_strikes is None


@dataclass(frozen=True)
class GaitEvents:
    left: FootEvents
    right: FootEvents

    @property
    def drift_ratio(self) -> float:
        return max(self.left.drift_ratio, self.right.drift_ratio)

    @property
    def heel_strikes_excluded(self) -> bool:
        return self.left.heel_strikes_excluded or self.right.heel_strikes_excluded

    @property
    def all_steps(self) -> tuple[int, ...]:
        return tuple(sorted(self.left.steps + self.right.steps))

    def foot(self, name: str) -> FootEvents:
        return self.left if name == "left" else self.right


@dataclass(frozen=True)
class SegmentSelection:
    """Sorted, non-overlapping inclusive frame ranges kept for analysis."""

    ranges: tuple[tuple[int, int], ...] = ()
    reasons: tuple[str, ...] = ()
    note: str = ""

    def __post_init__(self):
        for start, end in self.ranges:
            if start < 0 or end < start:
                raise ValueError(f"invalid segment [{start}, {end}]")
        for (_, e0), (s1, _) in zip(self.ranges, self.ranges[1:]):
            if s1 <= e0:
                raise ValueError("segments must be sorted and non-overlapping")
        if not self.reasons and self.ranges:
            object.__setattr__(self, "reasons", tuple("" for _ in self.ranges))
        elif len(self.reasons) != len(self.ranges):
            raise ValueError("one reason per included range")

    @classmethod
    def none(cls, note: str = NO_ANALYZABLE_SEGMENT) -> "SegmentSelection":
        return cls(ranges=(), reasons=(), note=note)

    @classmethod
    def full(cls, frame_count: int, reason: str = "full clip") -> "SegmentSelection":
        return cls(ranges=((0, frame_count - 1),), reasons=(reason,))

    @property
    def is_empty(self) -> bool:
        return not self.ranges

    def duration(self, frame_time: float) -> float:
        """Total included time, measured between boundary frames."""
        return sum((end - start) * frame_time for start, end in self.ranges)

    def mask(self, frame_count: int) -> np.ndarray:
        m = np.zeros(frame_count, dtype=bool)
        for start, end in self.ranges:
            m[start : end + 1] = True
        return m

    def contains(self, frame: int) -> bool:
        return any(start <= frame <= end for start, end in self.ranges)

    def filter_indices(self, indices) -> tuple[int, ...]:
        return tuple(i for i in indices if self.contains(i))


# ---------------------------------------------------------------------------
# Detection


def count_steps(
    series: np.ndarray,
    frame_time: float,
    prominence_frac: float = 0.25,
    min_separation_s: float = 0.4,
) -> tuple[int, ...]:
    """One event per dominant foot-height peak.

    Peak prominence floor is `prominence_frac` of the 5th-95th percentile
    range; peaks closer than `min_separation_s` are merged into the higher
    one. Too-short series yield zero events rather than an error.
    """
    series = np.asarray(series, dtype=float)
    if series.ndim != 1:
        raise ValueError("foot-height series must be 1-D")
    distance = max(1, int(round(min_separation_s / frame_time)))
    if len(series) < 2 or len(series) <= distance:
        return ()
    spread = float(np.percentile(series, 95) - np.percentile(series, 5))
    kwargs = {"distance": distance}
    if spread > 0:
        kwargs["prominence"] = prominence_frac * spread
    peaks, _ = find_peaks(series, **kwargs)
    return tuple(int(p) for p in peaks)


def assess_ground_drift(series: np.ndarray, step_events) -> float:
    """Spread of per-cycle minima relative to the median peak-to-minimum
    amplitude. Large values mean the ground level wanders across cycles and
    contact-surrogate detection is unreliable."""
    series = np.asarray(series, dtype=float)
    events = list(step_events)
    if len(events) < 3:
        raise ValueError("fewer than 2 gait cycles; cannot assess ground drift")
    minima, amplitudes = [], []
    for a, b in zip(events, events[1:]):
        low = float(series[a:b].min())
        minima.append(low)
        amplitudes.append(float(series[a]) - low)
    spread = max(minima) - min(minima)
    scale = float(np.median(amplitudes))
    if scale <= 0:
        return 0.0 if spread <= 0 else float("inf")
    return spread / scale


@dataclass(frozen=True)
class HeelStrikeResult:
    indices: Optional[tuple[int, ...]]  # None when refused
    drift_ratio: float
    excluded: bool

    @property
    def exclusion_reason(self) -> Optional[str]:
        return HEEL_STRIKE_UNRELIABLE if self.excluded else None


def detect_heel_strikes(
    series: np.ndarray,
    frame_time: float,
    step_events,
    drift_threshold: float = 0.2,
    descent_frac: float = 0.05,
) -> HeelStrikeResult:
    """One heel strike per gait cycle: the first post-peak frame where the
    series descends to within `descent_frac` of the cycle amplitude above
    the cycle-local baseline.

    Refuses (returns the exclusion marker) when the ground-drift ratio
    exceeds `drift_threshold`.
    """
    series = np.asarray(series, dtype=float)
    events = [int(e) for e in step_events]
    if len(events) < 2:
        return HeelStrikeResult((), 0.0, False)
    drift = assess_ground_drift(series, events) if len(events) >= 3 else 0.0
    if drift > drift_threshold:
        return HeelStrikeResult(None, drift, True)

    strikes: list[int] = []
    bounds = events[1:] + [len(series)]
    for peak, nxt in zip(events, bounds):
        window = series[peak:nxt]
        if len(window) < 2:
            continue
        baseline = float(window.min())
        amplitude = float(series[peak]) - baseline
        if amplitude <= 0:
            continue
        threshold = baseline + descent_frac * amplitude
        below = np.nonzero(window[1:] <= threshold)[0]
        if below.size:
            strikes.append(peak + 1 + int(below[0]))
    return HeelStrikeResult(tuple(strikes), drift, False)


def detect_foot_events(
    series: np.ndarray,
    frame_time: float,
    prominence_frac: float = 0.25,
    min_separation_s: float = 0.4,
    drift_threshold: float = 0.2,
    descent_frac: float = 0.05,
) -> FootEvents:
    """count_steps + detect_heel_strikes for one foot-height series."""
    steps = count_steps(series, frame_time, prominence_frac, min_separation_s)
    result = detect_heel_strikes(series, frame_time, steps, drift_threshold, descent_frac)
    return FootEvents(
        steps=steps,
        heel_strikes=result.indices,
        drift_ratio=result.drift_ratio,
    )


# ---------------------------------------------------------------------------
# Segment selection


def select_segments(
    root_positions: np.ndarray,
    frame_time: float,
    events: GaitEvents,
    up_axis: str = "Y",
    smoothing_window_s: float = 0.25,
    turn_rate_limit_deg_s: float = 30.0,
    turn_window_s: float = 2.0,
    turn_window_max_deg: float = 45.0,
    min_segment_s: float = 1.5,
) -> SegmentSelection:
    """Keep steady-state straight walking.

    Frames are dropped where the smoothed heading turns faster than
    `turn_rate_limit_deg_s`, or where any `turn_window_s` window sweeps more
    than `turn_window_max_deg` of heading. Lead-in/lead-out beyond half a
    step interval around the first/last step event is trimmed, and leftover
    ranges shorter than `min_segment_s` are dropped.
    """
    merged = events.all_steps
    n = len(root_positions)
    if len(merged) < 2 or n < 3:
        return SegmentSelection.none()

    horizontal = horizontal_components(np.asarray(root_positions, dtype=float), up_axis)
    velocity = np.gradient(horizontal, frame_time, axis=0)
    w = max(1, int(round(smoothing_window_s / frame_time)))
    velocity = uniform_filter1d(velocity, size=w, axis=0, mode="nearest")
    speed = np.linalg.norm(velocity, axis=1)

    top = float(speed.max())
    if top <= 0:
        return SegmentSelection.none()
    valid = speed > 1e-9 * top
    if not valid.any():
        return SegmentSelection.none()

    heading = np.zeros(n)
    heading[valid] = np.arctan2(velocity[valid, 1], velocity[valid, 0])
    # carry the last valid heading across near-stationary frames
    idx = np.where(valid, np.arange(n), -1)
    idx = np.maximum.accumulate(idx)
    first_valid = int(np.nonzero(valid)[0][0])
    idx[idx < 0] = first_valid
    heading = np.degrees(np.unwrap(heading[idx]))

    mask = np.abs(np.gradient(heading, frame_time)) <= turn_rate_limit_deg_s

    window = int(round(turn_window_s / frame_time)) + 1
    if 2 <= window <= n:
        views = np.lib.stride_tricks.sliding_window_view(heading, window)
        swept = views.max(axis=1) - views.min(axis=1)
        bad_starts = np.nonzero(swept > turn_window_max_deg)[0]
        if bad_starts.size:
            marks = np.zeros(n + 1, dtype=int)
            marks[bad_starts] += 1
            marks[np.minimum(bad_starts + window, n)] -= 1
            mask &= np.cumsum(marks[:-1]) == 0

    margin = int(round(0.5 * float(np.median(np.diff(merged)))))
    lo = max(0, merged[0] - margin)
    hi = min(n - 1, merged[-1] + margin)
    mask[:lo] = False
    mask[hi + 1 :] = False

    ranges, reasons = [], []
    start = None
    for i in range(n + 1):
        inside = i < n and mask[i]
        if inside and start is None:
            start = i
        elif not inside and start is not None:
            end = i - 1
            if (end - start) * frame_time >= min_segment_s:
                ranges.append((start, end))
                reasons.append(
                    f"steady straight walking ({(end - start) * frame_time:.2f} s)"
                )
            start = None
    if not ranges:
        return SegmentSelection.none()
    return SegmentSelection(tuple(ranges), tuple(reasons))


# ---------------------------------------------------------------------------
# Annotation merge


def merge_annotations(auto: GaitEvents, sidecar: AnnotationSidecar) -> GaitEvents:
    """Human heel-strike lists override automatic ones, per foot."""
    feet = {}
    for name in ("left", "right"):
        foot = auto.foot(name)
        human = sidecar.heel_strikes.get(name, ())
        if human:
            foot = replace(foot, heel_strikes=tuple(human), heel_provenance="human")
        feet[name] = foot
    return GaitEvents(left=feet["left"], right=feet["right"])


def merge_segments(auto: SegmentSelection, sidecar: AnnotationSidecar) -> SegmentSelection:
    """Human included segments replace the automatic selection entirely."""
    if not sidecar.included_segments:
        return auto
    return SegmentSelection(
        ranges=tuple(sidecar.included_segments),
        reasons=tuple("human annotation" for _ in sidecar.included_segments),
    )


def check_alternation(events: GaitEvents, segments: SegmentSelection) -> bool:
    """True when left/right heel strikes strictly alternate inside the
    included segments (diagnostic; degraded clips may legitimately fail)."""
    tagged = []
    for name in ("left", "right"):
        strikes = events.foot(name).heel_strikes or ()
        tagged.extend((i, name) for i in strikes if segments.is_empty or segments.contains(i))
    tagged.sort()
    return all(a[1] != b[1] for a, b in zip(tagged, tagged[1:]))
