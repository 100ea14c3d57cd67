"""Deterministic kinematic walker with prescribed gait parameters.

The walker is a 9-joint biped (pelvis root plus hip/knee/ankle/foot per
leg) encoded entirely with position channels, so every joint position is
prescribed exactly: foot heights are periodic with stance minima at known
print positions, and knee flexion sweeps exactly the requested range each
cycle. Together with the returned ground-truth events and parameters this
makes generated clips usable as an oracle for the analysis pipeline. No
physics: exact parameter control matters here, realism does not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bvh import Joint, MotionClip, Skeleton
from .events import FootEvents, GaitEvents

HEADING_PROFILES = ("straight", "figure-eight", "piecewise")

HIP_HEIGHT = 1.0
ANKLE_HEIGHT = 0.1
FOOT_END_SITE = (0.0, -0.02, 0.05)
STANCE_FRACTION = 0.6  # of a gait cycle


class WalkerSpecError(ValueError):
    pass


@dataclass(frozen=True)
class WalkerSpec:
    cadence: float = 110.0  # steps/min, both feet pooled
    step_length: float = 0.6
    step_width: float = 0.1
    knee_rom_deg: float = 40.0
    duration_s: float = 30.0
    fps: float = 60.0
    heading: str = "straight"
    heading_segments: tuple[tuple[float, float], ...] = ()  # (duration s, rate deg/s)
    noise_amplitude: float = 0.0
    drift_rate: float = 0.0  # vertical units/s
    swing_height: float = 0.0  # 0 -> 0.2 * step_length
    seed: int = 0

    def __post_init__(self):
        for name in ("cadence", "step_length", "duration_s", "fps"):
            if getattr(self, name) <= 0:
                raise WalkerSpecError(f"{name} must be positive")
        if self.step_width < 0:
            raise WalkerSpecError("step width < 0 would self-intersect the prints")
        if not 0 < self.knee_rom_deg < 170:
            raise WalkerSpecError("knee RoM must be in (0, 170) degrees")
        if self.heading not in HEADING_PROFILES:
            raise WalkerSpecError(f"heading must be one of {HEADING_PROFILES}")
        if self.heading == "piecewise" and not self.heading_segments:
            raise WalkerSpecError("piecewise heading requires heading_segments")
        if self.noise_amplitude < 0 or self.drift_rate < 0 or self.swing_height < 0:
            raise WalkerSpecError("noise, drift, and swing height must be non-negative")

    @property
    def speed(self) -> float:
        """Derived: step length x cadence / 60, units/s along the path."""
        return self.step_length * self.cadence / 60.0

    @property
    def step_time_s(self) -> float:
        return 60.0 / self.cadence

    @property
    def cycle_time_s(self) -> float:
        return 2 * self.step_time_s

    @property
    def effective_swing_height(self) -> float:
        return self.swing_height if self.swing_height > 0 else 0.2 * self.step_length

    def to_dict(self) -> dict:
        return {
            "cadence": self.cadence,
            "step_length": self.step_length,
            "step_width": self.step_width,
            "knee_rom_deg": self.knee_rom_deg,
            "duration_s": self.duration_s,
            "fps": self.fps,
            "heading": self.heading,
            "heading_segments": [list(s) for s in self.heading_segments],
            "noise_amplitude": self.noise_amplitude,
            "drift_rate": self.drift_rate,
            "swing_height": self.swing_height,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "WalkerSpec":
        doc = dict(doc)
        segments = tuple(tuple(s) for s in doc.pop("heading_segments", ()))
        unknown = set(doc) - {f.name for f in cls.__dataclass_fields__.values()}
        if unknown:
            raise WalkerSpecError(f"unknown walker spec keys: {sorted(unknown)}")
        return cls(heading_segments=segments, **doc)


class _HeadingPath:
    """Closed-form constant-speed path under piecewise-constant turn rates."""

    def __init__(self, segments: list[tuple[float, float]], speed: float):
        # cumulative tables; a long straight tail covers evaluation past the end
        segments = list(segments) + [(1e9, 0.0)]
        t_edges, theta_edges, pos_edges = [0.0], [0.0], [np.zeros(2)]
        for duration, rate_deg in segments:
            t0, th0, p0 = t_edges[-1], theta_edges[-1], pos_edges[-1]
            w = math.radians(rate_deg)
            th1 = th0 + w * duration
            if w == 0.0:
                p1 = p0 + speed * duration * np.array([math.cos(th0), math.sin(th0)])
            else:
                p1 = p0 + (speed / w) * np.array(
                    [math.sin(th1) - math.sin(th0), -(math.cos(th1) - math.cos(th0))]
                )
            t_edges.append(t0 + duration)
            theta_edges.append(th1)
            pos_edges.append(p1)
        self.t_edges = np.array(t_edges)
        self.theta_edges = np.array(theta_edges)
        self.pos_edges = np.array(pos_edges)
        self.rates = np.array([math.radians(r) for _, r in segments])
        self.speed = speed

    def _segment_of(self, t: np.ndarray) -> np.ndarray:
        return np.clip(np.searchsorted(self.t_edges, t, side="right") - 1, 0, len(self.rates) - 1)

    def theta(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        seg = self._segment_of(t)
        return self.theta_edges[seg] + self.rates[seg] * (t - self.t_edges[seg])

    def position(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        seg = self._segment_of(t)
        tau = t - self.t_edges[seg]
        th0 = self.theta_edges[seg]
        w = self.rates[seg]
        p = self.pos_edges[seg].copy()
        straight = w == 0.0
        p[straight, 0] += self.speed * tau[straight] * np.cos(th0[straight])
        p[straight, 1] += self.speed * tau[straight] * np.sin(th0[straight])
        turning = ~straight
        if turning.any():
            th1 = th0[turning] + w[turning] * tau[turning]
            p[turning, 0] += (self.speed / w[turning]) * (np.sin(th1) - np.sin(th0[turning]))
            p[turning, 1] += (self.speed / w[turning]) * (-np.cos(th1) + np.cos(th0[turning]))
        return p


def _heading_segments(spec: WalkerSpec) -> list[tuple[float, float]]:
    if spec.heading == "straight":
        return [(spec.duration_s, 0.0)]
    if spec.heading == "piecewise":
        return list(spec.heading_segments)
    # figure-eight: straight passes joined by opposite full turns
    pattern = [(5.0, 0.0), (6.0, 60.0), (5.0, 0.0), (6.0, -60.0)]
    out, total = [], 0.0
    while total < spec.duration_s:
        d, r = pattern[len(out) % len(pattern)]
        out.append((d, r))
        total += d
    return out


def _smoothstep(s: np.ndarray) -> np.ndarray:
    return s * s * (3.0 - 2.0 * s)


@dataclass(frozen=True)
class GeneratedWalker:
    spec: WalkerSpec
    clip: MotionClip
    events: GaitEvents  # ground-truth steps and heel strikes
    prints: dict[str, np.ndarray]  # per foot: (k, 2) horizontal print positions
    true_metrics: dict[str, float] = field(default_factory=dict)


def generate(spec: WalkerSpec) -> GeneratedWalker:
    """Build the walker clip plus ground-truth events and parameters."""
    dt = 1.0 / spec.fps
    n = int(round(spec.duration_s * spec.fps))
    if n < 2:
        raise WalkerSpecError("duration too short for the requested frame rate")
    times = np.arange(n) * dt
    rng = np.random.default_rng(spec.seed)

    t_step = spec.step_time_s
    t_cycle = spec.cycle_time_s
    swing_time = (1.0 - STANCE_FRACTION) * t_cycle
    path = _HeadingPath(_heading_segments(spec), spec.speed)

    # prints: index k strikes at k * t_step, alternating left (even) / right
    # (odd); index -1 is where the right foot starts planted
    k_max = int(math.ceil((times[-1] + t_cycle) / t_step)) + 2
    ks = np.arange(-1, k_max + 1)
    strike_times = ks * t_step
    normals = np.stack([-np.sin(path.theta(strike_times)), np.cos(path.theta(strike_times))], axis=1)
    sides = np.where(ks % 2 == 0, 1.0, -1.0)  # left +, right -
    lateral = sides * spec.step_width / 2.0
    prints = path.position(strike_times) + normals * lateral[:, None]
    if spec.noise_amplitude > 0:
        prints = prints + rng.normal(0.0, spec.noise_amplitude / 2.0, size=prints.shape)

    def foot_motion(parity: int) -> tuple[np.ndarray, np.ndarray]:
        """Horizontal positions (n,2) and heights (n,) for one foot."""
        own = np.nonzero(ks % 2 == parity)[0]
        own_times = strike_times[own]
        # cycle c: stance on print own[c] then swing to print own[c+1]
        cycle = np.clip(np.searchsorted(own_times, times, side="right") - 1, 0, len(own) - 2)
        t_in = times - own_times[cycle]
        stance = t_in < STANCE_FRACTION * t_cycle
        s = np.clip((t_in - STANCE_FRACTION * t_cycle) / swing_time, 0.0, 1.0)
        blend = _smoothstep(s)
        p_from = prints[own[cycle]]
        p_to = prints[own[cycle + 1]]
        horizontal = p_from + blend[:, None] * (p_to - p_from)
        horizontal[stance] = p_from[stance]
        height = np.where(stance, 0.0, spec.effective_swing_height * np.sin(np.pi * s))
        return horizontal, height

    left_xy, left_h = foot_motion(0)
    right_xy, right_h = foot_motion(1)

    drift = spec.drift_rate * times
    theta = path.theta(times)
    normal_t = np.stack([-np.sin(theta), np.cos(theta)], axis=1)
    forward_t = np.stack([np.cos(theta), np.sin(theta)], axis=1)

    root_xy = path.position(times)
    if spec.noise_amplitude > 0:
        sway = spec.noise_amplitude * np.sin(2 * np.pi * times / t_cycle)
        root_xy = root_xy + normal_t * sway[:, None]
    root_h = HIP_HEIGHT + drift

    def leg_joints(parity: int, foot_xy: np.ndarray, foot_h: np.ndarray):
        side = 1.0 if parity == 0 else -1.0
        hip_xy = root_xy + normal_t * (side * spec.step_width / 2.0)
        hip = _to3d(hip_xy, HIP_HEIGHT + drift)
        foot = _to3d(foot_xy, foot_h + drift)
        ankle = foot + np.array([0.0, ANKLE_HEIGHT, 0.0])
        # knee placed to realize the prescribed flexion exactly:
        # offset from the hip-ankle midpoint by (d/2)*tan(flexion/2) along the
        # forward direction projected off the hip-ankle axis
        phase = 2 * np.pi * (times - parity * t_step) / t_cycle
        flexion = np.radians(spec.knee_rom_deg) * (1.0 - np.cos(phase)) / 2.0
        axis = ankle - hip
        d = np.linalg.norm(axis, axis=1)
        u = axis / d[:, None]
        f3 = _to3d(forward_t, 0.0 * times)
        n_vec = f3 - u * np.einsum("fi,fi->f", f3, u)[:, None]
        n_vec = n_vec / np.linalg.norm(n_vec, axis=1)[:, None]
        knee = (hip + ankle) / 2.0 + n_vec * (d / 2.0 * np.tan(flexion / 2.0))[:, None]
        return hip, knee, ankle, foot

    l_hip, l_knee, l_ankle, l_foot = leg_joints(0, left_xy, left_h)
    r_hip, r_knee, r_ankle, r_foot = leg_joints(1, right_xy, right_h)
    root = _to3d(root_xy, root_h)

    clip = _encode_clip(
        spec,
        dt,
        {
            "Hips": root,
            "LeftHip": l_hip,
            "LeftKnee": l_knee,
            "LeftAnkle": l_ankle,
            "LeftFoot": l_foot,
            "RightHip": r_hip,
            "RightKnee": r_knee,
            "RightAnkle": r_ankle,
            "RightFoot": r_foot,
        },
    )

    events = GaitEvents(
        left=_truth_events(0, ks, strike_times, t_step, times),
        right=_truth_events(1, ks, strike_times, t_step, times),
    )
    truth = {
        "gait_speed_mean": spec.speed,
        "cadence": spec.cadence,
        "step_length_mean": spec.step_length,
        "step_width_mean": spec.step_width,
        "stride_length_mean": 2 * spec.step_length,
        "step_time_mean": t_step,
        "stride_time_mean": t_cycle,
        "knee_rom": spec.knee_rom_deg,
    }
    foot_prints = {
        "left": prints[ks % 2 == 0],
        "right": prints[ks % 2 == 1],
    }
    return GeneratedWalker(
        spec=spec, clip=clip, events=events, prints=foot_prints, true_metrics=truth
    )


def _to3d(xy: np.ndarray, height) -> np.ndarray:
    out = np.zeros((len(xy), 3))
    out[:, 0] = xy[:, 0]
    out[:, 1] = height
    out[:, 2] = xy[:, 1]
    return out


def _truth_events(parity, ks, strike_times, t_step, times) -> FootEvents:
    dt = times[1] - times[0]
    end = times[-1]
    strikes, peaks = [], []
    for k, t in zip(ks, strike_times):
        if k % 2 != parity:
            continue
        if 0.0 <= t <= end:
            strikes.append(int(round(t / dt)))
        peak_t = t - 0.5 * (1.0 - STANCE_FRACTION) * 2 * t_step  # mid-swing
        if 0.0 <= peak_t <= end and t >= 0:
            peaks.append(int(round(peak_t / dt)))
    return FootEvents(steps=tuple(peaks), heel_strikes=tuple(strikes), drift_ratio=0.0)


def _encode_clip(spec: WalkerSpec, dt: float, world: dict[str, np.ndarray]) -> MotionClip:
    """Encode world joint positions as a position-channel BVH skeleton."""
    parents = {
        "Hips": None,
        "LeftHip": "Hips",
        "LeftKnee": "LeftHip",
        "LeftAnkle": "LeftKnee",
        "LeftFoot": "LeftAnkle",
        "RightHip": "Hips",
        "RightKnee": "RightHip",
        "RightAnkle": "RightKnee",
        "RightFoot": "RightAnkle",
    }
    order = list(parents)
    index = {name: i for i, name in enumerate(order)}
    joints = []
    columns = []
    for name in order:
        parent = parents[name]
        if parent is None:
            channels = (
                "Xposition",
                "Yposition",
                "Zposition",
                "Zrotation",
                "Xrotation",
                "Yrotation",
            )
            values = np.concatenate([world[name], np.zeros_like(world[name])], axis=1)
        else:
            channels = ("Xposition", "Yposition", "Zposition")
            values = world[name] - world[parent]
        end_site = np.array(FOOT_END_SITE) if name.endswith("Foot") else None
        joints.append(Joint(name, None if parent is None else index[parent], np.zeros(3), channels, end_site))
        columns.append(values)
    frames = np.concatenate(columns, axis=1)
    return MotionClip(
        skeleton=Skeleton(tuple(joints)),
        frame_time=dt,
        frames=frames,
        spatial_unit="unknown",
        source=f"walker-seed{spec.seed}",
    )
