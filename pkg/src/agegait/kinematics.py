"""Forward kinematics and derived joint-angle / foot-height signals."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bvh import BvhError, MotionClip

AXIS_INDEX = {"X": 0, "Y": 1, "Z": 2}
_AXIS_VECTORS = {
    "X": np.array([1.0, 0.0, 0.0]),
    "Y": np.array([0.0, 1.0, 0.0]),
    "Z": np.array([0.0, 0.0, 1.0]),
}

END_SITE_SUFFIX = "/end"


class DegenerateGeometryError(ValueError):
    """A segment vector collapsed below the length tolerance."""


@dataclass(frozen=True, eq=False)
class JointTrajectory:
    """World-frame positions of one joint, one row per frame."""

    joint_name: str
    positions: np.ndarray  # (frames, 3)
    frame_time: float


@dataclass(frozen=True, eq=False)
class AngleSeries:
    """Per-frame joint angle in degrees."""

    joint_name: str
    degrees: np.ndarray  # (frames,)
    definition: str = "interior-flexion"


def _axis_rotations(axis: str, degrees: np.ndarray) -> np.ndarray:
    """Batch of 3x3 rotation matrices about a coordinate axis, shape (F, 3, 3)."""
    rad = np.radians(degrees)
    c, s = np.cos(rad), np.sin(rad)
    n = len(degrees)
    mats = np.zeros((n, 3, 3))
    if axis == "X":
        mats[:, 0, 0] = 1.0
        mats[:, 1, 1] = c
        mats[:, 1, 2] = -s
        mats[:, 2, 1] = s
        mats[:, 2, 2] = c
    elif axis == "Y":
        mats[:, 1, 1] = 1.0
        mats[:, 0, 0] = c
        mats[:, 0, 2] = s
        mats[:, 2, 0] = -s
        mats[:, 2, 2] = c
    elif axis == "Z":
        mats[:, 2, 2] = 1.0
        mats[:, 0, 0] = c
        mats[:, 0, 1] = -s
        mats[:, 1, 0] = s
        mats[:, 1, 1] = c
    else:
        raise ValueError(f"unknown rotation axis {axis!r}")
    return mats


def forward_kinematics(
    clip: MotionClip, include_end_sites: bool = False
) -> dict[str, JointTrajectory]:
    """World positions for every joint.

    Per joint, channel transforms compose in declared order after the fixed
    offset translation (intrinsic rotations, standard BVH convention). End
    sites, when requested, appear under '<joint>/end'.
    """
    sk = clip.skeleton
    n_frames = clip.frame_count
    eye = np.broadcast_to(np.eye(3), (n_frames, 3, 3))

    global_r: list[np.ndarray] = []
    global_p: list[np.ndarray] = []
    out: dict[str, JointTrajectory] = {}

    for index, joint in enumerate(sk.joints):
        values = clip.joint_channels(index)
        local_r = eye
        local_p = np.broadcast_to(joint.offset, (n_frames, 3)).copy()
        for k, channel in enumerate(joint.channels):
            axis = channel[0]
            if channel.endswith("position"):
                step = np.einsum("fij,j->fi", local_r, _AXIS_VECTORS[axis])
                local_p = local_p + step * values[:, k : k + 1]
            else:
                local_r = local_r @ _axis_rotations(axis, values[:, k])

        if joint.parent is None:
            g_r, g_p = np.ascontiguousarray(local_r), local_p
        else:
            p_r, p_p = global_r[joint.parent], global_p[joint.parent]
            g_r = p_r @ local_r
            g_p = p_p + np.einsum("fij,fj->fi", p_r, local_p)

        global_r.append(g_r)
        global_p.append(g_p)
        out[joint.name] = JointTrajectory(joint.name, g_p, clip.frame_time)

        if include_end_sites and joint.end_site is not None:
            tip = g_p + np.einsum("fij,j->fi", g_r, joint.end_site)
            name = joint.name + END_SITE_SUFFIX
            out[name] = JointTrajectory(name, tip, clip.frame_time)

    return out


def interior_flexion_angle(
    proximal: JointTrajectory,
    center: JointTrajectory,
    distal: JointTrajectory,
    min_segment_length: float = 1e-9,
) -> AngleSeries:
    """Flexion at `center`: 180 deg minus the interior angle between the two
    segments. A straight limb reads 0 deg."""
    if not (len(proximal.positions) == len(center.positions) == len(distal.positions)):
        raise ValueError("trajectories must have equal length")
    v1 = proximal.positions - center.positions
    v2 = distal.positions - center.positions
    n1 = np.linalg.norm(v1, axis=1)
    n2 = np.linalg.norm(v2, axis=1)
    bad = np.nonzero((n1 <= min_segment_length) | (n2 <= min_segment_length))[0]
    if bad.size:
        raise DegenerateGeometryError(
            f"degenerate segment vector at frame {int(bad[0])} "
            f"(joint {center.joint_name!r})"
        )
    cos_int = np.clip(np.einsum("fi,fi->f", v1, v2) / (n1 * n2), -1.0, 1.0)
    flexion = 180.0 - np.degrees(np.arccos(cos_int))
    return AngleSeries(center.joint_name, flexion, "interior-flexion")


def horizontal_components(positions: np.ndarray, up_axis: str = "Y") -> np.ndarray:
    """Project world positions onto the ground plane, shape (frames, 2).

    Column order follows the two non-up axes in XYZ order.
    """
    up = AXIS_INDEX[up_axis]
    cols = [i for i in range(3) if i != up]
    return positions[:, cols]


def foot_height_signal(
    clip: MotionClip,
    foot_joint: str,
    up_axis: str = "Y",
    use_end_site: bool = False,
    fk: dict[str, JointTrajectory] | None = None,
) -> np.ndarray:
    """Vertical component of the foot joint's world trajectory.

    With `use_end_site`, the foot's end-site position is used when the
    joint declares one (lower point, cleaner contact signal).
    """
    if up_axis not in AXIS_INDEX:
        raise ValueError(f"up axis must be one of X, Y, Z, got {up_axis!r}")
    index = clip.skeleton.index_of(foot_joint)  # raises BvhError when unknown
    name = foot_joint
    if use_end_site and clip.skeleton.joints[index].end_site is not None:
        name = foot_joint + END_SITE_SUFFIX
    if fk is None or name not in fk:
        fk = forward_kinematics(clip, include_end_sites=name.endswith(END_SITE_SUFFIX))
    return fk[name].positions[:, AXIS_INDEX[up_axis]].copy()


def range_of_motion(series: AngleSeries, segments) -> float:
    """Max minus min of the angle series over the included frame ranges.

    `segments` is a SegmentSelection or any iterable of inclusive
    (start, end) pairs.
    """
    ranges = getattr(segments, "ranges", segments)
    values = [series.degrees[start : end + 1] for start, end in ranges]
    if not values or sum(len(v) for v in values) == 0:
        raise ValueError("empty segment selection")
    included = np.concatenate(values)
    return float(included.max() - included.min())
