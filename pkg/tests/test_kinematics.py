import math

import numpy as np
import pytest

from agegait.bvh import BvhError, Joint, MotionClip, Skeleton, parse_bvh
from agegait.kinematics import (
    AngleSeries,
    DegenerateGeometryError,
    JointTrajectory,
    foot_height_signal,
    forward_kinematics,
    horizontal_components,
    interior_flexion_angle,
    range_of_motion,
)

from _oracles import fk_oracle, flexion_oracle

ROT3 = ("Zrotation", "Xrotation", "Yrotation")
POS3 = ("Xposition", "Yposition", "Zposition")


def _chain_clip(offsets, frames, channels=None):
    joints = []
    for i, off in enumerate(offsets):
        ch = (POS3 + ROT3) if i == 0 else ROT3
        if channels is not None:
            ch = channels[i]
        joints.append(Joint(f"j{i}", None if i == 0 else i - 1, np.array(off, float), ch))
    return MotionClip(Skeleton(tuple(joints)), 0.02, np.array(frames, float))


def test_zero_rotations_accumulate_offsets():
    clip = _chain_clip(
        offsets=[(0, 0, 0), (1, 0, 0), (0, 2, 0)],
        frames=[[4, 5, 6, 0, 0, 0, 0, 0, 0, 0, 0, 0]],
    )
    fk = forward_kinematics(clip)
    np.testing.assert_allclose(fk["j0"].positions[0], [4, 5, 6])
    np.testing.assert_allclose(fk["j1"].positions[0], [5, 5, 6])
    np.testing.assert_allclose(fk["j2"].positions[0], [5, 7, 6])


def test_half_turn_mirrors_child():
    clip = _chain_clip(
        offsets=[(0, 0, 0), (1, 0, 0)],
        frames=[[0, 0, 0, 0, 0, 180, 0, 0, 0]],
    )
    fk = forward_kinematics(clip)
    np.testing.assert_allclose(fk["j1"].positions[0], [-1, 0, 0], atol=1e-12)


def _random_clip(rng) -> MotionClip:
    n_joints = rng.integers(2, 7)
    joints = []
    for i in range(n_joints):
        parent = None if i == 0 else int(rng.integers(0, i))
        offset = rng.uniform(-2, 2, size=3)
        if i == 0:
            channels = POS3 + tuple(rng.permutation(ROT3))
        elif rng.random() < 0.3:
            channels = tuple(rng.permutation(POS3)) + tuple(rng.permutation(ROT3))
        else:
            channels = tuple(rng.permutation(ROT3))
        end = rng.uniform(-1, 1, size=3) if rng.random() < 0.3 else None
        joints.append(Joint(f"j{i}", parent, offset, channels, end))
    skeleton = Skeleton(tuple(joints))
    frames = rng.uniform(-180, 180, size=(3, skeleton.total_channels))
    return MotionClip(skeleton, 0.01, frames)


def test_fk_matches_matrix_oracle_on_random_clips():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(100):
        clip = _random_clip(rng)
        fk = forward_kinematics(clip)
        expected = fk_oracle(clip)
        for name, positions in expected.items():
            err = np.max(np.abs(fk[name].positions - np.array(positions)))
            worst = max(worst, float(err))
    assert worst < 1e-9


def _traj(points) -> JointTrajectory:
    return JointTrajectory("j", np.array(points, float), 0.02)


def test_straight_limb_zero_flexion():
    series = interior_flexion_angle(
        _traj([[0, 2, 0]]), _traj([[0, 1, 0]]), _traj([[0, 0, 0]])
    )
    assert series.degrees[0] == pytest.approx(0.0, abs=1e-9)


def test_right_angle_is_90_flexion():
    series = interior_flexion_angle(
        _traj([[0, 1, 0]]), _traj([[0, 0, 0]]), _traj([[1, 0, 0]])
    )
    assert series.degrees[0] == pytest.approx(90.0, abs=1e-9)


def test_flexion_matches_trig_oracle():
    rng = np.random.default_rng(5)
    prox = rng.uniform(-3, 3, size=(50, 3))
    center = rng.uniform(-3, 3, size=(50, 3))
    dist = rng.uniform(-3, 3, size=(50, 3))
    series = interior_flexion_angle(_traj(prox), _traj(center), _traj(dist))
    expected = flexion_oracle(prox.tolist(), center.tolist(), dist.tolist())
    np.testing.assert_allclose(series.degrees, expected, atol=1e-9)
    assert np.all(series.degrees >= 0) and np.all(series.degrees <= 180)


def test_degenerate_segment_names_frame():
    with pytest.raises(DegenerateGeometryError, match="frame 1"):
        interior_flexion_angle(
            _traj([[0, 2, 0], [0, 1, 0]]),
            _traj([[0, 1, 0], [0, 1, 0]]),
            _traj([[0, 0, 0], [0, 0, 0]]),
        )


def test_foot_height_static_clip_constant(minimal_bvh_text):
    clip = parse_bvh(minimal_bvh_text)
    static = MotionClip(clip.skeleton, clip.frame_time, np.zeros_like(clip.frames))
    series = foot_height_signal(static, "Chest")
    assert np.ptp(series) == 0.0


def test_foot_height_translation_equivariant(minimal_bvh_text):
    clip = parse_bvh(minimal_bvh_text)
    raised = clip.frames.copy()
    raised[:, 1] += 0.3  # root Y position channel
    shifted = MotionClip(clip.skeleton, clip.frame_time, raised)
    np.testing.assert_allclose(
        foot_height_signal(shifted, "Chest"),
        foot_height_signal(clip, "Chest") + 0.3,
        atol=1e-12,
    )


def test_foot_height_unknown_joint(minimal_bvh_text):
    clip = parse_bvh(minimal_bvh_text)
    with pytest.raises(BvhError, match="unknown joint"):
        foot_height_signal(clip, "NoSuchFoot")


def test_foot_height_uses_end_site_when_asked(minimal_bvh_text):
    clip = parse_bvh(minimal_bvh_text)
    base = foot_height_signal(clip, "Chest", use_end_site=False)
    tip = foot_height_signal(clip, "Chest", use_end_site=True)
    # end site sits 2 units along the chest's local Y
    assert tip[0] == pytest.approx(base[0] + 2.0)


def test_range_of_motion_basics():
    series = AngleSeries("knee", np.array([7.0, 7.0, 7.0, 7.0]))
    assert range_of_motion(series, [(0, 3)]) == 0.0
    series = AngleSeries("knee", np.array([5.0, 45.0, 5.0, 45.0, 5.0]))
    assert range_of_motion(series, [(0, 4)]) == pytest.approx(40.0)
    # restriction to segments matters
    assert range_of_motion(series, [(0, 0), (2, 2)]) == 0.0
    with pytest.raises(ValueError, match="empty"):
        range_of_motion(series, [])


def test_rescale_scales_heights_but_not_angles():
    from agegait.bvh import rescale_clip
    from agegait.synth import WalkerSpec, generate

    walker = generate(WalkerSpec(seed=14, duration_s=4.0))
    scaled = rescale_clip(walker.clip, 7.25)
    base_h = foot_height_signal(walker.clip, "LeftFoot")
    scaled_h = foot_height_signal(scaled, "LeftFoot")
    np.testing.assert_allclose(scaled_h, 7.25 * base_h, atol=1e-12)

    for clip, expect_scale in ((walker.clip, 1.0), (scaled, 7.25)):
        fk = forward_kinematics(clip)
        flex = interior_flexion_angle(fk["LeftHip"], fk["LeftKnee"], fk["LeftAnkle"])
        if expect_scale == 1.0:
            base_flex = flex.degrees
        else:
            assert np.max(np.abs(flex.degrees - base_flex)) < 1e-9


def test_horizontal_components_axis_order():
    pts = np.array([[1.0, 2.0, 3.0]])
    np.testing.assert_array_equal(horizontal_components(pts, "Y"), [[1.0, 3.0]])
    np.testing.assert_array_equal(horizontal_components(pts, "Z"), [[1.0, 2.0]])
    np.testing.assert_array_equal(horizontal_components(pts, "X"), [[2.0, 3.0]])


def test_rigid_yaw_and_translation_preserve_angles_and_heights():
    # root with a leading Yrotation channel, so a world yaw about the up
    # axis is exactly an offset on that channel plus a rotated translation
    rng = np.random.default_rng(9)
    frames = rng.uniform(-40, 40, size=(60, 12))
    clip = _chain_clip(
        offsets=[(0, 0, 0), (0.2, -1, 0), (0, -1, 0)],
        frames=frames,
        channels=[POS3 + ("Yrotation", "Xrotation", "Zrotation"), ROT3, ROT3],
    )
    fk0 = forward_kinematics(clip)
    flex0 = interior_flexion_angle(fk0["j0"], fk0["j1"], fk0["j2"])
    h0 = fk0["j2"].positions[:, 1]

    yaw_deg = 37.0
    c, s = math.cos(math.radians(yaw_deg)), math.sin(math.radians(yaw_deg))
    rigid = clip.frames.copy()
    x, z = rigid[:, 0].copy(), rigid[:, 2].copy()
    rigid[:, 0] = c * x + s * z + 5.0
    rigid[:, 2] = -s * x + c * z - 2.0
    rigid[:, 3] += yaw_deg
    moved = MotionClip(clip.skeleton, clip.frame_time, rigid)
    fk1 = forward_kinematics(moved)
    flex1 = interior_flexion_angle(fk1["j0"], fk1["j1"], fk1["j2"])
    h1 = fk1["j2"].positions[:, 1]

    np.testing.assert_allclose(flex1.degrees, flex0.degrees, atol=1e-9)
    np.testing.assert_allclose(h1 - h1.mean(), h0 - h0.mean(), atol=1e-9)
