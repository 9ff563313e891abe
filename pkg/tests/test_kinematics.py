import numpy as np
import pytest

from cablewrench.arrangement import CableArrangement
from cablewrench.errors import DegenerateCable, InvalidArgument
from cablewrench.geometry import Pose
from cablewrench.kinematics import (
    RobotGeometry,
    cable_state,
    gravity_wrench_tp,
    wrench_matrices_batch,
    wrench_matrix_tp,
)
from cablewrench.wrist import WristParams

from conftest import random_rotation

IDENTITY_ARR = CableArrangement(tuple((i, i) for i in range(1, 9)))


def geometry(exits, anchors, mass=1.0, com=(0.0, 0.0, 0.0), g=9.81):
    return RobotGeometry(np.asarray(exits, float), np.asarray(anchors, float), mass, np.asarray(com, float),
                         WristParams(), g)


def random_geometry(rng):
    return geometry(rng.uniform(-3, 3, (8, 3)), rng.uniform(-0.2, 0.2, (15, 3)))


def test_point_platform_at_origin_reproduces_exit_points(rng):
    g = geometry(rng.uniform(1, 3, (8, 3)), np.zeros((15, 3)))
    cs = cable_state(g, IDENTITY_ARR, Pose(np.zeros(3)))
    assert np.array_equal(cs.vectors, g.exit_points)


def test_vertical_cable():
    exits = np.zeros((8, 3))
    exits[0] = (0, 0, 4)
    exits[1:] = np.arange(1, 8)[:, None] * np.array([1.0, 0, 0])
    g = geometry(exits, np.zeros((15, 3)))
    cs = cable_state(g, IDENTITY_ARR, Pose([0, 0, 1]))
    np.testing.assert_array_equal(cs.vectors[0], [0, 0, 3])
    assert cs.lengths[0] == 3.0
    np.testing.assert_array_equal(cs.units[0], [0, 0, 1])


def test_lengths_match_direct_distance(rng):
    for _ in range(20):
        g = random_geometry(rng)
        pose = Pose(rng.uniform(-1, 1, 3), random_rotation(rng))
        arr = CableArrangement(tuple(zip(range(1, 9), rng.permutation(15)[:8] + 1)))
        cs = cable_state(g, arr, pose)
        for k, (e, a) in enumerate(arr.assignment):
            anchor = pose.p + pose.r @ g.candidate_anchor_points[a - 1]
            d = g.exit_points[e - 1] - anchor
            assert abs(np.sqrt(d @ d) - cs.lengths[k]) <= 1e-12
        np.testing.assert_allclose(np.linalg.norm(cs.units, axis=1), 1.0, atol=1e-12)
        np.testing.assert_allclose(cs.lengths[:, None] * cs.units, cs.vectors, atol=1e-12)


def test_coincident_anchor_and_exit_is_degenerate():
    exits = np.arange(24, dtype=float).reshape(8, 3) + 1.0
    exits[0] = 0.0
    anchors = np.zeros((15, 3))
    g = geometry(exits, anchors)
    with pytest.raises(DegenerateCable):
        cable_state(g, IDENTITY_ARR, Pose(np.zeros(3)))


def test_geometry_shape_checks():
    with pytest.raises(InvalidArgument):
        geometry(np.zeros((7, 3)), np.zeros((15, 3)))
    with pytest.raises(InvalidArgument):
        geometry(np.ones((8, 3)), np.zeros((14, 3)))


def test_zero_moment_arm_gives_zero_moment_rows(rng):
    g = geometry(rng.uniform(-3, 3, (8, 3)), np.zeros((15, 3)))
    pose = Pose(np.zeros(3))
    w = wrench_matrix_tp(cable_state(g, IDENTITY_ARR, pose), pose)
    assert w.shape == (6, 8)
    assert np.all(w[3:] == 0.0)


def test_moment_rows_orthogonal_to_force_rows(rng):
    g = random_geometry(rng)
    pose = Pose(rng.uniform(-1, 1, 3), random_rotation(rng))
    w = wrench_matrix_tp(cable_state(g, IDENTITY_ARR, pose), pose)
    np.testing.assert_allclose(np.einsum("ij,ij->j", w[:3], w[3:]), 0.0, atol=1e-12)
    np.testing.assert_allclose(np.linalg.norm(w[:3], axis=0), 1.0, atol=1e-12)


def test_single_cable_moment_by_hand():
    # b = (1,0,0), u = (0,0,1): b x u = (0*1 - 0*0, 0*0 - 1*1, 1*0 - 0*0) = (0,-1,0)
    anchors = np.zeros((15, 3))
    anchors[0] = (1, 0, 0)
    exits = np.zeros((8, 3))
    exits[0] = (1, 0, 5)
    exits[1:] = np.arange(1, 8)[:, None] * np.array([0, 1.0, 0]) + 10
    g = geometry(exits, anchors)
    pose = Pose(np.zeros(3))
    w = wrench_matrix_tp(cable_state(g, IDENTITY_ARR, pose), pose)
    np.testing.assert_array_equal(w[:, 0], [0, 0, 1, 0, -1, 0])


def test_gravity_wrench_cases():
    exits = np.ones((8, 3))
    g = geometry(exits, np.zeros((15, 3)), mass=2.0)
    np.testing.assert_allclose(gravity_wrench_tp(g, Pose(np.zeros(3))), [0, 0, -19.62, 0, 0, 0], atol=1e-14)
    g0 = geometry(exits, np.zeros((15, 3)), mass=0.0, com=(0.3, 0.1, 0))
    assert np.all(gravity_wrench_tp(g0, Pose(np.zeros(3))) == 0)
    # (0.1,0,0) x (0,0,-10) = (0*-10 - 0*0, 0*0 - 0.1*-10, 0) = (0, 1, 0)
    g1 = geometry(exits, np.zeros((15, 3)), mass=1.0, com=(0.1, 0, 0), g=10.0)
    np.testing.assert_allclose(gravity_wrench_tp(g1, Pose(np.zeros(3))), [0, 0, -10, 0, 1, 0], atol=1e-15)


def test_translation_invariance(rng):
    g = random_geometry(rng)
    pose = Pose(rng.uniform(-1, 1, 3), random_rotation(rng))
    shift = rng.uniform(-5, 5, 3)
    g2 = RobotGeometry(g.exit_points + shift, g.candidate_anchor_points, 1.0, g.top_plate_com, g.wrist)
    a = cable_state(g, IDENTITY_ARR, pose)
    b = cable_state(g2, IDENTITY_ARR, Pose(pose.p + shift, pose.r))
    np.testing.assert_allclose(a.lengths, b.lengths, atol=1e-12)
    np.testing.assert_allclose(a.units, b.units, atol=1e-12)


def test_rotation_equivariance(rng):
    g = random_geometry(rng)
    pose = Pose(rng.uniform(-1, 1, 3), random_rotation(rng))
    q = random_rotation(rng)
    g2 = RobotGeometry(g.exit_points @ q.T, g.candidate_anchor_points, 1.0, g.top_plate_com, g.wrist)
    a = cable_state(g, IDENTITY_ARR, pose)
    b = cable_state(g2, IDENTITY_ARR, Pose(q @ pose.p, q @ pose.r))
    np.testing.assert_allclose(b.lengths, a.lengths, atol=1e-10)
    np.testing.assert_allclose(b.units, a.units @ q.T, atol=1e-10)


def test_reference_wrench_matrix_has_full_rank(ref):
    pose = Pose(np.array([0.3, -0.2, 1.5]))
    w = wrench_matrix_tp(cable_state(ref.geometry, ref.arrangement, pose), pose)
    sv = np.linalg.svd(w, compute_uv=False)
    assert len(sv) == 6 and sv[-1] > 1e-8


def test_batch_matches_single(ref, rng):
    positions = rng.uniform(-1, 1, (10, 3)) + [0, 0, 2]
    r = random_rotation(rng)
    W, lengths = wrench_matrices_batch(ref.geometry, ref.arrangement, positions, r)
    for p, wb, lb in zip(positions, W, lengths):
        pose = Pose(p, r)
        cs = cable_state(ref.geometry, ref.arrangement, pose)
        np.testing.assert_allclose(wb, wrench_matrix_tp(cs, pose), atol=1e-14)
        np.testing.assert_allclose(lb, cs.lengths, atol=1e-14)
