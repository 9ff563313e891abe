"""Cable loop closure and the top-plate wrench matrix."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from .errors import DegenerateCable, InvalidArgument
from .geometry import Pose
from .wrist import WristParams

if TYPE_CHECKING:
    from .arrangement import CableArrangement

MIN_CABLE_LENGTH = 1e-9  # m


def _frozen_array(a, shape, name) -> np.ndarray:
    a = np.array(a, dtype=float)
    if a.shape != shape:
        raise InvalidArgument(f"{name} must have shape {shape}, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidArgument(f"{name} must be finite")
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class RobotGeometry:
    """Fixed geometry and inertial data of the hybrid robot.

    Exit points are expressed in the base frame; anchor candidates in the
    top-plate frame. Gravity acts along -z of the base frame.
    """

    exit_points: np.ndarray
    candidate_anchor_points: np.ndarray
    top_plate_mass: float
    top_plate_com: np.ndarray
    wrist: WristParams
    gravity: float = 9.81

    def __post_init__(self):
        object.__setattr__(self, "exit_points", _frozen_array(self.exit_points, (8, 3), "exit_points"))
        object.__setattr__(
            self,
            "candidate_anchor_points",
            _frozen_array(self.candidate_anchor_points, (15, 3), "candidate_anchor_points"),
        )
        object.__setattr__(self, "top_plate_com", _frozen_array(self.top_plate_com, (3,), "top_plate_com"))
        if not np.isfinite(self.top_plate_mass) or self.top_plate_mass < 0:
            raise InvalidArgument("top_plate_mass must be finite and non-negative")
        if not np.isfinite(self.gravity):
            raise InvalidArgument("gravity must be finite")


@dataclass(frozen=True)
class CableState:
    vectors: np.ndarray  # (n, 3), anchor -> exit
    lengths: np.ndarray  # (n,)
    units: np.ndarray  # (n, 3)
    anchors: np.ndarray = field(repr=False)  # (n, 3) anchor points in the plate frame


def _endpoints(geom: RobotGeometry, arr: "CableArrangement"):
    exits = np.array([geom.exit_points[e - 1] for e, _ in arr.assignment])
    anchors = np.array([geom.candidate_anchor_points[a - 1] for _, a in arr.assignment])
    return exits, anchors


def cable_state(geom: RobotGeometry, arr: "CableArrangement", pose: Pose) -> CableState:
    exits, anchors = _endpoints(geom, arr)
    vectors = exits - pose.p - anchors @ pose.r.T
    lengths = np.linalg.norm(vectors, axis=1)
    bad = np.flatnonzero(lengths < MIN_CABLE_LENGTH)
    if bad.size:
        raise DegenerateCable(f"cable {int(bad[0]) + 1} has length {lengths[bad[0]]:.3g} m")
    return CableState(vectors, lengths, vectors / lengths[:, None], anchors)


def wrench_matrix_tp(cs: CableState, pose: Pose) -> np.ndarray:
    """6 x n matrix whose column i stacks u_i over (R b_i) x u_i."""
    arms = cs.anchors @ pose.r.T
    return np.vstack([cs.units.T, np.cross(arms, cs.units).T])


def gravity_wrench_tp(geom: RobotGeometry, pose: Pose) -> np.ndarray:
    force = np.array([0.0, 0.0, -geom.top_plate_mass * geom.gravity])
    moment = np.cross(pose.r @ geom.top_plate_com, force)
    return np.concatenate([force, moment])


def wrench_matrices_batch(geom: RobotGeometry, arr: "CableArrangement", positions: np.ndarray,
                          r: np.ndarray | None = None):
    """Top-plate wrench matrices for many positions at a fixed orientation.

    Returns ``(W, lengths)`` with shapes ``(N, 6, n)`` and ``(N, n)``. Degenerate
    cables yield NaN columns instead of raising.
    """
    r = np.eye(3) if r is None else np.asarray(r, dtype=float)
    exits, anchors = _endpoints(geom, arr)
    arms = anchors @ r.T
    vectors = exits[None, :, :] - positions[:, None, :] - arms[None, :, :]
    lengths = np.linalg.norm(vectors, axis=2)
    with np.errstate(invalid="ignore", divide="ignore"):
        units = np.where(lengths[..., None] < MIN_CABLE_LENGTH, np.nan, vectors / lengths[..., None])
    moments = np.cross(arms[None, :, :], units)
    return np.concatenate([units, moments], axis=2).transpose(0, 2, 1), lengths
