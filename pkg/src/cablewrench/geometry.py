"""Rotations and poses shared by the kinematic and static models.

Euler angles follow the intrinsic Z-Y-X convention: yaw ``psi`` about z,
then pitch ``theta`` about the new y, then roll ``chi`` about the new x,
so that ``R = Rz(psi) @ Ry(theta) @ Rx(chi)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgument


def rot_x(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rot_y(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def rot_z(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


@dataclass(frozen=True)
class EulerZYX:
    """Orientation as (pitch, yaw, roll) in radians."""

    theta: float = 0.0
    psi: float = 0.0
    chi: float = 0.0

    def __post_init__(self):
        for name in ("theta", "psi", "chi"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidArgument(f"Euler angle {name} must be finite")

    def as_vector(self) -> np.ndarray:
        return np.array([self.theta, self.psi, self.chi])

    def canonical(self) -> "EulerZYX":
        """Same angles wrapped into [-pi, pi]."""
        wrap = lambda a: math.remainder(a, 2.0 * math.pi)
        return EulerZYX(wrap(self.theta), wrap(self.psi), wrap(self.chi))


def rotation_from_euler_zyx(e: EulerZYX) -> np.ndarray:
    # recheck: callers may pass a duck-typed object with non-finite fields
    angles = (e.theta, e.psi, e.chi)
    if not all(math.isfinite(a) for a in angles):
        raise InvalidArgument("Euler angles must be finite")
    cy, sy = math.cos(e.psi), math.sin(e.psi)
    cp, sp = math.cos(e.theta), math.sin(e.theta)
    cr, sr = math.cos(e.chi), math.sin(e.chi)
    return np.array(
        [
            [cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr],
            [sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr],
            [-sp, cp * sr, cp * cr],
        ]
    )


def rotation_angle(r: np.ndarray) -> float:
    """Angle of the rotation ``r`` in [0, pi].

    Equal to ``arccos((tr r - 1) / 2)`` on SO(3); pairing the cosine with the
    sine taken from the skew part keeps full precision near 0 and pi.
    """
    r = np.asarray(r, dtype=float)
    cos = min(1.0, max(-1.0, (float(np.trace(r)) - 1.0) / 2.0))
    sin = 0.5 * math.hypot(r[2, 1] - r[1, 2], r[0, 2] - r[2, 0], r[1, 0] - r[0, 1])
    return math.atan2(sin, cos)


def is_rotation(r: np.ndarray, tol: float = 1e-9) -> bool:
    r = np.asarray(r, dtype=float)
    if r.shape != (3, 3) or not np.all(np.isfinite(r)):
        return False
    if np.max(np.abs(r.T @ r - np.eye(3))) > tol:
        return False
    return abs(np.linalg.det(r) - 1.0) <= tol


def as_rotation(r) -> np.ndarray:
    r = np.array(r, dtype=float)
    if not is_rotation(r):
        raise InvalidArgument("matrix is not a proper rotation")
    r.setflags(write=False)
    return r


@dataclass(frozen=True)
class Pose:
    """Top-plate pose: origin position ``p`` and orientation ``r`` in the base frame."""

    p: np.ndarray
    r: np.ndarray = field(default_factory=lambda: np.eye(3))

    def __post_init__(self):
        p = np.array(self.p, dtype=float).reshape(3)
        if not np.all(np.isfinite(p)):
            raise InvalidArgument("pose position must be finite")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "r", as_rotation(self.r))

    @classmethod
    def from_xyz_euler(cls, x, y, z, theta=0.0, psi=0.0, chi=0.0) -> "Pose":
        return cls(np.array([x, y, z]), rotation_from_euler_zyx(EulerZYX(theta, psi, chi)))
