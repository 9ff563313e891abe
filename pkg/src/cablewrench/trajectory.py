"""Quintic motion profiles and quasi-static replay of the test trajectories.

Every sample is computed in closed form from its timestamp, so refining the
sampling step leaves the values at shared timestamps unchanged.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import CableWrenchError, DegenerateCable, InvalidArgument, NonPositiveDuration
from .geometry import Pose, rotation_angle
from .kinematics import RobotGeometry, cable_state
from .statics import TensionBox, assemble, tension_feasible
from .wrist import WristJacobians, jacobians, omni_wheel_rates

AXES = {"x": (1.0, 0.0, 0.0), "y": (0.0, 1.0, 0.0), "z": (0.0, 0.0, 1.0)}


@dataclass(frozen=True)
class QuinticProfile:
    """Rest-to-rest degree-5 polynomial from ``s0`` to ``s1`` over ``[0, T]``."""

    s0: float
    s1: float
    T: float

    def __post_init__(self):
        if not self.T > 0:
            raise NonPositiveDuration(f"duration must be positive, got {self.T}")

    @property
    def coefficients(self) -> tuple:
        """(a0, ..., a5) of s(t) = sum a_k t^k."""
        d, T = self.s1 - self.s0, self.T
        return (self.s0, 0.0, 0.0, 10.0 * d / T**3, -15.0 * d / T**4, 6.0 * d / T**5)

    def _tau(self, t):
        return np.clip(np.asarray(t, dtype=float) / self.T, 0.0, 1.0)

    def position(self, t):
        u = self._tau(t)
        return self.s0 + (self.s1 - self.s0) * u**3 * (10.0 - 15.0 * u + 6.0 * u**2)

    def velocity(self, t):
        u = self._tau(t)
        return (self.s1 - self.s0) / self.T * 30.0 * u**2 * (1.0 - u) ** 2

    def acceleration(self, t):
        u = self._tau(t)
        return (self.s1 - self.s0) / self.T**2 * 60.0 * u * (1.0 - u) * (1.0 - 2.0 * u)

    @property
    def peak_speed(self) -> float:
        return 1.875 * abs(self.s1 - self.s0) / self.T


def quintic(s0: float, s1: float, T: float) -> QuinticProfile:
    return QuinticProfile(float(s0), float(s1), float(T))


@dataclass(frozen=True)
class TrajectorySample:
    t: float
    pose: Pose
    sphere_rates: np.ndarray
    cable_lengths: np.ndarray
    wheel_rates: np.ndarray
    theta_e: float
    feasible: bool


def sample_times(duration: float, dt: float) -> np.ndarray:
    if not dt > 0:
        raise InvalidArgument("dt must be positive")
    n = int(math.floor(duration / dt + 1e-9))
    times = [k * dt for k in range(n + 1)]
    if duration - times[-1] > 1e-12 * max(1.0, duration):
        times.append(duration)
    return np.array(times)


def _axis(axis) -> np.ndarray:
    if isinstance(axis, str):
        if axis not in AXES:
            raise InvalidArgument(f"axis must be one of x, y, z, got {axis!r}")
        return np.array(AXES[axis])
    v = np.asarray(axis, dtype=float).reshape(3)
    norm = np.linalg.norm(v)
    if not norm > 0:
        raise InvalidArgument("rotation axis must be non-zero")
    return v / norm


def _sample(t, pose, omega, geom, arr, jac, box):
    try:
        lengths = cable_state(geom, arr, pose).lengths
    except DegenerateCable:
        lengths = np.full(len(arr.assignment), np.nan)
    feasible = True
    if box is not None:
        try:
            feasible = tension_feasible(assemble(geom, arr, pose, jac), box).feasible
        except CableWrenchError:
            feasible = False
    return TrajectorySample(
        float(t), pose, omega, lengths, omni_wheel_rates(jac, omega), rotation_angle(pose.r), bool(feasible)
    )


def trajectory_1(geom: RobotGeometry, arr, axis, amplitude: float, T: float, pose: Pose,
                 dt: float = 0.01, box: TensionBox | None = None, jac: WristJacobians | None = None):
    """Sphere rotation about a fixed axis while the top plate stays put.

    The plate rests on its support, so samples are marked feasible unless a
    tension ``box`` is given to check the cables anyway.
    """
    jac = jacobians(geom.wrist) if jac is None else jac
    profile = quintic(0.0, amplitude, T)
    u = _axis(axis)
    return [_sample(t, pose, profile.velocity(t) * u, geom, arr, jac, box) for t in sample_times(T, dt)]


def trajectory_2(geom: RobotGeometry, arr, box: TensionBox, waypoints, T_per_segment: float,
                 dt: float = 0.01, orientation=None, jac: WristJacobians | None = None):
    """Straight-line translations through ``waypoints`` with the sphere at rest."""
    pts = np.asarray(waypoints, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3 or len(pts) < 2:
        raise InvalidArgument("waypoints must be an (n >= 2, 3) array")
    r = np.eye(3) if orientation is None else orientation
    jac = jacobians(geom.wrist) if jac is None else jac
    profile = quintic(0.0, 1.0, T_per_segment)
    n_seg = len(pts) - 1
    out = []
    for t in sample_times(n_seg * T_per_segment, dt):
        k = min(int(t // T_per_segment), n_seg - 1)
        s = profile.position(t - k * T_per_segment)
        p = pts[k] + s * (pts[k + 1] - pts[k])
        out.append(_sample(t, Pose(p, r), np.zeros(3), geom, arr, jac, box))
    return out


def trajectory_3(geom: RobotGeometry, arr, box: TensionBox, start, z_span: float, sphere_axis,
                 sphere_amplitude: float, T: float, dt: float = 0.01, orientation=None,
                 jac: WristJacobians | None = None):
    """Vertical translation of the top plate while the sphere rotates."""
    p0 = np.asarray(start, dtype=float).reshape(3)
    r = np.eye(3) if orientation is None else orientation
    jac = jacobians(geom.wrist) if jac is None else jac
    lift = quintic(0.0, z_span, T)
    spin = quintic(0.0, sphere_amplitude, T)
    u = _axis(sphere_axis)
    out = []
    for t in sample_times(T, dt):
        p = p0 + np.array([0.0, 0.0, lift.position(t)])
        out.append(_sample(t, Pose(p, r), spin.velocity(t) * u, geom, arr, jac, box))
    return out


def model_sphere_rates(samples, jac: WristJacobians) -> np.ndarray:
    """Sphere rates recovered from the wheel rates, ``omega = J_omega phidot``."""
    return np.array([jac.J_omega @ s.wheel_rates for s in samples])


def samples_to_csv(samples) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    n = len(samples[0].cable_lengths) if samples else 8
    writer.writerow(
        ["t", "px", "py", "pz", "theta_e", "wx", "wy", "wz", "phidot1", "phidot2", "phidot3"]
        + [f"l{i}" for i in range(1, n + 1)]
        + ["feasible"]
    )
    for s in samples:
        values = [s.t, *s.pose.p, s.theta_e, *s.sphere_rates, *s.wheel_rates, *s.cable_lengths]
        writer.writerow([f"{v:.9g}" for v in values] + [int(s.feasible)])
    return buf.getvalue()
