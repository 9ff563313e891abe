"""Parallel spherical wrist: contact geometry, Jacobians and cable-loop torques.

Contact points sit on a cone of half-angle ``alpha`` about the plate z axis,
at azimuths ``gamma``. Each omni-wheel pushes along ``v_i``, the horizontal
tangent at the contact point rotated by ``beta`` about the sphere normal.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument, InvalidPairing, SingularWrist

ISOTROPIC_ALPHA = math.radians(35.2)
DEFAULT_GAMMA = (0.0, 2.0 * math.pi / 3.0, 4.0 * math.pi / 3.0)
DEFAULT_LOOP_PAIRS = ((1, 2), (3, 4), (5, 6))


@dataclass(frozen=True)
class WristParams:
    alpha: float = ISOTROPIC_ALPHA
    beta: float = 0.0
    gamma: tuple = DEFAULT_GAMMA
    r_s: float = 0.1
    r_o: float = 0.03
    r_d: float = 0.02
    sphere_mass: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "gamma", tuple(float(g) for g in self.gamma))
        if len(self.gamma) != 3:
            raise InvalidArgument("gamma must hold 3 azimuth angles")
        values = (self.alpha, self.beta, self.r_s, self.r_o, self.r_d, self.sphere_mass) + self.gamma
        if not all(math.isfinite(v) for v in values):
            raise InvalidArgument("wrist parameters must be finite")
        if min(self.r_s, self.r_o, self.r_d) <= 0:
            raise InvalidArgument("r_s, r_o and r_d must be positive")
        if not 0.0 <= self.alpha <= math.pi:
            raise InvalidArgument("alpha must lie in [0, pi]")
        if not -math.pi / 2 <= self.beta <= math.pi / 2:
            raise InvalidArgument("beta must lie in [-pi/2, pi/2]")
        if self.sphere_mass < 0:
            raise InvalidArgument("sphere_mass must be non-negative")


@dataclass(frozen=True)
class ContactGeometry:
    points: np.ndarray  # (3, 3) contact points C_i relative to the sphere centre
    normals: np.ndarray  # (3, 3) n_i
    drives: np.ndarray  # (3, 3) v_i


@dataclass(frozen=True)
class WristJacobians:
    A: np.ndarray
    B: np.ndarray
    J_omega: np.ndarray

    @property
    def condition_number(self) -> float:
        return float(np.linalg.cond(self.J_omega))


def contact_geometry(w: WristParams) -> ContactGeometry:
    sa, ca = math.sin(w.alpha), math.cos(w.alpha)
    sb, cb = math.sin(w.beta), math.cos(w.beta)
    normals, drives = [], []
    for g in w.gamma:
        sg, cg = math.sin(g), math.cos(g)
        n = np.array([sa * cg, sa * sg, ca])
        tangent = np.array([-sg, cg, 0.0])  # horizontal, defined even at the poles
        # Rodrigues rotation of the tangent about n; n . tangent = 0
        drives.append(cb * tangent + sb * np.cross(n, tangent))
        normals.append(n)
    normals = np.array(normals)
    return ContactGeometry(w.r_s * normals, normals, np.array(drives))


def wrist_jacobians(cg: ContactGeometry, w: WristParams) -> WristJacobians:
    A = w.r_s * np.cross(cg.normals, cg.drives)
    B = w.r_o * np.eye(3)
    if abs(np.linalg.det(A)) < 1e-12 * w.r_s**3:
        raise SingularWrist(f"forward Jacobian is singular (alpha={w.alpha:.6g}, beta={w.beta:.6g})")
    return WristJacobians(A, B, np.linalg.solve(A, B))


def jacobians(w: WristParams) -> WristJacobians:
    return wrist_jacobians(contact_geometry(w), w)


def omni_wheel_rates(j: WristJacobians, omega) -> np.ndarray:
    """Wheel angular rates producing sphere angular velocity ``omega``."""
    return np.linalg.solve(j.B, j.A @ np.asarray(omega, dtype=float))


def cable_loop_matrix(w: WristParams, pairing=DEFAULT_LOOP_PAIRS, n_cables: int = 8) -> np.ndarray:
    """3 x n map from cable tensions to drum torques, tau_k = r_d (t_first - t_second)."""
    flat = [c for pair in pairing for c in pair]
    if len(pairing) != 3 or any(len(p) != 2 for p in pairing):
        raise InvalidPairing("pairing must hold 3 cable-index pairs")
    if len(set(flat)) != 6:
        raise InvalidPairing(f"pairing uses duplicate cable indices: {pairing}")
    if any(not 1 <= c <= n_cables for c in flat):
        raise InvalidPairing(f"cable indices must lie in 1..{n_cables}")
    wc = np.zeros((3, n_cables))
    for k, (first, second) in enumerate(pairing):
        wc[k, first - 1] = w.r_d
        wc[k, second - 1] = -w.r_d
    return wc


def wrist_wrench_matrix(j: WristJacobians, wc: np.ndarray, form: str = "consistent") -> np.ndarray:
    """Sphere moment produced by the cable tensions, ``m_SW = W_SW t``.

    ``form="consistent"`` solves ``J_omega^T m = W_c t``; ``form="literal"``
    returns ``J_omega^T W_c`` for comparison.
    """
    if form == "consistent":
        return np.linalg.solve(j.J_omega.T, wc)
    if form == "literal":
        return j.J_omega.T @ wc
    raise InvalidArgument(f"unknown form {form!r}")
