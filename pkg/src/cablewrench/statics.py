"""Stacked static equilibrium of top plate and wrist, and tension feasibility.

Feasibility of ``W t + w_e = 0`` over the tension box is decided by the
linear program

    minimize s  subject to  -s <= D (W t + w_e) <= s,  t_min <= t <= t_max

with an optional diagonal row weighting ``D``; a pose is feasible when the
optimal ``s`` does not exceed ``eps_eq``.
"""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import simplex
from .errors import EmptyBox, InvalidArgument, LPError
from .geometry import Pose
from .kinematics import RobotGeometry, cable_state, gravity_wrench_tp, wrench_matrix_tp
from .wrist import WristJacobians, cable_loop_matrix, jacobians, wrist_wrench_matrix


class ResolutionTooCoarse(UserWarning):
    """Oracle grid spacing exceeds a quarter of the box span."""


@dataclass(frozen=True)
class WrenchSystem:
    W: np.ndarray  # (9, n): rows 0-5 top plate, rows 6-8 wrist
    w_e: np.ndarray  # (9,)


@dataclass(frozen=True)
class TensionBox:
    t_min: np.ndarray
    t_max: np.ndarray

    def __post_init__(self):
        lo = np.array(self.t_min, dtype=float).reshape(-1)
        hi = np.array(self.t_max, dtype=float).reshape(-1)
        if lo.shape != hi.shape:
            raise InvalidArgument("t_min and t_max must have the same length")
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise InvalidArgument("tension bounds must be finite")
        if np.any(lo < 0):
            raise InvalidArgument("cables can only pull: t_min must be >= 0")
        if np.any(lo > hi):
            raise EmptyBox(f"t_min > t_max for cables {list(np.flatnonzero(lo > hi) + 1)}")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "t_min", lo)
        object.__setattr__(self, "t_max", hi)

    @classmethod
    def uniform(cls, t_min: float, t_max: float, n: int = 8) -> "TensionBox":
        return cls(np.full(n, float(t_min)), np.full(n, float(t_max)))

    def scaled(self, factor: float) -> "TensionBox":
        return TensionBox(self.t_min * factor, self.t_max * factor)

    def contains(self, t, tol: float = 0.0) -> bool:
        t = np.asarray(t)
        return bool(np.all(t >= self.t_min - tol) and np.all(t <= self.t_max + tol))


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    tension: np.ndarray | None
    residual: float


def default_tolerance(w_e) -> float:
    return 1e-6 * max(1.0, float(np.max(np.abs(w_e))) if np.size(w_e) else 1.0)


def assemble(geom: RobotGeometry, arr, pose: Pose, wrist_state: WristJacobians | None = None,
             form: str = "consistent") -> WrenchSystem:
    """Stack the top-plate and wrist wrench matrices for one pose.

    The sphere weight acts at its centre and exerts no moment about it, so
    the wrist part of the external wrench is zero.
    """
    j = jacobians(geom.wrist) if wrist_state is None else wrist_state
    cs = cable_state(geom, arr, pose)
    w_tp = wrench_matrix_tp(cs, pose)
    w_sw = wrist_wrench_matrix(j, cable_loop_matrix(geom.wrist, arr.loop_pairs, len(arr.assignment)), form)
    w_e = np.concatenate([gravity_wrench_tp(geom, pose), np.zeros(3)])
    return WrenchSystem(np.vstack([w_tp, w_sw]), w_e)


def _check_box(sys: WrenchSystem, box: TensionBox):
    if np.any(box.t_min > box.t_max):
        raise EmptyBox("t_min > t_max")
    if box.t_min.shape[0] != sys.W.shape[1]:
        raise InvalidArgument(f"box has {box.t_min.shape[0]} cables, system has {sys.W.shape[1]}")


def _weights(sys, row_weights):
    if row_weights is None:
        return np.ones(sys.W.shape[0])
    d = np.asarray(row_weights, dtype=float)
    if d.shape != (sys.W.shape[0],) or np.any(d <= 0):
        raise InvalidArgument("row_weights must be positive, one per equation")
    return d


def tension_feasible(sys: WrenchSystem, box: TensionBox, eps: float | None = None,
                     row_weights=None) -> FeasibilityResult:
    _check_box(sys, box)
    d = _weights(sys, row_weights)
    W = d[:, None] * sys.W
    w = d * sys.w_e
    eps = default_tolerance(sys.w_e) if eps is None else eps
    m, n = W.shape

    # columns: t (n) | s | slack_plus (m) | slack_minus (m)
    ones = np.ones((m, 1))
    A = np.block([[W, -ones, np.eye(m), np.zeros((m, m))], [-W, -ones, np.zeros((m, m)), np.eye(m)]])
    b = np.concatenate([-w, w])
    lower = np.concatenate([box.t_min, [0.0], np.zeros(2 * m)])
    upper = np.concatenate([box.t_max, [np.inf], np.full(2 * m, np.inf)])
    c = np.zeros(n + 1 + 2 * m)
    c[n] = 1.0

    # feasible start: t at t_min, s at the worst residual, which zeroes one slack
    r = W @ box.t_min + w
    k = int(np.argmax(np.abs(r)))
    tight = k if r[k] >= 0 else m + k
    basis = [n] + [n + 1 + i for i in range(2 * m) if i != tight]
    res = simplex.solve(c, A, b, lower, upper, basis=basis)
    if res.status != simplex.OPTIMAL:
        raise LPError(f"tension LP ended with status {res.status}")
    t = res.x[:n]
    residual = float(np.max(np.abs(W @ t + w))) if m else 0.0
    return FeasibilityResult(residual <= eps, t, residual)


def grid_error_bound(sys: WrenchSystem, box: TensionBox, resolution: int) -> float:
    """Worst residual increase from rounding a tension vector to the oracle grid."""
    h = (box.t_max - box.t_min) / max(resolution - 1, 1)
    return float(np.max(np.abs(sys.W) @ (h / 2.0)))


def feasibility_oracle(sys: WrenchSystem, box: TensionBox, resolution: int, eps: float | None = None,
                       chunk: int = 200_000) -> FeasibilityResult:
    """Exhaustive grid search for the tension minimizing the residual infinity-norm.

    Test-only cross-check of :func:`tension_feasible`; cost grows as
    ``resolution ** n_cables``.
    """
    _check_box(sys, box)
    if resolution < 1:
        raise InvalidArgument("resolution must be >= 1")
    span = box.t_max - box.t_min
    if resolution < 5 and np.any(span > 0):
        warnings.warn(f"grid spacing exceeds a quarter of the box span (resolution={resolution})",
                      ResolutionTooCoarse, stacklevel=2)
    eps = default_tolerance(sys.w_e) if eps is None else eps
    axes = [np.linspace(lo, hi, resolution) for lo, hi in zip(box.t_min, box.t_max)]
    n = len(axes)
    best_t, best_r = None, math.inf
    points = itertools.product(*axes)
    total = resolution**n
    for start in range(0, total, chunk):
        block = np.array(list(itertools.islice(points, min(chunk, total - start))), dtype=float).reshape(-1, n)
        resid = np.max(np.abs(block @ sys.W.T + sys.w_e), axis=1)
        i = int(np.argmin(resid))
        if resid[i] < best_r:
            best_r, best_t = float(resid[i]), block[i]
    return FeasibilityResult(best_r <= eps, best_t, best_r)


def residual_lower_bound(W: np.ndarray, w_e: np.ndarray) -> np.ndarray:
    """Lower bound on ``min_t ||W t + w_e||_inf`` ignoring tension bounds.

    Batched over leading axes. Uses the least-squares residual: the infinity
    norm is at least the 2-norm divided by sqrt(rows).
    """
    u, sv, _ = np.linalg.svd(W, full_matrices=False)
    rank_ok = sv > 1e-10 * np.maximum(sv[..., :1], 1.0)
    u = u * rank_ok[..., None, :]
    proj = np.einsum("...ij,...i->...j", u, w_e)
    resid = w_e - np.einsum("...ij,...j->...i", u, proj)
    return np.linalg.norm(resid, axis=-1) / math.sqrt(W.shape[-2])
