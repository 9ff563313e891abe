"""Constant-orientation static workspace on a Cartesian grid.

Nodes are ordered row-major with x varying fastest. A node is feasible when
the stacked equilibrium admits a tension vector inside the box (see
:func:`cablewrench.statics.tension_feasible`). Nothing in the wrench system
depends on the sphere orientation, so the free wrist rotation needs a single
check per node.
"""
from __future__ import annotations

import csv
import io
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DegenerateCable, InvalidArgument
from .geometry import Pose
from .kinematics import RobotGeometry, gravity_wrench_tp, wrench_matrices_batch
from .statics import TensionBox, assemble, default_tolerance, residual_lower_bound, tension_feasible
from .wrist import cable_loop_matrix, jacobians, wrist_wrench_matrix

log = logging.getLogger(__name__)

SCREEN_MARGIN = 2.0


@dataclass(frozen=True)
class GridSpec:
    lower: tuple
    upper: tuple
    n: tuple  # intervals per axis

    def __post_init__(self):
        lower = tuple(float(v) for v in self.lower)
        upper = tuple(float(v) for v in self.upper)
        n = tuple(int(v) for v in self.n)
        if not (len(lower) == len(upper) == len(n) == 3):
            raise InvalidArgument("grid bounds and counts must have 3 components")
        if any(lo >= hi for lo, hi in zip(lower, upper)):
            raise InvalidArgument("grid lower bound must be below upper bound on every axis")
        if any(k < 1 for k in n):
            raise InvalidArgument("grid interval counts must be >= 1")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "n", n)

    @property
    def total(self) -> int:
        nx, ny, nz = self.n
        return (nx + 1) * (ny + 1) * (nz + 1)

    def axes(self) -> list[np.ndarray]:
        return [np.linspace(lo, hi, k + 1) for lo, hi, k in zip(self.lower, self.upper, self.n)]

    def nodes(self) -> np.ndarray:
        xs, ys, zs = self.axes()
        z, y, x = np.meshgrid(zs, ys, xs, indexing="ij")
        return np.column_stack([x.ravel(), y.ravel(), z.ravel()])

    def with_counts(self, n) -> "GridSpec":
        return GridSpec(self.lower, self.upper, n)


@dataclass(frozen=True)
class WorkspaceGrid:
    spec: GridSpec
    flags: np.ndarray
    n_degenerate: int = 0
    n_feasible: int = field(init=False)

    def __post_init__(self):
        flags = np.asarray(self.flags, dtype=bool).copy()
        if flags.shape != (self.spec.total,):
            raise InvalidArgument("one flag per grid node is required")
        flags.setflags(write=False)
        object.__setattr__(self, "flags", flags)
        object.__setattr__(self, "n_feasible", int(flags.sum()))

    @property
    def ratio(self) -> float:
        return self.n_feasible / self.spec.total

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.n_feasible, self.spec.total)

    def summary(self) -> dict:
        return {"n_feasible": self.n_feasible, "total": self.spec.total, "ratio": self.ratio}

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["x", "y", "z", "feasible"])
        for (x, y, z), f in zip(self.spec.nodes(), self.flags):
            writer.writerow([f"{x:.9g}", f"{y:.9g}", f"{z:.9g}", int(f)])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(self.summary(), indent=2)


def workspace_ratio(grid: WorkspaceGrid) -> float:
    return grid.n_feasible / grid.spec.total


def _check_nodes(args):
    geom, arr, box, orientation, positions, eps, row_weights, form = args
    out = []
    for p in positions:
        try:
            sys = assemble(geom, arr, Pose(p, orientation), form=form)
        except DegenerateCable:
            out.append(False)
            continue
        out.append(tension_feasible(sys, box, eps, row_weights).feasible)
    return out


def static_workspace_ao(
    geom: RobotGeometry,
    arr,
    box: TensionBox,
    grid: GridSpec,
    orientation=None,
    eps: float | None = None,
    row_weights=None,
    workers: int = 1,
    form: str = "consistent",
    screen: bool = True,
) -> WorkspaceGrid:
    """Feasibility flag of every grid node at a fixed top-plate orientation.

    With ``screen`` on, nodes whose least-squares residual already exceeds
    the tolerance (a lower bound on the LP optimum) are rejected without
    solving the LP; the remaining nodes go through the full LP.
    """
    r = np.eye(3) if orientation is None else np.asarray(orientation, dtype=float)
    positions = grid.nodes()
    n = len(arr.assignment)
    j = jacobians(geom.wrist)
    w_sw = wrist_wrench_matrix(j, cable_loop_matrix(geom.wrist, arr.loop_pairs, n), form)
    w_e = np.concatenate([gravity_wrench_tp(geom, Pose(np.zeros(3), r)), np.zeros(3)])
    eps_eq = default_tolerance(w_e) if eps is None else eps

    w_tp, lengths = wrench_matrices_batch(geom, arr, positions, r)
    degenerate = np.any(~np.isfinite(w_tp), axis=(1, 2))
    candidates = ~degenerate
    if screen:
        W = np.concatenate([np.nan_to_num(w_tp), np.broadcast_to(w_sw, (len(positions), 3, n))], axis=1)
        d = np.ones(9) if row_weights is None else np.asarray(row_weights, dtype=float)
        bound = residual_lower_bound(d[:, None] * W, d * w_e)
        candidates &= bound <= SCREEN_MARGIN * eps_eq

    idx = np.flatnonzero(candidates)
    flags = np.zeros(len(positions), dtype=bool)
    if idx.size:
        jobs = [(geom, arr, box, r, positions[chunk], eps, row_weights, form)
                for chunk in np.array_split(idx, max(1, min(workers, idx.size)))]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_check_nodes, jobs))
        else:
            results = [_check_nodes(job) for job in jobs]
        flags[idx] = np.concatenate([np.asarray(res, dtype=bool) for res in results])
    n_deg = int(degenerate.sum())
    if n_deg:
        log.info("%d grid nodes have a degenerate cable and are marked infeasible", n_deg)
    log.debug("workspace: %d of %d nodes passed the screen", idx.size, len(positions))
    return WorkspaceGrid(grid, flags, n_deg)
