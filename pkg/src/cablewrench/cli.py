"""Command-line front end: ``cablewrench <command> [options]``.

Exit status: 0 success, 2 invalid configuration, 3 numerical failure,
64 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import config as cfgmod
from .arrangement import best_arrangement, count_arrangements, enumerate_arrangements
from .errors import CableWrenchError, ConfigError, InvalidArgument
from .geometry import Pose
from .kinematics import cable_state
from .trajectory import samples_to_csv, trajectory_1, trajectory_2, trajectory_3
from .workspace import static_workspace_ao
from .wrist import ISOTROPIC_ALPHA, contact_geometry, wrist_jacobians

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_USAGE = 0, 2, 3, 64
COMMANDS = ("ik", "wrist-check", "workspace", "arrangements", "best-arrangement", "trajectory", "counts")

log = logging.getLogger("cablewrench")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _floats(text: str, count: int | None = None) -> list[float]:
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if count is not None and len(values) != count:
        raise argparse.ArgumentTypeError(f"expected {count} comma-separated numbers")
    return values


def _grid_counts(text: str) -> tuple:
    try:
        values = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected nx,ny,nz, got {text!r}")
    if len(values) != 3 or min(values) < 1:
        raise argparse.ArgumentTypeError("expected three positive interval counts nx,ny,nz")
    return values


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", type=Path, default=cfgmod.REFERENCE_CONFIG, help="robot configuration (YAML)")
    common.add_argument("--out", type=Path, default=Path("."), help="output directory")
    common.add_argument("--threads", type=int, default=1, help="worker processes")
    common.add_argument("--grid", type=_grid_counts, help="override grid interval counts nx,ny,nz")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized options")

    parser = _Parser(prog="cablewrench", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("counts", parents=[common], help="closed-form arrangement counts")
    p.add_argument("--n-e", type=int, default=8)
    p.add_argument("--n-c", type=int, default=8)
    p.add_argument("--n-sc", type=int, default=2)
    p.add_argument("--n-asc", type=int, default=3)

    p = sub.add_parser("ik", parents=[common], help="cable lengths for one pose")
    p.add_argument("--pose", type=lambda s: _floats(s, 6), required=True,
                   help="x,y,z,theta,psi,chi (m, rad; ZYX Euler angles)")

    sub.add_parser("wrist-check", parents=[common], help="wrist Jacobians and isotropy")
    sub.add_parser("workspace", parents=[common], help="constant-orientation static workspace")

    p = sub.add_parser("arrangements", parents=[common], help="enumerate the restricted arrangements")
    p.add_argument("--limit", type=int, help="write at most this many rows")

    p = sub.add_parser("best-arrangement", parents=[common], help="workspace-maximizing arrangement")
    p.add_argument("--limit", type=int, help="only consider this many candidates")
    p.add_argument("--stride", type=int, default=1, help="take every k-th candidate")
    p.add_argument("--sample", type=int, help="random sample of this many candidates (uses --seed)")

    p = sub.add_parser("trajectory", parents=[common], help="replay the test trajectories")
    p.add_argument("--which", choices=("1", "2", "3", "all"), default="all")
    return parser


def _configure_logging():
    level = os.environ.get("CABLEWRENCH_LOG", "off").lower()
    levels = {"off": logging.CRITICAL + 1, "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(level=levels.get(level, logging.CRITICAL + 1), format="%(levelname)s %(name)s: %(message)s")


def _write(out: Path, name: str, text: str) -> Path:
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    path.write_text(text)
    log.info("wrote %s", path)
    return path


def _grid(cfg, args):
    return cfg.grid if args.grid is None else cfg.grid.with_counts(args.grid)


def cmd_counts(args, cfg):
    c = count_arrangements(args.n_e, args.n_c, args.n_sc, args.n_asc)
    rows = [("N_e", c.N_e), ("N_a", c.N_a), ("N_c", c.N_c), ("N_CL", c.N_CL)]
    for name, value in rows:
        print(f"{name:5s} {value:>20,d}")
    if args.out_given:
        _write(args.out, "counts.json", json.dumps(dict(rows), indent=2))


def cmd_ik(args, cfg):
    x, y, z, theta, psi, chi = args.pose
    pose = Pose.from_xyz_euler(x, y, z, theta, psi, chi)
    cs = cable_state(cfg.geometry, cfg.arrangement, pose)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["cable", "exit", "anchor", "length", "ux", "uy", "uz"])
    for k, ((e, a), length, u) in enumerate(zip(cfg.arrangement.assignment, cs.lengths, cs.units), start=1):
        writer.writerow([k, e, a, f"{length:.9g}", *(f"{v:.9g}" for v in u)])
        print(f"l{k} = {length:.9g} m")
    _write(args.out, "ik.csv", buf.getvalue())


def cmd_wrist_check(args, cfg):
    w = cfg.geometry.wrist
    cg = contact_geometry(w)
    j = wrist_jacobians(cg, w)
    sv = np.linalg.svd(j.J_omega, compute_uv=False)
    report = {
        "alpha_deg": math.degrees(w.alpha),
        "beta_deg": math.degrees(w.beta),
        "gamma_deg": [math.degrees(g) for g in w.gamma],
        "contact_points": cg.points.tolist(),
        "A": j.A.tolist(),
        "B": j.B.tolist(),
        "J_omega": j.J_omega.tolist(),
        "singular_values": sv.tolist(),
        "condition_number": float(sv[0] / sv[-1]),
        "exact_isotropic_alpha_deg": math.degrees(math.atan(1 / math.sqrt(2))),
        "design_alpha_deg": math.degrees(ISOTROPIC_ALPHA),
    }
    print(f"cond(J_omega) = {report['condition_number']:.9g}")
    _write(args.out, "wrist.json", json.dumps(report, indent=2))


def cmd_workspace(args, cfg):
    grid = _grid(cfg, args)
    ws = static_workspace_ao(cfg.geometry, cfg.arrangement, cfg.box, grid, eps=cfg.eq_tolerance,
                             workers=args.threads)
    _write(args.out, "workspace.csv", ws.to_csv())
    _write(args.out, "workspace.json", ws.to_json())
    print(f"R_S = {ws.n_feasible}/{grid.total} = {ws.ratio:.9g}")


def _candidates(cfg):
    s = cfg.search
    return enumerate_arrangements(tuple(range(1, 9)), s.loop_anchor_pairs, s.simple_anchors, s.n_simple)


def cmd_arrangements(args, cfg):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["index", "exit_assignment", "anchor_assignment", "loop_pairs", "simple_cables"])
    total = 0
    for total, arr in enumerate(_candidates(cfg), start=1):
        if args.limit is None or total <= args.limit:
            exits, anchors = arr.label()
            loops = " ".join(f"{a}-{b}" for a, b in arr.loop_pairs)
            writer.writerow([total, exits, anchors, loops, " ".join(map(str, arr.simple_cables))])
    _write(args.out, "arrangements.csv", buf.getvalue())
    print(f"{total} arrangements")


def cmd_best_arrangement(args, cfg):
    cands = _candidates(cfg)
    if args.sample is not None:
        pool = list(cands)
        rng = np.random.default_rng(args.seed)
        pick = np.sort(rng.choice(len(pool), size=min(args.sample, len(pool)), replace=False))
        cands = [pool[i] for i in pick]
    cands = itertools.islice(cands, 0, None, max(args.stride, 1))
    if args.limit is not None:
        cands = itertools.islice(cands, args.limit)
    s = cfg.search
    coarse = None if s.coarse_n is None else cfg.grid.with_counts(s.coarse_n)
    res = best_arrangement(cfg.geometry, cfg.box, _grid(cfg, args), cands, coarse_grid=coarse, slack=s.slack,
                           top_k=s.top_k, workers=args.threads, eps=cfg.eq_tolerance)
    _write(args.out, "ranking.csv", res.to_csv())
    _write(args.out, "ranking.json", res.to_json())
    exits, anchors = res.best.label()
    print(f"best R_S = {res.ratio:.9g} over {res.n_candidates} candidates ({res.n_finalists} finalists)")
    print(f"  exits   {exits}\n  anchors {anchors}")


def cmd_trajectory(args, cfg):
    tr = cfg.trajectories
    dt = tr["dt"]
    which = ("1", "2", "3") if args.which == "all" else (args.which,)
    for k in which:
        if k == "1":
            t1 = tr["trajectory_1"]
            samples = trajectory_1(cfg.geometry, cfg.arrangement, t1["axis"], math.radians(t1["amplitude_deg"]),
                                   t1["duration"], Pose(np.array(t1["position"])), dt)
        elif k == "2":
            t2 = tr["trajectory_2"]
            samples = trajectory_2(cfg.geometry, cfg.arrangement, cfg.box, t2["waypoints"],
                                   t2["segment_duration"], dt)
        else:
            t3 = tr["trajectory_3"]
            samples = trajectory_3(cfg.geometry, cfg.arrangement, cfg.box, t3["start"], t3["z_span"],
                                   t3["sphere_axis"], math.radians(t3["sphere_amplitude_deg"]), t3["duration"], dt)
        _write(args.out, f"trajectory_{k}.csv", samples_to_csv(samples))
        n_ok = sum(s.feasible for s in samples)
        print(f"trajectory {k}: {len(samples)} samples, {n_ok} feasible")


HANDLERS = {
    "counts": cmd_counts,
    "ik": cmd_ik,
    "wrist-check": cmd_wrist_check,
    "workspace": cmd_workspace,
    "arrangements": cmd_arrangements,
    "best-arrangement": cmd_best_arrangement,
    "trajectory": cmd_trajectory,
}


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("cablewrench: a command is required")
    except UsageError as exc:
        print(exc, file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    args.out_given = "--out" in argv or any(a.startswith("--out=") for a in argv)
    try:
        if args.threads < 1:
            raise InvalidArgument("--threads must be >= 1")
        cfg = None if args.command == "counts" else cfgmod.load_config(args.config)
        HANDLERS[args.command](args, cfg)
    except (ConfigError, InvalidArgument) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (CableWrenchError, OverflowError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def main_exit():
    sys.exit(main())
