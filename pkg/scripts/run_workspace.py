"""Static workspace of the configured arrangement, with a box sweep and a plane map.

    python scripts/run_workspace.py [--config FILE] [--out DIR] [--grid nx,ny,nz]
"""
import argparse
import json
from pathlib import Path

import numpy as np

from cablewrench import config as cfgmod
from cablewrench.statics import TensionBox
from cablewrench.workspace import GridSpec, static_workspace_ao

BOXES = ((20.0, 60.0), (10.0, 100.0), (5.0, 150.0), (0.0, 300.0))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", type=Path, default=cfgmod.REFERENCE_CONFIG)
    ap.add_argument("--out", type=Path, default=Path("results/workspace"))
    ap.add_argument("--grid", type=lambda s: tuple(int(v) for v in s.split(",")))
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    cfg = cfgmod.load_config(args.config)
    grid = cfg.grid if args.grid is None else cfg.grid.with_counts(args.grid)
    args.out.mkdir(parents=True, exist_ok=True)

    ws = static_workspace_ao(cfg.geometry, cfg.arrangement, cfg.box, grid, eps=cfg.eq_tolerance,
                             workers=args.workers)
    (args.out / "workspace.csv").write_text(ws.to_csv())
    print(f"reference box: R_S = {ws.n_feasible}/{grid.total} = {ws.ratio:.4f}")

    sweep = []
    for lo, hi in BOXES:
        r = static_workspace_ao(cfg.geometry, cfg.arrangement, TensionBox.uniform(lo, hi), grid,
                                eps=cfg.eq_tolerance, workers=args.workers)
        sweep.append({"t_min": lo, "t_max": hi, "n_feasible": r.n_feasible, "ratio": r.ratio})
        print(f"box [{lo:g}, {hi:g}] N: R_S = {r.n_feasible}/{grid.total}")

    # the symmetric arrangement balances only on the mirror plane, so map it finely
    plane = GridSpec((-1e-9, grid.lower[1], grid.lower[2]), (1e-9, grid.upper[1], grid.upper[2]),
                     (1, 4 * grid.n[1], 4 * grid.n[2]))
    pm = static_workspace_ao(cfg.geometry, cfg.arrangement, cfg.box, plane, eps=cfg.eq_tolerance,
                             workers=args.workers)
    ys, zs = plane.axes()[1], plane.axes()[2]
    flags = pm.flags.reshape(len(zs), len(ys), 2)[:, :, 0]
    print("\nmirror-plane map (rows: z descending, columns: y ascending)")
    for k in range(len(zs) - 1, -1, -1):
        print(f"z={zs[k]:5.2f} " + "".join("#" if f else "." for f in flags[k]))

    summary = {"reference": ws.summary(), "box_sweep": sweep,
               "plane": {"n_feasible": int(flags.sum()), "total": int(flags.size)}}
    (args.out / "summary.json").write_text(json.dumps(summary, indent=2))


if __name__ == "__main__":
    main()
