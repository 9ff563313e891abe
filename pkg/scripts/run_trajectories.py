"""Replay the three test trajectories and summarize feasibility and rates.

    python scripts/run_trajectories.py [--config FILE] [--out DIR]
"""
import argparse
import math
from pathlib import Path

import numpy as np

from cablewrench import config as cfgmod
from cablewrench.geometry import Pose
from cablewrench.trajectory import model_sphere_rates, samples_to_csv, trajectory_1, trajectory_2, trajectory_3
from cablewrench.wrist import jacobians


def describe(name, samples, jac):
    lengths = np.array([s.cable_lengths for s in samples])
    wheels = np.array([s.wheel_rates for s in samples])
    omega = np.array([s.sphere_rates for s in samples])
    err = np.max(np.abs(model_sphere_rates(samples, jac) - omega))
    print(f"{name}: {len(samples)} samples, {sum(s.feasible for s in samples)} feasible, "
          f"max theta_e {max(s.theta_e for s in samples):.3g} rad")
    print(f"  cable length range {lengths.min():.3f}..{lengths.max():.3f} m, "
          f"peak wheel rate {np.abs(wheels).max():.3f} rad/s, desired-vs-model omega error {err:.2e}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", type=Path, default=cfgmod.REFERENCE_CONFIG)
    ap.add_argument("--out", type=Path, default=Path("results/trajectories"))
    args = ap.parse_args()
    cfg = cfgmod.load_config(args.config)
    tr, dt = cfg.trajectories, cfg.trajectories["dt"]
    jac = jacobians(cfg.geometry.wrist)
    args.out.mkdir(parents=True, exist_ok=True)

    t1, t2, t3 = tr["trajectory_1"], tr["trajectory_2"], tr["trajectory_3"]
    runs = {}
    for axis in ("x", "y", "z"):
        runs[f"trajectory_1_{axis}"] = trajectory_1(cfg.geometry, cfg.arrangement, axis,
                                                    math.radians(t1["amplitude_deg"]), t1["duration"],
                                                    Pose(np.array(t1["position"])), dt, jac=jac)
    runs["trajectory_2"] = trajectory_2(cfg.geometry, cfg.arrangement, cfg.box, t2["waypoints"],
                                        t2["segment_duration"], dt, jac=jac)
    runs["trajectory_3"] = trajectory_3(cfg.geometry, cfg.arrangement, cfg.box, t3["start"], t3["z_span"],
                                        t3["sphere_axis"], math.radians(t3["sphere_amplitude_deg"]),
                                        t3["duration"], dt, jac=jac)
    for name, samples in runs.items():
        describe(name, samples, jac)
        (args.out / f"{name}.csv").write_text(samples_to_csv(samples))


if __name__ == "__main__":
    main()
