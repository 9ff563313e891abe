"""Exhaustive arrangement search over the restricted candidate set.

    python scripts/run_search.py [--workers N] [--limit K] [--out DIR]

The full run scores all 120,960 candidates on the coarse grid, then rescored
finalists on the configured grid. Expect several minutes per CPU core.
"""
import argparse
import itertools
import time
from pathlib import Path

from cablewrench import config as cfgmod
from cablewrench.arrangement import best_arrangement, enumerate_arrangements


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", type=Path, default=cfgmod.REFERENCE_CONFIG)
    ap.add_argument("--out", type=Path, default=Path("results/search"))
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--limit", type=int)
    args = ap.parse_args()

    cfg = cfgmod.load_config(args.config)
    s = cfg.search
    cands = enumerate_arrangements(tuple(range(1, 9)), s.loop_anchor_pairs, s.simple_anchors, s.n_simple)
    if args.limit:
        cands = itertools.islice(cands, args.limit)
    coarse = None if s.coarse_n is None else cfg.grid.with_counts(s.coarse_n)
    t0 = time.perf_counter()
    res = best_arrangement(cfg.geometry, cfg.box, cfg.grid, cands, coarse_grid=coarse, slack=s.slack,
                           top_k=s.top_k, workers=args.workers, eps=cfg.eq_tolerance)
    dt = time.perf_counter() - t0
    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "ranking.csv").write_text(res.to_csv())
    (args.out / "ranking.json").write_text(res.to_json())
    exits, anchors = res.best.label()
    print(f"{res.n_candidates} candidates, {res.n_finalists} finalists, {dt:.0f} s")
    print(f"best R_S = {res.ratio:.4f}: {anchors}")
    print(f"loop pairs {res.best.loop_pairs}, simple cables {res.best.simple_cables}")


if __name__ == "__main__":
    main()
